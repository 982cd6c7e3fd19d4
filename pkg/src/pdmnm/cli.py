"""Command-line front end.

Usage::

    pdmnm sweep        --channel ad --gamma0 3 --b 0.6 --theta 1.5707963 --out f.csv
    pdmnm measure      --channel ad --gamma0 3 --b 1.1 --tmax 2 --scan gamma0=0.56:5:20
    pdmnm pdm          --channel ad --t 2.1028
    pdmnm divisibility --channel ad --tau 0.05 --out w.csv

Every flag may also be given in a ``--config`` file of ``key = value``
lines (``#`` starts a comment), keys spelled like the flags without the
leading dashes. Command-line flags take precedence.

Custom channel files (``--channel custom --custom-file PATH``)::

    # comment lines and blank lines are ignored
    dim 2
    t 0.0
    kraus 2
    1 0  0 0          <- row 0 of the first Kraus operator, "re im" pairs
    0 0  1 0          <- row 1 of the first Kraus operator
    0 0  0 0          <- row 0 of the second Kraus operator
    0 0  0 0          <- row 1 of the second Kraus operator
    t 0.5
    kraus 1
    ...

Each ``t`` block holds ``m`` matrices of ``dim`` rows, every row carrying
``2 * dim`` reals. Times must increase; completeness is checked per block.
Between samples the family interpolates linearly.

CSV output uses ``.`` decimals, LF line endings and 12 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .channels import (
    TOL_CPTP,
    TOL_SING,
    ADParams,
    ChannelFamily,
    GADParams,
    ad_family,
    gad_family,
    intermediate_map_witness,
    tabulated_family,
)
from .measures import TimeGrid, decay_rate_curve, f_curve, nm_measure, trace_distance_curve
from .pdm import TOL_PSD, QubitState, causality_F, f_cm, is_causal, pdm_two_point


class UsageError(ValueError):
    """Invalid configuration; reported with the usage message."""


@dataclass(frozen=True)
class RunConfig:
    channel: str = "ad"
    gamma0: float = 3.0
    b: float = 0.6
    omega: float = 3.0
    theta: float = math.pi / 2
    phi: float = 0.0
    t0: float = 0.0
    tmax: float = 10.0
    dt: float = 1e-3
    t: float = 0.0
    tau: float = 0.05
    state_grid_theta: int = 24
    state_grid_phi: int = 12
    tol_psd: float = TOL_PSD
    tol_sing: float = TOL_SING
    tol_cptp: float = TOL_CPTP
    custom_file: str | None = None
    scan: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.channel not in ("ad", "gad", "custom"):
            raise UsageError(f"unknown channel {self.channel!r}")
        for name in ("tol_psd", "tol_sing", "tol_cptp"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        if self.channel == "ad" and not (self.gamma0 > 0 and self.b > 0):
            raise UsageError("ad channel needs gamma0 > 0 and b > 0")
        if self.channel == "gad" and not self.omega >= 0:
            raise UsageError("gad channel needs omega >= 0")
        if self.channel == "custom" and not self.custom_file:
            raise UsageError("custom channel needs --custom-file")
        if self.state_grid_theta < 8 or self.state_grid_phi < 1:
            raise UsageError("state grid must be at least 8x1")

    def grid(self) -> TimeGrid:
        try:
            return TimeGrid(self.t0, self.tmax, self.dt)
        except ValueError as e:
            raise UsageError(str(e)) from None

    def family(self) -> ChannelFamily:
        if self.channel == "ad":
            return ad_family(ADParams(self.gamma0, self.b))
        if self.channel == "gad":
            return gad_family(GADParams(self.omega))
        return read_custom_family(self.custom_file, self.tol_cptp)

    def state(self) -> QubitState:
        return QubitState.from_angles(self.theta, self.phi)


def read_custom_family(path, tol: float = TOL_CPTP) -> ChannelFamily:
    """Parse a custom channel file (grammar in the module docstring)."""
    tokens = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append((lineno, line.split()))
    if not tokens or tokens[0][1][0] != "dim" or len(tokens[0][1]) != 2:
        raise ValueError(f"{path}: first line must be 'dim <n>'")
    dim = int(tokens[0][1][1])
    times, kraus = [], []
    pos = 1
    while pos < len(tokens):
        lineno, words = tokens[pos]
        if words[0] != "t" or len(words) != 2:
            raise ValueError(f"{path}:{lineno}: expected 't <value>'")
        times.append(float(words[1]))
        if pos + 1 >= len(tokens) or tokens[pos + 1][1][0] != "kraus":
            raise ValueError(f"{path}:{lineno}: 't' must be followed by 'kraus <m>'")
        m = int(tokens[pos + 1][1][1])
        rows = tokens[pos + 2 : pos + 2 + m * dim]
        if len(rows) != m * dim:
            raise ValueError(f"{path}:{lineno}: expected {m * dim} matrix rows")
        mats = []
        for rl, words in rows:
            if len(words) != 2 * dim:
                raise ValueError(f"{path}:{rl}: expected {2 * dim} reals")
            vals = [float(w) for w in words]
            mats.append([complex(vals[2 * c], vals[2 * c + 1]) for c in range(dim)])
        kraus.append(np.array(mats).reshape(m, dim, dim))
        pos += 2 + m * dim
    return tabulated_family(times, kraus, tol=tol)


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return f"{float(x):.12g}"


def _write_csv(out: str | None, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in r])
    if out in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        with open(out, "w", newline="") as fh:
            fh.write(buf.getvalue())


def cmd_sweep(cfg: RunConfig) -> None:
    """CSV ``t,F,f_cm,gamma,trace_distance,flag`` over the time grid."""
    grid = cfg.grid()
    fam = cfg.family()
    fc = f_curve(fam, cfg.state(), grid)
    f, flags = fc.values, fc.flags
    td = trace_distance_curve(fam, QubitState.ket("+"), QubitState.ket("-"), grid).values
    gamma = np.full(len(f), np.nan)
    singular = flags.copy()
    if cfg.channel == "ad":
        gc = decay_rate_curve(ADParams(cfg.gamma0, cfg.b), grid, cfg.tol_sing)
        gamma = gc.values
        singular |= gc.flags
    rows = (
        (t, fv, 2.0**fv - 1.0, gv, dv, "singular" if s else "ok")
        for t, fv, gv, dv, s in zip(grid.times, f, gamma, td, singular)
    )
    _write_csv(cfg.out, ["t", "F", "f_cm", "gamma", "trace_distance", "flag"], rows)


def _parse_scan(spec: str) -> tuple[str, np.ndarray]:
    try:
        key, rng = spec.split("=")
        a, b, n = rng.split(":")
        values = np.linspace(float(a), float(b), int(n))
    except ValueError:
        raise UsageError(f"--scan expects KEY=a:b:n, got {spec!r}") from None
    key = key.strip().replace("-", "_")
    if key not in ("gamma0", "b", "omega"):
        raise UsageError(f"cannot scan {key!r}; choose gamma0, b or omega")
    return key, values


def cmd_measure(cfg: RunConfig) -> None:
    """Print the measure report, or emit ``KEY,M,C`` rows for a ``--scan``."""
    grid = cfg.grid()
    state_grid = (cfg.state_grid_theta, cfg.state_grid_phi)
    if cfg.scan:
        key, values = _parse_scan(cfg.scan)
        rows = []
        for v in values:
            sub = replace(cfg, **{key: float(v)})
            rep = nm_measure(sub.family(), grid, state_grid, comparisons=False)
            rows.append((v, rep.M, rep.C))
        _write_csv(cfg.out, [key, "M", "C"], rows)
        return
    rep = nm_measure(cfg.family(), grid, state_grid)
    theta, phi = rep.argmax_state if rep.argmax_state else (None, None)
    lines = [
        f"M = {_fmt(rep.M)}",
        f"variant_M = {_fmt(rep.variant_M)}",
        f"C = {_fmt(rep.C)}",
        "argmax = I/2" if theta is None else f"argmax theta = {_fmt(theta)} phi = {_fmt(phi)}",
        f"HCLA = {_fmt(rep.hcla) or 'n/a'}",
        f"BLP = {_fmt(rep.blp)}",
    ]
    print("\n".join(lines))
    if cfg.out:
        _write_csv(
            cfg.out,
            ["M", "variant_M", "C", "theta", "phi", "hcla", "blp"],
            [(rep.M, rep.variant_M, rep.C, theta, phi, rep.hcla, rep.blp)],
        )


def cmd_pdm(cfg: RunConfig) -> None:
    """Print the PDM at time ``cfg.t`` with its spectrum and causality verdict."""
    p = pdm_two_point(cfg.state(), cfg.family()(cfg.t))
    fmt = {"float_kind": lambda x: f"{x: .12g}"}
    print(f"t = {_fmt(cfg.t)}")
    print("Re P =")
    print(np.array2string(p.matrix.real, formatter=fmt))
    print("Im P =")
    print(np.array2string(p.matrix.imag + 0.0, formatter=fmt))
    print("eigenvalues = " + " ".join(_fmt(e) for e in p.eigenvalues))
    print(f"f_cm = {_fmt(f_cm(p))}")
    print(f"F = {_fmt(causality_F(p))}")
    print("verdict = " + ("causal" if is_causal(p, cfg.tol_psd) else "acausal"))


def cmd_divisibility(cfg: RunConfig) -> None:
    """CSV ``t,witness,flag`` of intermediate-map Choi minimum eigenvalues."""
    grid = cfg.grid()
    if not cfg.tau > cfg.dt:
        raise UsageError("--tau must exceed --dt")
    fam = cfg.family()
    rows = []
    for t in grid.times:
        try:
            w = intermediate_map_witness(fam, t, cfg.tau)
        except ValueError:
            w = float("nan")
        rows.append((t, w, "ok" if math.isfinite(w) else "singular"))
    _write_csv(cfg.out, ["t", "witness", "flag"], rows)


COMMANDS = {
    "sweep": cmd_sweep,
    "measure": cmd_measure,
    "pdm": cmd_pdm,
    "divisibility": cmd_divisibility,
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, value: str):
    kind = _FIELD_TYPES[key]
    if kind == "float":
        return float(value)
    if kind == "int":
        return int(value)
    return value


def read_config(path) -> dict:
    """``key = value`` pairs from a config file, keyed by RunConfig field."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out.update(_option(key, value))
    return out


def _option(key: str, value: str) -> dict:
    key = key.replace("-", "_")
    if key == "state_grid":
        return _state_grid(value)
    if key not in _FIELD_TYPES or key == "config":
        raise UsageError(f"unknown config key {key!r}")
    try:
        return {key: _convert(key, value)}
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None


def _state_grid(value: str) -> dict:
    try:
        nt, npf = value.lower().split("x")
        return {"state_grid_theta": int(nt), "state_grid_phi": int(npf)}
    except ValueError:
        raise UsageError(f"--state-grid expects NTHETAxNPHI, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdmnm", description="Causality-monotone non-Markovianity of qubit channels."
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    sup = argparse.SUPPRESS
    parser.add_argument("--config", default=sup, help="key = value config file")
    parser.add_argument("--channel", choices=["ad", "gad", "custom"], default=sup)
    for name in ("gamma0", "b", "omega", "theta", "phi", "t0", "tmax", "dt", "t", "tau"):
        parser.add_argument(f"--{name}", default=sup)
    parser.add_argument("--state-grid", default=sup, metavar="NTHETAxNPHI")
    parser.add_argument("--tol-psd", default=sup)
    parser.add_argument("--tol-sing", default=sup)
    parser.add_argument("--tol-cptp", default=sup)
    parser.add_argument("--scan", default=sup, metavar="KEY=a:b:n")
    parser.add_argument("--custom-file", default=sup, metavar="PATH")
    parser.add_argument("--out", default=sup, metavar="PATH")
    return parser


def parse_config(argv=None) -> tuple[str, RunConfig]:
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command")
    try:
        opts = read_config(ns.pop("config")) if "config" in ns else {}
        for key, value in ns.items():
            opts.update(_option(key, value))
        return command, RunConfig(**opts)
    except (UsageError, OSError) as e:
        parser.error(str(e))


def main(argv=None) -> int:
    command, cfg = parse_config(argv)
    try:
        COMMANDS[command](cfg)
    except UsageError as e:
        build_parser().error(str(e))
    except (OSError, ValueError) as e:
        print(f"pdmnm {command}: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
