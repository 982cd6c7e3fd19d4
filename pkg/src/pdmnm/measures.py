"""Time-grid curves and non-Markovianity measures.

The causality-based measure of a family ``E(t, 0)`` is

    M = max_rho  integral over {dF/dt > 0} of dF/dt

where ``F(t) = log2 ||P(rho, E(t, 0))||_1``. Slopes come from central
differences on a uniform grid and integrals from the trapezoid rule. For
comparison the module also computes the decay-rate (HCLA) measure of the
damped Jaynes-Cummings model and a trace-distance (BLP) measure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import TOL_SING, ADParams, ChannelFamily, decay_rate_ad
from .linalg import PAULIS
from .pdm import QubitState, pdm_stack

MIN_POINTS = 10
SINGULAR_WINDOW = 10


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on ``[t0, t_max]``.

    The number of intervals is ``round((t_max - t0) / dt)``; both endpoints
    are grid points, so the effective step :attr:`step` can differ from
    ``dt`` by a rounding amount.
    """

    t0: float
    t_max: float
    dt: float

    def __post_init__(self):
        if not self.t0 < self.t_max:
            raise ValueError(f"need t0 < t_max, got {self.t0} >= {self.t_max}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if (self.t_max - self.t0) / self.dt < MIN_POINTS:
            raise ValueError("grid must contain at least 10 steps")

    @property
    def n(self) -> int:
        return int(round((self.t_max - self.t0) / self.dt))

    @property
    def step(self) -> float:
        return (self.t_max - self.t0) / self.n

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t_max, self.n + 1)


@dataclass(frozen=True, eq=False)
class Curve:
    """Sampled real function with per-point singularity flags."""

    grid: TimeGrid
    values: np.ndarray
    flags: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        flags = np.asarray(self.flags, dtype=bool)
        if values.shape != (self.grid.n + 1,) or flags.shape != values.shape:
            raise ValueError("curve length does not match its grid")
        if not np.all(np.isfinite(values[~flags])):
            raise ValueError("unflagged curve values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", flags)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


@dataclass(frozen=True)
class MeasureReport:
    """Result of :func:`nm_measure`.

    ``argmax_state`` is ``(theta, phi)`` of the optimal pure input, or
    None when the maximally mixed state wins. ``variant_M`` is the
    ``integral |dF/dt| + F(t_max) - F(t0)`` form at the same input, which
    equals ``2 M`` up to discretization error. ``hcla`` is None for
    families other than damped Jaynes-Cummings, and both comparison
    fields are None when they were not requested.
    """

    M: float
    C: float
    argmax_state: tuple[float, float] | None
    variant_M: float
    hcla: float | None
    blp: float | None


def _dilate(flags: np.ndarray, width: int) -> np.ndarray:
    if width <= 0 or not flags.any():
        return flags.copy()
    kernel = np.ones(2 * width + 1)
    return np.convolve(flags.astype(float), kernel, mode="same") > 0


class _FEvaluator:
    """``F(t)`` on a fixed Kraus stack for many input states.

    The PDM is linear in ``rho``, so the stacks for the four Pauli inputs
    are built once and combined per state.
    """

    def __init__(self, kraus: np.ndarray, flags: np.ndarray):
        self.flags = flags
        self.basis = np.stack([pdm_stack(s / 2, kraus) for s in PAULIS])

    def __call__(self, rho) -> np.ndarray:
        coeffs = np.einsum("iab,ba->i", PAULIS, np.asarray(rho, dtype=complex)).real
        p = np.tensordot(coeffs, self.basis, axes=1)
        ev = np.linalg.eigvalsh(0.5 * (p + np.conj(np.swapaxes(p, -1, -2))))
        f = np.maximum(np.log2(np.sum(np.abs(ev), axis=-1)), 0.0)
        return np.where(self.flags, np.nan, f)


def f_curve(fam: ChannelFamily, rho, grid: TimeGrid) -> Curve:
    """``F(t)`` for input ``rho`` on ``grid``; unevaluable times are flagged."""
    kraus, flags = fam.kraus_stack(grid.times)
    return Curve(grid, _FEvaluator(kraus, flags)(QubitState(np.asarray(rho)).matrix), flags)


def slope(curve: Curve, exclude: int = 1) -> np.ndarray:
    """Central-difference derivative (one-sided at the ends).

    Points within ``exclude`` samples of a flagged point are NaN.
    """
    v = np.where(curve.flags, 0.0, curve.values)
    d = np.gradient(v, curve.times)
    return np.where(_dilate(curve.flags, exclude), np.nan, d)


def _trapezoid_kept(f: np.ndarray, t: np.ndarray) -> float:
    ok = np.isfinite(f)
    seg = ok[:-1] & ok[1:]
    if not seg.any():
        return 0.0
    fz = np.where(ok, f, 0.0)
    return float(np.sum(0.5 * (fz[:-1] + fz[1:]) * np.diff(t) * seg))


def positive_slope_integral(curve: Curve, exclude: int = 1) -> float:
    """Trapezoidal integral of ``max(dF/dt, 0)`` over the unexcluded points."""
    d = slope(curve, exclude)
    if np.count_nonzero(np.isfinite(d)) < MIN_POINTS:
        raise ValueError("fewer than 10 usable points on the curve")
    return _trapezoid_kept(np.maximum(d, 0.0), curve.times)


def total_variation_form(curve: Curve, exclude: int = 1) -> float:
    """``integral |dF/dt| dt + F(t_max) - F(t0)`` over the usable points."""
    d = slope(curve, exclude)
    ok = np.flatnonzero(np.isfinite(d))
    if len(ok) < MIN_POINTS:
        raise ValueError("fewer than 10 usable points on the curve")
    v = curve.values
    return _trapezoid_kept(np.abs(d), curve.times) + float(v[ok[-1]] - v[ok[0]])


def _golden_max(f, lo: float, hi: float, tol: float = 1e-4) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``f`` on ``[lo, hi]``."""
    g = (np.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def nm_measure(
    fam: ChannelFamily,
    grid: TimeGrid,
    state_grid: tuple[int, int] = (24, 12),
    refine: bool = True,
    blp_grid: int = 24,
    comparisons: bool = True,
) -> MeasureReport:
    """Causality-based non-Markovianity of ``fam`` over ``grid``.

    The input state is optimized over a ``(n_theta, n_phi)`` grid of pure
    states (plus ``I/2``), then refined by golden-section search on
    ``theta`` around the best grid point at its ``phi``.
    """
    n_theta, n_phi = state_grid
    if n_theta < 8 or n_phi < 1:
        raise ValueError(f"state grid must be at least (8, 1), got {state_grid}")
    kraus, flags = fam.kraus_stack(grid.times)
    f_of = _FEvaluator(kraus, flags)

    def measure(rho) -> float:
        return positive_slope_integral(Curve(grid, f_of(rho), flags))

    thetas = np.linspace(0.0, np.pi / 2, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    best_m = measure(np.eye(2) / 2)
    best: tuple[float, float] | None = None
    best_i = None
    for i, th in enumerate(thetas):
        for ph in phis:
            m = measure(QubitState.from_angles(th, ph).matrix)
            if m > best_m:
                best_m, best, best_i = m, (float(th), float(ph)), i
    if refine and best is not None:
        lo = thetas[max(best_i - 1, 0)]
        hi = thetas[min(best_i + 1, n_theta - 1)]
        phi = best[1]
        th, m = _golden_max(lambda x: measure(QubitState.from_angles(x, phi).matrix), lo, hi)
        if m > best_m:
            best_m, best = m, (float(th), phi)

    rho = np.eye(2) / 2 if best is None else QubitState.from_angles(*best).matrix
    variant = total_variation_form(Curve(grid, f_of(rho), flags))
    hcla = None
    if comparisons and isinstance(fam.params, ADParams):
        hcla = hcla_measure(fam.params, grid)
    return MeasureReport(
        M=best_m,
        C=best_m / (1 + best_m),
        argmax_state=best,
        variant_M=variant,
        hcla=hcla,
        blp=blp_measure(fam, grid, blp_grid) if comparisons else None,
    )


def decay_rate_curve(p: ADParams, grid: TimeGrid, tol_sing: float = TOL_SING) -> Curve:
    """``gamma(t)`` on ``grid``.

    Flags points where ``|G| < tol_sing`` and both ends of every grid
    interval across which ``G`` changes sign, since the rate diverges at
    the zeros of ``G`` whether or not a grid point lands on them.
    """
    t = grid.times
    gamma = decay_rate_ad(p, t, tol_sing)
    g = p.G(t)
    flags = ~np.isfinite(gamma)
    cross = np.sign(g[:-1]) * np.sign(g[1:]) < 0
    flags[:-1] |= cross
    flags[1:] |= cross
    return Curve(grid, np.where(flags, np.nan, gamma), flags)


def hcla_measure(p: ADParams, grid: TimeGrid, window: int = SINGULAR_WINDOW) -> float:
    """Integral of ``max(-gamma(t), 0)``, skipping ``window`` points around singularities.

    ``-gamma`` grows like ``2 / (t - t_root)`` just after each zero of
    ``G``, so the value depends (logarithmically) on ``window * dt``.
    """
    c = decay_rate_curve(p, grid)
    neg = np.where(_dilate(c.flags, window), np.nan, np.maximum(-c.values, 0.0))
    return _trapezoid_kept(neg, c.times)


def trace_distance_curve(fam: ChannelFamily, rho1, rho2, grid: TimeGrid) -> Curve:
    """``D(t) = ||E_t(rho1) - E_t(rho2)||_1 / 2``."""
    delta = QubitState(np.asarray(rho1)).matrix - QubitState(np.asarray(rho2)).matrix
    kraus, flags = fam.kraus_stack(grid.times)
    return Curve(grid, _td_values(delta, kraus, flags), flags)


def _td_values(delta: np.ndarray, kraus: np.ndarray, flags: np.ndarray) -> np.ndarray:
    out = np.einsum("nkab,bc,nkdc->nad", kraus, delta, kraus.conj(), optimize=True)
    ev = np.linalg.eigvalsh(0.5 * (out + np.conj(np.swapaxes(out, -1, -2))))
    return np.where(flags, np.nan, 0.5 * np.sum(np.abs(ev), axis=-1))


def blp_measure(fam: ChannelFamily, grid: TimeGrid, n_theta: int = 24, n_phi: int = 1) -> float:
    """Trace-distance revival measure maximized over orthogonal pure pairs.

    Pairs are ``rho(theta, phi)`` and its orthogonal complement, on an
    ``n_theta x n_phi`` grid.
    """
    if n_theta < 8 or n_phi < 1:
        raise ValueError("pair grid must have at least 8 theta values")
    kraus, flags = fam.kraus_stack(grid.times)
    best = 0.0
    for th in np.linspace(0.0, np.pi / 2, n_theta):
        for ph in np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False):
            rho = QubitState.from_angles(th, ph).matrix
            delta = 2 * rho - np.eye(2)
            c = Curve(grid, _td_values(delta, kraus, flags), flags)
            best = max(best, positive_slope_integral(c))
    return best
