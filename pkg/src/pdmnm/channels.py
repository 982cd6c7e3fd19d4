"""Qubit channels in Kraus form and time-parametrized channel families.

A :class:`ChannelFamily` maps a time ``t`` to the dynamical map
``E(t, 0)``. The built-in families are

* :func:`ad_family` -- amplitude damping from the resonant damped
  Jaynes-Cummings model, ``r(t) = 1 - |G(t)|^2``;
* :func:`gad_family` -- generalized amplitude damping with
  ``p(t) = sin^2(omega t)`` and ``lambda(t) = 1 - exp(-t)``;
* :func:`unitary_family` and :func:`identity_family`;
* :func:`tabulated_family` for user-supplied Kraus samples.

Times are dimensionless (the GAD decay constant is 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

from .linalg import PAULIS, SIGMA_Z, as_square, dagger

TOL_CPTP = 1e-9
TOL_SING = 1e-8
COND_MAX = 1e12


class NotCPTPError(ValueError):
    """Kraus operators fail the completeness relation."""


def completeness_error(kraus: np.ndarray) -> float:
    """Max-entry deviation of ``sum_j K_j^dagger K_j`` from the identity.

    ``kraus`` has shape ``(..., m, d, d)``; the result is the maximum over
    all leading axes.
    """
    s = np.einsum("...kji,...kjl->...il", kraus.conj(), kraus)
    return float(np.max(np.abs(s - np.eye(kraus.shape[-1]))))


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map ``rho -> sum_j K_j rho K_j^dagger``."""

    kraus: tuple
    tol: float = field(default=TOL_CPTP, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(as_square(k, "Kraus operator") for k in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise ValueError("Kraus operators must share one square shape")
        err = completeness_error(np.stack(ops))
        if err > self.tol:
            raise NotCPTPError(
                f"sum K^dagger K deviates from identity by {err:.3e} > {self.tol:.1e}"
            )
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack(self.kraus)

    def __call__(self, rho) -> np.ndarray:
        # Linear action on any operator, not only states.
        x = np.asarray(rho, dtype=complex)
        return sum(k @ x @ dagger(k) for k in self.kraus)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Composition ``other o self`` (apply ``self`` first)."""
        if other.dim != self.dim:
            raise ValueError("cannot compose channels of different dimension")
        return KrausChannel(tuple(b @ a for b in other.kraus for a in self.kraus))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    """Apply ``ch`` to a density matrix."""
    rho = as_square(rho, "rho")
    if rho.shape[0] != ch.dim:
        raise ValueError(f"state dimension {rho.shape[0]} != channel dimension {ch.dim}")
    return ch(rho)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((u,))


def _ad_kraus(amp) -> np.ndarray:
    """AD Kraus stack from the coherence amplitude ``sqrt(1 - r)``."""
    amp = np.asarray(amp, dtype=float)
    k = np.zeros(amp.shape + (2, 2, 2), dtype=complex)
    k[..., 0, 0, 0] = 1.0
    k[..., 0, 1, 1] = amp
    k[..., 1, 0, 1] = np.sqrt(np.clip(1.0 - amp**2, 0.0, None))
    return k


def amplitude_damping(r: float) -> KrausChannel:
    """AD channel with damping parameter ``r`` in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {r}")
    return KrausChannel(tuple(_ad_kraus(np.sqrt(1.0 - r))))


def _gad_kraus(p, lam) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    lam = np.asarray(lam, dtype=float)
    shape = np.broadcast(p, lam).shape
    a, b = np.sqrt(1.0 - p), np.sqrt(p)
    c, s = np.sqrt(1.0 - lam), np.sqrt(lam)
    k = np.zeros(shape + (4, 2, 2), dtype=complex)
    k[..., 0, 0, 0] = a
    k[..., 0, 1, 1] = a * c
    k[..., 1, 0, 1] = a * s
    k[..., 2, 0, 0] = b * c
    k[..., 2, 1, 1] = b
    k[..., 3, 1, 0] = b * s
    return k


def generalized_amplitude_damping(p: float, lam: float) -> KrausChannel:
    """GAD channel with mixing weight ``p`` and damping ``lam``."""
    for name, v in (("p", p), ("lam", lam)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return KrausChannel(tuple(_gad_kraus(p, lam)))


def random_channel(rng: np.random.Generator, n_kraus: int = 2, dim: int = 2) -> KrausChannel:
    """Channel from a random Stinespring isometry ``C^dim -> C^dim (x) C^n_kraus``."""
    z = rng.normal(size=(dim * n_kraus, dim)) + 1j * rng.normal(size=(dim * n_kraus, dim))
    v, _ = np.linalg.qr(z)
    return KrausChannel(tuple(v.reshape(n_kraus, dim, dim)))


# -- Choi and transfer-matrix representations -------------------------------

def _basis_op(i: int, j: int, dim: int) -> np.ndarray:
    e = np.zeros((dim, dim), dtype=complex)
    e[i, j] = 1.0
    return e


def choi(ch: KrausChannel) -> np.ndarray:
    """``chi = sum_ij |i><j| (x) E(|j><i|)``.

    This is the swap-type convention (the identity channel gives the SWAP
    operator). It has trace ``dim`` but is generally not positive; its
    partial transpose on the first factor is :func:`jamiolkowski`.
    """
    d = ch.dim
    return sum(
        np.kron(_basis_op(i, j, d), ch(_basis_op(j, i, d)))
        for i in range(d)
        for j in range(d)
    )


def jamiolkowski(ch: KrausChannel) -> np.ndarray:
    """Unnormalized positive Choi matrix ``sum_ij |i><j| (x) E(|i><j|)``."""
    d = ch.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in ch.kraus:
        # column vector sum_i |i> (x) K|i>
        v = k.T.reshape(-1)
        out += np.outer(v, v.conj())
    return out


def transfer_matrix(ch: KrausChannel) -> np.ndarray:
    """Pauli transfer matrix ``T_ij = Tr[sigma_i E(sigma_j)] / 2`` (real 4x4)."""
    if ch.dim != 2:
        raise ValueError("transfer matrices are defined for qubit channels only")
    out = np.array([[np.trace(si @ ch(sj)) for sj in PAULIS] for si in PAULIS]) / 2
    return out.real


def _transfer_stack(kraus: np.ndarray) -> np.ndarray:
    """Batched transfer matrices for a ``(n, m, 2, 2)`` Kraus stack."""
    # E(sigma_j) for every j: (n, 4, 2, 2)
    img = np.einsum("nkab,jbc,nkdc->njad", kraus, PAULIS, kraus.conj())
    return np.einsum("iba,njab->nij", PAULIS, img).real / 2


def jamiolkowski_from_transfer(t_mat) -> np.ndarray:
    """Positive-convention Choi matrix of the linear map with transfer matrix ``t_mat``."""
    t_mat = np.asarray(t_mat, dtype=float)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = _basis_op(i, j, 2)
            coeffs = np.einsum("lab,ba->l", PAULIS, e)
            img = np.einsum("kl,l,kab->ab", t_mat, coeffs, PAULIS) / 2
            out += np.kron(e, img)
    return out


# -- families ----------------------------------------------------------------

@dataclass(frozen=True)
class ADParams:
    """Resonant damped Jaynes-Cummings parameters.

    ``gamma0`` is the system-bath coupling strength and ``b`` the spectral
    bandwidth, both in inverse time units.
    """

    gamma0: float
    b: float

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.b > 0):
            raise ValueError(f"gamma0 and b must be positive, got {self.gamma0}, {self.b}")

    @property
    def non_markovian(self) -> bool:
        return self.gamma0 / self.b > 0.5

    @property
    def d(self) -> complex:
        return np.sqrt(complex(self.b**2 - 2 * self.gamma0 * self.b))

    def _parts(self, t):
        """``exp(-bt/2) cosh(x)`` and ``exp(-bt/2) sinh(x) / x`` with ``x = d t / 2``."""
        t = np.asarray(t, dtype=float)
        half_b = 0.5 * self.b * t
        x = 0.5 * self.d * t
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            ep, em = np.exp(x - half_b), np.exp(-x - half_b)
            ch = 0.5 * (ep + em)
            small = np.abs(x) < 1e-3
            x2 = x * x
            sh_series = np.exp(-half_b) * (1 + x2 / 6 + x2 * x2 / 120)
            shc = np.where(small, sh_series, 0.5 * (ep - em) / np.where(small, 1.0, x))
        return ch, shc, half_b

    def G(self, t):
        """Coherence amplitude ``G(t)``; real, with ``G(0) = 1``."""
        ch, shc, half_b = self._parts(t)
        g = ch + half_b * shc
        _drop_imag(g)
        return g.real if np.ndim(g) else float(g.real)

    def G_dot(self, t):
        """``dG/dt = -gamma0 (b t / 2) exp(-bt/2) sinh(x) / x``."""
        _, shc, half_b = self._parts(t)
        g = -self.gamma0 * half_b * shc
        _drop_imag(g)
        return g.real if np.ndim(g) else float(g.real)

    def r(self, t):
        return 1.0 - np.square(self.G(t))


def _drop_imag(z, tol: float = 1e-10) -> None:
    imag = np.max(np.abs(np.imag(z)), initial=0.0)
    if imag > tol:
        raise ArithmeticError(f"G(t) has an imaginary residue {imag:.3e}")


def decay_rate_ad(p: ADParams, t, tol_sing: float = TOL_SING):
    """Canonical decay rate ``gamma(t) = 2 Re[gamma0 / (s coth(b t s / 2) + 1)]``.

    ``s = sqrt(1 - 2 gamma0 / b)`` may be imaginary. Returns NaN wherever
    ``|G(t)| < tol_sing`` since the rate diverges at zeros of ``G``.
    """
    t = np.asarray(t, dtype=float)
    s = np.sqrt(complex(1 - 2 * p.gamma0 / p.b))
    x = 0.5 * p.b * t * s
    ch, shc, half_b = p._parts(t)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # s coth(x), written so that s -> 0 and large |x| stay finite
        s_coth = np.where(
            np.abs(x) > 1.0,
            s / np.tanh(np.where(np.abs(x) > 1.0, x, 1.0)),
            ch / (half_b * shc),
        )
        gamma = 2 * np.real(p.gamma0 / (s_coth + 1))
    gamma = np.where(t == 0, 0.0, gamma)
    gamma = np.where(np.abs(p.G(t)) < tol_sing, np.nan, gamma)
    return gamma if gamma.ndim else float(gamma)


def ad_roots(p: ADParams, t_max: float, t_min: float = 0.0, n_scan: int = 4096) -> np.ndarray:
    """Zeros of ``G`` in ``(t_min, t_max]``, refined with Brent's method."""
    ts = np.linspace(t_min, t_max, n_scan + 1)
    g = p.G(ts)
    roots = []
    for i in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
        roots.append(scipy.optimize.brentq(p.G, ts[i], ts[i + 1], xtol=1e-15, rtol=1e-15))
    return np.array(roots)


@dataclass(frozen=True)
class GADParams:
    """GAD parameters: ``p(t) = sin^2(omega t)``, ``lambda(t) = 1 - exp(-t)``."""

    omega: float

    def __post_init__(self):
        if not self.omega >= 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")

    def p(self, t):
        return np.sin(self.omega * np.asarray(t, dtype=float)) ** 2

    def lam(self, t):
        return -np.expm1(-np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ChannelFamily:
    """A one-parameter family ``t -> E(t, 0)``.

    ``batch``, when given, returns the Kraus stack ``(n, m, d, d)`` for an
    array of times in one call; otherwise :meth:`kraus_stack` falls back
    to calling ``evaluator`` point by point.
    """

    kind: str
    params: Any
    evaluator: Callable[[float], KrausChannel]
    batch: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, t: float) -> KrausChannel:
        return self.evaluator(float(t))

    def kraus_stack(self, times) -> tuple[np.ndarray, np.ndarray]:
        """Kraus operators on a time grid.

        Returns ``(stack, flags)`` where ``flags[i]`` is True if the family
        could not be evaluated at ``times[i]``; those slots hold zeros.
        """
        times = np.asarray(times, dtype=float)
        if self.batch is not None:
            stack = self.batch(times)
            err = np.max(np.abs(
                np.einsum("nkji,nkjl->nil", stack.conj(), stack) - np.eye(stack.shape[-1])
            ), axis=(1, 2))
            if np.any(err > TOL_CPTP):
                raise NotCPTPError(f"family {self.kind} violates completeness by {err.max():.3e}")
            return stack, np.zeros(len(times), dtype=bool)
        chans: list[KrausChannel | None] = []
        for t in times:
            try:
                chans.append(self(t))
            except (ValueError, ArithmeticError):
                chans.append(None)
        ok = [c for c in chans if c is not None]
        if not ok:
            raise ValueError(f"family {self.kind} could not be evaluated at any time")
        m = max(len(c.kraus) for c in ok)
        d = ok[0].dim
        stack = np.zeros((len(times), m, d, d), dtype=complex)
        for i, c in enumerate(chans):
            if c is not None:
                stack[i, : len(c.kraus)] = c.stacked()
        return stack, np.array([c is None for c in chans])


def identity_family(dim: int = 2) -> ChannelFamily:
    ch = identity_channel(dim)
    return ChannelFamily(
        "identity", None, lambda t: ch,
        batch=lambda ts: np.broadcast_to(ch.stacked(), (len(ts),) + ch.stacked().shape).copy(),
    )


def unitary_family(hamiltonian=None) -> ChannelFamily:
    """Closed evolution ``U(t) = exp(-i H t)``; ``H`` defaults to ``sigma_z / 2``."""
    h = as_square(0.5 * SIGMA_Z if hamiltonian is None else hamiltonian, "hamiltonian")
    return ChannelFamily("unitary", h, lambda t: unitary_channel(scipy.linalg.expm(-1j * h * t)))


def ad_family(p: ADParams) -> ChannelFamily:
    """Damped Jaynes-Cummings amplitude damping, ``sqrt(1 - r(t)) = |G(t)|``."""

    def batch(ts):
        return _ad_kraus(np.abs(p.G(ts)))

    return ChannelFamily(
        "ad", p, lambda t: KrausChannel(tuple(batch(np.array([t]))[0])), batch=batch
    )


def gad_family(p: GADParams) -> ChannelFamily:
    def batch(ts):
        return _gad_kraus(p.p(ts), p.lam(ts))

    return ChannelFamily(
        "gad", p, lambda t: KrausChannel(tuple(batch(np.array([t]))[0])), batch=batch
    )


def tabulated_family(
    times: Sequence[float], kraus: Sequence[Sequence], tol: float = TOL_CPTP
) -> ChannelFamily:
    """Family interpolating Kraus samples linearly in time.

    Samples may carry different numbers of Kraus operators (missing ones
    count as zero). Interpolated operators that drift off completeness by
    more than ``tol`` are pulled back with ``K -> K S^{-1/2}``,
    ``S = sum K^dagger K``, and re-validated.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be a non-empty strictly increasing sequence")
    if len(kraus) != len(times):
        raise ValueError("need exactly one Kraus list per sample time")
    samples = [KrausChannel(tuple(ks), tol=tol) for ks in kraus]
    dim = samples[0].dim
    if any(s.dim != dim for s in samples):
        raise ValueError("all samples must have the same dimension")
    m = max(len(s.kraus) for s in samples)
    stack = np.zeros((len(times), m, dim, dim), dtype=complex)
    for i, s in enumerate(samples):
        stack[i, : len(s.kraus)] = s.stacked()
    stack.setflags(write=False)

    def evaluator(t: float) -> KrausChannel:
        if not times[0] <= t <= times[-1]:
            raise ValueError(f"t={t} outside tabulated range [{times[0]}, {times[-1]}]")
        i = int(np.searchsorted(times, t, side="right")) - 1
        if i >= len(times) - 1:
            return samples[-1]
        if t == times[i]:
            return samples[i]
        w = (t - times[i]) / (times[i + 1] - times[i])
        ks = (1 - w) * stack[i] + w * stack[i + 1]
        if completeness_error(ks) > tol:
            s = np.einsum("kji,kjl->il", ks.conj(), ks)
            ks = ks @ scipy.linalg.fractional_matrix_power(s, -0.5)
        return KrausChannel(tuple(ks), tol=tol)

    return ChannelFamily("custom", {"times": times, "kraus": stack}, evaluator)


# -- divisibility ------------------------------------------------------------

def intermediate_transfer(fam: ChannelFamily, t: float, tau: float) -> np.ndarray | None:
    """Transfer matrix of ``E(t + tau, t) = T(t + tau) T(t)^{-1}``.

    Returns None when ``T(t)`` is numerically singular (condition number
    above ``COND_MAX``).
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    t_now = transfer_matrix(fam(t))
    if np.linalg.cond(t_now) > COND_MAX:
        return None
    return transfer_matrix(fam(t + tau)) @ np.linalg.inv(t_now)


def intermediate_map_witness(fam: ChannelFamily, t: float, tau: float) -> float:
    """Minimum eigenvalue of the intermediate map's (positive-convention) Choi matrix.

    Non-negative (up to round-off) iff ``E(t + tau, t)`` is completely
    positive. NaN flags a non-invertible ``E(t, 0)``.
    """
    t_int = intermediate_transfer(fam, t, tau)
    if t_int is None:
        return float("nan")
    j = jamiolkowski_from_transfer(t_int)
    return float(np.linalg.eigvalsh(0.5 * (j + dagger(j)))[0])
