"""Pseudo-density matrices over sequential Pauli measurements.

The two-point PDM of a qubit prepared in ``rho``, measured, sent through a
channel ``E`` and measured again is

    P = (I (x) E)[{rho (x) I/2, Q_swap}],    Q_swap = (1/2) sum_i s_i (x) s_i

with ``{a, b} = ab + ba``. Equivalently it is the Pauli expansion of the
two-time correlators ``<s_i s_j>``; :func:`pdm_from_correlators` builds it
that way by enumerating projective measurement outcomes.

Index 0 in a correlator means "no measurement" at that event: a single
outcome with projector ``I``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import KrausChannel, jamiolkowski
from .linalg import (
    PAULIS,
    TOL_HERM,
    as_square,
    dagger,
    hermitian_eigenvalues,
    hermiticity_violation,
    partial_transpose,
    trace_norm,
)

TOL_PSD = 1e-10

Q_SWAP = 0.5 * sum(np.kron(s, s) for s in PAULIS)


@dataclass(frozen=True, eq=False)
class QubitState:
    """A single-qubit density matrix.

    Pure states built by :meth:`from_angles` use
    ``|psi> = sin(theta)|0> + exp(i phi) cos(theta)|1>``, so ``phi = 0``
    gives ``[[sin^2, sin(2 theta)/2], [sin(2 theta)/2, cos^2]]`` and
    ``theta = pi/2`` is ``|0><0|``. The angles covering the sphere are
    ``theta`` in ``[0, pi/2]`` and ``phi`` in ``[0, 2 pi)``.
    """

    matrix: np.ndarray
    angles: tuple[float, float] | None = None

    def __post_init__(self):
        m = as_square(self.matrix, "state")
        if m.shape != (2, 2):
            raise ValueError(f"qubit state must be 2x2, got {m.shape}")
        if hermiticity_violation(m) > TOL_HERM:
            raise ValueError("state is not Hermitian")
        m = 0.5 * (m + dagger(m))
        if abs(np.trace(m).real - 1) > TOL_PSD:
            raise ValueError(f"state trace is {np.trace(m).real}, expected 1")
        if np.linalg.eigvalsh(m)[0] < -TOL_PSD:
            raise ValueError("state is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> "QubitState":
        psi = np.array([np.sin(theta), np.exp(1j * phi) * np.cos(theta)])
        return cls(np.outer(psi, psi.conj()), (float(theta), float(phi)))

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(np.eye(2) / 2)

    @classmethod
    def ket(cls, label: str) -> "QubitState":
        """Pure state for one of ``'0', '1', '+', '-'``."""
        vecs = {
            "0": [1, 0],
            "1": [0, 1],
            "+": [1 / np.sqrt(2), 1 / np.sqrt(2)],
            "-": [1 / np.sqrt(2), -1 / np.sqrt(2)],
        }
        v = np.array(vecs[label], dtype=complex)
        return cls(np.outer(v, v.conj()))

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def orthogonal(self) -> "QubitState":
        """The state orthogonal to a pure state, ``I - rho``."""
        if abs(self.purity - 1) > 1e-9:
            raise ValueError("orthogonal complement is only defined for pure states")
        return QubitState(np.eye(2) - self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def random_state(rng: np.random.Generator, pure: bool = False) -> QubitState:
    """Random qubit state (Haar pure, or Hilbert-Schmidt mixed)."""
    if pure:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return QubitState(np.outer(v, v.conj()))
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = z @ dagger(z)
    return QubitState(m / np.trace(m).real)


@dataclass(frozen=True, eq=False)
class PseudoDensityMatrix:
    """Hermitian, unit-trace operator over ``k`` measurement events."""

    matrix: np.ndarray
    k: int
    eigenvalues: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        m = as_square(self.matrix, "PDM")
        if m.shape[0] != 2**self.k:
            raise ValueError(f"a {self.k}-event PDM must be {2**self.k}-dimensional")
        ev = hermitian_eigenvalues(m)
        if abs(np.trace(m).real - 1) > TOL_HERM:
            raise ValueError(f"PDM trace is {np.trace(m).real}, expected 1")
        m = 0.5 * (m + dagger(m))
        m.setflags(write=False)
        ev.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def trace_norm(self) -> float:
        return float(np.sum(np.abs(self.eigenvalues)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _jordan_seed(rho) -> np.ndarray:
    return np.kron(np.asarray(rho, dtype=complex), np.eye(2) / 2) @ Q_SWAP + Q_SWAP @ np.kron(
        np.asarray(rho, dtype=complex), np.eye(2) / 2
    )


def pdm_two_point(rho, ch: KrausChannel) -> PseudoDensityMatrix:
    """PDM from the Jordan-product form ``(I (x) E)[{rho (x) I/2, Q_swap}]``."""
    if ch.dim != 2:
        raise ValueError("two-point PDMs are built for qubit channels")
    seed = _jordan_seed(QubitState(np.asarray(rho)).matrix)
    out = sum(np.kron(np.eye(2), k) @ seed @ np.kron(np.eye(2), dagger(k)) for k in ch.kraus)
    return PseudoDensityMatrix(out, 2)


def pdm_stack(rho, kraus: np.ndarray) -> np.ndarray:
    """Two-point PDM matrices for a batch of channels.

    ``kraus`` has shape ``(n, m, 2, 2)``; returns ``(n, 4, 4)``. No
    validation, intended for time grids.
    """
    seed = _jordan_seed(rho).reshape(2, 2, 2, 2)
    # (I (x) K) Y (I (x) K)^dagger on the second factor only
    out = np.einsum("nkab,ibjc,nkdc->niajd", kraus, seed, kraus.conj(), optimize=True)
    return out.reshape(len(kraus), 4, 4)


def _projectors(index: int):
    if index == 0:
        return ((1, np.eye(2, dtype=complex)),)
    s = PAULIS[index]
    return ((1, (np.eye(2) + s) / 2), (-1, (np.eye(2) - s) / 2))


def correlator(rho, chain: Sequence[KrausChannel], indices: Sequence[int]) -> float:
    """``<s_{i_1} ... s_{i_k}>`` by enumerating measurement outcomes.

    Each event measures ``s_i`` projectively (Lueders update, unnormalized
    branches so zero-probability outcomes contribute nothing), then the
    next channel in ``chain`` acts. ``len(indices)`` must be
    ``len(chain) + 1``.
    """
    if len(indices) != len(chain) + 1:
        raise ValueError("need one Pauli index per event")
    branches = [(1.0, np.asarray(rho, dtype=complex))]
    for j, idx in enumerate(indices):
        branches = [
            (sign * a, proj @ x @ proj)
            for sign, x in branches
            for a, proj in _projectors(idx)
        ]
        if j < len(chain):
            branches = [(sign, chain[j](x)) for sign, x in branches]
    return float(sum(sign * np.trace(x).real for sign, x in branches))


def pdm_k_point(rho, chain: Sequence[KrausChannel]) -> PseudoDensityMatrix:
    """``2^k``-dimensional PDM for ``k = len(chain) + 1`` measurement events."""
    if len(chain) < 1:
        raise ValueError("a PDM needs at least two events (one channel)")
    if any(not isinstance(c, KrausChannel) or c.dim != 2 for c in chain):
        raise ValueError("chain must hold qubit KrausChannel objects")
    rho = QubitState(np.asarray(rho)).matrix
    k = len(chain) + 1
    out = np.zeros((2**k, 2**k), dtype=complex)
    for idx in itertools.product(range(4), repeat=k):
        c = correlator(rho, chain, idx)
        if c == 0.0:
            continue
        op = PAULIS[idx[0]]
        for i in idx[1:]:
            op = np.kron(op, PAULIS[i])
        out += c * op
    return PseudoDensityMatrix(out / 2**k, k)


def pdm_from_correlators(rho, ch: KrausChannel) -> PseudoDensityMatrix:
    """Two-point PDM ``(1/4) sum_ij <s_i s_j> s_i (x) s_j`` from outcome statistics."""
    return pdm_k_point(rho, [ch])


def f_cm(p: PseudoDensityMatrix) -> float:
    """Causality monotone ``||P||_1 - 1``."""
    return max(p.trace_norm - 1.0, 0.0)


def causality_F(p: PseudoDensityMatrix) -> float:
    """``log2 ||P||_1``; zero iff ``P`` is positive semidefinite."""
    return max(float(np.log2(p.trace_norm)), 0.0)


def is_causal(p: PseudoDensityMatrix, tol: float = TOL_PSD) -> bool:
    """True if ``P`` has an eigenvalue below ``-tol``."""
    return bool(p.eigenvalues[0] < -tol)


def choi_negativity(ch: KrausChannel) -> float:
    """Logarithmic negativity of the normalized Choi state of ``ch``.

    ``log2 || (J / d)^PT ||_1`` with ``J`` the positive Choi matrix. The
    partial transpose of ``J / d`` is the swap-type ``chi / d`` of
    :func:`pdmnm.channels.choi`, which for qubits is exactly the PDM of
    the maximally mixed input.
    """
    state = jamiolkowski(ch) / ch.dim
    return max(float(np.log2(trace_norm(partial_transpose(state, (ch.dim, ch.dim), 0)))), 0.0)
