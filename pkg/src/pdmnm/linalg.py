"""Dense linear algebra for small qubit operators.

All matrices are plain ``numpy`` complex arrays. Tensor products follow the
``numpy.kron`` convention: the left factor indexes the slower-varying
subsystem, so basis state ``|i>|j>`` sits at row ``i * d_B + j``.
"""
from __future__ import annotations

import numpy as np

TOL_HERM = 1e-10

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Pauli basis ``(I, X, Y, Z)`` stacked along the first axis.
PAULIS = np.stack([SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z])


class NotHermitianError(ValueError):
    """Raised when an operator expected to be Hermitian is not."""


def as_square(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite, square complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square 2D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conjugate(np.swapaxes(m, -1, -2))


def kron(a, b) -> np.ndarray:
    return np.kron(as_square(a, "a"), as_square(b, "b"))


def anticommutator(a, b) -> np.ndarray:
    """Return ``ab + ba`` (no factor 1/2)."""
    a = as_square(a, "a")
    b = as_square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b + b @ a


def hermiticity_violation(h: np.ndarray) -> float:
    """Largest entrywise modulus of ``h - h^dagger``."""
    return float(np.max(np.abs(h - dagger(h)), initial=0.0))


def symmetrize(h, tol: float = TOL_HERM) -> np.ndarray:
    """Return ``(h + h^dagger) / 2`` after checking ``h`` is Hermitian to ``tol``."""
    h = as_square(h)
    err = hermiticity_violation(h)
    if err > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: max |h - h^dagger| = {err:.3e} > {tol:.1e}"
        )
    return 0.5 * (h + dagger(h))


def hermitian_eigenvalues(h, tol: float = TOL_HERM) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian up to ``tol`` (max-entry absolute deviation).
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    numpy.ndarray
        ``len(h)`` real eigenvalues sorted ascending.

    Raises
    ------
    NotHermitianError
        If ``max |h - h^dagger| > tol``.
    """
    return np.linalg.eigvalsh(symmetrize(h, tol))


def trace_norm(m, tol: float = TOL_HERM) -> float:
    """Schatten 1-norm: sum of singular values.

    Hermitian input (within ``tol``) goes through the eigenvalue path,
    anything else through the SVD.
    """
    m = as_square(m)
    if hermiticity_violation(m) <= tol:
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (m + dagger(m))))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def _split(m, dims) -> tuple[np.ndarray, int, int]:
    m = as_square(m)
    d_a, d_b = (int(d) for d in dims)
    if d_a < 1 or d_b < 1 or d_a * d_b != m.shape[0]:
        raise ValueError(f"dims {dims} do not factor a {m.shape[0]}-dimensional space")
    return m.reshape(d_a, d_b, d_a, d_b), d_a, d_b


def partial_transpose(m, dims=(2, 2), which: int = 1) -> np.ndarray:
    """Transpose the indices of one subsystem of a bipartite operator.

    ``which`` is 0 for the first (slow) factor and 1 for the second.
    """
    t, d_a, d_b = _split(m, dims)
    if which == 0:
        t = t.transpose(2, 1, 0, 3)
    elif which == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"which must be 0 or 1, got {which!r}")
    return t.reshape(d_a * d_b, d_a * d_b)


def partial_trace(m, dims=(2, 2), keep: int = 0) -> np.ndarray:
    """Trace out one factor of a bipartite operator, keeping factor ``keep``."""
    t, _, _ = _split(m, dims)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
