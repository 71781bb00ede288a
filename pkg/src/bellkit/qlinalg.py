"""
Dense complex linear algebra for small Hilbert spaces.

Operators are plain ``numpy`` arrays of dtype ``complex128``. Tensor products
follow the ``numpy.kron`` index convention: entry ``(i*db + k, j*db + l)`` of
``kron(a, b)`` is ``a[i, j] * b[k, l]``, so the two-qubit basis order is
up-up, up-down, down-up, down-down.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NotHermitian

ComplexMatrix = npt.NDArray[np.complex128]

DEFAULT_TOL = 1e-10


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    """Return ``a`` as a square complex128 array, raising if it is not square."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product of two square matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def sym_tensor(v1: npt.ArrayLike, v2: npt.ArrayLike) -> ComplexMatrix:
    """
    Symmetrized tensor product ``(v1 (x) v2 + v2 (x) v1) / 2``.

    The result is bitwise identical under exchange of the arguments, since
    floating-point addition of two terms commutes.
    """
    a, b = as_matrix(v1), as_matrix(v2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"sym_tensor needs equal dimensions, got {a.shape} and {b.shape}")
    return 0.5 * (np.kron(a, b) + np.kron(b, a))


def swap_operator(d: int) -> ComplexMatrix:
    """Flip operator ``S`` on ``C^d (x) C^d`` with ``S (x (x) y) = y (x) x``."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def hermitian_defect(a: npt.ArrayLike) -> float:
    m = as_matrix(a)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(a: npt.ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    return hermitian_defect(a) <= tol


def is_psd(a: npt.ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within ``tol`` and no eigenvalue below ``-tol``."""
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        return False
    return bool(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] >= -tol)


def is_identity(a: npt.ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(a)
    return float(np.max(np.abs(m - np.eye(m.shape[0])))) <= tol


def hermitian_eigen(
    a: npt.ArrayLike, tol: float = DEFAULT_TOL
) -> tuple[npt.NDArray[np.float64], ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian within ``tol`` (max-abs norm of ``a - a^H``).
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Orthonormal eigenvectors as columns, in the same order.

    Raises
    ------
    NotHermitian
        If ``a`` is not Hermitian within ``tol``.
    """
    m = as_matrix(a)
    defect = hermitian_defect(m)
    if defect > tol:
        raise NotHermitian(f"NotHermitian: max|A - A^H| = {defect:.3e} exceeds {tol:.1e}")
    # LAPACK zheevd; only the lower triangle is read, so symmetrize first.
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def operator_norm(a: npt.ArrayLike) -> float:
    """Spectral norm of a Hermitian matrix (largest absolute eigenvalue)."""
    w, _ = hermitian_eigen(a, tol=np.inf)
    return float(np.max(np.abs(w)))


def trace_product(a: npt.ArrayLike, b: npt.ArrayLike) -> complex:
    """``tr[a b]`` without forming the product."""
    return complex(np.einsum("ij,ji->", as_matrix(a), as_matrix(b)))


def ket(*amplitudes: complex) -> npt.NDArray[np.complex128]:
    v = np.asarray(amplitudes, dtype=np.complex128)
    return v / np.linalg.norm(v)


def projector(vec: npt.ArrayLike) -> ComplexMatrix:
    """Rank-one projector ``|v><v|`` onto the normalized vector ``vec``."""
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


UP = np.array([1.0, 0.0], dtype=np.complex128)
DOWN = np.array([0.0, 1.0], dtype=np.complex128)
