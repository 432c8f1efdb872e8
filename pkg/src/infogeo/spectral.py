"""Spectral calculus on Hermitian matrices.

Everything on the quantum side of the library reduces to three primitives:
an eigendecomposition, scalar functions applied through it, and entrywise
two-argument kernels applied in the eigenbasis (Daleckii-Krein style).  The
kernels of interest here are the logarithmic mean, its reciprocal, and the
inverse arithmetic mean, which realize respectively the noncommutative
analogue of multiplication by the state, the derivative of the matrix
logarithm, and the symmetric (Lyapunov) division by the state.

All functions are pure; decompositions are plain named tuples and can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

# Eigenvalue pairs closer than this (relative) are treated as confluent and
# the kernel's diagonal limit is used instead of the off-diagonal formula.
CONFLUENT_RTOL = 1e-12

_RECONSTRUCTION_RTOL = 1e-10


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (a + a†)/2 as a complex array.

    Applied on every construction from raw data so that round-trips through
    files are idempotent.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.conj().T)


class SpectralDecomposition(NamedTuple):
    """Eigendecomposition a = U diag(w) U† with w ascending and U unitary."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eigh(a: np.ndarray) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix.

    The input is symmetrized first, so mildly non-Hermitian input (file
    round-off) is tolerated.  The decomposition is validated: unitarity of
    the eigenvector matrix and the reconstruction error must both be below
    1e-10 relative to the Frobenius norm.
    """
    a = hermitian_part(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    try:
        w, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ValueError(
            f"eigensolver did not converge on a {a.shape[0]}x{a.shape[0]} "
            f"matrix: {exc}"
        ) from exc
    dec = SpectralDecomposition(w, u)
    scale = max(np.linalg.norm(a), 1e-300)
    recon_err = np.linalg.norm(dec.reconstruct() - a) / scale
    unit_err = np.linalg.norm(u.conj().T @ u - np.eye(len(w)))
    if recon_err > _RECONSTRUCTION_RTOL or unit_err > _RECONSTRUCTION_RTOL:
        raise ValueError(
            f"eigendecomposition failed validation: reconstruction residual "
            f"{recon_err:.3e}, unitarity residual {unit_err:.3e}"
        )
    return dec


def _as_decomposition(a) -> SpectralDecomposition:
    if isinstance(a, SpectralDecomposition):
        return a
    return eigh(a)


def matrix_function(a, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function through the eigendecomposition: U f(w) U†.

    ``a`` may be a Hermitian matrix or a precomputed decomposition.  Raises
    ``ValueError`` naming the offending eigenvalue when ``f`` is undefined
    (non-finite) there, e.g. log of a nonpositive eigenvalue.
    """
    dec = _as_decomposition(a)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(dec.eigenvalues), dtype=float)
    bad = ~np.isfinite(fw)
    if np.any(bad):
        ev = dec.eigenvalues[bad][0]
        raise ValueError(f"scalar function undefined on eigenvalue {ev!r}")
    u = dec.eigenvectors
    return hermitian_part((u * fw) @ u.conj().T)


@dataclass(frozen=True)
class Kernel:
    """Two-argument scalar kernel with its confluent (p == q) limit.

    ``fn(p, q)`` must be symmetric and vectorized; ``diag(p)`` supplies the
    limit value used whenever |p - q| < CONFLUENT_RTOL * max(p, q), avoiding
    0/0 without branch noise.
    """

    name: str
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    diag: Callable[[np.ndarray], np.ndarray]

    def matrix(self, p: np.ndarray) -> np.ndarray:
        """Evaluate k(p_i, p_j) on all eigenvalue pairs, limits included."""
        p = np.asarray(p, dtype=float)
        pi = p[:, None]
        pj = p[None, :]
        near = np.abs(pi - pj) < CONFLUENT_RTOL * np.maximum(
            np.abs(pi), np.abs(pj)
        )
        with np.errstate(all="ignore"):
            k = np.where(near, self.diag(0.5 * (pi + pj)), self.fn(pi, pj))
        return k


def _log_ratio(p, q):
    # log(p) - log(q) computed as log1p((p - q)/q); stable for p close to q.
    return np.log1p((p - q) / q)


# integral_0^1 p^a q^(1-a) da = (p - q) / (log p - log q); the entrywise
# form of multiplication by the state averaged over orderings.
logarithmic_mean_kernel = Kernel(
    name="logarithmic_mean",
    fn=lambda p, q: (p - q) / _log_ratio(p, q),
    diag=lambda p: p,
)

# Reciprocal of the above; the Daleckii-Krein kernel of the matrix logarithm
# and the closed form of integral_0^infty (s+p)^-1 (s+q)^-1 ds.
log_difference_kernel = Kernel(
    name="log_difference",
    fn=lambda p, q: _log_ratio(p, q) / (p - q),
    diag=lambda p: 1.0 / p,
)

# Inverse arithmetic mean; solves p x + x q = 2 d entrywise.
symmetric_inverse_kernel = Kernel(
    name="symmetric_inverse",
    fn=lambda p, q: 2.0 / (p + q),
    diag=lambda p: 1.0 / p,
)


def kernel_apply(rho, x: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Scale x entrywise by kernel(p_i, p_j) in the eigenbasis of rho.

    ``rho`` is a Hermitian matrix or its decomposition with eigenvalues p.
    Returns U (K ∘ (U† x U)) U†, which is Hermitian whenever x is.  Raises
    ``ValueError`` naming the eigenvalue pair if the kernel is non-finite
    there.
    """
    dec = _as_decomposition(rho)
    x = hermitian_part(x)
    if x.shape[0] != dec.dim:
        raise ValueError(
            f"operand dimension {x.shape[0]} != state dimension {dec.dim}"
        )
    k = kernel.matrix(dec.eigenvalues)
    bad = ~np.isfinite(k)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        pi, pj = dec.eigenvalues[i], dec.eigenvalues[j]
        raise ValueError(
            f"kernel {kernel.name!r} non-finite at eigenvalue pair "
            f"({pi!r}, {pj!r})"
        )
    u = dec.eigenvectors
    xt = u.conj().T @ x @ u
    return hermitian_part(u @ (k * xt) @ u.conj().T)
