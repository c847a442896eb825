"""Dense complex linear algebra for bipartite cuts of multipartite states.

Multi-indices are big-endian mixed radix: subsystem 1 is the most significant
digit, so ``|q1 q2 ... qn>`` reads left to right. Subsystem labels in
bipartitions and blocks are 1-based positions into ``dims``.

SVD and Hermitian eigendecomposition are delegated to LAPACK through numpy;
everything else here is index bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .partitions import Bipartition

#: Default relative cut for counting Schmidt coefficients.
SCHMIDT_TOL = 1e-8

#: Relative residual the SVD must achieve.
SVD_RESIDUAL_TOL = 1e-10


class SVDConvergenceError(np.linalg.LinAlgError):
    """Raised when the SVD fails or misses its residual bound."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _as_array(x):
    return np.asarray(getattr(x, "amplitudes", getattr(x, "matrix", x)))


def _dims_of(x, dims):
    if dims is None:
        dims = getattr(x, "dims", None)
    if dims is None:
        raise ValueError("subsystem dims are required")
    return tuple(int(d) for d in dims)


def _check_finite(m):
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")


def svd(m, check: bool = True):
    """Thin SVD ``m = U @ diag(sigma) @ V^dagger`` with descending ``sigma``.

    Returns ``(U, sigma, V)`` where ``V`` (not ``V^dagger``) has orthonormal
    columns. With ``check`` the reconstruction residual is verified against
    ``1e-10 * ||m||_F``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    _check_finite(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SVDConvergenceError(f"SVD did not converge: {exc}") from exc
    if check and m.size:
        scale = np.linalg.norm(m)
        residual = np.linalg.norm(m - (u * s) @ vh)
        if residual > SVD_RESIDUAL_TOL * max(scale, np.finfo(float).tiny):
            raise SVDConvergenceError(
                f"SVD residual {residual:.3e} exceeds {SVD_RESIDUAL_TOL:g}*||m||", residual=residual
            )
    return u, s, vh.conj().T


def _block_positions(dims, bp: Bipartition):
    n = len(dims)
    left = [i - 1 for i in bp.left]
    right = [i - 1 for i in bp.right]
    if sorted(left + right) != list(range(n)):
        raise ValueError(f"bipartition {bp.to_list()} does not cover subsystems 1..{n}")
    return left, right


def reshape_bipartite(psi, dims=None, bp: Bipartition = None) -> np.ndarray:
    """Arrange amplitudes as a ``d_left x d_right`` matrix for the cut ``bp``.

    Row index is the multi-index restricted to ``bp.left`` (ascending labels,
    big-endian); column index likewise for ``bp.right``.
    """
    vec = _as_array(psi)
    dims = _dims_of(psi, dims)
    if vec.ndim != 1 or vec.size != prod(dims):
        raise ValueError(f"amplitude length {vec.size} does not match dims {list(dims)}")
    left, right = _block_positions(dims, bp)
    d_left = prod(dims[i] for i in left)
    tensor = vec.reshape(dims).transpose(left + right)
    return tensor.reshape(d_left, -1)


def unreshape_bipartite(mat, dims: Sequence[int], bp: Bipartition) -> np.ndarray:
    """Inverse of :func:`reshape_bipartite`: back to a flat amplitude vector."""
    dims = tuple(dims)
    left, right = _block_positions(dims, bp)
    order = left + right
    tensor = np.asarray(mat).reshape([dims[i] for i in order])
    return tensor.transpose(np.argsort(order)).reshape(-1)


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Truncated Schmidt decomposition across a bipartition.

    ``left_vectors[:, i]`` and ``right_vectors[:, i]`` pair with
    ``coefficients[i]``; the input equals ``sum_i c_i left_i (x) right_i``.
    """

    rank: int
    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    bipartition: Bipartition
    dims: tuple[int, ...]

    def reconstruct(self) -> np.ndarray:
        mat = (self.left_vectors * self.coefficients) @ self.right_vectors.T
        return unreshape_bipartite(mat, self.dims, self.bipartition)


def schmidt_decompose(psi, dims=None, bp: Bipartition = None, tol: float = SCHMIDT_TOL) -> SchmidtData:
    """Schmidt decomposition of a pure state across ``bp``.

    The rank counts singular values with ``sigma_i > tol * sigma_1``.
    """
    if not 0 < tol < 1:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    dims = _dims_of(psi, dims)
    mat = reshape_bipartite(psi, dims, bp)
    u, s, v = svd(mat)
    if s.size == 0 or s[0] == 0:
        raise ValueError("null state")
    rank = int(np.count_nonzero(s > tol * s[0]))
    return SchmidtData(
        rank=rank,
        coefficients=s[:rank].copy(),
        left_vectors=u[:, :rank].copy(),
        # psi_(a,b) = sum_i s_i u_i[a] v_i[b]^* so the right factor is conj(V)
        right_vectors=v[:, :rank].conj(),
        bipartition=bp,
        dims=dims,
    )


def _reduce(rho, dims, keep_positions) -> np.ndarray:
    """Trace out everything except ``keep_positions`` (0-based), in that order."""
    n = len(dims)
    keep = list(keep_positions)
    trace_out = [i for i in range(n) if i not in keep]
    d_keep = prod(dims[i] for i in keep)
    d_out = prod(dims[i] for i in trace_out)
    tensor = rho.reshape(dims + dims)
    order = keep + trace_out
    tensor = tensor.transpose(order + [n + i for i in order])
    tensor = tensor.reshape(d_keep, d_out, d_keep, d_out)
    return np.einsum("ijkj->ik", tensor)


def _square_with_dims(rho, dims):
    m = _as_array(rho)
    dims = _dims_of(rho, dims)
    side = prod(dims)
    if m.shape != (side, side):
        raise ValueError(f"matrix shape {m.shape} does not match dims {list(dims)}")
    return m, dims


def partial_trace(rho, dims=None, keep: Sequence[int] = ()) -> np.ndarray:
    """Reduced density matrix on the subsystems ``keep`` (1-based labels)."""
    m, dims = _square_with_dims(rho, dims)
    keep = sorted(keep)
    if not keep:
        raise ValueError("keep must be a non-empty set of subsystems")
    if len(set(keep)) != len(keep) or keep[0] < 1 or keep[-1] > len(dims):
        raise ValueError(f"keep {keep} is not a subset of 1..{len(dims)}")
    return _reduce(m, dims, [i - 1 for i in keep])


def reduce_to_bipartition(rho, dims=None, bp: Bipartition = None) -> tuple[np.ndarray, int, int]:
    """Reduce onto ``bp.left + bp.right`` with the left labels as the major index.

    The labels in ``bp`` may be any subset of the subsystems. Returns the
    reduced matrix and the two side dimensions.
    """
    m, dims = _square_with_dims(rho, dims)
    order = [i - 1 for i in bp.left + bp.right]
    if len(set(order)) != len(order) or min(order) < 0 or max(order) >= len(dims):
        raise ValueError(f"bipartition {bp.to_list()} is not within 1..{len(dims)}")
    d_a = prod(dims[i - 1] for i in bp.left)
    d_b = prod(dims[i - 1] for i in bp.right)
    return _reduce(m, dims, order), d_a, d_b


def permute_subsystems(rho, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of a density matrix; ``order`` lists 1-based labels."""
    m, dims = _square_with_dims(rho, dims)
    pos = [i - 1 for i in order]
    if sorted(pos) != list(range(len(dims))):
        raise ValueError(f"{list(order)} is not a permutation of 1..{len(dims)}")
    return _reduce(m, dims, pos)


def _check_bipartite(rho, d_a, d_b):
    m = np.asarray(rho)
    if m.ndim != 2 or m.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"matrix shape {m.shape} does not match {d_a}x{d_b} bipartite system")
    return m


def partial_transpose(rho, d_a: int, d_b: int) -> np.ndarray:
    """Transpose the B factor of an A-major ``(d_a*d_b)``-square matrix."""
    m = _check_bipartite(rho, d_a, d_b)
    return m.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(d_a * d_b, d_a * d_b)


def realign(rho, d_a: int, d_b: int) -> np.ndarray:
    """Realignment ``R[(i,k),(j,l)] = rho[(i,j),(k,l)]``, shape ``d_a**2 x d_b**2``."""
    m = _check_bipartite(rho, d_a, d_b)
    return m.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


def hermitian_eigenvalues(m, tol: float = 1e-10) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix.

    Hermiticity is checked entrywise to ``tol * max(1, max|m|)``.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    _check_finite(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def trace_norm(m) -> float:
    return float(np.sum(svd(m, check=False)[1]))
