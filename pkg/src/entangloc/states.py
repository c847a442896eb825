"""Pure states and density matrices with declared subsystem structure.

Random states use numpy's ``PCG64`` bit generator (``numpy.random.default_rng``)
so corpora are reproducible from an integer seed on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .partitions import Partition

#: Largest admissible total Hilbert-space dimension.
HILBERT_CAP = 2**25

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
WEIGHT_TOL = 1e-12


def check_dims(dims: Iterable[int], cap: int = HILBERT_CAP) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("dims must list at least one subsystem")
    if any(d < 2 for d in dims):
        raise ValueError(f"local dimensions must be >= 2, got {list(dims)}")
    if prod(dims) > cap:
        raise ValueError(f"total dimension {prod(dims)} exceeds the Hilbert cap {cap}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over ``dims`` (big-endian multi-index)."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    validate: bool = True

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise ValueError(f"{amps.size} amplitudes do not match dims {list(dims)}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.validate and abs(np.linalg.norm(amps) - 1) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {np.linalg.norm(amps):.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    def __len__(self):
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix over ``dims``."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    validate: bool = True

    def __post_init__(self):
        dims = check_dims(self.dims)
        side = prod(dims)
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (side, side):
            raise ValueError(f"matrix shape {m.shape} does not match dims {list(dims)}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        if self.validate:
            if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
                raise ValueError("density matrix is not Hermitian")
            tr = np.trace(m)
            if abs(tr - 1) > TRACE_TOL:
                raise ValueError(f"density matrix trace is {tr.real:.12g}, expected 1")
            lam_min = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
            if lam_min < -PSD_TOL:
                raise ValueError(f"density matrix is not PSD (min eigenvalue {lam_min:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)


def make_basis(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    dims = check_dims(dims)
    if len(digits) != len(dims):
        raise ValueError(f"{len(digits)} digits for {len(dims)} subsystems")
    for d, k in zip(digits, dims):
        if not 0 <= d < k:
            raise ValueError(f"digit {d} out of range for local dimension {k}")
    amps = np.zeros(prod(dims), dtype=complex)
    amps[np.ravel_multi_index(tuple(digits), dims)] = 1
    return PureState(amps, dims)


def tensor(*states: PureState) -> PureState:
    """Tensor product; later factors are the minor index."""
    if not states:
        raise ValueError("tensor needs at least one state")
    amps = states[0].amplitudes
    dims = states[0].dims
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
        dims = dims + s.dims
    return PureState(amps / np.linalg.norm(amps), dims)


def tensor_density(*rhos: DensityMatrix) -> DensityMatrix:
    m = rhos[0].matrix
    dims = rhos[0].dims
    for r in rhos[1:]:
        m = np.kron(m, r.matrix)
        dims = dims + r.dims
    return DensityMatrix(m, dims)


def _order_for(partition: Partition) -> list[int]:
    order = [i for block in partition.blocks for i in block]
    if sorted(order) != list(range(1, len(order) + 1)):
        raise ValueError(f"partition {partition} must cover 1..n")
    return order


def embed_product(factors: Sequence[PureState], partition: Partition) -> PureState:
    """Place ``factors[k]`` on ``partition.blocks[k]`` and return the global state."""
    if len(factors) != len(partition):
        raise ValueError(f"{len(factors)} factors for {len(partition)} blocks")
    for f, block in zip(factors, partition.blocks):
        if f.n != len(block):
            raise ValueError(f"factor on {len(f.dims)} subsystems placed on block {list(block)}")
    order = _order_for(partition)
    joined = tensor(*factors)
    tensor_dims = joined.dims
    global_dims = [0] * len(order)
    for pos, label in enumerate(order):
        global_dims[label - 1] = tensor_dims[pos]
    amps = joined.amplitudes.reshape(tensor_dims).transpose(np.argsort(order)).reshape(-1)
    return PureState(amps, tuple(global_dims))


def embed_product_density(factors: Sequence[DensityMatrix], partition: Partition) -> DensityMatrix:
    """Density-matrix analogue of :func:`embed_product`."""
    from .linalg import permute_subsystems

    if len(factors) != len(partition):
        raise ValueError(f"{len(factors)} factors for {len(partition)} blocks")
    for f, block in zip(factors, partition.blocks):
        if f.n != len(block):
            raise ValueError(f"factor on {len(f.dims)} subsystems placed on block {list(block)}")
    order = _order_for(partition)
    joined = tensor_density(*factors)
    # position of each global label inside the joined tensor
    inverse = [int(p) + 1 for p in np.argsort(order)]
    global_dims = tuple(joined.dims[p - 1] for p in inverse)
    return DensityMatrix(permute_subsystems(joined.matrix, joined.dims, inverse), global_dims)


def permute_state(psi: PureState, perm: Sequence[int]) -> PureState:
    """Relabel subsystems so that old subsystem ``i`` becomes new subsystem ``perm[i-1]``."""
    n = psi.n
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{list(perm)} is not a permutation of 1..{n}")
    # new axis j holds old axis perm^{-1}(j)
    old_for_new = [0] * n
    for old, new in enumerate(perm):
        old_for_new[new - 1] = old
    amps = psi.amplitudes.reshape(psi.dims).transpose(old_for_new).reshape(-1)
    return PureState(amps, tuple(psi.dims[i] for i in old_for_new))


def make_ghz(n: int, d: int = 2) -> PureState:
    if n < 2 or d < 2:
        raise ValueError("GHZ needs n >= 2 and d >= 2")
    dims = (d,) * n
    amps = np.zeros(d**n, dtype=complex)
    step = sum(d**k for k in range(n))
    amps[np.arange(d) * step] = 1 / np.sqrt(d)
    return PureState(amps, dims)


def make_w(n: int) -> PureState:
    if n < 2:
        raise ValueError("W state needs n >= 2")
    amps = np.zeros(2**n, dtype=complex)
    amps[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return PureState(amps, (2,) * n)


def make_bell() -> PureState:
    return make_ghz(2)


def qubit(theta: float = 0.0, phi: float = 0.0) -> PureState:
    """``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``."""
    return PureState([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], (2,))


PLUS = PureState(np.array([1, 1]) / np.sqrt(2), (2,))
MINUS = PureState(np.array([1, -1]) / np.sqrt(2), (2,))


def random_pure(dims: Sequence[int], seed=None) -> PureState:
    """Haar-random pure state: normalized i.i.d. complex Gaussian amplitudes.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    dims = check_dims(dims)
    rng = np.random.default_rng(seed)
    size = prod(dims)
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return PureState(z / np.linalg.norm(z), dims)


def random_density(dims: Sequence[int], rank: int | None = None, seed=None) -> DensityMatrix:
    """Random mixed state ``G G^dagger / tr`` with a Ginibre ``G`` of the given rank."""
    dims = check_dims(dims)
    rng = np.random.default_rng(seed)
    side = prod(dims)
    rank = side if rank is None else rank
    g = rng.standard_normal((side, rank)) + 1j * rng.standard_normal((side, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dims)


def density_from_pure(psi: PureState) -> DensityMatrix:
    v = psi.amplitudes
    m = np.outer(v, v.conj())
    return DensityMatrix((m + m.conj().T) / 2, psi.dims)


def werner_2qubit(p: float) -> DensityMatrix:
    """``p |Psi-><Psi-| + (1 - p) I/4`` on two qubits."""
    if not 0 <= p <= 1:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {p}")
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return DensityMatrix(p * np.outer(singlet, singlet) + (1 - p) * np.eye(4) / 4, (2, 2))


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = check_dims(dims)
    side = prod(dims)
    return DensityMatrix(np.eye(side) / side, dims)


def mix(terms: Sequence[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination of density matrices sharing one ``dims``."""
    if not terms:
        raise ValueError("mix needs at least one term")
    weights = np.array([w for w, _ in terms], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > WEIGHT_TOL:
        raise ValueError(f"weights must be non-negative and sum to 1, got {weights.tolist()}")
    dims = terms[0][1].dims
    if any(r.dims != dims for _, r in terms):
        raise ValueError("all mixed states must share the same dims")
    m = sum(w * r.matrix for w, r in terms)
    return DensityMatrix((m + m.conj().T) / 2, dims)


def fidelity(a: PureState, b: PureState) -> float:
    """Phase-insensitive overlap ``|<a|b>|``."""
    if a.dims != b.dims:
        raise ValueError(f"dims differ: {a.dims} vs {b.dims}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))
