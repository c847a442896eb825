"""Finest product partition of a pure state from Schmidt ranks across bipartitions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._worklist import KEEP, SPLIT, Probe, run_worklist
from .linalg import SCHMIDT_TOL, reshape_bipartite, schmidt_decompose, svd
from .partitions import Bipartition, IndexBlock, Partition
from .states import PureState, embed_product


@dataclass
class SeparabilityReport:
    """Result of :func:`localize`.

    ``factors[k]`` is the state on ``partition.blocks[k]``. ``evidence`` holds
    one record per Schmidt test, in the order the tests were made. ``trace``
    lists every visited block with its test count and resolution.
    """

    partition: Partition
    factors: list[PureState]
    evidence: list[dict]
    tolerances: dict[str, float]
    trace: list[tuple[IndexBlock, int, str]] = field(default_factory=list)

    @property
    def fully_separable(self) -> bool:
        return self.partition.is_finest()

    @property
    def fully_entangled(self) -> bool:
        return self.partition.is_coarsest()

    @property
    def schmidt_tests(self) -> int:
        return len(self.evidence)

    def rebuild(self) -> PureState:
        """Tensor the factors back together in the original subsystem order."""
        return embed_product(self.factors, self.partition)


def is_product_across(psi: PureState, bp: Bipartition, tol: float = SCHMIDT_TOL):
    """Test whether ``psi`` factorizes across ``bp``.

    Returns ``(split, left, right)``. When ``split`` the two factors are the
    leading Schmidt pair; otherwise both are ``None``.
    """
    sd = schmidt_decompose(psi, bp=bp, tol=tol)
    if sd.rank != 1:
        return False, None, None
    left_dims = tuple(psi.dims[i - 1] for i in bp.left)
    right_dims = tuple(psi.dims[i - 1] for i in bp.right)
    left = _unit(sd.left_vectors[:, 0], left_dims)
    right = _unit(sd.right_vectors[:, 0], right_dims)
    return True, left, right


def _unit(vec, dims):
    return PureState(vec / np.linalg.norm(vec), dims)


def _local(block: IndexBlock, bp: Bipartition) -> Bipartition:
    pos = {label: k + 1 for k, label in enumerate(block)}
    return Bipartition(tuple(pos[i] for i in bp.left), tuple(pos[i] for i in bp.right))


def _factor_on(psi: PureState, block: IndexBlock) -> PureState:
    """Leading left singular vector of the (block | rest) reshaping of ``psi``."""
    if len(block) == psi.n:
        return psi
    rest = tuple(i for i in range(1, psi.n + 1) if i not in block)
    u, _, _ = svd(reshape_bipartite(psi, bp=Bipartition(block, rest)))
    return _unit(u[:, 0], tuple(psi.dims[i - 1] for i in block))


def localize(psi: PureState, tol: float = SCHMIDT_TOL, threads: int = 1) -> SeparabilityReport:
    """Find the finest partition under which ``psi`` is a tensor product.

    Blocks are split at the first bipartition (canonical order) with Schmidt
    rank 1 and the halves are processed in FIFO order. The block state used
    for the next round is the corresponding Schmidt factor. Final per-block
    factors are re-extracted from ``psi`` itself so errors do not accumulate
    with recursion depth.
    """

    def probe(block, state, bp):
        local = _local(block, bp)
        sd = schmidt_decompose(state, bp=local, tol=tol)
        record = {
            "block": list(block),
            "bipartition": bp.to_list(),
            "schmidt_rank": sd.rank,
            "split": sd.rank == 1,
        }
        if sd.rank != 1:
            return Probe(KEEP, record)
        left = _unit(sd.left_vectors[:, 0], tuple(state.dims[i - 1] for i in local.left))
        right = _unit(sd.right_vectors[:, 0], tuple(state.dims[i - 1] for i in local.right))
        return Probe(SPLIT, record, (left, right))

    result = run_worklist(psi.n, probe, root_payload=psi, threads=threads)
    factors = [_factor_on(psi, block) for block in result.partition.blocks]
    return SeparabilityReport(
        partition=result.partition,
        factors=factors,
        evidence=result.records,
        tolerances={"schmidt": tol},
        trace=result.trace,
    )
