"""Partition localization for mixed states driven by bipartite oracles.

For each block and bipartition ``(Y, Z)`` the global state is reduced onto the
block by partial trace and handed to the oracle suite on the ``Y|Z`` cut.

Separability of a reduced state does not by itself certify that the global
state is a blockwise product mixture. Results are exact for inputs that
really are product-structured across the splits found and are otherwise a
best effort; the per-split ``DEFINITE``/``HEURISTIC`` tags and the evidence
trail are there to make that visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from ._worklist import KEEP, SPLIT, UNDECIDED, Probe, run_worklist
from .linalg import reduce_to_bipartition
from .oracles import DEFAULT_ORACLES, ORACLE_TOL, OracleSpec, Verdict, oracle_all, resolve_oracles
from .partitions import Bipartition, IndexBlock, Partition
from .states import DensityMatrix, embed_product_density

#: Largest side dimension of a bipartite reduction the oracles will be asked about.
BLOCK_DIM_CAP = 2**12

WITNESS_TOL = 1e-9


class InconclusivePolicy(str, Enum):
    TREAT_AS_ENTANGLED = "definite"
    TREAT_AS_SEPARABLE_HEURISTIC = "heuristic"


@dataclass
class MixedReport:
    """Result of :func:`localize_mixed`.

    ``confidence`` has one entry per split, tagged ``DEFINITE`` (a SEPARABLE
    certificate) or ``HEURISTIC`` (accepted on an INCONCLUSIVE verdict).
    ``unresolved`` lists every (block, bipartition) pair whose verdict was
    INCONCLUSIVE.
    """

    partition: Partition
    confidence: list[dict]
    evidence: list[dict]
    unresolved: list[tuple[IndexBlock, Bipartition]]
    tolerances: dict[str, float]
    policy: InconclusivePolicy
    oracles: list[str]
    trace: list[tuple[IndexBlock, int, str]] = field(default_factory=list)

    @property
    def fully_separable(self) -> bool:
        return self.partition.is_finest()

    @property
    def fully_entangled(self) -> bool:
        return self.partition.is_coarsest()

    @property
    def exact(self) -> bool:
        """Every split certified and no verdict left open."""
        return not self.unresolved and all(c["tag"] == "DEFINITE" for c in self.confidence)


def localize_mixed(
    rho: DensityMatrix,
    oracles: str | Sequence[str] | Sequence[OracleSpec] = DEFAULT_ORACLES,
    tol: float = ORACLE_TOL,
    policy: InconclusivePolicy | str = InconclusivePolicy.TREAT_AS_ENTANGLED,
    threads: int = 1,
    block_cap: int = BLOCK_DIM_CAP,
) -> MixedReport:
    """Localize a partition under which ``rho`` separates, using bipartite oracles.

    ``policy`` decides what an INCONCLUSIVE verdict means: ``"definite"``
    treats it as entangled (never split without a certificate),
    ``"heuristic"`` splits at the first inconclusive bipartition when no
    certified split exists for the block.
    """
    policy = InconclusivePolicy(policy)
    specs = resolve_oracles(oracles)
    dims = rho.dims

    def probe(block, _payload, bp):
        red, d_a, d_b = reduce_to_bipartition(rho.matrix, dims, bp)
        if max(d_a, d_b) > block_cap:
            raise ValueError(
                f"bipartition {bp.to_list()} has side dimension {max(d_a, d_b)} above the cap {block_cap}"
            )
        verdict = oracle_all(specs, red, d_a, d_b, tol)
        record = {"block": list(block), "bipartition": bp.to_list(), **verdict.to_dict()}
        if verdict.verdict is Verdict.SEPARABLE:
            return Probe(SPLIT, record)
        if verdict.verdict is Verdict.ENTANGLED:
            return Probe(KEEP, record)
        return Probe(UNDECIDED, record)

    result = run_worklist(
        rho.n,
        probe,
        threads=threads,
        split_undecided=policy is InconclusivePolicy.TREAT_AS_SEPARABLE_HEURISTIC,
    )
    confidence = [
        {"block": list(s.block), "bipartition": s.bipartition.to_list(), "tag": s.tag} for s in result.splits
    ]
    return MixedReport(
        partition=result.partition,
        confidence=confidence,
        evidence=result.records,
        unresolved=result.undecided,
        tolerances={"oracle": tol},
        policy=policy,
        oracles=[s.name for s in specs],
        trace=result.trace,
    )


def check_pi_separable_constructed(
    rho: DensityMatrix,
    partition: Partition,
    decomposition: Sequence[tuple[float, Sequence[DensityMatrix]]],
    tol: float = WITNESS_TOL,
) -> bool:
    """Check a claimed blockwise-product mixture for ``rho``.

    ``decomposition`` is ``[(weight, [state on each block of partition]), ...]``.
    Returns True when the rebuilt mixture matches ``rho`` within ``tol`` in
    Frobenius norm. This verifies a supplied witness; it does not search for one.
    """
    if not decomposition:
        raise ValueError("decomposition must have at least one term")
    total = np.zeros_like(rho.matrix)
    for weight, locals_ in decomposition:
        if len(locals_) != len(partition):
            raise ValueError(f"term has {len(locals_)} block states for {len(partition)} blocks")
        for block, local in zip(partition.blocks, locals_):
            expected = tuple(rho.dims[i - 1] for i in block)
            if local.dims != expected:
                raise ValueError(f"block {list(block)} needs dims {list(expected)}, got {list(local.dims)}")
        total = total + weight * embed_product_density(locals_, partition).matrix
    return bool(np.linalg.norm(total - rho.matrix) <= tol)
