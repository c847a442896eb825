"""FIFO worklist shared by the pure and mixed localization routines.

A block is popped; singletons are committed; otherwise its bipartitions are
probed in canonical order. The first probe that says ``"split"`` replaces the
block by its two halves. A block with no splitting bipartition is committed as
irreducible. Probes may run on a thread pool, but only results up to and
including the lowest-index hit are kept, so the outcome and the evidence do
not depend on the thread count.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Any, Callable

from .partitions import Bipartition, IndexBlock, Partition, iter_bipartitions

SPLIT = "split"
KEEP = "keep"
UNDECIDED = "undecided"


@dataclass
class Probe:
    """Outcome of testing one bipartition of one block."""

    verdict: str
    record: dict
    payloads: tuple[Any, Any] = (None, None)


@dataclass
class Split:
    block: IndexBlock
    bipartition: Bipartition
    tag: str


@dataclass
class WorklistResult:
    partition: Partition
    payloads: dict[IndexBlock, Any]
    records: list[dict]
    splits: list[Split]
    # (block, number of probes, how the block was resolved)
    trace: list[tuple[IndexBlock, int, str]] = field(default_factory=list)
    undecided: list[tuple[IndexBlock, Bipartition]] = field(default_factory=list)

    @property
    def probes(self) -> int:
        return len(self.records)


def _scan(probe_fn, block, payload, pool, chunk):
    """Yield ``(bp, Probe)`` in canonical order, evaluating ``chunk`` at a time."""
    bps = iter_bipartitions(block)
    if pool is None:
        for bp in bps:
            yield bp, probe_fn(block, payload, bp)
        return
    while True:
        batch = list(islice(bps, chunk))
        if not batch:
            return
        # map preserves input order
        results = list(pool.map(lambda bp: probe_fn(block, payload, bp), batch))
        yield from zip(batch, results)


def run_worklist(
    n: int,
    probe_fn: Callable[[IndexBlock, Any, Bipartition], Probe],
    root_payload: Any = None,
    threads: int = 1,
    split_undecided: bool = False,
) -> WorklistResult:
    """Localize the finest partition reachable by repeated bipartite splits.

    With ``split_undecided`` a block that has no ``"split"`` probe but at
    least one ``"undecided"`` probe is split at the first undecided
    bipartition and the split is tagged ``HEURISTIC``. Definite splits always
    take precedence, so the result refines the one obtained without it.
    """
    if n < 1:
        raise ValueError("need at least one subsystem")
    threads = max(1, int(threads))
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    # evaluated probes past a hit are discarded; keep batches small
    chunk = threads
    work = deque([(tuple(range(1, n + 1)), root_payload)])
    committed: list[IndexBlock] = []
    payloads: dict[IndexBlock, Any] = {}
    records: list[dict] = []
    splits: list[Split] = []
    trace = []
    undecided_pairs = []
    try:
        while work:
            block, payload = work.popleft()
            if len(block) == 1:
                committed.append(block)
                payloads[block] = payload
                trace.append((block, 0, "singleton"))
                continue
            hit = None
            first_undecided = None
            count = 0
            for bp, probe in _scan(probe_fn, block, payload, pool, chunk):
                count += 1
                records.append(probe.record)
                if probe.verdict == SPLIT:
                    hit = (bp, probe, "DEFINITE")
                    break
                if probe.verdict == UNDECIDED:
                    undecided_pairs.append((block, bp))
                    if first_undecided is None:
                        first_undecided = (bp, probe, "HEURISTIC")
            if hit is None and split_undecided and first_undecided is not None:
                hit = first_undecided
            if hit is None:
                committed.append(block)
                payloads[block] = payload
                trace.append((block, count, "irreducible"))
                continue
            bp, probe, tag = hit
            splits.append(Split(block, bp, tag))
            trace.append((block, count, "split"))
            work.append((bp.left, probe.payloads[0]))
            work.append((bp.right, probe.payloads[1]))
    finally:
        if pool is not None:
            pool.shutdown()
    return WorklistResult(
        partition=Partition(tuple(committed)),
        payloads=payloads,
        records=records,
        splits=splits,
        trace=trace,
        undecided=undecided_pairs,
    )
