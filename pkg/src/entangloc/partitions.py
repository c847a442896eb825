"""Set-partition combinatorics over subsystem labels.

Subsystems are labelled ``1..n``. A block is a strictly increasing tuple of
labels; a :class:`Partition` is a canonical tuple of blocks (blocks ordered by
their smallest member). Serialized form is a nested list, e.g. ``[[1, 3], [2]]``.

Counting functions return Python ints, which are arbitrary precision, so there
is no overflow threshold. Native 64-bit width would suffice up to ``B(25)``.
"""

from __future__ import annotations


from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

#: Largest ``n`` for which :func:`enumerate_partitions` materializes ``B(n)`` partitions.
ENUMERATION_CAP = 12

IndexBlock = tuple[int, ...]


def make_block(members: Iterable[int], n: int | None = None) -> IndexBlock:
    """Validate and sort a collection of subsystem labels."""
    block = tuple(sorted(members))
    if not block:
        raise ValueError("index block must be non-empty")
    if len(set(block)) != len(block):
        raise ValueError(f"index block has repeated members: {list(block)}")
    if block[0] < 1 or (n is not None and block[-1] > n):
        bound = "n" if n is None else str(n)
        raise ValueError(f"index block {list(block)} not within 1..{bound}")
    return block


class Bipartition(NamedTuple):
    """A split of a block into two non-empty parts; the block minimum is in ``left``."""

    left: IndexBlock
    right: IndexBlock

    @property
    def block(self) -> IndexBlock:
        return tuple(sorted(self.left + self.right))

    def to_list(self) -> list[list[int]]:
        return [list(self.left), list(self.right)]


@dataclass(frozen=True)
class Partition:
    """Canonical set partition of a finite label set."""

    blocks: tuple[IndexBlock, ...]

    def __post_init__(self):
        blocks = tuple(sorted((make_block(b) for b in self.blocks), key=lambda b: b[0]))
        seen = [i for b in blocks for i in b]
        if len(seen) != len(set(seen)):
            raise ValueError(f"partition blocks overlap: {[list(b) for b in blocks]}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def _trusted(cls, blocks: tuple[IndexBlock, ...]) -> Partition:
        """Skip canonicalization for blocks already sorted and disjoint."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    @classmethod
    def from_list(cls, blocks: Iterable[Iterable[int]]) -> Partition:
        return cls(tuple(tuple(b) for b in blocks))

    @classmethod
    def finest(cls, n: int) -> Partition:
        """All-singletons partition of ``1..n`` (completely separable)."""
        return cls(tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def coarsest(cls, n: int) -> Partition:
        """Single-block partition of ``1..n`` (completely entangled)."""
        return cls((tuple(range(1, n + 1)),))

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(i for b in self.blocks for i in b)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def is_finest(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def is_coarsest(self) -> bool:
        return len(self.blocks) == 1

    def to_list(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def relabel(self, mapping) -> Partition:
        """Apply a label map (callable or mapping) to every member."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Partition(tuple(tuple(f(i) for i in b) for b in self.blocks))

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __str__(self):
        return "(" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + ")"


def iter_bipartitions(block: Sequence[int]) -> Iterator[Bipartition]:
    """Lazily yield the ``2**(m-1) - 1`` canonical bipartitions of ``block``.

    The smallest member (the anchor) always sits in ``left``. The remaining
    members are assigned by a binary counter: bit ``j`` of the counter puts the
    ``j``-th non-anchor member (ascending) on the left. The all-left assignment
    is skipped since it leaves ``right`` empty.
    """
    members = make_block(block)
    if len(members) < 2:
        raise ValueError(f"block too small to bipartition: {list(members)}")
    anchor, rest = members[0], members[1:]
    # Split the counter into low and high bit groups and precompute the
    # (on-left, on-right) member tuples for each group, so every bipartition
    # costs a few tuple concatenations.
    k = len(rest) // 2
    low, high = _subset_table(rest[:k]), _subset_table(rest[k:])
    last = (1 << len(rest)) - 1
    make = tuple.__new__
    head = (anchor,)
    for h, (h_in, h_out) in enumerate(high):
        base = h << k
        for lo, (l_in, l_out) in enumerate(low):
            if base + lo == last:
                return
            yield make(Bipartition, (head + l_in + h_in, l_out + h_out))


def _subset_table(items: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Entry ``c`` holds the members of ``items`` selected and rejected by the bits of ``c``."""
    table = [((), ())]
    for x in items:
        table = [(t_in, t_out + (x,)) for t_in, t_out in table] + [(t_in + (x,), t_out) for t_in, t_out in table]
    return table


def enumerate_bipartitions(block: Sequence[int]) -> list[Bipartition]:
    """All canonical bipartitions of ``block`` in binary-counter order.

    >>> enumerate_bipartitions([1, 2, 3])
    [Bipartition(left=(1,), right=(2, 3)), Bipartition(left=(1, 2), right=(3,)), Bipartition(left=(1, 3), right=(2,))]
    """
    return list(iter_bipartitions(block))


def iter_restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """Yield restricted growth strings of length ``n`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; each string labels the block of
    element ``i + 1``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    a = [0] * n
    # prefix maxima: m[i] = max(a[:i+1])
    m = [0] * n
    while True:
        yield list(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def _partition_from_rgs(rgs: Sequence[int]) -> Partition:
    blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
    for i, label in enumerate(rgs, start=1):
        blocks[label].append(i)
    return Partition._trusted(tuple(tuple(b) for b in blocks))


def iter_partitions(n: int) -> Iterator[Partition]:
    """Lazily yield every partition of ``1..n`` in restricted-growth-string order."""
    for rgs in iter_restricted_growth_strings(n):
        yield _partition_from_rgs(rgs)


def enumerate_partitions(n: int, cap: int = ENUMERATION_CAP) -> list[Partition]:
    """All ``B(n)`` partitions of ``1..n``, for ``1 <= n <= cap``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds the partition enumeration cap of {cap}")
    # Restricted growth strings vary their last entry fastest, so extending each
    # partition of 1..n-1 in order by element n keeps the same ordering.
    level = [((1,),)]
    for x in range(2, n + 1):
        tail = (x,)
        level = [
            blocks[:j] + (blocks[j] + tail,) + blocks[j + 1:] if j < len(blocks) else blocks + (tail,)
            for blocks in level
            for j in range(len(blocks) + 1)
        ]
    return [Partition._trusted(blocks) for blocks in level]


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        row[k] = k * (prev[k] if k < len(prev) else 0) + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind ``S(n, k)``; zero when ``k > n``."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        return 0
    return _stirling_row(n)[k]


def bell_number(n: int) -> int:
    """Number of set partitions of an ``n``-set, with ``B(0) = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum(_stirling_row(n))


def _check_same_ground(a: Partition, b: Partition) -> None:
    if a.ground != b.ground:
        raise ValueError(f"partitions over different index sets: {a} vs {b}")


def refines(a: Partition, b: Partition) -> bool:
    """True iff every block of ``a`` is contained in some block of ``b``."""
    _check_same_ground(a, b)
    owner = {i: k for k, blk in enumerate(b.blocks) for i in blk}
    return all(len({owner[i] for i in blk}) == 1 for blk in a.blocks)


def meet(a: Partition, b: Partition) -> Partition:
    """Coarsest common refinement: non-empty blockwise intersections."""
    _check_same_ground(a, b)
    pieces = []
    for x in a.blocks:
        for y in b.blocks:
            common = set(x) & set(y)
            if common:
                pieces.append(tuple(sorted(common)))
    return Partition(tuple(pieces))


def fine_to_coarse(partitions: Iterable[Partition]) -> list[Partition]:
    """Sort by block count descending, then canonical lexicographic order."""
    return sorted(partitions, key=lambda p: (-len(p), p.blocks))
