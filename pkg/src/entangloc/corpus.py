"""Random test states with a known finest product partition."""

from __future__ import annotations

import numpy as np

from .partitions import Partition, enumerate_partitions
from .states import (
    DensityMatrix,
    PureState,
    density_from_pure,
    embed_product,
    embed_product_density,
    make_ghz,
    make_w,
    mix,
    random_density,
    random_pure,
)

BLOCK_KINDS = ("ghz", "w", "random")


def _entangled_block(m: int, rng, qudits: bool) -> PureState:
    kind = BLOCK_KINDS[rng.integers(len(BLOCK_KINDS))]
    if kind == "ghz":
        d = int(rng.integers(2, 4)) if qudits else 2
        return make_ghz(m, d)
    if kind == "w":
        return make_w(m)
    dims = [int(d) for d in rng.integers(2, 4, size=m)] if qudits else [2] * m
    return random_pure(dims, seed=rng)


def random_structured_state(
    n: int, seed=None, partition: Partition | None = None, qudits: bool = True
) -> tuple[PureState, Partition]:
    """Tensor product of completely entangled blocks over a random partition.

    Singleton blocks get a random single-qudit state; larger blocks get a GHZ,
    W or Haar-random state. Returns the global state and the partition it was
    built on, which is its finest product partition.
    """
    rng = np.random.default_rng(seed)
    if partition is None:
        choices = enumerate_partitions(n)
        partition = choices[int(rng.integers(len(choices)))]
    factors = []
    for block in partition.blocks:
        if len(block) == 1:
            d = int(rng.integers(2, 4)) if qudits else 2
            factors.append(random_pure((d,), seed=rng))
        else:
            factors.append(_entangled_block(len(block), rng, qudits))
    return embed_product(factors, partition), partition


def random_separable_mixture(
    partition: Partition, dims, terms: int, seed=None, block_rank: int = 1
) -> tuple[DensityMatrix, list[tuple[float, list[DensityMatrix]]]]:
    """Mixture of blockwise product states over ``partition``.

    Returns the mixed state and the decomposition it was built from, as
    ``[(weight, [state on each block]), ...]``.
    """
    rng = np.random.default_rng(seed)
    weights = rng.random(terms) + 0.1
    weights = weights / weights.sum()
    decomposition = []
    for w in weights:
        locals_ = []
        for block in partition.blocks:
            local_dims = [dims[i - 1] for i in block]
            if block_rank == 1:
                locals_.append(density_from_pure(random_pure(local_dims, seed=rng)))
            else:
                locals_.append(random_density(local_dims, rank=block_rank, seed=rng))
        decomposition.append((float(w), locals_))
    rho = mix([(w, embed_product_density(f, partition)) for w, f in decomposition])
    return rho, decomposition
