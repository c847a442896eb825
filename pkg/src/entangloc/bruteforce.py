"""Exhaustive, SVD-free cross-check for pure-state localization.

A global pure state factorizes across ``(X, rest)`` exactly when the marginal
on ``X`` is pure. :func:`brute_finest_partition` therefore walks every set
partition from finest to coarsest and returns the first one whose blocks all
have unit marginal purity. Marginals are built with ``einsum`` contractions
only, so this path shares no decomposition code with :mod:`entangloc.pure`.
"""

from __future__ import annotations

from string import ascii_letters
from typing import Sequence

import numpy as np

from .partitions import Partition, fine_to_coarse, iter_partitions, make_block
from .states import PureState

#: Largest subsystem count accepted by :func:`brute_finest_partition`.
BRUTE_FORCE_CAP = 8

PURITY_TOL = 1e-8


def marginal_density(psi: PureState, block: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of ``psi`` on ``block`` via index contraction."""
    n = psi.n
    block = make_block(block, n)
    if len(block) == n:
        v = psi.amplitudes
        return np.outer(v, v.conj())
    letters = ascii_letters
    ket = [letters[i] for i in range(n)]
    bra = list(ket)
    for label in block:
        bra[label - 1] = letters[n + label - 1]
    out = [ket[i - 1] for i in block] + [bra[i - 1] for i in block]
    spec = "".join(ket) + "," + "".join(bra) + "->" + "".join(out)
    t = psi.amplitudes.reshape(psi.dims)
    d = int(np.prod([psi.dims[i - 1] for i in block]))
    return np.einsum(spec, t, t.conj()).reshape(d, d)


def marginal_purity(psi: PureState, block: Sequence[int]) -> float:
    """``Tr(rho_X^2)`` for the marginal of ``psi`` on ``block``."""
    rho = marginal_density(psi, block)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def brute_finest_partition(psi: PureState, tol: float = PURITY_TOL, cap: int = BRUTE_FORCE_CAP) -> Partition:
    """Finest partition whose every block marginal has purity ``>= 1 - tol``.

    Partitions are visited by block count descending, then canonical order.
    The finest passing partition of a pure state is unique; a second passing
    partition with the same block count raises ``AssertionError``.
    """
    n = psi.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the brute-force cap of {cap}")
    purity: dict[tuple[int, ...], bool] = {}

    def block_ok(block):
        if block not in purity:
            purity[block] = marginal_purity(psi, block) >= 1 - tol
        return purity[block]

    found = None
    for p in fine_to_coarse(iter_partitions(n)):
        if found is not None and len(p) < len(found):
            break
        if all(block_ok(b) for b in p.blocks):
            if found is not None:
                raise AssertionError(f"two finest partitions pass: {found} and {p}")
            found = p
    # the single-block partition always passes for a pure state
    assert found is not None
    return found
