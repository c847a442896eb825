"""Bipartite separability oracles with a three-valued verdict.

Each oracle receives a density matrix on ``C^dA (x) C^dB`` (A-major) and
answers ``ENTANGLED``, ``SEPARABLE`` or ``INCONCLUSIVE``. Definite answers
carry a certificate dict with the numbers that justify them.

Built-in oracles, by registry name:

``pure``
    Schmidt rank of the state vector; applies only to rank-one inputs.
``product``
    ``rho == rho_A (x) rho_B`` within ``tol`` in Frobenius norm certifies
    separability.
``ppt``
    A partial-transpose eigenvalue below ``-tol`` certifies entanglement.
    A PSD partial transpose certifies separability for 2x2, 2x3 and 3x2.
``ppt-rank``
    A PSD partial transpose with ``rank(rho) <= max(rank rho_A, rank rho_B)``
    certifies separability in any dimension (Horodecki, Lewenstein, Vidal,
    Cirac 2000).
``ccnr``
    Realigned trace norm above ``1 + tol`` certifies entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .linalg import hermitian_eigenvalues, partial_transpose, realign, svd, trace_norm

#: Default tolerance for oracle decisions.
ORACLE_TOL = 1e-10

#: Largest-eigenvalue threshold for treating a density matrix as pure.
PURITY_THRESHOLD = 1 - 1e-8

PPT_SUFFICIENT_DIMS = frozenset({(2, 2), (2, 3), (3, 2)})


class Verdict(str, Enum):
    ENTANGLED = "ENTANGLED"
    SEPARABLE = "SEPARABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


class OracleConflictError(RuntimeError):
    """Two oracles returned opposite definite verdicts on the same input."""

    def __init__(self, first: OracleVerdict, second: OracleVerdict):
        super().__init__(
            f"oracle conflict: {first.oracle} says {first.verdict.value} {first.certificate}, "
            f"{second.oracle} says {second.verdict.value} {second.certificate}"
        )
        self.verdicts = (first, second)


@dataclass(frozen=True)
class OracleVerdict:
    verdict: Verdict
    oracle: str
    certificate: dict | None = None

    def __post_init__(self):
        definite = self.verdict is not Verdict.INCONCLUSIVE
        if definite and not self.certificate:
            raise ValueError(f"{self.verdict.value} verdict from {self.oracle} needs a certificate")
        if not definite and self.certificate is not None:
            raise ValueError("INCONCLUSIVE verdicts carry no certificate")

    @property
    def definite(self) -> bool:
        return self.verdict is not Verdict.INCONCLUSIVE

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "oracle": self.oracle, "certificate": self.certificate}


@dataclass(frozen=True)
class OracleSpec:
    """A named decision procedure plus a predicate saying when it applies."""

    name: str
    decide: Callable[..., OracleVerdict]
    applicable: Callable[[np.ndarray, int, int], bool] = lambda rho, d_a, d_b: True

    def __call__(self, rho, d_a, d_b, tol=ORACLE_TOL) -> OracleVerdict:
        return self.decide(rho, d_a, d_b, tol)


def _matrix(rho, d_a, d_b):
    m = np.asarray(getattr(rho, "matrix", rho))
    if m.ndim != 2 or m.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"matrix shape {m.shape} does not match {d_a}x{d_b} bipartite system")
    return m


def _is_pure(m) -> bool:
    return hermitian_eigenvalues(m)[-1] >= PURITY_THRESHOLD


def _marginals(m, d_a, d_b):
    t = m.reshape(d_a, d_b, d_a, d_b)
    return np.einsum("ijkj->ik", t), np.einsum("ijil->jl", t)


def _rank(m, tol) -> int:
    return int(np.count_nonzero(hermitian_eigenvalues(m) > tol))


def oracle_pure(rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    """Exact verdict for rank-one states from the Schmidt rank of the vector."""
    m = _matrix(rho, d_a, d_b)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    if w[-1] < PURITY_THRESHOLD:
        raise ValueError("oracle_pure requires pure state")
    s = svd(v[:, -1].reshape(d_a, d_b))[1]
    rank = int(np.count_nonzero(s > tol * s[0]))
    verdict = Verdict.SEPARABLE if rank == 1 else Verdict.ENTANGLED
    return OracleVerdict(verdict, "pure", {"schmidt_rank": rank})


def oracle_product(rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    m = _matrix(rho, d_a, d_b)
    rho_a, rho_b = _marginals(m, d_a, d_b)
    residual = float(np.linalg.norm(m - np.kron(rho_a, rho_b)))
    if residual <= tol:
        return OracleVerdict(Verdict.SEPARABLE, "product", {"product_residual": residual})
    return OracleVerdict(Verdict.INCONCLUSIVE, "product")


def oracle_ppt(rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    m = _matrix(rho, d_a, d_b)
    lam = float(hermitian_eigenvalues(partial_transpose(m, d_a, d_b))[0])
    if lam < -tol:
        return OracleVerdict(Verdict.ENTANGLED, "ppt", {"min_pt_eigenvalue": lam})
    if (d_a, d_b) in PPT_SUFFICIENT_DIMS:
        return OracleVerdict(Verdict.SEPARABLE, "ppt", {"min_pt_eigenvalue": lam})
    return OracleVerdict(Verdict.INCONCLUSIVE, "ppt")


def oracle_ppt_rank(rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    m = _matrix(rho, d_a, d_b)
    lam = float(hermitian_eigenvalues(partial_transpose(m, d_a, d_b))[0])
    if lam < -tol:
        return OracleVerdict(Verdict.INCONCLUSIVE, "ppt-rank")
    rho_a, rho_b = _marginals(m, d_a, d_b)
    r, r_a, r_b = _rank(m, tol), _rank(rho_a, tol), _rank(rho_b, tol)
    if r <= max(r_a, r_b):
        cert = {"min_pt_eigenvalue": lam, "rank": r, "marginal_ranks": [r_a, r_b]}
        return OracleVerdict(Verdict.SEPARABLE, "ppt-rank", cert)
    return OracleVerdict(Verdict.INCONCLUSIVE, "ppt-rank")


def oracle_ccnr(rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    m = _matrix(rho, d_a, d_b)
    norm = trace_norm(realign(m, d_a, d_b))
    if norm > 1 + tol:
        return OracleVerdict(Verdict.ENTANGLED, "ccnr", {"realigned_trace_norm": norm, "excess": norm - 1})
    return OracleVerdict(Verdict.INCONCLUSIVE, "ccnr")


REGISTRY: dict[str, OracleSpec] = {
    "pure": OracleSpec("pure", oracle_pure, lambda rho, d_a, d_b: _is_pure(_matrix(rho, d_a, d_b))),
    "product": OracleSpec("product", oracle_product),
    "ppt": OracleSpec("ppt", oracle_ppt),
    "ppt-rank": OracleSpec("ppt-rank", oracle_ppt_rank),
    "ccnr": OracleSpec("ccnr", oracle_ccnr),
}

DEFAULT_ORACLES = ("pure", "product", "ppt", "ppt-rank", "ccnr")


def resolve_oracles(names: str | Sequence[str] | Sequence[OracleSpec] = DEFAULT_ORACLES) -> list[OracleSpec]:
    """Turn ``"ppt,ccnr"`` or a list of names/specs into a list of specs."""
    if isinstance(names, str):
        names = [x.strip() for x in names.split(",") if x.strip()]
    specs = []
    for x in names:
        if isinstance(x, OracleSpec):
            specs.append(x)
        elif x in REGISTRY:
            specs.append(REGISTRY[x])
        else:
            raise ValueError(f"unknown oracle {x!r}; choose from {', '.join(REGISTRY)}")
    if not specs:
        raise ValueError("oracle registry must not be empty")
    if len({s.name for s in specs}) != len(specs):
        raise ValueError("oracle names must be unique")
    return specs


def oracle_all(registry, rho, d_a: int, d_b: int, tol: float = ORACLE_TOL) -> OracleVerdict:
    """Combine oracles: the first definite verdict in registry order wins.

    Every applicable oracle is evaluated so that contradicting definite
    verdicts are caught; they raise :class:`OracleConflictError`.
    """
    specs = resolve_oracles(registry)
    m = _matrix(rho, d_a, d_b)
    first = None
    for spec in specs:
        if not spec.applicable(m, d_a, d_b):
            continue
        v = spec(m, d_a, d_b, tol)
        if not v.definite:
            continue
        if first is None:
            first = v
        elif v.verdict is not first.verdict:
            raise OracleConflictError(first, v)
    return first if first is not None else OracleVerdict(Verdict.INCONCLUSIVE, "all")
