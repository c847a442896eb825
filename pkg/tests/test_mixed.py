import numpy as np
import pytest

from entangloc.corpus import random_separable_mixture, random_structured_state
from entangloc.linalg import hermitian_eigenvalues, partial_transpose, realign, reduce_to_bipartition, trace_norm
from entangloc.mixed import InconclusivePolicy, check_pi_separable_constructed, localize_mixed
from entangloc.partitions import Bipartition, Partition, enumerate_partitions, refines
from entangloc.pure import localize
from entangloc.states import (
    density_from_pure,
    embed_product_density,
    make_basis,
    make_bell,
    make_ghz,
    mix,
    random_density,
    tensor_density,
    werner_2qubit,
)


def dm(psi):
    return density_from_pure(psi)


def classical_ghz():
    a = dm(make_basis((2, 2, 2), [0, 0, 0]))
    b = dm(make_basis((2, 2, 2), [1, 1, 1]))
    return mix([(0.5, a), (0.5, b)])


class TestExamples:
    def test_zero_times_bell(self):
        rho = tensor_density(dm(make_basis((2,), [0])), dm(make_bell()))
        rep = localize_mixed(rho)
        assert rep.partition.to_list() == [[1], [2, 3]]
        assert rep.exact
        assert all(c["tag"] == "DEFINITE" for c in rep.confidence)

    def test_classical_ghz_mixture(self):
        rep = localize_mixed(classical_ghz())
        assert rep.partition == Partition.finest(3)
        assert rep.exact and [c["tag"] for c in rep.confidence] == ["DEFINITE", "DEFINITE"]

    def test_classical_ghz_without_rank_oracle(self):
        # PPT alone cannot certify a 2x4 cut
        rep = localize_mixed(classical_ghz(), "ppt,ccnr")
        assert rep.partition == Partition.coarsest(3)
        assert len(rep.unresolved) == 3 and not rep.exact

    def test_werner(self):
        rep = localize_mixed(werner_2qubit(0.5))
        assert rep.partition == Partition.coarsest(2)
        (record,) = rep.evidence
        assert record["verdict"] == "ENTANGLED" and record["oracle"] == "ppt"
        assert record["certificate"]["min_pt_eigenvalue"] == pytest.approx(-0.125)

    def test_ghz3_ppt_evidence(self):
        rep = localize_mixed(dm(make_ghz(3)), "ppt")
        assert rep.partition == Partition.coarsest(3)
        assert len(rep.evidence) == 3
        for r in rep.evidence:
            assert r["verdict"] == "ENTANGLED"
            assert r["certificate"]["min_pt_eigenvalue"] == pytest.approx(-0.5)

    def test_block_cap(self):
        with pytest.raises(ValueError, match="above the cap 4"):
            localize_mixed(dm(make_ghz(4)), block_cap=4)

    def test_single_subsystem(self):
        rep = localize_mixed(random_density((3,), seed=0))
        assert rep.partition == Partition.finest(1) and rep.evidence == []

    def test_threads(self):
        rho = classical_ghz()
        a, b = localize_mixed(rho), localize_mixed(rho, threads=8)
        assert a.evidence == b.evidence and a.partition == b.partition


class TestProperties:
    @pytest.mark.parametrize("seed", range(30))
    def test_consistent_with_pure_path(self, seed):
        psi, truth = random_structured_state(1 + seed % 5, seed=seed)
        rep = localize_mixed(dm(psi), tol=1e-8)
        assert rep.partition == localize(psi).partition == truth

    @pytest.mark.parametrize("seed", range(10))
    def test_entangled_certificates_reverify(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density((2, 2, 2), rank=int(rng.integers(1, 4)), seed=rng)
        rep = localize_mixed(rho, "ppt,ccnr")
        for r in rep.evidence:
            if r["verdict"] != "ENTANGLED":
                continue
            left, right = r["bipartition"]
            red, d_a, d_b = reduce_to_bipartition(rho.matrix, rho.dims, Bipartition(tuple(left), tuple(right)))
            if r["oracle"] == "ppt":
                lam = hermitian_eigenvalues(partial_transpose(red, d_a, d_b))[0]
                assert lam == pytest.approx(r["certificate"]["min_pt_eigenvalue"], abs=1e-10)
            else:
                norm = trace_norm(realign(red, d_a, d_b))
                assert norm == pytest.approx(r["certificate"]["realigned_trace_norm"], abs=1e-10)

    @pytest.mark.parametrize("partition", [p for p in enumerate_partitions(4) if max(map(len, p)) <= 2])
    def test_product_structured_inputs_are_exact(self, partition):
        # blocks of two qubits carry an NPT state, singletons a random mixed qubit
        rng = np.random.default_rng(len(partition))
        blocks = []
        for block in partition.blocks:
            if len(block) == 2:
                blocks.append(werner_2qubit(float(rng.uniform(0.4, 1.0))))
            else:
                blocks.append(random_density((2,), seed=rng))
        rho = embed_product_density(blocks, partition)
        rep = localize_mixed(rho)
        assert rep.partition == partition
        assert all(c["tag"] == "DEFINITE" for c in rep.confidence)

    @pytest.mark.parametrize("seed", range(25))
    def test_policy_containment(self, seed):
        rng = np.random.default_rng(seed)
        kind = seed % 3
        if kind == 0:
            rho = random_density((2, 2, 2), rank=int(rng.integers(1, 9)), seed=rng)
        elif kind == 1:
            part = enumerate_partitions(3)[int(rng.integers(5))]
            rho, _ = random_separable_mixture(part, (2, 2, 2), terms=int(rng.integers(2, 6)), seed=rng)
        else:
            rho = mix([(0.5, werner_2qubit(0.3)), (0.5, werner_2qubit(0.9))])
            rho = tensor_density(rho, random_density((2,), seed=rng))
        strict = localize_mixed(rho, policy="definite")
        loose = localize_mixed(rho, policy=InconclusivePolicy.TREAT_AS_SEPARABLE_HEURISTIC)
        assert refines(loose.partition, strict.partition)
        assert all(c["tag"] == "DEFINITE" for c in strict.confidence)

    def test_heuristic_tags(self):
        rep = localize_mixed(random_density((2, 2, 2), seed=1), "ccnr", policy="heuristic")
        assert rep.partition == Partition.finest(3)
        assert {c["tag"] for c in rep.confidence} == {"HEURISTIC"}
        assert not rep.exact


class TestWitnessChecker:
    def test_single_product_term(self):
        a, b = random_density((2,), seed=1), random_density((3,), seed=2)
        part = Partition.from_list([[1], [2]])
        assert check_pi_separable_constructed(tensor_density(a, b), part, [(1.0, [a, b])])

    def test_classical_ghz(self):
        z, o = dm(make_basis((2,), [0])), dm(make_basis((2,), [1]))
        decomposition = [(0.5, [z, z, z]), (0.5, [o, o, o])]
        assert check_pi_separable_constructed(classical_ghz(), Partition.finest(3), decomposition)

    def test_perturbed_weight(self):
        z, o = dm(make_basis((2,), [0])), dm(make_basis((2,), [1]))
        decomposition = [(0.5 + 1e-3, [z, z, z]), (0.5, [o, o, o])]
        assert not check_pi_separable_constructed(classical_ghz(), Partition.finest(3), decomposition)

    def test_shape_mismatch(self):
        a = random_density((2,), seed=1)
        with pytest.raises(ValueError, match="block states"):
            check_pi_separable_constructed(classical_ghz(), Partition.finest(3), [(1.0, [a, a])])
        with pytest.raises(ValueError, match="needs dims"):
            check_pi_separable_constructed(
                classical_ghz(), Partition.from_list([[1, 2], [3]]), [(1.0, [a, a])]
            )

    @pytest.mark.parametrize("seed", range(10))
    def test_random_mixtures(self, seed):
        part = Partition.from_list([[1, 3], [2]])
        rho, dec = random_separable_mixture(part, (2, 3, 2), terms=3, seed=seed, block_rank=2)
        assert check_pi_separable_constructed(rho, part, dec)
