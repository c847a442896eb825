import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from entangloc.cli import main
from entangloc.generators import SpecError, parse_spec
from entangloc.io import FormatError, dumps, load_report, load_state, state_from_dict, state_to_dict
from entangloc.states import DensityMatrix, PureState, fidelity, make_ghz, random_density, random_pure

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_CASES = {
    "ghz3": ([[1, 2, 3]], 2),
    "singles": ([[1], [2], [3]], 0),
    "bell_single": ([[1, 2], [3]], 1),
    "werner05": ([[1, 2]], 2),
    "classical_ghz": ([[1], [2], [3]], 0),
}


def run(*argv):
    return main([str(a) for a in argv])


class TestSpecs:
    def test_ghz(self):
        psi = parse_spec("ghz:3")
        assert isinstance(psi, PureState) and len(psi) == 8

    def test_qudit_ghz(self):
        assert parse_spec("ghz:2:3").dims == (3, 3)

    def test_product(self):
        psi = parse_spec("product:(bell, random:2:42)")
        assert psi.dims == (2, 2, 2)

    def test_werner(self):
        rho = parse_spec("werner:0.5")
        assert isinstance(rho, DensityMatrix) and rho.matrix.shape == (4, 4)

    def test_nested(self):
        rho = parse_spec("product:(mix:(0.25*bell,0.75*basis:01),product:(plus,w:3))")
        assert isinstance(rho, DensityMatrix) and rho.dims == (2,) * 6

    def test_random_default_seed(self):
        a, b = parse_spec("random:2x3", seed=5), parse_spec("random:2x3:5")
        assert np.array_equal(a.amplitudes, b.amplitudes)

    @pytest.mark.parametrize(
        "text,token",
        [
            ("ghz:x", "x"),
            ("foo:3", "foo"),
            ("bell:2", "bell:2"),
            ("product:(bell,ghz:3", "<end>"),
            ("mix:(0.5*bell,0.6*bell)", "mix"),
            ("mix:(half*bell)", "half"),
            ("werner:2", "werner:2"),
            ("ghz:3)", ")"),
        ],
    )
    def test_malformed(self, text, token):
        with pytest.raises(SpecError) as info:
            parse_spec(text)
        assert info.value.token == token


class TestStateFiles:
    @pytest.mark.parametrize("state", [random_pure((2, 3), seed=1), random_density((3, 2), seed=2)])
    def test_round_trip_exact(self, state, tmp_path):
        text = dumps(state_to_dict(state))
        path = tmp_path / "s.json"
        path.write_text(text)
        back = load_state(path)
        a = getattr(state, "amplitudes", getattr(state, "matrix", None))
        b = getattr(back, "amplitudes", getattr(back, "matrix", None))
        assert np.array_equal(a, b) and back.dims == state.dims

    def test_rejects_unnormalized_unless_told(self):
        doc = {"kind": "pure", "dims": [2], "amplitudes": [[1, 0], [1, 0]]}
        with pytest.raises(ValueError, match="not normalized"):
            state_from_dict(doc)
        assert state_from_dict(doc, validate=False).amplitudes.tolist() == [1, 1]

    def test_rejects_non_psd(self):
        doc = {"kind": "density", "dims": [2], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}
        with pytest.raises(ValueError, match="PSD"):
            state_from_dict(doc)

    @pytest.mark.parametrize(
        "doc,msg",
        [
            ({"kind": "mixed", "dims": [2]}, "unknown state kind"),
            ({"kind": "pure", "dims": "2"}, "dims"),
            ({"kind": "pure", "dims": [2]}, "amplitudes"),
            ({"kind": "pure", "dims": [2], "amplitudes": [1, 0]}, r"\[re, im\]"),
            ({"kind": "density", "dims": [2], "matrix": [[1, 0], [0, 0]]}, r"\[re, im\]"),
        ],
    )
    def test_malformed_documents(self, doc, msg):
        with pytest.raises(FormatError, match=msg):
            state_from_dict(doc)


class TestGolden:
    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_golden_state_parses_and_analyzes(self, name, tmp_path):
        partition, code = GOLDEN_CASES[name]
        state_path = GOLDEN / f"{name}.state.json"
        out = tmp_path / "r.json"
        assert run("analyze", state_path, "-o", out) == code
        fresh, golden = load_report(out), load_report(GOLDEN / f"{name}.report.json")
        assert fresh["partition"] == golden["partition"] == partition
        for key in ("path", "input_digest", "outcome", "dims", "tolerances", "trace"):
            assert fresh[key] == golden[key]
        assert _strip_floats(fresh["evidence"]) == _strip_floats(golden["evidence"])
        for a, b in zip(fresh.get("factors", []), golden.get("factors", [])):
            fa = PureState([complex(*z) for z in a["amplitudes"]], tuple(a["dims"]))
            fb = PureState([complex(*z) for z in b["amplitudes"]], tuple(b["dims"]))
            assert fidelity(fa, fb) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_golden_report_verifies(self, name):
        assert run("verify", GOLDEN / f"{name}.state.json", GOLDEN / f"{name}.report.json") == 0


def _strip_floats(obj):
    if isinstance(obj, dict):
        return {k: _strip_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_strip_floats(v) for v in obj]
    if isinstance(obj, float):
        return round(obj, 9) + 0.0
    return obj


class TestAnalyze:
    def test_exit_codes(self, tmp_path):
        cases = {"ghz:3": 2, "product:(plus,basis:1,minus)": 0, "product:(bell,basis:0)": 1, "random:3:1": 0}
        for spec, code in cases.items():
            path = tmp_path / "s.json"
            assert run("generate", spec, "-o", path) == 0
            assert run("analyze", path, "-o", tmp_path / "r.json") == code

    def test_invalid_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("analyze", bad) == 3
        assert "cannot read state" in capsys.readouterr().err
        assert run("analyze", tmp_path / "missing.json") == 3

    def test_no_validate(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"kind": "pure", "dims": [2, 2], "amplitudes": [[2, 0], [0, 0], [0, 0], [0, 0]]}))
        assert run("analyze", path) == 3
        assert run("analyze", path, "--no-validate", "-o", tmp_path / "r.json") == 0

    def test_oracle_and_policy_flags(self, tmp_path):
        path = tmp_path / "s.json"
        run("generate", "mix:(0.5*basis:000,0.5*basis:111)", "-o", path)
        out = tmp_path / "r.json"
        assert run("analyze", path, "--oracle", "ppt,ccnr", "-o", out) == 2
        doc = load_report(out)
        assert doc["oracles"] == ["ppt", "ccnr"] and len(doc["unresolved"]) == 3 and not doc["exact"]
        assert run("analyze", path, "--oracle", "ppt,ccnr", "--policy", "heuristic", "-o", out) == 0
        assert "HEURISTIC" in {c["tag"] for c in load_report(out)["confidence"]}
        assert run("analyze", path, "--oracle", "nope") == 3

    def test_force_mixed_matches_pure(self, tmp_path):
        path = tmp_path / "s.json"
        run("generate", "product:(bell,random:2:3,ghz:3)", "-o", path)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run("analyze", path, "-o", a) == 1
        assert run("analyze", path, "--force-mixed", "-o", b) == 1
        assert load_report(a)["partition"] == load_report(b)["partition"] == [[1, 2], [3], [4, 5, 6]]

    def test_timing_opt_in(self, tmp_path):
        path = tmp_path / "s.json"
        run("generate", "bell", "-o", path)
        run("analyze", path, "-o", tmp_path / "a.json")
        run("analyze", path, "--timing", "-o", tmp_path / "b.json")
        assert "wall_time_s" not in load_report(tmp_path / "a.json")
        assert load_report(tmp_path / "b.json")["wall_time_s"] >= 0

    def test_usage_error_exit(self):
        assert run("analyze") == 3


class TestPartitionsCommand:
    def test_counts(self, capsys):
        assert run("partitions", 4, "--mode", "counts") == 0
        assert capsys.readouterr().out.splitlines() == ["B(4) = 15", "S(4,k) k=1..4: 1 7 6 1"]

    def test_bipartitions(self, capsys):
        run("partitions", 3, "--mode", "bipartitions")
        assert capsys.readouterr().out.splitlines() == ["[[1], [2, 3]]", "[[1, 2], [3]]", "[[1, 3], [2]]"]

    def test_all(self, capsys):
        run("partitions", 1, "--mode", "all")
        assert capsys.readouterr().out.splitlines() == ["[[1]]"]

    def test_cap(self, capsys):
        assert run("partitions", 13, "--mode", "all") == 3
        assert "cap" in capsys.readouterr().err


class TestVerify:
    def _pair(self, tmp_path, spec):
        state, report = tmp_path / "s.json", tmp_path / "r.json"
        run("generate", spec, "-o", state)
        run("analyze", state, "-o", report)
        return state, report

    def test_tampered_partition(self, tmp_path, capsys):
        state, report = self._pair(tmp_path, "product:(bell,basis:0)")
        doc = load_report(report)
        doc["partition"] = [[1], [2], [3]]
        report.write_text(dumps(doc))
        assert run("verify", state, report) == 1
        assert "FAIL" in capsys.readouterr().err

    def test_tampered_evidence(self, tmp_path, capsys):
        state, report = self._pair(tmp_path, "ghz:3")
        doc = load_report(report)
        doc["evidence"][1]["schmidt_rank"] = 1
        report.write_text(dumps(doc))
        assert run("verify", state, report) == 1
        assert "recomputed Schmidt rank 2" in capsys.readouterr().err

    def test_tampered_certificate(self, tmp_path, capsys):
        state, report = self._pair(tmp_path, "werner:0.5")
        doc = load_report(report)
        doc["evidence"][0]["certificate"]["min_pt_eigenvalue"] = -0.2
        report.write_text(dumps(doc))
        assert run("verify", state, report) == 1

    def test_mixed_notice(self, tmp_path, capsys):
        state, report = self._pair(tmp_path, "werner:0.7")
        assert run("verify", state, report) == 0
        assert "brute-force partition check skipped" in capsys.readouterr().err

    def test_wrong_state(self, tmp_path):
        _, report = self._pair(tmp_path, "ghz:3")
        other = tmp_path / "o.json"
        run("generate", "w:3", "-o", other)
        assert run("verify", other, report) == 1

    def test_unreadable(self, tmp_path):
        state, _ = self._pair(tmp_path, "bell")
        assert run("verify", state, tmp_path / "missing.json") == 3


GRAMMAR_SPECS = [
    "ghz:4",
    "ghz:3:3",
    "w:4",
    "bell",
    "basis:0110",
    "basis:21:3",
    "random:2x3x2:7",
    "werner:0.3",
    "maxmixed:2x2",
    "product:(plus,minus,bell)",
    "product:(werner:0.8,random:2:1)",
    "mix:(0.3*bell,0.7*basis:01)",
]


@pytest.mark.parametrize("spec", GRAMMAR_SPECS)
def test_round_trip_generate_analyze_verify(spec, tmp_path):
    state, report = tmp_path / "s.json", tmp_path / "r.json"
    assert run("generate", spec, "-o", state) == 0
    assert run("analyze", state, "-o", report) in (0, 1, 2)
    assert run("verify", state, report) == 0


def test_module_entry_point(tmp_path):
    state = tmp_path / "s.json"
    proc = subprocess.run([sys.executable, "-m", "entangloc", "generate", "ghz:3", "-o", state])
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "entangloc", "analyze", state], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["partition"] == [[1, 2, 3]]


def test_analysis_is_deterministic_across_threads(tmp_path):
    state = tmp_path / "s.json"
    run("generate", "product:(random:2x2x3:9,ghz:3,random:3:2)", "-o", state)
    outs = []
    for threads in (1, 8, 1, 8):
        out = tmp_path / f"r{len(outs)}.json"
        run("analyze", state, "--threads", threads, "-o", out)
        outs.append(out.read_bytes())
    assert len(set(outs)) == 1
    assert make_ghz(3).dims == (2, 2, 2)
