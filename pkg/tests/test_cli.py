import json
from pathlib import Path

import numpy as np
import pytest

from timeflow.cli import main
from timeflow.formats import vector_pairs
from timeflow.linalg import random_unitary

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


class TestVerify:
    def test_default_run_passes(self, capsys):
        code, report = run_json(
            capsys, "verify", "--trials", "25", "--seed", "11"
        )
        assert code == 0
        assert report["all_pass"] is True
        assert report["config"]["seed"] == 11
        assert report["config"]["tolerance"] == 1e-9
        names = {p["property"] for p in report["properties"]}
        assert "semantics_equivalence" in names
        assert "local_frame_relation" in names

    def test_injected_fault_detected(self, capsys):
        code, report = run_json(
            capsys, "verify", "--trials", "10", "--inject-fault"
        )
        assert code == 1
        assert report["all_pass"] is False
        assert "chain_consistency" in report["failing"]
        assert "semantics_equivalence" in report["failing"]

    def test_zero_trials_is_usage_error(self, capsys):
        code, _ = run_cli(capsys, "verify", "--trials", "0")
        assert code == 2

    def test_deterministic_payload(self, capsys):
        _, first = run_cli(capsys, "verify", "--trials", "10", "--seed", "3")
        _, second = run_cli(capsys, "verify", "--trials", "10", "--seed", "3")
        assert first == second


class TestTeleport:
    def test_identity_circuit_file(self, capsys):
        code, report = run_json(
            capsys, "teleport", "--circuit", f"{CONFIGS}/teleport_identity.json"
        )
        assert code == 0
        assert report["agreement"] is True
        assert report["timeflow"]["probability"] == pytest.approx(0.25, abs=1e-12)
        for rep in report["outcomes"].values():
            assert rep["probability"] == pytest.approx(0.25, abs=1e-10)
        assert [t["label"] for t in report["trace"]] == [
            "outbound",
            "first_reversal",
            "second_reversal",
            "return_leg",
            "closed_form",
        ]

    def test_random_circuit_agrees(self, capsys, tmp_path):
        rng = np.random.default_rng(42)
        can = np.zeros(4, dtype=complex)
        can[::3] = 1 / np.sqrt(2)

        def maxent():
            return vector_pairs(
                np.kron(random_unitary(2, rng), random_unitary(2, rng)) @ can
            )

        def gate():
            return [
                [float(z.real), float(z.imag)]
                for z in random_unitary(2, rng).reshape(-1)
            ]

        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi /= np.linalg.norm(psi)
        obj = {
            "d": 2,
            "u": gate(),
            "v": gate(),
            "w": gate(),
            "phi": maxent(),
            "omega": maxent(),
            "psi": vector_pairs(psi),
        }
        path = tmp_path / "random42.json"
        path.write_text(json.dumps(obj))
        code, report = run_json(
            capsys, "teleport", "--circuit", str(path), "--seed", "42"
        )
        assert code == 0
        assert report["agreement"] is True

    def test_alpha_phase_sweep(self, capsys):
        for phase in ("0", "pi/4", "pi", "-pi/3"):
            code, report = run_json(
                capsys,
                "teleport",
                "--circuit",
                f"{CONFIGS}/teleport_identity.json",
                f"--alpha-phase={phase}",
            )
            assert code == 0
            assert report["agreement"] is True

    def test_nonmax_pair_routed_to_loss_report(self, capsys):
        code, report = run_json(
            capsys, "teleport", "--circuit", f"{CONFIGS}/teleport_nonmax.json"
        )
        assert code == 0
        sv = report["nonmax"]["singular_values"]
        expected = sorted(
            [np.sqrt(2) * np.cos(np.pi / 6), np.sqrt(2) * np.sin(np.pi / 6)],
            reverse=True,
        )
        assert sv == pytest.approx(expected, abs=1e-10)
        assert "outcomes" not in report

    def test_missing_file_is_input_error(self, capsys):
        code, _ = run_cli(capsys, "teleport", "--circuit", "no-such-file.json")
        assert code == 2


class TestAcausal:
    def test_branches(self, capsys):
        code, report = run_json(capsys, "acausal")
        assert code == 0
        b0 = report["branches"]["0"]
        b1 = report["branches"]["1"]
        assert b0["probability"] == pytest.approx(0.25, abs=1e-10)
        assert b1["probability"] == pytest.approx(0.25, abs=1e-10)
        assert np.allclose(
            b0["state"], [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]], atol=1e-10
        )
        assert np.allclose(
            b1["state"], [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], atol=1e-10
        )

    def test_result_independent_of_seed(self, capsys):
        _, r1 = run_json(capsys, "acausal", "--seed", "1")
        _, r2 = run_json(capsys, "acausal", "--seed", "999")
        assert r1["branches"] == r2["branches"]


class TestNmr:
    def test_flip_off_decomposition(self, capsys):
        code, report = run_json(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            f"{CONFIGS}/flip_off.seq",
        )
        assert code == 0
        assert set(report["decomposition"]) == {"XXIZ"}
        assert report["decomposition"]["XXIZ"] == pytest.approx(0.25, abs=1e-12)

    def test_flip_on_decomposition(self, capsys):
        code, report = run_json(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            f"{CONFIGS}/flip_on.seq",
        )
        assert code == 0
        assert set(report["decomposition"]) == {"YIZI"}

    def test_empty_sequence_returns_initial_terms(self, capsys, tmp_path):
        path = tmp_path / "empty.seq"
        path.write_text("# nothing\n")
        code, report = run_json(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            str(path),
        )
        assert code == 0
        assert set(report["decomposition"]) == {"XIIX", "XZIX", "XIZX", "XZZX"}

    def test_spectrum_csv_written(self, capsys, tmp_path):
        spec_path = tmp_path / "spec.csv"
        fid_path = tmp_path / "fid.csv"
        code, report = run_json(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            f"{CONFIGS}/flip_off.seq",
            "--detect",
            "1",
            "--duration",
            "1.0",
            "--points",
            "256",
            "--spectrum-out",
            str(spec_path),
            "--fid-out",
            str(fid_path),
        )
        assert code == 0
        assert report["spectrum_file"] == str(spec_path)
        lines = spec_path.read_text().splitlines()
        assert lines[0] == "frequency_hz,real,imaginary"
        assert len(lines) == 257
        assert fid_path.read_text().splitlines()[0] == "time_s,real,imaginary"

    def test_detect_without_acquisition_params(self, capsys):
        code, _ = run_cli(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            f"{CONFIGS}/flip_off.seq",
            "--detect",
            "1",
        )
        assert code == 2

    def test_parse_error_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "bad.seq"
        path.write_text("rotation 1 q pi/2\n")
        code, _ = run_cli(
            capsys,
            "nmr",
            "--spin-system",
            f"{CONFIGS}/fourspin.spinsys",
            "--sequence",
            str(path),
        )
        assert code == 2


class TestCsvFormat:
    def test_verify_csv(self, capsys):
        code, out = run_cli(
            capsys, "verify", "--trials", "5", "--format", "csv"
        )
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines[0] == "property,trials,max_deviation,tolerance,passed"
        assert len(lines) == 12
        assert "# seed=1234" in out
