import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gaussiancv import cli
from gaussiancv.states import GaussianState, thermal, two_mode_squeezed, vacuum


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_state(tmp_path, state, name="state.json"):
    path = tmp_path / name
    path.write_text(state.to_json())
    return path


def write_json(tmp_path, doc, name):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


class TestState:
    def test_vacuum_document(self, capsys):
        code, out, _ = run(capsys, "state", "--vacuum", 2)
        doc = json.loads(out)
        assert code == 0
        assert doc["n_modes"] == 2
        assert doc["ordering"] == "qpqp"
        assert doc["hbar_convention"] == "doubled"
        assert np.allclose(doc["sigma"], np.eye(4))

    def test_one_key_per_line(self, capsys):
        _, out, _ = run(capsys, "state", "--tmss", 0.3)
        lines = out.strip().split("\n")
        assert lines[0] == "{" and lines[-1] == "}"
        assert len(lines) == 2 + 5

    def test_tmss_in_decibels(self, capsys):
        _, out, _ = run(capsys, "state", "--tmss", 10, "--db")
        sigma = np.array(json.loads(out)["sigma"])
        assert sigma[0, 0] == pytest.approx(np.cosh(np.log(10)), rel=1e-12)

    def test_coherent_complex(self, capsys):
        _, out, _ = run(capsys, "state", "--coherent", "1+2j", "0.5")
        d = json.loads(out)["d"]
        # q = (a + a^dagger) / sqrt(2), so the mean is sqrt(2) (Re alpha, Im alpha)
        assert d == pytest.approx(np.sqrt(2) * np.array([1.0, 2.0, 0.5, 0.0]))

    def test_squeezed_and_check(self, capsys):
        _, out, _ = run(capsys, "state", "--squeezed", "0", 0.5, 0, "--check")
        doc = json.loads(out)
        assert doc["check"]["physical"] is True
        assert doc["check"]["pure"] is True
        assert np.diag(doc["sigma"]) == pytest.approx([np.exp(1.0), np.exp(-1.0)])

    def test_threemode(self, capsys):
        _, out, _ = run(capsys, "state", "--threemode", 2, 2, 2, "--check")
        doc = json.loads(out)
        assert doc["n_modes"] == 3
        assert doc["check"]["pure"] is True

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "t.json"
        code, out, _ = run(capsys, "state", "--thermal", 1.0, "--out", target)
        assert code == 0 and out == ""
        assert np.allclose(json.loads(target.read_text())["sigma"], 3 * np.eye(2))

    def test_quiet(self, capsys):
        code, out, _ = run(capsys, "state", "--vacuum", 1, "--quiet")
        assert code == 0 and out == ""

    def test_out_and_quiet_exclusive(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["state", "--vacuum", "1", "--quiet", "--out", str(tmp_path / "x")])
        assert exc.value.code == 2

    def test_bad_threemode_is_usage_error(self, capsys):
        code, _, err = run(capsys, "state", "--threemode", 1, 1, 5)
        assert code == 2
        assert "error" in err


class TestCircuit:
    def test_twin_beam(self, capsys, tmp_path):
        r = 0.6
        circuit = [
            {"gate": "squeeze", "targets": [0], "params": {"s": r, "theta": 0.0}},
            {"gate": "squeeze", "targets": [1], "params": {"s": r, "theta": np.pi}},
            {"gate": "beamsplitter", "targets": [0, 1], "params": {"tau": 0.5}},
        ]
        code, out, _ = run(
            capsys, "circuit", write_state(tmp_path, vacuum(2)), write_json(tmp_path, circuit, "c.json")
        )
        assert code == 0
        sigma = np.array(json.loads(out)["sigma"])
        assert np.max(np.abs(sigma - two_mode_squeezed(r).sigma)) <= 1e-9

    def test_empty_circuit_echoes_input(self, capsys, tmp_path):
        st = GaussianState(np.array([0.1, -0.2]), np.array([[2.0, 0.3], [0.3, 1.5]]))
        _, out, _ = run(capsys, "circuit", write_state(tmp_path, st), write_json(tmp_path, {"steps": []}, "c.json"))
        doc = json.loads(out)
        assert doc["d"] == st.d.tolist()
        assert doc["sigma"] == st.sigma.tolist()

    def test_displace_step(self, capsys, tmp_path):
        circuit = [{"gate": "displace", "targets": [1], "params": {"delta": [0.5, -1.0]}}]
        _, out, _ = run(capsys, "circuit", write_state(tmp_path, vacuum(2)), write_json(tmp_path, circuit, "c.json"))
        assert json.loads(out)["d"] == [0.0, 0.0, 0.5, -1.0]

    def test_heterodyne_on_tmsv_gives_vacuum(self, capsys, tmp_path):
        # heterodyning one arm of a two-mode squeezed vacuum leaves the other in vacuum for every r
        circuit = [{"measure": {"modes": [1], "seed": {"tag": "heterodyne"}}}]
        _, out, _ = run(
            capsys, "circuit", write_state(tmp_path, two_mode_squeezed(0.8)), write_json(tmp_path, circuit, "c.json")
        )
        doc = json.loads(out)
        assert doc["n_modes"] == 1
        assert np.allclose(doc["sigma"], np.eye(2), atol=1e-12)

    def test_homodyne_seed(self, capsys, tmp_path):
        r = 0.4
        circuit = [{"measure": {"modes": [0], "seed": {"tag": "homodyne", "quadrature": "q"}}}]
        _, out, _ = run(
            capsys, "circuit", write_state(tmp_path, two_mode_squeezed(r)), write_json(tmp_path, circuit, "c.json")
        )
        sigma = np.array(json.loads(out)["sigma"])
        c = np.cosh(2 * r)
        assert np.diag(sigma) == pytest.approx([1 / c, c], rel=1e-12)

    def test_measure_must_be_last(self, capsys, tmp_path):
        circuit = [
            {"measure": {"modes": [0], "seed": {"tag": "heterodyne"}}},
            {"gate": "phase", "targets": [0], "params": {"phi": 0.1}},
        ]
        code, _, _ = run(capsys, "circuit", write_state(tmp_path, vacuum(2)), write_json(tmp_path, circuit, "c.json"))
        assert code == 2

    def test_unknown_gate(self, capsys, tmp_path):
        circuit = [{"gate": "teleport", "targets": [0], "params": {}}]
        code, _, _ = run(capsys, "circuit", write_state(tmp_path, vacuum(1)), write_json(tmp_path, circuit, "c.json"))
        assert code == 2

    def test_unphysical_input_exit_code(self, capsys, tmp_path):
        bad = {"n_modes": 1, "ordering": "qpqp", "hbar_convention": "doubled", "d": [0, 0], "sigma": [[0.5, 0], [0, 0.5]]}
        code, _, err = run(capsys, "circuit", write_json(tmp_path, bad, "s.json"), write_json(tmp_path, [], "c.json"))
        assert code == 3
        assert "error" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "circuit", tmp_path / "nope.json", tmp_path / "nope2.json")
        assert code == 2


class TestMeasure:
    def test_epr_at_ten_db(self, capsys, tmp_path):
        run(capsys, "state", "--tmss", 10, "--db", "--out", tmp_path / "s.json")
        _, out, _ = run(capsys, "measure", tmp_path / "s.json", "--epr")
        doc = json.loads(out)
        assert doc["measure"] == "epr"
        assert doc["value"] == pytest.approx(0.1, rel=1e-12)
        assert "value_bits" not in doc

    def test_entropy_report_units(self, capsys, tmp_path):
        path = write_state(tmp_path, two_mode_squeezed(0.5))
        _, out, _ = run(capsys, "measure", path, "--vn", "--modes-a", "0")
        doc = json.loads(out)
        assert doc["value_bits"] == pytest.approx(doc["value_nats"] / np.log(2))
        assert doc["modes"] == [0]
        assert doc["value"] > 0

    def test_e2_is_half_mutual_on_pure(self, capsys, tmp_path):
        path = write_state(tmp_path, two_mode_squeezed(0.7))
        _, e2, _ = run(capsys, "measure", path, "--e2")
        _, mi, _ = run(capsys, "measure", path, "--mutual")
        ratio = json.loads(e2)["value"] / json.loads(mi)["value"]
        assert ratio == pytest.approx(0.5, abs=1e-7)
        assert "theta" in json.loads(e2)["optimizer"]

    def test_d2_product_state(self, capsys, tmp_path):
        path = write_state(tmp_path, thermal([0.5, 1.5]))
        _, out, _ = run(capsys, "measure", path, "--d2", "--direction", "B|A")
        doc = json.loads(out)
        assert doc["value"] == pytest.approx(0.0, abs=1e-12)
        assert doc["direction"] == "B|A"
        assert doc["branch"] in ("homodyne", "interior")

    def test_renyi_needs_alpha(self, capsys, tmp_path):
        code, _, _ = run(capsys, "measure", write_state(tmp_path, vacuum(1)), "--renyi")
        assert code == 2
        _, out, _ = run(capsys, "measure", write_state(tmp_path, thermal(1.0)), "--renyi", "--alpha", 2)
        assert json.loads(out)["value"] == pytest.approx(np.log(3.0))

    def test_residual(self, capsys, tmp_path):
        run(capsys, "state", "--threemode", 2, 2, 2, "--out", tmp_path / "s.json")
        _, out, _ = run(capsys, "measure", tmp_path / "s.json", "--residual", "--focus", 1)
        assert json.loads(out)["value"] == pytest.approx(0.46354583321510, abs=1e-9)

    def test_residual_rejects_mixed(self, capsys, tmp_path):
        code, _, _ = run(capsys, "measure", write_state(tmp_path, thermal([1, 1, 1])), "--residual")
        assert code == 3

    def test_ssa_all_groupings(self, capsys, tmp_path):
        path = write_state(tmp_path, thermal([0.2, 0.4, 0.6]))
        _, out, _ = run(capsys, "measure", path, "--ssa")
        doc = json.loads(out)
        assert len(doc["values"]) == 3
        assert doc["value"] == pytest.approx(0.0, abs=1e-12)
        _, out, _ = run(capsys, "measure", path, "--ssa", "--groups", "0|1|2")
        assert json.loads(out)["groupings"] == [[[0], [1], [2]]]

    def test_j2_needs_two_modes(self, capsys, tmp_path):
        code, _, _ = run(capsys, "measure", write_state(tmp_path, vacuum(3)), "--j2")
        assert code == 2

    def test_measure_flags_exclusive(self, tmp_path):
        with pytest.raises(SystemExit):
            cli.main(["measure", str(write_state(tmp_path, vacuum(2))), "--epr", "--e2"])

    def test_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO(vacuum(1).to_json()))
        _, out, _ = run(capsys, "measure", "-", "--purity")
        assert json.loads(out)["value"] == pytest.approx(1.0)


class TestSweep:
    def test_renyi_ordering(self, capsys):
        _, out, _ = run(
            capsys, "sweep", "--family", "thermal", "--param", "nbar", "--start", 0.1, "--stop", 3, "--steps", 12,
            "--measure", "renyi:0.5", "--measure", "vn", "--measure", "renyi:2", "--measure", "renyi:5",
        )
        header, data = read_csv(out)
        assert header == ["nbar", "renyi:0.5", "vn", "renyi:2", "renyi:5"]
        assert data.shape == (12, 5)
        assert np.all(np.diff(data[:, 1:], axis=1) <= 1e-12)

    def test_epr_column(self, capsys):
        _, out, _ = run(
            capsys, "sweep", "--family", "tmss", "--param", "r", "--start", 0, "--stop", 3, "--steps", 31,
            "--measure", "epr",
        )
        _, data = read_csv(out)
        assert np.max(np.abs(data[:, 1] - np.exp(-2 * data[:, 0]))) <= 1e-9

    def test_threemode_grid(self, capsys):
        _, out, _ = run(
            capsys, "sweep", "--family", "threemode", "--set", "a1=2", "--param", "a2", "--start", 1.5, "--stop", 2.5,
            "--steps", 3, "--param2", "a3", "--start2", 1.5, "--stop2", 2.5, "--steps2", 3, "--measure", "residual:0",
        )
        header, data = read_csv(out)
        assert header == ["a2", "a3", "residual:0"]
        assert data.shape == (9, 3)
        # second axis varies fastest
        assert data[:3, 0].tolist() == [1.5, 1.5, 1.5]
        assert data[:3, 1].tolist() == [1.5, 2.0, 2.5]
        assert np.all(data[:, 2] >= -1e-8)

    def test_invalid_points(self, capsys):
        argv = ["sweep", "--family", "standard", "--set", "a=2", "--set", "b=2", "--param", "cp",
                "--start", 0, "--stop", 3, "--steps", 4, "--measure", "e2"]
        code, _, _ = run(capsys, *argv)
        assert code == 3
        code, out, _ = run(capsys, *argv, "--skip-invalid")
        _, data = read_csv(out)
        assert code == 0
        assert np.isnan(data[-1, 1]) and not np.isnan(data[0, 1])

    def test_no_negative_zero(self, capsys):
        _, out, _ = run(
            capsys, "sweep", "--family", "squeezed", "--param", "s", "--start", -1, "--stop", 1, "--steps", 3,
            "--measure", "renyi2",
        )
        assert "-0," not in out and not out.rstrip().endswith("-0")

    @pytest.mark.parametrize(
        "extra",
        [
            ["--measure", "ssa"],
            ["--measure", "renyi"],
            ["--measure", "epr:3"],
            ["--measure", "epr", "--set", "zz=1"],
        ],
    )
    def test_usage_errors(self, capsys, extra):
        code, _, _ = run(capsys, "sweep", "--family", "tmss", "--param", "r", "--start", 0, "--stop", 1, "--steps", 3,
                         *extra)
        assert code == 2

    def test_second_axis_needs_bounds(self):
        with pytest.raises(SystemExit):
            cli.main(["sweep", "--family", "tmss", "--param", "r", "--start", "0", "--stop", "1", "--steps", "3",
                      "--param2", "r", "--measure", "epr"])


class TestWigner:
    def test_header_and_peak(self, capsys, tmp_path):
        _, out, _ = run(capsys, "wigner", write_state(tmp_path, vacuum(1)), "--points", 21)
        header, data = read_csv(out)
        assert header == ["q", "p", "w"]
        assert data.shape == (441, 3)
        assert data[:, 2].max() == pytest.approx(1 / np.pi)

    def test_explicit_ranges(self, capsys, tmp_path):
        _, out, _ = run(
            capsys, "wigner", write_state(tmp_path, two_mode_squeezed(0.3)), "--mode", 1, "--points", 5,
            "--q-range", -1, 1, "--p-range", 0, 2,
        )
        _, data = read_csv(out)
        assert data[0, :2].tolist() == [-1.0, 0.0]
        assert data[-1, :2].tolist() == [1.0, 2.0]


class TestCheck:
    @pytest.mark.parametrize("suite", ["ssa", "monogamy", "pure-equalities", "closed-forms"])
    def test_suites_pass(self, capsys, suite):
        code, out, _ = run(capsys, "check", suite, "--draws", 10, "--seed", 3)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "seed: 3"
        assert lines[1].startswith(f"PASS {suite}: 10 draws")

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "check", "monogamy", "--draws", 50)
        _, b, _ = run(capsys, "check", "monogamy", "--draws", 50)
        assert a == b

    def test_bad_draws(self, capsys):
        code, _, _ = run(capsys, "check", "ssa", "--draws", 0)
        assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gaussiancv", "state", "--vacuum", "1"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n_modes"] == 1
