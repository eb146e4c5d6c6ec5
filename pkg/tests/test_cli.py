import json
import time

import pytest

from conerank import fileio, robbins_matrix


@pytest.fixture
def robbins_csv(tmp_path):
    p = tmp_path / "robbins.csv"
    fileio.write_matrix_csv(robbins_matrix(), p)
    return str(p)


@pytest.fixture
def kernel4_csv(tmp_path, kernel):
    p = tmp_path / "kernel4.csv"
    fileio.write_matrix_csv(kernel(4), p)
    return str(p)


class TestRankCommand:
    def test_robbins(self, run_cli, robbins_csv):
        code, rep, _ = run_cli("rank", "--in", robbins_csv)
        assert code == 0
        assert rep["rank"] == 3 and rep["method"] == "exact"

    def test_zero_csv(self, run_cli, tmp_path):
        p = tmp_path / "zero.csv"
        p.write_text("0,0\n0,0\n")
        code, rep, _ = run_cli("rank", "--in", str(p))
        assert code == 0 and rep["rank"] == 0

    def test_float_path(self, run_cli, kernel4_csv):
        code, rep, _ = run_cli("rank", "--in", kernel4_csv)
        assert code == 0
        assert rep["rank"] == 3 and rep["method"] == "float"

    def test_missing_file(self, run_cli):
        code, rep, _ = run_cli("rank", "--in", "no-such-file.csv")
        assert code == 2 and rep["code"] == "io"

    def test_json_input(self, run_cli, tmp_path):
        p = tmp_path / "m.json"
        fileio.write_matrix_json(robbins_matrix(), p)
        code, rep, _ = run_cli("rank", "--in", str(p))
        assert code == 0
        assert rep["rank"] == 3 and rep["method"] == "exact"

    def test_ragged_file(self, run_cli, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3\n")
        code, rep, _ = run_cli("rank", "--in", str(p))
        assert code == 2 and rep["code"] == "format"


class TestNnrankCommand:
    def test_exact3_kernel4(self, run_cli, kernel4_csv):
        code, rep, _ = run_cli("nnrank", "--method", "exact3", "--in", kernel4_csv)
        assert code == 0
        assert rep["k"] == 4
        assert rep["k_restricted"] == 4
        assert len(rep["polygon"]) == 4

    def test_exact3_on_rank2_redirects(self, run_cli, tmp_path):
        p = tmp_path / "r2.csv"
        p.write_text("1,1,0\n0,1,1\n")
        code, rep, _ = run_cli("nnrank", "--method", "exact3", "--in", str(p))
        assert code == 2
        assert rep["code"] == "precondition"
        assert "exact2" in rep["message"]

    def test_exact2(self, run_cli, tmp_path):
        p = tmp_path / "r2.csv"
        p.write_text("1,1,0\n0,1,1\n")
        code, rep, _ = run_cli("nnrank", "--method", "exact2", "--in", str(p))
        assert code == 0 and rep["k"] == 2

    def test_bounds(self, run_cli, robbins_csv):
        code, rep, _ = run_cli("nnrank", "--method", "bounds", "--in", robbins_csv)
        assert code == 0
        assert rep["lower"] == 3 and rep["upper"] == 4 and rep["reference_upper"] == 4

    def test_nmf_fixed_k(self, run_cli, robbins_csv):
        code, rep, _ = run_cli(
            "nnrank", "--method", "nmf", "--in", robbins_csv, "--k", "4", "--restarts", "32", "--seed", "0"
        )
        assert code == 0
        assert rep["found"] is True
        assert rep["seed"] == 0
        assert "witness" in rep

    def test_nmf_scan(self, run_cli, kernel4_csv):
        code, rep, _ = run_cli(
            "nnrank", "--method", "nmf", "--in", kernel4_csv, "--k-lo", "3", "--k-hi", "4", "--restarts", "64"
        )
        assert code == 0 and rep["k_best"] == 4

    def test_witness_round_trip(self, run_cli, tmp_path, kernel4_csv):
        w = tmp_path / "w.json"
        code, rep, _ = run_cli("nnrank", "--method", "exact3", "--in", kernel4_csv, "--out", str(w))
        assert code == 0 and w.exists()
        code2, rep2, _ = run_cli("verify", "--in", kernel4_csv, "--witness", str(w))
        assert code2 == 0
        assert rep2["valid"] is True

    def test_plot_csv(self, run_cli, tmp_path, kernel4_csv):
        plot = tmp_path / "plot.csv"
        code, _, _ = run_cli("nnrank", "--method", "exact3", "--in", kernel4_csv, "--plot-out", str(plot))
        assert code == 0
        lines = plot.read_text().strip().split("\n")
        assert lines[0] == "kind,x,y,z"
        kinds = {ln.split(",")[0] for ln in lines[1:]}
        assert kinds == {"inner", "outer", "vertex"}


class TestFactorVerify:
    def test_factor_writes_witness(self, run_cli, tmp_path):
        src = tmp_path / "m.csv"
        src.write_text("1,2\n2,4\n")
        out = tmp_path / "w.json"
        code, rep, _ = run_cli("factor", "--in", str(src), "--scalar", "rational", "--out", str(out))
        assert code == 0 and rep["k"] == 1
        code2, rep2, _ = run_cli("verify", "--in", str(src), "--scalar", "rational", "--witness", str(out))
        assert code2 == 0 and rep2["valid"] is True

    def test_factor_on_rank3_redirects(self, run_cli, robbins_csv):
        code, rep, _ = run_cli("factor", "--in", robbins_csv)
        assert code == 2
        assert rep["code"] == "precondition"
        assert "exact3" in rep["message"]

    def test_verify_rejects_bad_witness(self, run_cli, tmp_path, robbins_csv):
        w = tmp_path / "w.json"
        F = fileio.factorization_to_json_obj(
            __import__("conerank").NonnegFactorization(
                robbins_matrix(), __import__("conerank").ExactMatrix.identity(4)
            )
        )
        F["L"]["entries"][0] = "2"
        w.write_text(json.dumps(F))
        code, rep, _ = run_cli("verify", "--in", robbins_csv, "--witness", str(w))
        assert code == 0 and rep["valid"] is False


class TestDemoRobbins:
    def test_report(self, run_cli):
        t0 = time.time()
        code, rep, _ = run_cli("demo-robbins")
        elapsed = time.time() - t0
        assert code == 0
        assert rep["rank"] == 3
        assert rep["nnrank"] == 4
        assert rep["witness_exact"] is True
        assert rep["witness"]["k"] == 4
        assert elapsed < 1.0


class TestSconeCommands:
    def test_membership_inside(self, run_cli):
        code, rep, _ = run_cli("scone", "membership", "--a", "0", "--b", "0", "--c", "1")
        assert code == 0
        assert rep["classification"] == "inside" and rep["margin"] == 1.0

    def test_membership_outside(self, run_cli):
        code, rep, _ = run_cli("scone", "membership", "--a", "3", "--b", "4", "--c", "4.9")
        assert code == 0 and rep["classification"] == "outside"

    def test_preimage_writes_csv(self, run_cli, tmp_path):
        out = tmp_path / "f.csv"
        code, rep, _ = run_cli(
            "scone", "preimage", "--a", "1", "--b", "0", "--c", "2", "--r", "0.8", "--n", "512", "--out", str(out)
        )
        assert code == 0
        assert rep["min_value"] >= 0.0
        assert rep["moment_error"] < 1e-8
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,value"
        assert len(lines) == 513

    def test_preimage_boundary_rejected(self, run_cli):
        code, rep, _ = run_cli("scone", "preimage", "--a", "1", "--b", "0", "--c", "1")
        assert code == 2 and rep["code"] == "precondition"

    def test_preimage_zero_point(self, run_cli, tmp_path):
        out = tmp_path / "zero.csv"
        code, rep, _ = run_cli(
            "scone", "preimage", "--a", "0", "--b", "0", "--c", "0", "--n", "16", "--out", str(out)
        )
        assert code == 0
        assert rep["min_value"] == 0.0 and rep["r"] is None
        assert len(out.read_text().strip().split("\n")) == 17

    def test_growth(self, run_cli, tmp_path):
        out = tmp_path / "growth.csv"
        code, rep, _ = run_cli("scone", "growth", "--ns", "3,4", "--seed", "0", "--out", str(out))
        assert code == 0
        assert rep["rows"][0]["n"] == 3 and rep["rows"][0]["k_exact3"] == 3
        assert rep["rows"][1]["n"] == 4 and rep["rows"][1]["k_exact3"] == 4
        header = out.read_text().split("\n")[0]
        assert header == "n,rank_float,k_exact3,k_nmf,residual_at_k_minus_1"


class TestDeterminism:
    def test_reports_byte_stable(self, run_cli, robbins_csv, kernel4_csv):
        pairs = [
            ("rank", "--in", robbins_csv),
            ("nnrank", "--method", "bounds", "--in", robbins_csv),
            ("nnrank", "--method", "nmf", "--in", robbins_csv, "--k", "3", "--restarts", "8"),
            ("nnrank", "--method", "exact3", "--in", kernel4_csv),
            ("demo-robbins",),
            ("scone", "membership", "--a", "1", "--b", "2", "--c", "4"),
        ]
        for argv in pairs:
            _, _, out1 = run_cli(*argv)
            _, _, out2 = run_cli(*argv)
            assert out1 == out2, argv
