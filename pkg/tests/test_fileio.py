import json
from fractions import Fraction

import numpy as np
import pytest

from conerank import ExactMatrix, FloatMatrix, FormatError, NonnegFactorization
from conerank import fileio


class TestCsv:
    def test_rational_literals(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1/2,3\n0.25,1e-3\n")
        M = fileio.read_matrix_csv(p)
        assert isinstance(M, ExactMatrix)
        assert M.row(0) == (Fraction(1, 2), Fraction(3))
        assert M.row(1) == (Fraction(1, 4), Fraction(1, 1000))

    def test_decimals_default_to_float(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1.5,2\n3,4\n")
        M = fileio.read_matrix_csv(p)
        assert isinstance(M, FloatMatrix)

    def test_integers_default_to_rational(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1,2\n-3,4\n")
        M = fileio.read_matrix_csv(p)
        assert isinstance(M, ExactMatrix)

    def test_scalar_override(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1.5,2\n3,4\n")
        M = fileio.read_matrix_csv(p, scalar="rational")
        assert isinstance(M, ExactMatrix)
        assert M.entry(0, 0) == Fraction(3, 2)

    def test_ragged_rejected(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1,2\n3\n")
        with pytest.raises(FormatError, match="ragged"):
            fileio.read_matrix_csv(p)

    def test_nonfinite_rejected(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1,inf\n")
        with pytest.raises(FormatError):
            fileio.read_matrix_csv(p)

    def test_empty_rejected(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("\n")
        with pytest.raises(FormatError):
            fileio.read_matrix_csv(p)

    def test_round_trip_exact(self, tmp_path, robbins):
        p = tmp_path / "r.csv"
        fileio.write_matrix_csv(robbins, p)
        again = fileio.read_matrix_csv(p, scalar="rational")
        assert again == robbins

    def test_round_trip_float(self, tmp_path):
        M = FloatMatrix.from_rows([[0.1, 2.5], [1e-9, 3.0]])
        p = tmp_path / "f.csv"
        fileio.write_matrix_csv(M, p)
        again = fileio.read_matrix_csv(p, scalar="float")
        assert np.array_equal(again.data, M.data)


class TestJson:
    def test_round_trip_exact(self, tmp_path, robbins):
        p = tmp_path / "r.json"
        fileio.write_matrix_json(robbins, p)
        assert fileio.read_matrix_json(p) == robbins
        obj = json.loads(p.read_text())
        assert obj["scalar"] == "rational"
        assert obj["rows"] == 4 and obj["cols"] == 4

    def test_round_trip_float(self, tmp_path):
        M = FloatMatrix.from_rows([[0.5, 1.0]])
        p = tmp_path / "f.json"
        fileio.write_matrix_json(M, p)
        again = fileio.read_matrix_json(p)
        assert isinstance(again, FloatMatrix)
        assert np.array_equal(again.data, M.data)

    def test_entry_count_checked(self):
        with pytest.raises(FormatError):
            fileio.matrix_from_json_obj({"rows": 2, "cols": 2, "entries": [1, 2, 3], "scalar": "float"})

    def test_bad_scalar(self):
        with pytest.raises(FormatError):
            fileio.matrix_from_json_obj({"rows": 1, "cols": 1, "entries": [1], "scalar": "complex"})

    def test_factorization_round_trip(self, tmp_path, robbins):
        F = NonnegFactorization(robbins, ExactMatrix.identity(4))
        p = tmp_path / "w.json"
        fileio.write_factorization_json(F, p)
        again = fileio.read_factorization_json(p)
        assert again.k == 4
        assert again.L == robbins

    def test_factorization_k_mismatch(self, tmp_path, robbins):
        obj = fileio.factorization_to_json_obj(NonnegFactorization(robbins, ExactMatrix.identity(4)))
        obj["k"] = 3
        p = tmp_path / "w.json"
        p.write_text(json.dumps(obj))
        with pytest.raises(FormatError):
            fileio.read_factorization_json(p)


def test_canonical_json_is_stable():
    obj = {"b": 1.5, "a": [1, 2], "c": {"y": "s", "x": 0.1}}
    assert fileio.canonical_json(obj) == fileio.canonical_json(json.loads(fileio.canonical_json(obj)))


def test_format_sig():
    assert fileio.format_sig(0.1234567890123456) == "0.123456789012"
    assert fileio.format_sig(0.0) == "0"
