import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semidist import (
    NeighborResult,
    ParseError,
    UnsupportedField,
    from_dense,
    read_matrix_market,
    write_matrix_market,
    write_output,
)
from semidist.oracle import densify

from util import assert_csr_equal, random_csr


def write_text(tmp_path, text, name="m.mtx"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestReader:
    def test_real_general_single_entry(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real general\n"
                          "2 3 1\n"
                          "1 3 2.5\n")
        m = read_matrix_market(path)
        assert (m.n_rows, m.n_cols, m.nnz) == (2, 3, 1)
        np.testing.assert_array_equal(densify(m), [[0, 0, 2.5], [0, 0, 0]])

    def test_pattern_entries_get_value_one(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate pattern general\n"
                          "2 2 1\n"
                          "2 1\n")
        m = read_matrix_market(path)
        np.testing.assert_array_equal(densify(m), [[0, 0], [1.0, 0]])

    def test_symmetric_storage_is_mirrored(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real symmetric\n"
                          "3 3 2\n"
                          "2 1 4.0\n"
                          "3 3 1.0\n")
        m = read_matrix_market(path)
        dense = densify(m)
        np.testing.assert_array_equal(dense, dense.T)
        assert dense[1, 0] == 4.0 and dense[0, 1] == 4.0
        assert dense[2, 2] == 1.0  # diagonal not doubled

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real general\n"
                          "% a comment\n"
                          "\n"
                          "1 1 1\n"
                          "1 1 7.0\n")
        m = read_matrix_market(path)
        assert m.values[0] == 7.0

    def test_integer_field_accepted(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate integer general\n"
                          "1 1 1\n"
                          "1 1 3\n")
        assert read_matrix_market(path).values[0] == 3.0

    def test_malformed_entry_names_line(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real general\n"
                          "2 2 2\n"
                          "1 1 1.0\n"
                          "2 2\n")
        with pytest.raises(ParseError) as err:
            read_matrix_market(path)
        assert err.value.line_no == 4

    def test_too_few_entries(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real general\n"
                          "2 2 2\n"
                          "1 1 1.0\n")
        with pytest.raises(ParseError):
            read_matrix_market(path)

    def test_out_of_bounds_entry(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate real general\n"
                          "2 2 1\n"
                          "3 1 1.0\n")
        with pytest.raises(ParseError) as err:
            read_matrix_market(path)
        assert err.value.line_no == 3

    def test_complex_field_unsupported(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix coordinate complex general\n"
                          "1 1 1\n"
                          "1 1 1.0 0.0\n")
        with pytest.raises(UnsupportedField):
            read_matrix_market(path)

    def test_array_format_unsupported(self, tmp_path):
        path = write_text(tmp_path,
                          "%%MatrixMarket matrix array real general\n"
                          "1 1\n1.0\n")
        with pytest.raises(UnsupportedField):
            read_matrix_market(path)

    def test_missing_header(self, tmp_path):
        path = write_text(tmp_path, "1 1 1\n1 1 1.0\n")
        with pytest.raises(ParseError) as err:
            read_matrix_market(path)
        assert err.value.line_no == 1


class TestRoundTrip:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_write_read_is_bitwise_lossless(self, seed):
        import tempfile, os
        rng = np.random.default_rng(seed)
        m = random_csr(rng, int(rng.integers(0, 12)), int(rng.integers(1, 10)), 0.4,
                       low=-2.0, high=2.0)
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "m.mtx")
            write_matrix_market(m, path)
            assert_csr_equal(read_matrix_market(path), m)


class TestWriteOutput:
    def test_scalar_distance_csv(self, tmp_path):
        path = tmp_path / "d.csv"
        write_output(np.array([[3.0]]), str(path), "csv")
        assert path.read_text() == "3\n"

    def test_csv_header_configurable(self, tmp_path):
        path = tmp_path / "d.csv"
        write_output(np.array([[3.0, 1.5]]), str(path), "csv", header=True)
        lines = path.read_text().splitlines()
        assert lines[0] == "j0,j1"
        assert lines[1] == "3,1.5"

    def test_distances_json_round_trip(self, tmp_path):
        path = tmp_path / "d.json"
        mat = np.array([[0.1, 0.2], [0.3, 0.4]])
        write_output(mat, str(path), "json")
        loaded = json.loads(path.read_text())
        np.testing.assert_array_equal(np.array(loaded["distances"]), mat)

    def test_knn_json_one_record_per_query_at_k1(self, tmp_path):
        path = tmp_path / "k.json"
        res = NeighborResult(np.array([[0.5], [0.25]]), np.array([[1], [0]]))
        write_output(res, str(path), "json")
        records = json.loads(path.read_text())
        assert len(records) == 2
        assert records[0] == {"query_id": 0, "neighbor_id": 1, "distance": 0.5}

    def test_knn_csv_rows(self, tmp_path):
        path = tmp_path / "k.csv"
        res = NeighborResult(np.array([[0.5, 1.0]]), np.array([[2, 0]]))
        write_output(res, str(path), "csv", header=True)
        lines = path.read_text().splitlines()
        assert lines[0] == "query_id,neighbor_id,distance"
        assert lines[1] == "0,2,0.5"
        assert lines[2] == "0,0,1"

    def test_csv_values_round_trip_exactly(self, tmp_path):
        rng = np.random.default_rng(0)
        mat = rng.random((3, 4))
        path = tmp_path / "d.csv"
        write_output(mat, str(path), "csv")
        back = np.array([[float(tok) for tok in line.split(",")]
                         for line in path.read_text().splitlines()])
        np.testing.assert_array_equal(back, mat)

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_output(np.zeros((1, 1)), str(tmp_path / "x"), "yaml")
