import json

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from relkmeans.errors import AsymmetryError, InputError, ParseError
from relkmeans.formats import read_matrix, read_points, write_labels, write_matrix, write_report
from relkmeans.matrix import validate_matrix
from relkmeans.solver import RunReport, SolverConfig, solve


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


def test_read_simple_matrix(write):
    m, names = read_matrix(write("a.csv", "0,1\n1,0"))
    assert m.entries.tolist() == [[0, 1], [1, 0]]
    assert names is None


def test_ragged_rows(write):
    with pytest.raises(ParseError) as info:
        read_matrix(write("a.csv", "0,1,2\n1,0\n2,1,0\n"))
    assert info.value.line == 2


def test_header_names(write):
    m, names = read_matrix(write("a.csv", "a,b\n0,1\n1,0\n"), header=True)
    assert names == ["a", "b"]
    assert m.n == 2


def test_row_names_and_header(write):
    m, names = read_matrix(write("a.tsv", "\tx\ty\nx\t0\t2\ny\t2\t0\n"), header=True, row_names=True)
    assert names == ["x", "y"] and m.entries[0, 1] == 2


def test_duplicate_names(write):
    with pytest.raises(ParseError):
        read_matrix(write("a.csv", "a,a\n0,1\n1,0\n"), header=True)


def test_tsv_inferred(write):
    m, _ = read_matrix(write("a.tsv", "0\t4\n4\t0\n"))
    assert m.entries[1, 0] == 4


def test_bad_number_location(write):
    with pytest.raises(ParseError) as info:
        read_matrix(write("a.csv", "0,1\n1,zz\n"))
    assert (info.value.line, info.value.column) == (2, 2)
    assert "a.csv:2:2" in str(info.value)


def test_nan_cell_is_parse_error(write):
    with pytest.raises(ParseError):
        read_matrix(write("a.csv", "0,nan\nnan,0\n"))


def test_not_square(write):
    with pytest.raises(ParseError):
        read_matrix(write("a.csv", "0,1,2\n1,0,3\n"))


def test_validation_passes_through(write):
    with pytest.raises(AsymmetryError):
        read_matrix(write("a.csv", "0,1\n2,0\n"))


def test_square_input(write):
    m, _ = read_matrix(write("a.csv", "0,3\n3,0\n"), square_input=True)
    assert m.entries[0, 1] == 9


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_matrix(tmp_path / "nope.csv")


def test_read_points(write):
    p, _ = read_points(write("p.csv", "0\n3\n"))
    assert p.tolist() == [[0], [3]]
    p, _ = read_points(write("p.csv", "0,0\n3,4\n"))
    assert p.tolist() == [[0, 0], [3, 4]]
    with pytest.raises(ParseError):
        read_points(write("p.csv", "0,0\n3\n"))


def test_read_points_names(write):
    p, names = read_points(write("p.csv", "name,x\nu,1.5\nv,2\n"), header=True, row_names=True)
    assert names == ["u", "v"] and p.tolist() == [[1.5], [2.0]]


def test_write_labels(tmp_path):
    path = tmp_path / "l.csv"
    write_labels(path, [0, 1])
    assert path.read_text() == "point,cluster\n0,0\n1,1\n"
    write_labels(path, [1, 0], names=["a", "b"])
    assert path.read_text() == "point,cluster\na,1\nb,0\n"


@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.floats(-300, 300))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_matrix_round_trip(tmp_path, n, seed, exponent):
    g = np.random.default_rng(seed)
    a = g.uniform(-1, 1, size=(n, n)) * 10.0 ** int(exponent)
    a = a + a.T
    np.fill_diagonal(a, 0)
    m = validate_matrix(a)
    path = tmp_path / "m.csv"
    write_matrix(path, m.entries)
    back, _ = read_matrix(path)
    np.testing.assert_allclose(back.entries, m.entries, rtol=1e-12, atol=0)


def test_round_trip_with_names(tmp_path):
    path = tmp_path / "m.tsv"
    write_matrix(path, [[0, 0.1], [0.1, 0]], names=["p", "q"])
    m, names = read_matrix(path, header=True, row_names=True)
    assert names == ["p", "q"] and m.entries[0, 1] == 0.1


@given(st.binary(max_size=300))
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_parsers_never_crash(tmp_path, blob):
    path = tmp_path / "fuzz.csv"
    path.write_bytes(blob)
    for reader in (read_matrix, read_points):
        for header in (False, True):
            try:
                reader(path, header=header)
            except InputError:
                pass


def test_report_contract(tmp_path):
    report = solve([[0.0]], SolverConfig(1))
    path = tmp_path / "r.json"
    write_report(path, report, SolverConfig(1), 1, {"matrix": "x.csv"}, labels_file="l.csv", wall_time=0.1)
    doc = json.loads(path.read_text())
    for key in ("objective", "beta", "iterations", "converged", "labels_file"):
        assert key in doc
    assert doc["objective"] == 0 and doc["beta"] == 0
    assert doc["labels_file"] == "l.csv"


def test_report_eager_beta(tmp_path):
    tri = [[0, 1, 9], [1, 0, 1], [9, 1, 0]]
    cfg = SolverConfig(2)
    path = tmp_path / "r.json"
    write_report(path, solve(tri, cfg), cfg, 3)
    doc = json.loads(path.read_text())
    assert doc["beta"] == pytest.approx(5 / 3, abs=1e-6)
    assert doc["beta_increments"][0]["delta"] == pytest.approx(5 / 3, abs=1e-6)


def test_report_unconverged(tmp_path):
    rep = RunReport(np.zeros(3, int), 1.0, [2.0, 1.0], 1, False)
    path = tmp_path / "r.json"
    write_report(path, rep, SolverConfig(1, max_iterations=1), 3)
    assert json.loads(path.read_text())["converged"] is False
