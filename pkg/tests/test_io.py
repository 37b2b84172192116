import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from tcpkit.classify import Status, classify_copositive, classify_semi_positive
from tcpkit.io import FormatError, load, store, tensor_from_obj, tensor_to_obj
from tcpkit.solve import TcpInstance, solve_support_enum
from tcpkit.tensor import Tensor, identity


def test_round_trip_identity(tmp_path):
    p = tmp_path / "a.tensor"
    store(p, identity(3, 2), "tensor")
    assert load(p, "tensor") == identity(3, 2)


@given(st.integers(2, 4).flatmap(lambda m: st.integers(1, 3).flatmap(
    lambda n: arrays(np.float64, (n,) * m, elements=st.floats(-1e6, 1e6, allow_nan=False)))))
def test_round_trip_bitwise(data):
    A = Tensor(data)
    B = tensor_from_obj(json.loads(json.dumps(tensor_to_obj(A))))
    assert np.array_equal(A.data.view(np.uint64), B.data.view(np.uint64)) or np.array_equal(A.data, B.data)


def test_instance_round_trip(tmp_path):
    p = tmp_path / "i.tcp"
    inst = TcpInstance(identity(3, 2), [-4.0, 9.0 / 7])
    store(p, inst, "instance")
    back = load(p, "instance")
    assert back.A == inst.A and np.array_equal(back.q, inst.q)


def test_vector_and_report(tmp_path):
    store(tmp_path / "v", np.array([1.5, -2.0]), "vector")
    assert np.array_equal(load(tmp_path / "v", "vector"), [1.5, -2.0])
    recs = [{"a": 1}, {"b": [1, 2]}]
    store(tmp_path / "r", recs, "report")
    assert load(tmp_path / "r", "report") == recs


def _write(tmp_path, obj):
    p = tmp_path / "t.json"
    p.write_text(json.dumps(obj))
    return p


def test_out_of_range_names_record(tmp_path):
    p = _write(tmp_path, {"order": 2, "dim": 2, "entries": [{"idx": [1, 1], "val": 1}, {"idx": [1, 3], "val": 2}]})
    with pytest.raises(FormatError, match=r"entries\[1\].*out of range"):
        load(p, "tensor")


def test_duplicate_index(tmp_path):
    p = _write(tmp_path, {"order": 2, "dim": 2, "entries": [{"idx": [1, 2], "val": 1}, {"idx": [1, 2], "val": 2}]})
    with pytest.raises(FormatError, match="duplicate"):
        load(p, "tensor")


@pytest.mark.parametrize("obj, msg", [
    ({"order": "3", "dim": 2}, "order"),
    ({"order": 3, "dim": 2, "entries": [{"idx": [1, 1], "val": 1}]}, "3 integers"),
    ({"order": 2, "dim": 2, "entries": [{"idx": [1, 1], "val": "x"}]}, "finite"),
    ({"order": 1, "dim": 2}, "order >= 2"),
])
def test_schema_errors(tmp_path, obj, msg):
    with pytest.raises(FormatError, match=msg):
        load(_write(tmp_path, obj), "tensor")


def test_parse_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"order": 2,\n "dim": }')
    with pytest.raises(FormatError, match="line 2"):
        load(p, "tensor")


def test_missing_file(tmp_path):
    with pytest.raises(FormatError, match="cannot read"):
        load(tmp_path / "nope", "tensor")


def test_matrix_file_exact_paths(tmp_path):
    p = _write(tmp_path, {"order": 2, "dim": 2, "entries": [
        {"idx": [1, 1], "val": 1}, {"idx": [1, 2], "val": -2}, {"idx": [2, 1], "val": -2}, {"idx": [2, 2], "val": 1}]})
    A = load(p, "tensor")
    assert classify_semi_positive(A).status is Status.FAILS
    assert classify_copositive(A).status is Status.FAILS
    assert solve_support_enum(TcpInstance(A, [1, 1])).complete
