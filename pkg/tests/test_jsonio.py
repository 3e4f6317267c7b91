import json

import numpy as np
import pytest

from conical import jsonio
from conical.constructors import mum_inball, sic_fixture
from conical.errors import DomainError


def test_dumps_is_canonical():
    text = jsonio.dumps({"b": 0.1, "a": [1, float("nan")]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    assert "null" in text


@pytest.mark.parametrize("design", [sic_fixture(3), mum_inball(3, 0.4)])
def test_design_round_trip_is_byte_identical(design, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    jsonio.save_design(design, a, kind="x", seed=3)
    loaded = jsonio.load_design(a)
    np.testing.assert_array_equal(loaded.elements, design.elements)
    jsonio.save_design(loaded, b, kind="x", seed=3)
    assert a.read_bytes() == b.read_bytes()


def test_matrix_encoding():
    m = np.array([[1, 1j], [-1j, 2]])
    assert jsonio.encode_matrix(m)[0][1] == [0.0, 1.0]
    np.testing.assert_array_equal(jsonio.decode_matrix(jsonio.encode_matrix(m)), m)
    with pytest.raises(DomainError):
        jsonio.decode_matrix([[1, 2]])


def test_malformed_design(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 2, "operators": [[[[1, 0]]]]}))
    with pytest.raises(DomainError):
        jsonio.load_design(path)
