import numpy as np
import pytest

from flatspeech.categories import (
    ASEM,
    ASYN,
    AXES,
    BSEM,
    BSYN,
    CategoryVector,
    build_scheme,
)


def test_scheme_cardinalities():
    assert len(build_scheme(BSYN)) == 13
    assert len(build_scheme(ASYN)) == 8
    assert len(build_scheme(BSEM)) == 20
    assert len(build_scheme(ASEM)) == 17


def test_basic_syntactic_order():
    scheme = build_scheme(BSYN)
    assert scheme.labels == ("N", "V", "R", "U", "M", "P", "/", "J", "A", "C", "D", "I", "O")
    assert scheme.index("V") == 1


def test_abstract_semantic_labels():
    scheme = build_scheme(ASEM)
    assert "TM-AT" in scheme
    assert "LC-FRM" in scheme
    assert scheme.labels[0] == "ACT"


def test_build_scheme_idempotent():
    assert build_scheme(BSEM) == build_scheme(BSEM)


def test_unknown_axis_rejected():
    with pytest.raises(ValueError):
        build_scheme("morphology")


def test_vector_length_enforced():
    with pytest.raises(ValueError):
        CategoryVector(BSYN, np.zeros(12))


def test_vector_range_enforced():
    values = np.zeros(13)
    values[0] = 1.5
    with pytest.raises(ValueError):
        CategoryVector(BSYN, values)


def test_argmax_tie_breaks_low_index():
    vec = CategoryVector(ASYN, np.full(8, 0.5))
    assert vec.argmax_index() == 0
    assert vec.argmax_label() == "VG"


def test_from_labels_membership():
    vec = CategoryVector(BSYN, np.zeros(13))
    vec = CategoryVector.from_labels(BSYN, ["V", "U"])
    assert vec.values[1] == 1.0 and vec.values[3] == 1.0
    assert vec.values.sum() == 2.0


@pytest.mark.parametrize("axis", AXES)
def test_one_hot_round_trip(axis):
    scheme = build_scheme(axis)
    for label in scheme.labels:
        assert CategoryVector.one_hot(axis, label).argmax_label() == label
