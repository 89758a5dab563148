import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside.errors import MismatchedGroupError
from burnside.groups import normalizer
from burnside.ring import (
    augmentation_ideal,
    burnside_ring,
    export_marks,
    fixed_point_count,
    mark,
    multiply,
    phi_ideal,
    table_of_marks,
    verify_trichotomy,
)
from conftest import group

TEST_GROUPS = ["C2", "C6", "S3", "D4", "Q8", "A4", "S4"]


def test_s3_marks(S3):
    assert table_of_marks(S3).marks.tolist() == [
        [6, 0, 0, 0],
        [3, 1, 0, 0],
        [2, 0, 2, 0],
        [1, 1, 1, 1],
    ]


def test_small_marks():
    assert table_of_marks(group("C2")).marks.tolist() == [[2, 0], [1, 1]]
    assert table_of_marks(group("C1")).marks.tolist() == [[1]]


@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_marks_invariants(spec):
    G = group(spec)
    tom = table_of_marks(G)
    cl = tom.classification
    m = tom.marks
    assert np.array_equal(m, np.tril(m))
    for k, ck in enumerate(cl):
        assert m[k, k] == normalizer(G, ck.representative).order // ck.order
        assert m[k, 0] == G.order // ck.order
        for h, ch in enumerate(cl):
            if not cl.subconjugacy[h, k]:
                assert m[k, h] == 0
            assert m[k, h] == fixed_point_count(G, ck.representative, ch.representative)
    assert all(m[i, i] > 0 for i in range(len(cl)))


def test_products():
    A = burnside_ring(group("C2"))
    free = A.basis(0)
    assert multiply(free, free).coefficients == (2, 0)

    A = burnside_ring(group("S3"))
    assert multiply(A.basis(1), A.basis(2)).coefficients == (1, 0, 0, 0)
    x = A.element([1, -2, 3, 5])
    assert multiply(A.one(), x) == x


def test_mismatched_groups():
    a = burnside_ring(group("C2")).one()
    b = burnside_ring(group("C3")).one()
    with pytest.raises(MismatchedGroupError):
        multiply(a, b)


def test_large_coefficients_stay_exact(S3):
    A = burnside_ring(group("C2"))
    x = A.element([2 ** 40, 0])
    assert multiply(x, x).coefficients == (2 ** 81, 0)
    assert (x * x).marks == (2 ** 82, 0)

    A = burnside_ring(S3)
    x = A.element([2 ** 40, -3, 2 ** 41, 7])
    y = A.element([5, 2 ** 40, -1, 2 ** 39])
    assert (x * y).marks == tuple(a * b for a, b in zip(x.marks, y.marks))
    assert (2 ** 40 * x).coefficients == (2 ** 80, -3 * 2 ** 40, 2 ** 81, 7 * 2 ** 40)
    assert all(type(c) is int for c in (x * y).coefficients)


def test_marks_of_elements(S3):
    A = burnside_ring(S3)
    assert mark(1, A.basis(1)) == 1
    assert mark(3, A.one()) == 1
    for k, c in enumerate(A.classification):
        assert mark(0, A.basis(k)) == 6 // c.order
        assert A.basis(k).augmentation == 6 // c.order


def test_augmentation_ideal():
    I = augmentation_ideal(group("C2"))
    assert [x.coefficients for x in I.generators] == [(1, -2)]
    assert augmentation_ideal(group("C1")).generators == ()
    I = augmentation_ideal(group("S3"))
    assert len(I.generators) == 3
    assert all(x.augmentation == 0 for x in I.generators)


def test_phi_ideals(S3):
    I = augmentation_ideal(S3)
    assert phi_ideal(0, I).is_zero
    assert phi_ideal(1, I).d == 2
    assert phi_ideal(2, I).d == 3
    assert phi_ideal(3, I).is_whole
    assert str(phi_ideal(3, I)) == "Z"
    assert phi_ideal(0, augmentation_ideal(group("C1"))).is_zero


@pytest.mark.parametrize("spec", ["C6", "S3", "D4", "Q8", "A4", "C12", "S4"])
def test_trichotomy(spec):
    report = verify_trichotomy(group(spec))
    assert report.passed
    assert report.rows[0].ideal.is_zero


def test_trichotomy_c6():
    rows = verify_trichotomy(group("C6")).rows
    assert [r.order for r in rows] == [1, 2, 3, 6]
    assert rows[0].ideal.d == 0
    assert rows[1].ideal.d == 2
    assert rows[2].ideal.d == 3
    assert rows[3].ideal.d == 1


def test_trichotomy_q8():
    rows = verify_trichotomy(group("Q8")).rows
    for r in rows[1:]:
        assert r.ideal.d > 1
        assert r.ideal.d & (r.ideal.d - 1) == 0


def test_export_marks(S3):
    tom = table_of_marks(S3)
    doc = export_marks(tom)
    assert doc["marks"][1] == [3, 1, 0, 0]
    assert [c["order"] for c in doc["classes"]] == [1, 2, 3, 6]
    assert [c["size"] for c in doc["classes"]] == [1, 3, 1, 1]
    assert doc["order"] == 6
    text = export_marks(tom, "text")
    for c in doc["classes"]:
        assert c["label"] in text


@settings(derandomize=True, max_examples=60, deadline=None)
@given(st.sampled_from(TEST_GROUPS), st.data())
def test_ring_axioms(spec, data):
    A = burnside_ring(group(spec))
    idx = st.integers(min_value=0, max_value=A.rank - 1)
    x, y, z = (A.basis(data.draw(idx)) for _ in range(3))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@settings(derandomize=True, max_examples=60, deadline=None)
@given(st.sampled_from(TEST_GROUPS), st.data())
def test_marks_are_multiplicative(spec, data):
    A = burnside_ring(group(spec))
    coeffs = st.lists(st.integers(min_value=-5, max_value=5), min_size=A.rank, max_size=A.rank)
    x = A.element(data.draw(coeffs))
    y = A.element(data.draw(coeffs))
    assert (x * y).marks == tuple(a * b for a, b in zip(x.marks, y.marks))
    assert mark(0, x) == x.augmentation
