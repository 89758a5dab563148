import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside.errors import (
    GroupAxiomError,
    GroupSpecError,
    HomomorphismError,
    NotNormalError,
    NotSubgroupError,
    OrderBoundError,
)
from burnside.groups import (
    Subgroup,
    abelian_invariants,
    abelianization,
    direct_product,
    generated_subgroup,
    is_normal,
    make_group,
    make_hom,
    make_subgroup,
    normalizer,
    parse_group,
    prime_power,
    quotient_group,
    structure_label,
    subgroup_group,
    trivial_subgroup,
    whole_group,
)
from burnside.lattice import enumerate_subgroups
from conftest import group


@pytest.mark.parametrize("spec, order", [
    ("C1", 1), ("C2", 2), ("C12", 12), ("S3", 6), ("S4", 24), ("A4", 12),
    ("D4", 8), ("D3", 6), ("Q8", 8), ("V4", 4), ("C2xC4", 8), ("S3xC2", 12),
    ("perm(4): (1 2), (1 2 3 4)", 24), ("perm(3): (1 2), (1 2 3)", 6),
    ("perm(4): (1 2)(3 4)", 2),
])
def test_parse_orders(spec, order):
    assert parse_group(spec).order == order


def test_parse_is_deterministic():
    a = parse_group("perm(4): (1 2), (1 2 3 4)")
    b = parse_group("perm(4): (1 2), (1 2 3 4)")
    assert np.array_equal(a.table, b.table)


def test_named_conventions():
    D4 = group("D4")
    # rotations r^a at 0..3, reflections at 4..7
    assert D4.element_orders.tolist() == [1, 4, 2, 4, 2, 2, 2, 2]
    Q8 = group("Q8")
    assert Q8.element_orders.tolist() == [1, 2, 4, 4, 4, 4, 4, 4]
    assert group("V4").name == "V4"
    assert group("V4").is_abelian


@pytest.mark.parametrize("spec", [
    "BADNAME", "", "C0", "Cx2", "perm(3):", "perm(3): (1 4)", "perm(3): (1 1)",
    "perm(3): 1 2", "perm(3): (a b)",
])
def test_parse_errors(spec):
    with pytest.raises(GroupSpecError):
        parse_group(spec)


@pytest.mark.parametrize("spec", ["S7", "C600", "S4xS4", "perm(7): (1 2), (1 2 3 4 5 6 7)"])
def test_order_bound(spec):
    with pytest.raises(OrderBoundError):
        parse_group(spec)


def test_order_bound_override():
    assert parse_group("C600", order_bound=600).order == 600


def test_not_a_latin_square():
    with pytest.raises(GroupAxiomError):
        make_group("bad", [[0, 1], [1, 1]])


def test_non_associative_loop():
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupAxiomError):
        make_group("loop", loop)


def test_direct_product_klein():
    prod = direct_product(group("C2"), group("C2"))
    assert prod.group.order == 4
    assert int(np.sum(prod.group.element_orders == 2)) == 3
    assert prod.embed_left.is_injective and prod.embed_right.is_injective


def test_direct_product_with_trivial():
    S3 = group("S3")
    prod = direct_product(S3, group("C1"))
    assert prod.group.order == 6
    assert sorted(prod.group.element_orders.tolist()) == sorted(S3.element_orders.tolist())
    assert prod.proj_left.kernel == frozenset({prod.group.identity})


def test_direct_product_projections():
    prod = direct_product(group("S3"), group("C2"))
    assert prod.group.order == 12
    assert len(prod.proj_left.kernel) == 2
    assert len(prod.proj_right.kernel) == 6
    for g in range(6):
        assert prod.proj_left(prod.embed_left(g)) == g


def test_direct_product_bound():
    with pytest.raises(OrderBoundError):
        direct_product(group("S4"), group("S4"))


def test_normalizer_of_transposition(S3):
    # index 1 is the permutation (0, 2, 1)
    H = generated_subgroup(S3, [1])
    assert H.members == (0, 1)
    assert normalizer(S3, H) == H


def test_normalizer_trivial_and_index_two(S3):
    assert normalizer(S3, trivial_subgroup(S3)).order == 6
    C3 = generated_subgroup(S3, [3])
    assert C3.order == 3
    assert normalizer(S3, C3).order == 6
    assert is_normal(S3, C3)


def test_quotients(S3):
    C4 = group("C4")
    Q, proj = quotient_group(C4, generated_subgroup(C4, [2]))
    assert Q.order == 2
    assert proj.kernel == frozenset({0, 2})

    Q, proj = quotient_group(S3, generated_subgroup(S3, [3]))
    assert Q.order == 2
    assert proj.kernel == frozenset({0, 3, 4})

    Q, _ = quotient_group(S3, whole_group(S3))
    assert Q.order == 1


def test_quotient_not_normal(S3):
    with pytest.raises(NotNormalError) as info:
        quotient_group(S3, generated_subgroup(S3, [1]))
    g = info.value.witness
    assert S3.conj(g, info.value.element) not in (0, 1)


@pytest.mark.parametrize("spec, factors", [
    ("S3", [2]), ("C6", [6]), ("Q8", [2, 2]), ("C2xC4", [2, 4]), ("S4", [2]),
    ("A4", [3]), ("D4", [2, 2]), ("C1", []), ("C2xC2xC3", [2, 6]),
])
def test_abelianization(spec, factors):
    assert abelianization(group(spec)) == factors


def test_abelian_invariants_of_product():
    assert abelian_invariants(group("C4xC6")) == [2, 12]


def test_structure_labels():
    assert structure_label(group("C1")) == "1"
    assert structure_label(group("C6")) == "C6"
    assert structure_label(group("V4")) == "C2xC2"
    assert structure_label(group("S3")) == "NA6"


def test_prime_power():
    assert prime_power(1) == 0
    assert prime_power(8) == 2
    assert prime_power(27) == 3
    assert prime_power(6) is None


def test_subgroup_group(S4):
    H = generated_subgroup(S4, [1, 2])
    sub, incl = subgroup_group(H)
    assert sub.order == H.order
    assert incl.is_injective
    assert set(incl.images) == H.member_set


def test_bad_homomorphism():
    with pytest.raises(HomomorphismError):
        make_hom(group("C2"), group("C3"), [0, 1])
    with pytest.raises(HomomorphismError):
        make_hom(group("C2"), group("C2"), [1, 0])


SPECS = ["C4", "C6", "S3", "D4", "Q8", "A4", "C2xC2", "D6"]


@settings(derandomize=True, max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_quotient_kernel_is_the_normal_subgroup(spec, data):
    G = group(spec)
    normals = [H for H in enumerate_subgroups(G) if is_normal(G, generated_subgroup(G, H))]
    N = generated_subgroup(G, data.draw(st.sampled_from(sorted(normals, key=sorted))))
    Q, proj = quotient_group(G, N)
    assert Q.order * N.order == G.order
    assert proj.kernel == N.member_set


@settings(derandomize=True, max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_normalizer_contains_subgroup(spec, data):
    G = group(spec)
    H = generated_subgroup(G, data.draw(st.sampled_from(sorted(enumerate_subgroups(G), key=sorted))))
    N = normalizer(G, H)
    assert H.member_set <= N.member_set
    assert G.order % N.order == 0


def test_make_subgroup(S3):
    H = make_subgroup(S3, [3, 0, 4])
    assert H.members == (0, 3, 4)
    for members in ([1, 3], [0, 1, 2], [0, 6], [0, 1, 3, 4]):
        with pytest.raises(NotSubgroupError):
            make_subgroup(S3, members)


def test_operations_reject_non_subgroups(S3):
    with pytest.raises(NotSubgroupError):
        normalizer(S3, Subgroup(S3, (0, 1, 2)))
    with pytest.raises(NotSubgroupError):
        is_normal(S3, Subgroup(S3, (0, 1, 2)))
    with pytest.raises(NotSubgroupError):
        normalizer(S3, generated_subgroup(group("C6"), [3]))
    C4 = group("C4")
    with pytest.raises(NotSubgroupError):
        quotient_group(C4, Subgroup(C4, (0, 1)))


def test_subgroups_of_equal_tables_are_equal():
    a = Subgroup(parse_group("S3"), (0, 1))
    b = Subgroup(parse_group("S3"), (1, 0))
    assert a == b
    assert hash(a) == hash(b)
    assert a != Subgroup(a.parent, (0, 3, 4))
    assert a != Subgroup(parse_group("C6"), (0, 1))
