"""Tabulated commutative monoids: free monoids, box products, pi0, units."""

import json

import pytest

from jgamma.catcore import (
    category_of_elements,
    classifying_space_h1,
    nerve,
    validate,
)
from jgamma.errors import InputError, WindowError
from jgamma.jmonoid import (
    FPCommMonoid,
    TabulatedMonoid,
    boxtimes,
    degree_homomorphism,
    free_monoid,
    grouplike_check,
    hocolim_skeleton,
    pi0_hocolim,
    restrict_along_delta,
    sparse_window_ops,
    terminal_monoid,
    unit_monoid,
    units_submonoid,
)
from jgamma.topo import components
from jgamma.permcat import JObject, PermutativeOps, j_homset, truncate


@pytest.fixture(scope="module")
def free11():
    return free_monoid(JObject(1, 1), 3)


@pytest.fixture(scope="module")
def free12():
    return free_monoid(JObject(1, 2), 3)


# -- free monoids ------------------------------------------------------------


def test_free_monoid_tabulates_orbit_counts(free11):
    A = free11
    assert A.cat.n_objects == 16
    assert A.validate(exhaustive=True) == []
    # only diagonal objects carry elements; |values(p,p)| = p-th orbit count
    sizes = {A.cat.objects[k]: len(v) for k, v in enumerate(A.values) if v}
    assert sizes == {
        JObject(0, 0): 1,
        JObject(1, 1): 2,
        JObject(2, 2): 8,
        JObject(3, 3): 48,
    }


def test_free_monoid_rejects_empty_generator():
    with pytest.raises(InputError):
        free_monoid(JObject(0, 0), 2)
    with pytest.raises(WindowError):
        free_monoid(JObject(3, 3), 2)


def test_free_monoid_unit_is_the_empty_word(free11):
    assert free11.unit == (0, ((), (), ()))
    assert free11.values[free11.ops.unit] == [free11.unit]


def test_free_monoid_off_diagonal_generator(free12):
    B = free12
    assert B.validate(exhaustive=True) == []
    # elements live only on the degree-0 and degree-p*1 diagonal objects
    for k, v in enumerate(B.values):
        o = B.cat.objects[k]
        for p, _ in v:
            assert (o.m1, o.m2) >= (p * 1, p * 2)


# -- window constructors -----------------------------------------------------


def test_unit_monoid_is_complement_valued():
    U = unit_monoid(2)
    assert U.validate(exhaustive=True) == []
    # value at l enumerates Hom((0,0), l): empty except on the diagonal
    sizes = [len(v) for v in U.values]
    want = [len(j_homset(JObject(0, 0), o)) for o in U.cat.objects]
    assert sizes == want


def test_terminal_monoid_is_grouplike():
    T = terminal_monoid("J", 2)
    assert T.validate(exhaustive=True) == []
    flag, cert = grouplike_check(T)
    assert flag and cert["shear_injective"]
    assert set(cert["inverses"]) == set(range(pi0_hocolim(T).n_classes))


def test_sparse_window_keeps_values_and_mult():
    ops = sparse_window_ops(2, [JObject(0, 0), JObject(1, 1)], sparse=[JObject(2, 2)])
    assert ops.cat.n_objects == 3
    A = free_monoid(JObject(1, 1), 2, base=ops)
    assert A.validate(exhaustive=True) == []
    full = free_monoid(JObject(1, 1), 2)
    for o in ops.cat.objects:
        k = ops.cat.objects.index(o)
        kf = full.cat.objects.index(o)
        assert sorted(A.values[k]) == sorted(full.values[kf])
    # the sparse object carries only coherence endomorphisms, not all four
    endos = [
        i
        for i in range(ops.cat.n_morphisms)
        if ops.cat.dom(i) == ops.cat.cod(i) == 2
    ]
    assert len(endos) == 2 < len(j_homset(JObject(2, 2), JObject(2, 2)))


def test_sparse_window_guards():
    with pytest.raises(InputError):
        sparse_window_ops(2, [JObject(0, 0), JObject(0, 0)])
    with pytest.raises(WindowError):
        sparse_window_ops(2, [JObject(0, 0)], sparse=[JObject(3, 3)])


# -- box product -------------------------------------------------------------


def test_boxtimes_unit_law():
    A = free_monoid(JObject(1, 1), 2)
    U = unit_monoid(2)
    B = boxtimes(U, A)
    assert B.validate(exhaustive=True) == []
    assert [len(v) for v in B.values] == [len(v) for v in A.values]


def test_boxtimes_of_free_is_free_on_two_generators():
    A = free_monoid(JObject(1, 1), 2)
    B = boxtimes(A, A)
    assert B.validate(exhaustive=True) == []
    assert [len(v) for v in B.values if v] == [1, 3, 18]


def test_boxtimes_requires_shared_window():
    with pytest.raises(InputError):
        boxtimes(free_monoid(JObject(1, 1), 2), free_monoid(JObject(1, 1), 3))


# -- serialization -----------------------------------------------------------


def test_tabulated_monoid_json_round_trip(free11):
    A = free11
    text = A.to_json()
    assert json.loads(text)["schema"] == "jgamma/tabulated-monoid/1"
    B = TabulatedMonoid.from_json(text, A.ops)
    assert B.values == A.values
    assert B.action == A.action
    assert B.mult == A.mult
    assert B.unit == A.unit


def test_tabulated_monoid_json_window_mismatch(free11):
    other = PermutativeOps("J", 2, truncate("J", 2))
    with pytest.raises(InputError):
        TabulatedMonoid.from_json(free11.to_json(), other)


# -- pi0, degrees, units, grouplike ------------------------------------------


def test_pi0_of_free_monoid_is_the_word_length(free11):
    pi0 = pi0_hocolim(free11)
    assert pi0.n_classes == 4  # word lengths 0..3 fit in the window
    assert pi0.unit_class == 0
    # in-window products add lengths; out-of-window products are reported
    for (i, j), k in pi0.table.items():
        assert i + j == k
    assert all("leaves the window" in w for w in pi0.warnings)
    assert len(pi0.warnings) == 6  # the pairs with i + j > 3


def test_pi0_products_total_for_terminal():
    T = terminal_monoid("J", 2)
    pi0 = pi0_hocolim(T)
    # one class per degree component of the window
    assert pi0.n_classes == 5
    got = degree_homomorphism(T)
    assert sorted(got.values()) == [-2, -1, 0, 1, 2]
    # defined products add degrees; the extreme pairs leave the window
    for (i, j), k in pi0.table.items():
        assert got[i] + got[j] == got[k]
    assert len(pi0.warnings) == 6
    assert all("leaves the window" in w for w in pi0.warnings)


def test_degree_homomorphism_on_free(free12):
    degs = degree_homomorphism(free12)
    pi0 = pi0_hocolim(free12)
    assert pi0.n_classes == 2
    assert sorted(degs.values()) == [0, 1]


def test_units_of_free_keep_only_the_empty_word(free11):
    sub, report = units_submonoid(free11)
    assert report["kept"] == [0]
    assert report["classes"][0] == "yes"
    # degree cannot obstruct here, so the rest stay unknown and are excluded
    assert report["excluded_unknown"] == [1, 2, 3]
    assert sub.validate(exhaustive=True) == []
    # the unit component spreads over every object: one empty-word orbit
    # per morphism-image, i.e. |Hom((0,0), (p,p))| elements at (p,p)
    assert [len(v) for v in sub.values if v] == [1, 1, 2, 6]
    pi0 = pi0_hocolim(free11)
    for k, vals in enumerate(sub.values):
        for x in vals:
            assert pi0.class_of[(k, x)] == 0


def test_units_degree_obstruction_gives_definite_no(free12):
    _, report = units_submonoid(free12)
    # the positive-degree class has no negative-degree partner in the window
    assert report["classes"] == {0: "yes", 1: "no"}


def test_grouplike_check_fails_on_free(free11):
    flag, cert = grouplike_check(free11)
    assert not flag
    assert cert["witness"]["status"] == "unknown"
    assert cert["shear_injective"]


# -- orbit skeleton of the element category -----------------------------------


def test_hocolim_skeleton_matches_element_category():
    A = free_monoid(JObject(1, 1), 2)
    skel = hocolim_skeleton(A)
    el = category_of_elements(A.diagram())
    assert validate(skel) == []
    # same number of components, and the same H1 on the length-2 component
    assert len(components(nerve(skel, 1))) == len(components(nerve(el, 1)))
    i_el = next(i for i, (k, (p, r)) in enumerate(el.objects) if p == 2)
    i_sk = next(i for i, (k, (p, r)) in enumerate(skel.objects) if p == 2)
    got_el = classifying_space_h1(el, i_el)
    got_sk = classifying_space_h1(skel, i_sk, full=True)
    assert str(got_el) == str(got_sk) == "Z/2"


# -- presented commutative monoids -------------------------------------------


def test_fp_monoid_unit_status_with_witness():
    m = FPCommMonoid(["a", "b"], [((0, 1), ())])
    assert m.unit_status(0, 4) == ("yes", (1,))
    assert m.unit_status(1, 4) == ("yes", (0,))


def test_fp_monoid_unit_status_unknown_without_relations():
    m = FPCommMonoid(["a"], [])
    assert m.unit_status(0, 6) == ("unknown", None)


def test_fp_monoid_saturation_respects_length_bound():
    m = FPCommMonoid(["a", "b"], [((0,), (0, 0, 1))])
    assert m.saturate((0,), 3) == {(0,), (0, 0, 1)}


# -- restriction along the diagonal ------------------------------------------


def test_restrict_along_delta(free11):
    R = restrict_along_delta(free11)
    assert R.ops.category == "I"
    assert R.validate(exhaustive=True) == []
    assert [len(v) for v in R.values] == [1, 2, 8, 48]


def test_restrict_along_delta_needs_j_base():
    with pytest.raises(InputError):
        restrict_along_delta(restrict_along_delta(free_monoid(JObject(1, 1), 2)))
