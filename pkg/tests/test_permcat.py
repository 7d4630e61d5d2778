"""The indexing categories I, J, Sigma: hom-sets, truncations, products."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from jgamma.catcore import validate
from jgamma.errors import InputError, WindowError
from jgamma.permcat import (
    JObject,
    degree,
    diagonal_functor,
    j_compose,
    j_compose_payload,
    j_homset,
    j_homset_size,
    j_identity,
    j_product,
    j_symmetry,
    permutative_ops,
    truncate,
)


# -- hom-sets ---------------------------------------------------------------


def test_homset_formula_small():
    for m1 in range(3):
        for m2 in range(3):
            for n1 in range(3):
                for n2 in range(3):
                    a, b = JObject(m1, m2), JObject(n1, n2)
                    homs = j_homset(a, b)
                    assert len(homs) == j_homset_size(a, b)
                    if degree(a) != degree(b):
                        assert homs == []


def test_homset_payloads_distinct():
    a, b = JObject(1, 2), JObject(2, 3)
    payloads = [f.payload() for f in j_homset(a, b)]
    assert len(set(payloads)) == len(payloads) == j_homset_size(a, b)


def test_homset_closed_formula_value():
    # |J((1,1),(2,2))| = 2 * 2 * 1 = 4, the worked example
    assert j_homset_size(JObject(1, 1), JObject(2, 2)) == 4


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_composition_associative_and_unital(data):
    # small coordinates: hom-set sizes grow factorially in both entries
    m1 = data.draw(st.integers(0, 1))
    a = JObject(m1, m1 + data.draw(st.integers(0, 1)))
    grow = lambda o, d1: JObject(o.m1 + d1, o.m2 + d1)
    b = grow(a, data.draw(st.integers(0, 1)))
    c = grow(b, data.draw(st.integers(0, 1)))
    d = grow(c, data.draw(st.integers(0, 1)))
    f = data.draw(st.sampled_from(j_homset(a, b)))
    g = data.draw(st.sampled_from(j_homset(b, c)))
    h = data.draw(st.sampled_from(j_homset(c, d)))
    assert j_compose(h, j_compose(g, f)) == j_compose(j_compose(h, g), f)
    assert j_compose(f, j_identity(a)) == f
    assert j_compose(j_identity(b), f) == f


def test_compose_payload_matches_object_level():
    a, b, c = JObject(1, 2), JObject(2, 3), JObject(3, 4)
    rng = random.Random(0)
    for _ in range(25):
        f = rng.choice(j_homset(a, b))
        g = rng.choice(j_homset(b, c))
        pay = j_compose_payload((a.m1, a.m2), (b.m1, b.m2), (c.m1, c.m2), g.payload(), f.payload())
        assert pay == j_compose(g, f).payload()


def test_compose_rejects_mismatch():
    f = j_homset(JObject(0, 0), JObject(1, 1))[0]
    with pytest.raises(InputError):
        j_compose(f, f)


# -- monoidal structure -----------------------------------------------------


def test_product_on_objects_is_addition():
    assert j_product(JObject(1, 2), JObject(2, 3)) == JObject(3, 5)


def test_product_interchange():
    a, b, c = JObject(0, 1), JObject(1, 2), JObject(1, 2)
    rng = random.Random(1)
    for _ in range(10):
        f = rng.choice(j_homset(a, b))
        g = rng.choice(j_homset(b, c))
        f2 = rng.choice(j_homset(a, b))
        g2 = rng.choice(j_homset(b, c))
        lhs = j_product(j_compose(g, f), j_compose(g2, f2))
        rhs = j_compose(j_product(g, g2), j_product(f, f2))
        assert lhs == rhs


def test_symmetry_is_an_involution():
    a, b = JObject(1, 2), JObject(2, 3)
    chi = j_symmetry(a, b)
    back = j_symmetry(b, a)
    assert j_compose(back, chi) == j_identity(j_product(a, b))


def test_symmetry_naturality():
    a, b = JObject(0, 1), JObject(1, 1)
    c, d = JObject(1, 2), JObject(2, 2)
    rng = random.Random(2)
    for _ in range(10):
        f = rng.choice(j_homset(a, c))
        g = rng.choice(j_homset(b, d))
        lhs = j_compose(j_symmetry(c, d), j_product(f, g))
        rhs = j_compose(j_product(g, f), j_symmetry(a, b))
        assert lhs == rhs


def test_degree_additive_under_product():
    a, b = JObject(1, 3), JObject(2, 2)
    assert degree(j_product(a, b)) == degree(a) + degree(b)


# -- truncations ------------------------------------------------------------


def test_truncate_j_object_count():
    C = truncate("J", 2)
    assert C.n_objects == 9
    assert validate(C) == []


def test_truncate_sigma_only_endomorphisms():
    C = truncate("Sigma", 3)
    for i in range(C.n_morphisms):
        assert C.dom(i) == C.cod(i)
    assert C.n_morphisms == sum(math.factorial(n) for n in range(4))


def test_truncate_i_morphism_count():
    C = truncate("I", 2)
    got = C.n_morphisms
    want = sum(
        math.factorial(n) // math.factorial(n - m)
        for m in range(3)
        for n in range(m, 3)
    )
    assert got == want


def test_truncate_restricted_objects_is_full_subwindow():
    objs = [JObject(0, 0), JObject(1, 2)]
    C = truncate("J", 2, objects=objs)
    assert C.objects == objs
    for a in objs:
        for b in objs:
            ai, bi = C.objects.index(a), C.objects.index(b)
            window = {
                C.payload(i)
                for i in range(C.n_morphisms)
                if C.dom(i) == ai and C.cod(i) == bi
            }
            assert window == {f.payload() for f in j_homset(a, b)}
    assert validate(C) == []


def test_truncate_unknown_category():
    with pytest.raises(InputError):
        truncate("Delta", 2)


# -- permutative operations on windows --------------------------------------


def test_ops_product_and_symmetry_in_window():
    ops = permutative_ops("J", 2)
    cat = ops.cat
    i11 = cat.objects.index(JObject(1, 1))
    assert cat.objects[ops.product_obj(i11, i11)] == JObject(2, 2)
    chi = ops.symmetry(i11, i11)
    assert cat.dom(chi) == cat.cod(chi) == cat.objects.index(JObject(2, 2))


def test_ops_window_exhaustion():
    ops = permutative_ops("J", 2)
    i22 = ops.cat.objects.index(JObject(2, 2))
    with pytest.raises(WindowError):
        ops.product_obj(i22, i22)


def test_diagonal_functor_is_functorial():
    F = diagonal_functor(3)
    assert F.check() == []
    for m, o in enumerate(F.source.objects):
        assert F.target.objects[F.object_map[m]] == JObject(o, o)
