"""Simplicial sets, Smith normal form, homology, and fundamental groups."""

import pytest
from hypothesis import given, settings, strategies as st

from corpus import CORPUS, from_facets
from jgamma.errors import InputError
from jgamma.topo import (
    AbelianInvariants,
    ColumnLatticeReducer,
    TruncatedSimplicialSet,
    abelianize,
    components,
    face_of,
    homology,
    invariant_factors_sparse,
    pi1_presentation,
    simplicial_circle_map,
    smith_normal_form,
)


# -- Smith normal form ------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-9, 9), min_size=1, max_size=5),
        min_size=1,
        max_size=5,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_snf_certificates(rows):
    res = smith_normal_form(rows)
    res.verify()  # U A V = D, divisibility chain, unimodular certificates


def test_snf_known_matrices():
    assert smith_normal_form([[2, 0], [0, 4]]).invariant_factors() == [2, 4]
    assert smith_normal_form([[1, 2], [3, 4]]).invariant_factors() == [1, 2]
    # invariant factors multiply to |det| = 624 here
    res = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert res.invariant_factors() == [2, 2, 156]


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-6, 6), min_size=1, max_size=4),
        min_size=1,
        max_size=4,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_sparse_invariant_factors_agree_with_dense(rows):
    dense = [d for d in smith_normal_form(rows).invariant_factors() if d]
    cols = []
    for j in range(len(rows[0])):
        col = {i: rows[i][j] for i in range(len(rows)) if rows[i][j]}
        if col:
            cols.append(col)
    sparse = [d for d in invariant_factors_sparse(cols) if d]
    assert dense == sparse


def test_column_reducer_rank():
    red = ColumnLatticeReducer()
    red.add_column({0: 1, 1: 2})
    red.add_column({0: 2, 1: 4})  # dependent
    red.add_column({2: 3})
    assert red.rank == 2


# -- homology and pi1 on the corpus -----------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_h1_oracles(name):
    facets, expected = CORPUS[name]
    X = from_facets(facets)
    assert not X.check_simplicial_identities()
    assert len(components(X)) == 1
    assert str(homology(X, 1)) == expected


def test_sphere_h2():
    X = from_facets(CORPUS["sphere"][0], dim=3)
    assert homology(X, 2) == AbelianInvariants(1, ())
    assert homology(X, 0) == AbelianInvariants(1, ())


def test_torus_h2_and_h0():
    X = from_facets(CORPUS["torus"][0], dim=3)
    assert homology(X, 2) == AbelianInvariants(1, ())
    assert homology(X, 0) == AbelianInvariants(1, ())


def test_projective_plane_h2_vanishes():
    X = from_facets(CORPUS["projective_plane"][0], dim=3)
    assert homology(X, 2) == AbelianInvariants(0, ())


def test_homology_needs_one_extra_dimension():
    X = from_facets(CORPUS["circle"][0], dim=1)
    with pytest.raises(InputError):
        homology(X, 1)


def test_disconnected_components():
    X = from_facets([(0, 1), (2, 3)], dim=1)
    assert len(components(X)) == 2


def test_pi1_circle_is_free_of_rank_one():
    X = from_facets(CORPUS["circle"][0])
    pres = pi1_presentation(X)
    assert str(abelianize(pres)) == "Z"


def test_pi1_projective_plane():
    X = from_facets(CORPUS["projective_plane"][0])
    assert str(abelianize(pi1_presentation(X))) == "Z/2"


# -- serialization and face operators ---------------------------------------


def test_json_round_trip():
    X = from_facets(CORPUS["torus"][0])
    Y = TruncatedSimplicialSet.from_json(X.to_json())
    assert Y.dim == X.dim
    assert Y.simplices == X.simplices
    assert Y.faces == X.faces
    assert Y.to_json() == X.to_json()


def test_total_cells_counts_degeneracies():
    X = from_facets([(0, 1)], dim=1)  # one edge, two vertices
    assert X.total_cells(0) == 2
    assert X.total_cells(1) == 1 + 2  # the edge plus two degenerate vertices


def test_face_of_degenerate_expressions():
    X = from_facets([(0, 1)], dim=1)
    # d_0 s_0 v = v and d_1 s_0 v = v for each vertex
    for v in range(2):
        assert face_of(X, 1, (v, (0,)), 0) == (v, ())
        assert face_of(X, 1, (v, (0,)), 1) == (v, ())


# -- simplicial circle ------------------------------------------------------


def test_circle_levels_and_identities():
    # d_i on level m hits level m-1; the two outer faces collapse the arc
    assert simplicial_circle_map(1, "face", 0) == {0: 0, 1: 0}
    assert simplicial_circle_map(1, "face", 1) == {0: 0, 1: 0}
    assert simplicial_circle_map(2, "face", 1) == {0: 0, 1: 1, 2: 1}
    assert simplicial_circle_map(2, "degeneracy", 0) == {0: 0, 1: 2, 2: 3}
    assert simplicial_circle_map(2, "degeneracy", 2) == {0: 0, 1: 1, 2: 2}
    with pytest.raises(InputError):
        simplicial_circle_map(2, "face", 5)
    with pytest.raises(InputError):
        simplicial_circle_map(2, "twist", 0)


def test_circle_simplicial_identity_sample():
    # d_i d_j = d_{j-1} d_i for i < j, level 3 -> 1
    for j in range(1, 4):
        for i in range(j):
            dj = simplicial_circle_map(3, "face", j)
            di = simplicial_circle_map(2, "face", i)
            lhs = {k: di[dj[k]] for k in range(4)}
            di2 = simplicial_circle_map(3, "face", i)
            dj2 = simplicial_circle_map(2, "face", j - 1)
            rhs = {k: dj2[di2[k]] for k in range(4)}
            assert lhs == rhs
