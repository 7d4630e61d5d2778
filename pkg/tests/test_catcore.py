"""Presented categories, nerves, diagrams, and element categories."""

import pytest

from jgamma.catcore import (
    CatFunctor,
    PresentedCategory,
    SetValuedDiagram,
    category_of_elements,
    classifying_space_h1,
    full_subcategory,
    generating_morphisms,
    nerve,
    pi0_coequalizer,
    product_category,
    validate,
)
from jgamma.errors import InputError
from jgamma.topo import AbelianInvariants, components, homology


def cyclic_group_category(n: int) -> PresentedCategory:
    """One object whose endomorphisms are Z/n."""
    morphisms = [(0, 0, g) for g in range(n)]
    table = {
        (g, f): (g + f) % n for g in range(n) for f in range(n)
    }
    return PresentedCategory([0], morphisms, [0], table=table)


def arrow_category() -> PresentedCategory:
    """Two objects and a single non-identity arrow between them."""
    morphisms = [(0, 0, "id0"), (1, 1, "id1"), (0, 1, "f")]
    table = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}
    return PresentedCategory([0, 1], morphisms, [0, 1], table=table)


# -- construction and validation --------------------------------------------


def test_duplicate_morphism_triple_rejected():
    with pytest.raises(InputError):
        PresentedCategory([0], [(0, 0, "e"), (0, 0, "e")], [0])


def test_validate_accepts_group_category():
    assert validate(cyclic_group_category(4)) == []


def test_validate_reports_broken_identity():
    # point the identity at the wrong morphism
    C = PresentedCategory(
        [0], [(0, 0, 0), (0, 0, 1)], [1], table={(i, j): (i + j) % 2 for i in range(2) for j in range(2)}
    )
    assert validate(C) != []


def test_compose_requires_matching_endpoints():
    C = arrow_category()
    with pytest.raises(InputError):
        C.compose(2, 2)  # f after f is not composable


def test_missing_composite_is_an_error():
    C = PresentedCategory([0, 1, 2], [(0, 0, "a"), (1, 1, "b"), (2, 2, "c"), (0, 1, "f"), (1, 2, "g")], [0, 1, 2], table={})
    with pytest.raises(InputError):
        C.compose(4, 3)


def test_morphism_index_unknown():
    C = arrow_category()
    with pytest.raises(InputError):
        C.morphism_index(0, 1, "missing")


# -- nerve and classifying spaces -------------------------------------------


def test_nerve_of_arrow_is_contractible_interval():
    X = nerve(arrow_category(), 2)
    assert X.n_cells(0) == 2 and X.n_cells(1) == 1 and X.n_cells(2) == 0
    assert len(components(X)) == 1
    assert not X.check_simplicial_identities()


def test_nerve_counts_cyclic_group():
    n = 3
    X = nerve(cyclic_group_category(n), 3)
    # nondegenerate chains of non-identity morphisms
    assert [X.n_cells(m) for m in range(4)] == [1, n - 1, (n - 1) ** 2, (n - 1) ** 3]
    assert not X.check_simplicial_identities()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_group_h1_is_the_abelianization(n):
    # H_1(BG) = G^ab for the cyclic groups
    inv = classifying_space_h1(cyclic_group_category(n), component_of=0)
    assert inv == AbelianInvariants(0, (n,))


def test_h1_generator_reduction_matches_full():
    C = cyclic_group_category(4)
    assert classifying_space_h1(C, 0) == classifying_space_h1(C, 0, full=True)


def test_nerve_homology_of_group_category():
    # H_1 via the simplicial pipeline agrees with the streamed reduction
    X = nerve(cyclic_group_category(3), 2)
    assert homology(X, 1) == AbelianInvariants(0, (3,))


# -- products, subcategories, generators ------------------------------------


def test_product_category_counts_and_validation():
    C, D = arrow_category(), cyclic_group_category(2)
    P = product_category(C, D)
    assert P.n_objects == C.n_objects * D.n_objects
    assert P.n_morphisms == C.n_morphisms * D.n_morphisms
    assert validate(P) == []


def test_full_subcategory_restricts():
    C = arrow_category()
    S = full_subcategory(C, [0])
    assert S.n_objects == 1 and S.n_morphisms == 1
    assert validate(S) == []


def test_generating_morphisms_generate():
    C = cyclic_group_category(6)
    gens = generating_morphisms(C)
    # close the picked set under composition and recover everything
    seen = set(gens) | {C.identities[0]}
    changed = True
    while changed:
        changed = False
        for g in list(seen):
            for f in list(seen):
                gf = C.compose(g, f)
                if gf not in seen:
                    seen.add(gf)
                    changed = True
    assert seen == set(range(C.n_morphisms))


# -- diagrams, elements, pi0 ------------------------------------------------


def z2_action_diagram():
    C = cyclic_group_category(2)
    values = [["a", "b", "c"]]
    swap = {"a": "b", "b": "a", "c": "c"}
    action = [{x: x for x in values[0]}, swap]
    return SetValuedDiagram(C, values, action)


def test_diagram_check_catches_nonfunctorial():
    C = cyclic_group_category(2)
    bad = SetValuedDiagram(C, [["a", "b"]], [{"a": "a", "b": "b"}, {"a": "a", "b": "a"}])
    assert bad.check() != []


def test_pi0_coequalizer_orbits():
    classes = pi0_coequalizer(z2_action_diagram())
    as_sets = sorted(sorted(x for _, x in c) for c in classes)
    assert as_sets == [["a", "b"], ["c"]]


def test_category_of_elements_shape():
    X = z2_action_diagram()
    el = category_of_elements(X)
    assert el.n_objects == 3
    # one element morphism per (base morphism, source element)
    assert el.n_morphisms == 6
    assert validate(el) == []
    # components of the element category match the orbit count
    assert len(components(nerve(el, 1))) == 2


def test_functor_check_detects_bad_map():
    C = arrow_category()
    F = CatFunctor(C, C, [0, 1], [0, 1, 2])
    assert F.check() == []
    bad = CatFunctor(C, C, [1, 0], [0, 1, 2])
    assert bad.check() != []
