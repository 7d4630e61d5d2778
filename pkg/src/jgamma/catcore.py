"""Finite categories by enumeration: validation, functors, categories of
elements, truncated nerves, and H1 of classifying spaces.

Composition is stored lazily behind a callable plus a memo table, so that
large truncations (e.g. windows of J) never materialize the full
composition table unless asked to serialize.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .errors import InputError, InternalCheckError

__all__ = [
    "PresentedCategory",
    "SetValuedDiagram",
    "CatFunctor",
    "validate",
    "category_of_elements",
    "nerve",
    "product_category",
    "pi0_coequalizer",
    "generating_morphisms",
    "classifying_space_h1",
]


class PresentedCategory:
    """A small category given by indexed object tags and morphism triples.

    morphisms[i] = (dom index, cod index, payload). Composition is given
    either as an explicit dict {(g, f): gf} or as a callable on payloads
    returning the composite payload; results are memoized either way.
    """

    def __init__(
        self,
        objects,
        morphisms,
        identities,
        compose_payload=None,
        table=None,
        compose_pair=None,
    ):
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.identities = list(identities)
        for d, c, _ in self.morphisms:
            if not (isinstance(d, int) and isinstance(c, int)):
                raise InputError("morphism endpoints must be object indices")
            if not (0 <= d < len(self.objects) and 0 <= c < len(self.objects)):
                raise InputError("morphism endpoint index out of range")
        if len(self.identities) != len(self.objects):
            raise InputError("one identity per object required")
        self._compose_payload = compose_payload
        self._compose_pair = compose_pair
        self._table: dict[tuple[int, int], int] = dict(table) if table else {}
        self._index: dict[tuple[int, int, Any], int] = {
            (d, c, p): i for i, (d, c, p) in enumerate(self.morphisms)
        }
        if len(self._index) != len(self.morphisms):
            raise InputError("duplicate morphism triple")
        self._homs: dict[tuple[int, int], list[int]] = {}

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def dom(self, i: int) -> int:
        return self.morphisms[i][0]

    def cod(self, i: int) -> int:
        return self.morphisms[i][1]

    def payload(self, i: int):
        return self.morphisms[i][2]

    def is_identity(self, i: int) -> bool:
        return self.identities[self.dom(i)] == i

    def morphism_index(self, dom: int, cod: int, payload) -> int:
        key = (dom, cod, payload)
        if key not in self._index:
            raise InputError("morphism not present in category")
        return self._index[key]

    def compose(self, g: int, f: int) -> int:
        """Composite g after f, as a morphism index."""
        if self.cod(f) != self.dom(g):
            raise InputError("morphisms not composable")
        key = (g, f)
        if key in self._table:
            return self._table[key]
        if self._compose_pair is not None:
            idx = self._compose_pair(g, f)
        elif self._compose_payload is not None:
            payload = self._compose_payload(self.payload(g), self.payload(f))
            idx = self.morphism_index(self.dom(f), self.cod(g), payload)
        else:
            raise InputError("composition table incomplete and no compose rule given")
        self._table[key] = idx
        return idx

    def hom(self, a: int, b: int) -> list[int]:
        key = (a, b)
        if key not in self._homs:
            by_pair: dict[tuple[int, int], list[int]] = {}
            for i, (d, c, _) in enumerate(self.morphisms):
                by_pair.setdefault((d, c), []).append(i)
            self._homs = by_pair
        return self._homs.get(key, [])

    def morphisms_from(self, a: int) -> list[int]:
        return [i for i in range(self.n_morphisms) if self.dom(i) == a]

    def composable_pairs(self) -> Iterable[tuple[int, int]]:
        """All (g, f) with cod(f) = dom(g)."""
        by_dom: dict[int, list[int]] = {}
        for i in range(self.n_morphisms):
            by_dom.setdefault(self.dom(i), []).append(i)
        for f in range(self.n_morphisms):
            for g in by_dom.get(self.cod(f), ()):
                yield (g, f)

    def n_composable_pairs(self) -> int:
        by_dom: dict[int, int] = {}
        for i in range(self.n_morphisms):
            by_dom[self.dom(i)] = by_dom.get(self.dom(i), 0) + 1
        return sum(by_dom.get(self.cod(f), 0) for f in range(self.n_morphisms))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        """Exhaustive JSON encoding (materializes the composition table)."""
        table = [
            [g, f, self.compose(g, f)] for (g, f) in sorted(self.composable_pairs())
        ]
        doc = {
            "schema": "jgamma/presented-category/1",
            "objects": self.objects,
            "morphisms": [[d, c, p] for (d, c, p) in self.morphisms],
            "identities": self.identities,
            "composition": table,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PresentedCategory":
        doc = json.loads(text)
        if doc.get("schema") != "jgamma/presented-category/1":
            raise InputError("unknown schema for PresentedCategory")
        morphisms = [(d, c, _freeze(p)) for d, c, p in doc["morphisms"]]
        table = {(g, f): gf for g, f, gf in doc["composition"]}
        objs = [_freeze(o) for o in doc["objects"]]
        return cls(objs, morphisms, doc["identities"], table=table)


def _freeze(x):
    """JSON round-trips lists; payloads are hashable tuples internally."""
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


@dataclass
class CatFunctor:
    """A functor between two presented categories, by index tables."""

    source: PresentedCategory
    target: PresentedCategory
    object_map: list[int]
    morphism_map: list[int]

    def check(self, sample: Optional[int] = None, seed: int = 0) -> list[str]:
        errs = []
        for i in range(self.source.n_morphisms):
            j = self.morphism_map[i]
            if self.target.dom(j) != self.object_map[self.source.dom(i)]:
                errs.append(f"dom not preserved at morphism {i}")
            if self.target.cod(j) != self.object_map[self.source.cod(i)]:
                errs.append(f"cod not preserved at morphism {i}")
        for o in range(self.source.n_objects):
            if self.morphism_map[self.source.identities[o]] != self.target.identities[self.object_map[o]]:
                errs.append(f"identity not preserved at object {o}")
        pairs = list(self.source.composable_pairs())
        if sample is not None and len(pairs) > sample:
            pairs = random.Random(seed).sample(pairs, sample)
        for g, f in pairs:
            lhs = self.morphism_map[self.source.compose(g, f)]
            rhs = self.target.compose(self.morphism_map[g], self.morphism_map[f])
            if lhs != rhs:
                errs.append(f"composition not preserved at pair ({g},{f})")
        return errs


@dataclass
class SetValuedDiagram:
    """A functor from a presented category to finite sets, with discrete values."""

    base: PresentedCategory
    values: list[list[Any]]
    action: list[dict]  # per morphism index: element -> element

    def check(self) -> list[str]:
        errs = []
        C = self.base
        for i in range(C.n_morphisms):
            src, dst = set(self.values[C.dom(i)]), set(self.values[C.cod(i)])
            act = self.action[i]
            if set(act) != src or not set(act.values()) <= dst:
                errs.append(f"action of morphism {i} is not a map of value sets")
        for o in range(C.n_objects):
            ident = self.action[C.identities[o]]
            if any(ident[x] != x for x in self.values[o]):
                errs.append(f"identity acts nontrivially at object {o}")
        for g, f in C.composable_pairs():
            gf = C.compose(g, f)
            for x in self.values[C.dom(f)]:
                if self.action[gf][x] != self.action[g][self.action[f][x]]:
                    errs.append(f"functoriality fails at pair ({g},{f})")
                    break
        return errs


def validate(
    C: PresentedCategory,
    pair_threshold: int = 100_000,
    sample_triples: int = 10_000,
    seed: int = 0,
) -> list[str]:
    """Category-axiom report; empty iff no violation found.

    Associativity is exhaustive up to pair_threshold composable pairs and
    sampled (sample_triples random composable triples) beyond that.
    """
    report = []
    for o in range(C.n_objects):
        i = C.identities[o]
        if C.dom(i) != o or C.cod(i) != o:
            report.append(f"identity of object {o} is not an endomorphism")
    for f in range(C.n_morphisms):
        if C.compose(f, C.identities[C.dom(f)]) != f:
            report.append(f"right identity law fails for morphism {f}")
        if C.compose(C.identities[C.cod(f)], f) != f:
            report.append(f"left identity law fails for morphism {f}")
    n_pairs = C.n_composable_pairs()
    if n_pairs <= pair_threshold:
        by_dom: dict[int, list[int]] = {}
        for i in range(C.n_morphisms):
            by_dom.setdefault(C.dom(i), []).append(i)
        for g, f in C.composable_pairs():
            gf = C.compose(g, f)
            for h in by_dom.get(C.cod(g), ()):
                if C.compose(h, gf) != C.compose(C.compose(h, g), f):
                    report.append(f"associativity fails at triple ({h},{g},{f})")
    else:
        rng = random.Random(seed)
        by_dom = {}
        for i in range(C.n_morphisms):
            by_dom.setdefault(C.dom(i), []).append(i)
        checked = 0
        while checked < sample_triples:
            f = rng.randrange(C.n_morphisms)
            gs = by_dom.get(C.cod(f))
            if not gs:
                continue
            g = rng.choice(gs)
            hs = by_dom.get(C.cod(g))
            if not hs:
                continue
            h = rng.choice(hs)
            if C.compose(h, C.compose(g, f)) != C.compose(C.compose(h, g), f):
                report.append(f"associativity fails at sampled triple ({h},{g},{f})")
            checked += 1
    return report


def category_of_elements(X: SetValuedDiagram) -> PresentedCategory:
    """The Grothendieck construction of a set-valued diagram.

    Objects are tags (base object index, element); a morphism
    (k,x) -> (l,y) is any base morphism f: k -> l with f.x = y, with the
    base morphism index as payload.
    """
    errs = X.check()
    if errs:
        raise InputError("diagram is not functorial: " + "; ".join(errs[:3]))
    C = X.base
    objects = []
    obj_index = {}
    for o in range(C.n_objects):
        for x in X.values[o]:
            obj_index[(o, x)] = len(objects)
            objects.append((o, x))
    morphisms = []
    for i in range(C.n_morphisms):
        d = C.dom(i)
        for x in X.values[d]:
            morphisms.append((obj_index[(d, x)], obj_index[(C.cod(i), X.action[i][x])], i))
    identities = [0] * len(objects)
    idx = {(d, c, p): k for k, (d, c, p) in enumerate(morphisms)}
    for (o, x), k in obj_index.items():
        identities[k] = idx[(k, k, C.identities[o])]

    cat = PresentedCategory(objects, morphisms, identities)

    def compose_pair(g: int, f: int) -> int:
        base = C.compose(cat.payload(g), cat.payload(f))
        return idx[(cat.dom(f), cat.cod(g), base)]

    cat._compose_pair = compose_pair
    return cat


def pi0_coequalizer(X: SetValuedDiagram) -> list[set]:
    """colim of pi0 of a discrete diagram, by coequalizing the action directly.

    Independent oracle for components of the nerve of the category of
    elements; works on the disjoint union of value sets with union-find.
    """
    C = X.base
    parent: dict[tuple[int, Any], tuple[int, Any]] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for o in range(C.n_objects):
        for x in X.values[o]:
            parent[(o, x)] = (o, x)
    for i in range(C.n_morphisms):
        d, c = C.dom(i), C.cod(i)
        for x in X.values[d]:
            union((d, x), (c, X.action[i][x]))
    classes: dict[tuple[int, Any], set] = {}
    for a in parent:
        classes.setdefault(find(a), set()).add(a)
    return list(classes.values())


def nerve(C: PresentedCategory, d: int):
    """Truncated nerve of C, materializing only nondegenerate simplices.

    n-simplices are composable chains (f1,...,fn) of non-identity
    morphisms; an inner face whose composite is an identity is recorded
    as a degeneracy of the shorter chain.
    """
    from .topo import TruncatedSimplicialSet

    if d < 1:
        raise InputError("nerve truncation dimension must be >= 1")
    simplices: list[list] = [list(range(C.n_objects))]
    nonid = [i for i in range(C.n_morphisms) if not C.is_identity(i)]
    by_dom: dict[int, list[int]] = {}
    for i in nonid:
        by_dom.setdefault(C.dom(i), []).append(i)
    chains = [(i,) for i in nonid]
    simplices.append(chains)
    for n in range(2, d + 1):
        nxt = []
        for c in simplices[n - 1]:
            nxt.extend(c + (g,) for g in by_dom.get(C.cod(c[-1]), ()))
        simplices.append(nxt)

    index = [
        {s: i for i, s in enumerate(level)} if n > 0 else None
        for n, level in enumerate(simplices)
    ]
    faces: list[list] = [[]]
    # edges: d_0 = cod, d_1 = dom
    faces.append([((C.cod(f), ()), (C.dom(f), ())) for (f,) in simplices[1]])
    for n in range(2, d + 1):
        level_faces = []
        for chain in simplices[n]:
            fs = []
            for i in range(n + 1):
                if i == 0:
                    fs.append((index[n - 1][chain[1:]], ()))
                elif i == n:
                    fs.append((index[n - 1][chain[:-1]], ()))
                else:
                    comp = C.compose(chain[i], chain[i - 1])
                    if C.is_identity(comp):
                        reduced = chain[: i - 1] + chain[i + 1 :]
                        if n - 2 == 0:
                            fs.append((C.dom(comp), (i - 1,)))
                        else:
                            fs.append((index[n - 2][reduced], (i - 1,)))
                    else:
                        merged = chain[: i - 1] + (comp,) + chain[i + 1 :]
                        fs.append((index[n - 1][merged], ()))
            level_faces.append(tuple(fs))
        faces.append(level_faces)
    return TruncatedSimplicialSet(d, simplices, faces)


def product_category(C: PresentedCategory, D: PresentedCategory) -> PresentedCategory:
    objects = [(a, b) for a in range(C.n_objects) for b in range(D.n_objects)]
    obj_index = {t: i for i, t in enumerate(objects)}
    morphisms = []
    for i in range(C.n_morphisms):
        for j in range(D.n_morphisms):
            morphisms.append(
                (
                    obj_index[(C.dom(i), D.dom(j))],
                    obj_index[(C.cod(i), D.cod(j))],
                    (i, j),
                )
            )
    identities = []
    midx = {(d, c, p): k for k, (d, c, p) in enumerate(morphisms)}
    for a, b in objects:
        k = obj_index[(a, b)]
        identities.append(midx[(k, k, (C.identities[a], D.identities[b]))])

    def compose_payload(gp, fp):
        return (C.compose(gp[0], fp[0]), D.compose(gp[1], fp[1]))

    return PresentedCategory(objects, morphisms, identities, compose_payload)


def full_subcategory(C: PresentedCategory, object_indices: list[int]) -> PresentedCategory:
    """The full subcategory on the given objects, composing via C."""
    keep = list(dict.fromkeys(object_indices))
    new_of_old = {o: i for i, o in enumerate(keep)}
    objects = [C.objects[o] for o in keep]
    morphisms = []
    old_of_new_mor = []
    mor_index: dict[int, int] = {}
    for i in range(C.n_morphisms):
        d, c = C.dom(i), C.cod(i)
        if d in new_of_old and c in new_of_old:
            mor_index[i] = len(morphisms)
            old_of_new_mor.append(i)
            morphisms.append((new_of_old[d], new_of_old[c], C.payload(i)))
    identities = [mor_index[C.identities[o]] for o in keep]

    cat = PresentedCategory(objects, morphisms, identities)

    def compose_pair(g: int, f: int) -> int:
        return mor_index[C.compose(old_of_new_mor[g], old_of_new_mor[f])]

    cat._compose_pair = compose_pair
    return cat


def generating_morphisms(C: PresentedCategory, objects: Optional[set[int]] = None) -> list[int]:
    """A (non-minimal but usually small) composition-generating set.

    Greedy: walk the non-identity morphisms in index order, adding one to
    the generating set whenever it is not a composite of earlier picks,
    and closing under composition after each pick.
    """
    if objects is None:
        objects = set(range(C.n_objects))
    pool = [
        i
        for i in range(C.n_morphisms)
        if not C.is_identity(i) and C.dom(i) in objects and C.cod(i) in objects
    ]
    generated: set[int] = set()
    by_dom: dict[int, list[int]] = {}
    by_cod: dict[int, list[int]] = {}
    gens: list[int] = []
    for m in pool:
        if m in generated:
            continue
        gens.append(m)
        frontier = [m]
        generated.add(m)
        while frontier:
            new = []
            for f in frontier:
                for g in by_dom.get(C.cod(f), ()):
                    h = C.compose(g, f)
                    if not C.is_identity(h) and h not in generated:
                        generated.add(h)
                        new.append(h)
                for e in by_cod.get(C.dom(f), ()):
                    h = C.compose(f, e)
                    if not C.is_identity(h) and h not in generated:
                        generated.add(h)
                        new.append(h)
            for f in new:
                by_dom.setdefault(C.dom(f), []).append(f)
                by_cod.setdefault(C.cod(f), []).append(f)
            frontier = new
        by_dom.setdefault(C.dom(m), []).append(m)
        by_cod.setdefault(C.cod(m), []).append(m)
    return gens


def classifying_space_h1(
    C: PresentedCategory,
    component_of: int,
    generators: Optional[list[int]] = None,
    full: bool = False,
):
    """H1 of the classifying space of the component of C containing an object.

    The normalized degree-2 boundary image is spanned by the columns
    d([f|g]) = [f] - [g.f] + [g]. When a composition-generating set is
    supplied (or computed) and full=False, only columns with g a
    generator are fed to the reduction; the exact identity
    d([f|g2.g1]) = d([f|g1]) + d([g1.f|g2]) - d([g1|g2]) expresses every
    other column inside that span (induction on the factorization length
    of g), so the image lattice is unchanged.
    """
    from .topo import AbelianInvariants, ColumnLatticeReducer, invariant_factors_sparse

    # component objects via union-find on morphisms
    comp = {component_of}
    changed = True
    adj: dict[int, set[int]] = {}
    for i in range(C.n_morphisms):
        adj.setdefault(C.dom(i), set()).add(C.cod(i))
        adj.setdefault(C.cod(i), set()).add(C.dom(i))
    while changed:
        changed = False
        for o in list(comp):
            for p in adj.get(o, ()):
                if p not in comp:
                    comp.add(p)
                    changed = True
    edges = [
        i
        for i in range(C.n_morphisms)
        if not C.is_identity(i) and C.dom(i) in comp
    ]
    edge_row = {e: r for r, e in enumerate(edges)}
    n_edges = len(edges)
    by_dom: dict[int, list[int]] = {}
    for e in edges:
        by_dom.setdefault(C.dom(e), []).append(e)

    if full:
        seconds = by_dom
    else:
        if generators is None:
            generators = generating_morphisms(C, comp)
        seconds = {}
        for g in generators:
            seconds.setdefault(C.dom(g), []).append(g)

    reducer = ColumnLatticeReducer()
    for f in edges:
        for g in seconds.get(C.cod(f), ()):
            gf = C.compose(g, f)
            col: dict[int, int] = {}
            for e, s in ((f, 1), (g, 1)):
                col[edge_row[e]] = col.get(edge_row[e], 0) + s
            if not C.is_identity(gf):
                r = edge_row[gf]
                col[r] = col.get(r, 0) - 1
            col = {r: v for r, v in col.items() if v}
            if col:
                reducer.add_column(col)

    rank2 = reducer.rank
    torsion = [x for x in invariant_factors_sparse(reducer.basis_columns()) if x > 1]
    # boundary_1 rank = (#vertices in component) - (#components restricted) = |comp| - 1
    rank1 = len(comp) - 1
    free_rank = n_edges - rank1 - rank2
    return AbelianInvariants(free_rank, tuple(torsion))
