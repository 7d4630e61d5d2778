"""Tabulated commutative monoids over truncated permutative categories:
free monoids on one generator, box products, pi0 of homotopy colimits,
unit detection, grouplike tests, and degree maps.

All statements are window-relative: operations never extrapolate beyond
the enumerated objects, and unit detection reports UNKNOWN rather than
guessing when the saturation bound is hit.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from typing import Any, Optional

from .catcore import PresentedCategory, SetValuedDiagram, pi0_coequalizer
from .errors import InputError, InternalCheckError, WindowError
from .permcat import (
    JObject,
    PermutativeOps,
    degree,
    j_compose,
    j_compose_payload,
    j_from_payload,
    j_homset,
    j_identity,
    j_product,
    j_symmetry,
    truncate,
)

__all__ = [
    "TabulatedMonoid",
    "FPCommMonoid",
    "Pi0Table",
    "free_monoid",
    "sparse_window_ops",
    "terminal_monoid",
    "boxtimes",
    "pi0_hocolim",
    "unit_monoid",
    "units_submonoid",
    "grouplike_check",
    "degree_homomorphism",
    "restrict_along_delta",
    "hocolim_skeleton",
]


class TabulatedMonoid:
    """A finite tabulation of a commutative monoid over a permutative window.

    values[k] is the finite value set at object index k; action[i] maps
    value(dom(i)) to value(cod(i)); mult[(k,l)] maps pairs into the value
    at k (+) l and is present only when that product is in the window.
    A monoid with mult=None is treated as a plain tabulated space.
    """

    def __init__(self, ops: PermutativeOps, values, action, mult, unit):
        self.ops = ops
        self.cat = ops.cat
        self.values = [list(v) for v in values]
        self.action = list(action)
        self.mult = mult
        self.unit = unit
        if len(self.values) != self.cat.n_objects:
            raise InputError("one value set per object required")
        if len(self.action) != self.cat.n_morphisms:
            raise InputError("one action table per morphism required")
        if mult is not None and unit not in self.values[ops.unit]:
            raise InputError("unit element missing from the unit object's value set")

    def diagram(self) -> SetValuedDiagram:
        return SetValuedDiagram(self.cat, self.values, self.action)

    def object_of(self, k: int):
        return self.cat.objects[k]

    def validate(self, exhaustive: bool = True) -> list[str]:
        errs = self.diagram().check()
        if self.mult is None:
            return errs
        ops = self.ops
        for (k, l), table in self.mult.items():
            try:
                kl = ops.product_obj(k, l)
            except WindowError:
                errs.append(f"mult at ({k},{l}) given but product leaves window")
                continue
            want = {(a, b) for a in self.values[k] for b in self.values[l]}
            if set(table) != want or not set(table.values()) <= set(self.values[kl]):
                errs.append(f"mult at ({k},{l}) is not a total map into value(k+l)")
        # unit laws
        u = ops.unit
        for k in range(self.cat.n_objects):
            for pair, other in (((u, k), 1), ((k, u), 0)):
                table = self.mult.get(pair)
                if table is None:
                    continue
                for a in self.values[k]:
                    args = (self.unit, a) if other == 1 else (a, self.unit)
                    if table[args] != a:
                        errs.append(f"unit law fails at object {k}")
                        break
        # associativity where all four products are tabulated
        for (k, l), t_kl in self.mult.items():
            for m in range(self.cat.n_objects):
                try:
                    kl = self.ops.product_obj(k, l)
                    lm = self.ops.product_obj(l, m)
                except WindowError:
                    continue
                t_kl_m = self.mult.get((kl, m))
                t_lm = self.mult.get((l, m))
                t_k_lm = self.mult.get((k, lm)) if t_lm is not None else None
                if t_kl_m is None or t_k_lm is None:
                    continue
                for a in self.values[k]:
                    for b in self.values[l]:
                        for c in self.values[m]:
                            if t_kl_m[(t_kl[(a, b)], c)] != t_k_lm[(a, t_lm[(b, c)])]:
                                errs.append(
                                    f"associativity fails at objects ({k},{l},{m})"
                                )
                if errs and not exhaustive:
                    return errs
        # twisted commutativity: chi . mult(a,b) = mult(b,a)
        for (k, l), t_kl in self.mult.items():
            t_lk = self.mult.get((l, k))
            if t_lk is None:
                continue
            try:
                chi = self.ops.symmetry(k, l)
            except WindowError:
                continue
            for a in self.values[k]:
                for b in self.values[l]:
                    if self.action[chi][t_kl[(a, b)]] != t_lk[(b, a)]:
                        errs.append(f"commutativity twist fails at ({k},{l})")
                        break
        return errs

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "schema": "jgamma/tabulated-monoid/1",
            "category": self.ops.category,
            "bound": self.ops.bound,
            "objects": [
                [o.m1, o.m2] if isinstance(o, JObject) else o
                for o in self.cat.objects
            ],
            "values": [[_plain(x) for x in v] for v in self.values],
            "action": [
                [[_plain(a), _plain(b)] for a, b in sorted(t.items())]
                for t in self.action
            ],
            "mult": [
                [k, l, [[_plain(a), _plain(b), _plain(c)] for (a, b), c in sorted(t.items())]]
                for (k, l), t in sorted(self.mult.items())
            ]
            if self.mult is not None
            else None,
            "unit": _plain(self.unit),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, ops: PermutativeOps) -> "TabulatedMonoid":
        doc = json.loads(text)
        if doc.get("schema") != "jgamma/tabulated-monoid/1":
            raise InputError("unknown schema for TabulatedMonoid")
        if doc["category"] != ops.category or doc["bound"] != ops.bound:
            raise InputError("window mismatch between document and category")
        values = [[_freeze(x) for x in v] for v in doc["values"]]
        action = [
            {_freeze(a): _freeze(b) for a, b in t} for t in doc["action"]
        ]
        mult = None
        if doc["mult"] is not None:
            mult = {
                (k, l): {(_freeze(a), _freeze(b)): _freeze(c) for a, b, c in t}
                for k, l, t in doc["mult"]
            }
        return cls(ops, values, action, mult, _freeze(doc["unit"]))


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    return x


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def _orbit_rep_payload(g: JObject, p: int, pay: tuple) -> tuple:
    """Lexicographically least payload under block permutations of g^{(+)p}.

    Precomposing with a block permutation (a bijection) leaves the sigma
    table untouched and only rearranges the beta tables blockwise.
    """
    if p <= 1:
        return pay
    b1, b2, sig = pay
    best = pay
    for perm in itertools.permutations(range(p)):
        c1 = tuple(b1[perm[i] * g.m1 + t] for i in range(p) for t in range(g.m1))
        c2 = tuple(b2[perm[i] * g.m2 + t] for i in range(p) for t in range(g.m2))
        cand = (c1, c2, sig)
        if cand < best:
            best = cand
    return best


def _orbit_rep(g: JObject, p: int, f) -> tuple:
    return _orbit_rep_payload(g, p, f.payload())


def free_monoid(
    generator: JObject,
    bound: int,
    objects: Optional[list[JObject]] = None,
    base: Optional[PermutativeOps] = None,
) -> TabulatedMonoid:
    """The free commutative monoid on one generator, tabulated over a window.

    The value at l is the disjoint union over p >= 0 of the orbit sets
    Hom(generator^{(+)p}, l) / Sigma_p, with Sigma_p acting by block
    permutations; orbit representatives are the lexicographically least
    morphism tables. Action is postcomposition, mult is concatenation.
    An explicit object list restricts to that full subwindow.
    """
    g = generator
    if g.m1 == 0 and g.m2 == 0:
        raise InputError("generator (0,0) gives an infinite tabulation")
    if g.m1 > bound or g.m2 > bound:
        raise WindowError("window too small to contain the generator")
    if g.m1 < 1:
        warnings.warn("generator with m1 = 0: symmetric-group actions are not free")
    if base is None:
        cat = truncate("J", bound, objects=objects)
        ops = PermutativeOps("J", bound, cat)
    else:
        ops = base
        cat = ops.cat

    p_max = 0
    while (p_max + 1) * max(g.m1, g.m2, 1) <= bound:
        p_max += 1

    values = []
    for l in cat.objects:
        vals = []
        for p in range(p_max + 1):
            gp = JObject(p * g.m1, p * g.m2)
            reps = sorted({_orbit_rep(g, p, f) for f in j_homset(gp, l)})
            vals.extend((p, r) for r in reps)
        values.append(vals)

    sizes = [(o.m1, o.m2) for o in cat.objects]
    action = []
    for i in range(cat.n_morphisms):
        d, c = cat.dom(i), cat.cod(i)
        hp = cat.payload(i)
        table = {}
        for p, r in values[d]:
            comp = j_compose_payload(
                (p * g.m1, p * g.m2), sizes[d], sizes[c], hp, r
            )
            table[(p, r)] = (p, _orbit_rep_payload(g, p, comp))
        action.append(table)

    mult = {}
    for k in range(cat.n_objects):
        for l in range(cat.n_objects):
            try:
                kl = ops.product_obj(k, l)
            except WindowError:
                continue
            table = {}
            for p, r in values[k]:
                fp = j_from_payload(JObject(p * g.m1, p * g.m2), cat.objects[k], r)
                for q, s in values[l]:
                    fq = j_from_payload(JObject(q * g.m1, q * g.m2), cat.objects[l], s)
                    prod = j_product(fp, fq)
                    table[((p, r), (q, s))] = (p + q, _orbit_rep(g, p + q, prod))
            mult[(k, l)] = table

    try:
        ops.unit
        unit = (0, ((), (), ()))
    except WindowError:
        # a window without (0,0) carries no unit: plain tabulated space
        mult, unit = None, None
    return TabulatedMonoid(ops, values, action, mult, unit)


def sparse_window_ops(
    bound: int, objects: list[JObject], sparse: list[JObject] = ()
) -> PermutativeOps:
    """A J-window with full homs among `objects` but only coherence
    endomorphisms at each object of `sparse`.

    At a sparse object the window carries the monoid generated by the
    block symmetries of its splittings into window objects, plus the
    identity. Tabulating a monoid over such a window keeps its values
    and multiplication intact while avoiding the action tables of the
    full endomorphism monoid, which can be enormous."""
    dense = list(objects)
    allobj = dense + [o for o in sparse if o not in dense]
    for o in allobj:
        if o.m1 > bound or o.m2 > bound:
            raise WindowError(f"object {o} outside the bound-{bound} window")
    oidx = {o: i for i, o in enumerate(allobj)}
    if len(oidx) != len(allobj):
        raise InputError("duplicate window object")
    sizes = [(o.m1, o.m2) for o in allobj]
    mors: list[tuple] = []
    for a in dense:
        for b in dense:
            for f in j_homset(a, b):
                mors.append((oidx[a], oidx[b], f.payload()))
    for o in sparse:
        if o in dense:
            continue
        sz = (o.m1, o.m2)
        endos = {j_identity(o).payload()}
        for a in allobj:
            for b in allobj:
                if j_product(a, b) == o:
                    endos.add(j_symmetry(a, b).payload())
        changed = True
        while changed:
            changed = False
            for p in list(endos):
                for q in list(endos):
                    r = j_compose_payload(sz, sz, sz, p, q)
                    if r not in endos:
                        endos.add(r)
                        changed = True
        mors.extend((oidx[o], oidx[o], p) for p in sorted(endos))
    midx = {t: i for i, t in enumerate(mors)}
    identities = [midx[(i, i, j_identity(o).payload())] for i, o in enumerate(allobj)]
    cat = PresentedCategory(allobj, mors, identities)

    def compose_pair(g: int, f: int) -> int:
        pay = j_compose_payload(
            sizes[cat.dom(f)],
            sizes[cat.cod(f)],
            sizes[cat.cod(g)],
            cat.payload(g),
            cat.payload(f),
        )
        return midx[(cat.dom(f), cat.cod(g), pay)]

    cat._compose_pair = compose_pair
    return PermutativeOps("J", bound, cat)


def unit_monoid(bound: int) -> TabulatedMonoid:
    """The unit of the box product: l -> Hom((0,0), l), mult by concatenation."""
    cat = truncate("J", bound)
    ops = PermutativeOps("J", bound, cat)
    sizes = [(o.m1, o.m2) for o in cat.objects]
    values = [[f.payload() for f in j_homset(JObject(0, 0), l)] for l in cat.objects]
    action = []
    for i in range(cat.n_morphisms):
        d, c = cat.dom(i), cat.cod(i)
        hp = cat.payload(i)
        action.append(
            {r: j_compose_payload((0, 0), sizes[d], sizes[c], hp, r) for r in values[d]}
        )
    mult = {}
    for k in range(cat.n_objects):
        for l in range(cat.n_objects):
            try:
                ops.product_obj(k, l)
            except WindowError:
                continue
            table = {}
            for a in values[k]:
                fa = j_from_payload(JObject(0, 0), cat.objects[k], a)
                for b in values[l]:
                    fb = j_from_payload(JObject(0, 0), cat.objects[l], b)
                    table[(a, b)] = j_product(fa, fb).payload()
            mult[(k, l)] = table
    return TabulatedMonoid(ops, values, action, mult, ((), (), ()))


def terminal_monoid(category: str = "J", bound: int = 2) -> TabulatedMonoid:
    """The terminal monoid: a single point at every object."""
    cat = truncate(category, bound)
    ops = PermutativeOps(category, bound, cat)
    values = [["*"] for _ in range(cat.n_objects)]
    action = [{"*": "*"} for _ in range(cat.n_morphisms)]
    mult = {}
    for k in range(cat.n_objects):
        for l in range(cat.n_objects):
            try:
                ops.product_obj(k, l)
            except WindowError:
                continue
            mult[(k, l)] = {("*", "*"): "*"}
    return TabulatedMonoid(ops, values, action, mult, "*")


def boxtimes(A: TabulatedMonoid, B: TabulatedMonoid) -> TabulatedMonoid:
    """Box product: the left Kan extension of value_A x value_B along (+).

    The value at k is the set of components of the decomposition category
    over k: tuples (k1, k2, phi: k1 (+) k2 -> k, a, b) up to the action
    of morphism pairs. The induced multiplication is attempted via the
    middle symmetry; entries the window cannot express are omitted
    (mult is dropped entirely when either factor is a plain space).
    """
    if A.ops.category != B.ops.category or A.ops.bound != B.ops.bound:
        raise InputError("box product requires a shared base window")
    if A.cat is not B.cat and A.cat.objects != B.cat.objects:
        raise InputError("box product requires the same underlying window")
    ops = A.ops
    cat = A.cat

    # decomposition items per object, with union-find over morphism pairs
    decomps = {}  # k -> list of (k1, k2, phi_idx)
    for k in range(cat.n_objects):
        items = []
        for phi in range(cat.n_morphisms):
            if cat.cod(phi) != k:
                continue
            l = cat.dom(phi)
            for k1 in range(cat.n_objects):
                for k2 in range(cat.n_objects):
                    try:
                        if ops.product_obj(k1, k2) == l:
                            items.append((k1, k2, phi))
                    except WindowError:
                        pass
        decomps[k] = items

    parent: dict[tuple, tuple] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for k in range(cat.n_objects):
        for k1, k2, phi in decomps[k]:
            for a in A.values[k1]:
                for b in B.values[k2]:
                    parent[(k, k1, k2, phi, a, b)] = (k, k1, k2, phi, a, b)
    for k in range(cat.n_objects):
        for k1, k2, phi in decomps[k]:
            for u in cat.morphisms_from(k1):
                for v in cat.morphisms_from(k2):
                    try:
                        w = ops.product_mor(u, v)
                    except WindowError:
                        continue
                    for psi in cat.hom(cat.cod(w), k):
                        if cat.compose(psi, w) != phi:
                            continue
                        for a in A.values[k1]:
                            for b in B.values[k2]:
                                union(
                                    (k, k1, k2, phi, a, b),
                                    (k, cat.cod(u), cat.cod(v), psi,
                                     A.action[u][a], B.action[v][b]),
                                )

    classes: dict[tuple, list[tuple]] = {}
    for x in parent:
        classes.setdefault(find(x), []).append(x)
    rep_of = {}
    for members in classes.values():
        rep = min(members)
        for x in members:
            rep_of[x] = rep
    values = [sorted({rep_of[x] for x in parent if x[0] == k}) for k in range(cat.n_objects)]

    action = []
    for h in range(cat.n_morphisms):
        d, c = cat.dom(h), cat.cod(h)
        table = {}
        for rep in values[d]:
            _, k1, k2, phi, a, b = rep
            table[rep] = rep_of[(c, k1, k2, cat.compose(h, phi), a, b)]
        action.append(table)

    mult = None
    unit = None
    if A.mult is not None and B.mult is not None:
        mult, unit = _boxtimes_mult(A, B, values, rep_of)
    return TabulatedMonoid(ops, values, action, mult, unit)


def _boxtimes_mult(A, B, values, rep_of):
    ops, cat = A.ops, A.cat
    objs = cat.objects
    midx = {t: i for i, t in enumerate(cat.morphisms)}

    def as_j(i):
        return j_from_payload(objs[cat.dom(i)], objs[cat.cod(i)], cat.payload(i))

    mult = {}
    for k in range(cat.n_objects):
        for l in range(cat.n_objects):
            try:
                kl = ops.product_obj(k, l)
            except WindowError:
                continue
            table = {}
            ok = True
            for x in values[k]:
                _, k1, k2, phi, a, b = x
                for y in values[l]:
                    _, l1, l2, psi, c, d = y
                    ta = A.mult.get((k1, l1))
                    tb = B.mult.get((k2, l2))
                    if ta is None or tb is None:
                        ok = False
                        break
                    try:
                        k1l1 = ops.product_obj(k1, l1)
                        k2l2 = ops.product_obj(k2, l2)
                        # xi = (phi (+) psi) . (id (+) chi_{l1,k2} (+) id)
                        shuffle = j_product(
                            j_product(j_identity(objs[k1]), j_symmetry(objs[l1], objs[k2])),
                            j_identity(objs[l2]),
                        )
                        big = j_product(as_j(phi), as_j(psi))
                        xi = j_compose(big, shuffle)
                        xi_idx = midx[
                            (ops.product_obj(k1l1, k2l2), kl, xi.payload())
                        ]
                    except (WindowError, KeyError):
                        ok = False
                        break
                    table[(x, y)] = rep_of[
                        (kl, k1l1, k2l2, xi_idx, ta[(a, c)], tb[(b, d)])
                    ]
                if not ok:
                    break
            if ok:
                mult[(k, l)] = table

    u = ops.unit
    unit_item = (u, u, u, cat.identities[u], A.unit, B.unit)
    unit = rep_of.get(unit_item)
    if unit is None:
        return None, None
    return mult, unit


# ---------------------------------------------------------------------------
# pi0 and units
# ---------------------------------------------------------------------------


@dataclass
class FPCommMonoid:
    """A finitely presented commutative monoid.

    Words are sorted tuples of generator indices; relations are pairs of
    words declared equal. The word problem is attacked by bounded
    bidirectional saturation only, never guessed beyond the bound.
    """

    generators: list[str]
    relations: list[tuple[tuple[int, ...], tuple[int, ...]]]

    def _neighbors(self, word: tuple[int, ...], max_len: int):
        for a, b in self.relations:
            for lhs, rhs in ((a, b), (b, a)):
                rest = list(word)
                ok = True
                for x in lhs:
                    if x in rest:
                        rest.remove(x)
                    else:
                        ok = False
                        break
                if ok and len(rest) + len(rhs) <= max_len:
                    yield tuple(sorted(rest + list(rhs)))

    def saturate(self, start: tuple[int, ...], max_len: int) -> set[tuple[int, ...]]:
        """All words equivalent to start reachable within the length bound."""
        seen = {tuple(sorted(start))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for w in frontier:
                for w2 in self._neighbors(w, max_len):
                    if w2 not in seen:
                        seen.add(w2)
                        nxt.append(w2)
            frontier = nxt
        return seen

    def unit_status(self, i: int, max_len: int) -> tuple[str, Optional[tuple[int, ...]]]:
        """('yes', witness-word) when some w with i + w ~ empty is found,
        ('unknown', None) otherwise."""
        for w in self.saturate((), max_len):
            if i in w:
                rest = list(w)
                rest.remove(i)
                return "yes", tuple(rest)
        return "unknown", None


@dataclass
class Pi0Table:
    """pi0 of the homotopy colimit of a tabulated monoid, with its window
    multiplication table and presentation."""

    classes: list[list[tuple[int, Any]]]  # members (object index, element)
    class_of: dict[tuple[int, Any], int]
    unit_class: Optional[int]
    table: dict[tuple[int, int], int]  # defined products on classes
    monoid: FPCommMonoid
    warnings: list[str] = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return len(self.classes)


def pi0_hocolim(A: TabulatedMonoid) -> Pi0Table:
    """Components of the category of elements, with induced multiplication.

    The product of two classes is computed from every in-window pair of
    representatives; disagreement is an internal error, absence of any
    in-window pair leaves the product undefined (reported).
    """
    raw = pi0_coequalizer(A.diagram())
    classes = sorted((sorted(c) for c in raw), key=lambda c: c[0])
    class_of = {m: i for i, c in enumerate(classes) for m in c}
    unit_class = None
    if A.unit is not None:
        unit_class = class_of[(A.ops.unit, A.unit)]
    table: dict[tuple[int, int], int] = {}
    warns: list[str] = []
    if A.mult is not None:
        ops = A.ops
        for i, ci in enumerate(classes):
            for j, cj in enumerate(classes):
                results = set()
                for (k, a) in ci:
                    for (l, b) in cj:
                        t = A.mult.get((k, l))
                        if t is None:
                            continue
                        kl = ops.product_obj(k, l)
                        results.add(class_of[(kl, t[(a, b)])])
                if len(results) > 1:
                    raise InternalCheckError(
                        f"pi0 multiplication ill-defined on classes ({i},{j})"
                    )
                if results:
                    table[(i, j)] = results.pop()
                else:
                    warns.append(f"product of classes ({i},{j}) leaves the window")
    names = [f"c{i}" for i in range(len(classes))]
    relations = [((i, j), (k,)) for (i, j), k in table.items()]
    if unit_class is not None:
        relations.append((((unit_class,), ())))
    monoid = FPCommMonoid(names, relations)
    return Pi0Table(classes, class_of, unit_class, table, monoid, warns)


def _unit_statuses(A: TabulatedMonoid, pi0: Pi0Table, max_len: Optional[int] = None):
    """Per-class invertibility: yes (witness), no (degree obstruction), unknown."""
    if max_len is None:
        max_len = 2 * pi0.n_classes + 2
    degs = None
    if isinstance(A.cat.objects[0], JObject):
        degs = [degree(A.cat.objects[c[0][0]]) for c in pi0.classes]
    statuses = {}
    for i in range(pi0.n_classes):
        status, witness = pi0.monoid.unit_status(i, max_len)
        if status == "unknown" and degs is not None:
            if -degs[i] not in degs:
                status = "no"
        statuses[i] = (status, witness)
    return statuses


def units_submonoid(A: TabulatedMonoid, max_len: Optional[int] = None):
    """The full sub-space on components with invertible pi0 class.

    Returns (monoid, report); report lists the per-class status, with
    UNKNOWN classes excluded conservatively.
    """
    pi0 = pi0_hocolim(A)
    statuses = _unit_statuses(A, pi0, max_len)
    keep = {i for i, (s, _) in statuses.items() if s == "yes"}
    values = [
        [x for x in A.values[k] if pi0.class_of[(k, x)] in keep]
        for k in range(A.cat.n_objects)
    ]
    action = []
    for i in range(A.cat.n_morphisms):
        d = A.cat.dom(i)
        action.append({x: A.action[i][x] for x in values[d]})
    mult = None
    if A.mult is not None:
        mult = {}
        for (k, l), t in A.mult.items():
            kl = A.ops.product_obj(k, l)
            sub = {}
            for a in values[k]:
                for b in values[l]:
                    c = t[(a, b)]
                    if pi0.class_of[(kl, c)] not in keep:
                        raise InternalCheckError("product of units left the unit part")
                    sub[(a, b)] = c
            mult[(k, l)] = sub
    sub = TabulatedMonoid(A.ops, values, action, mult, A.unit)
    report = {
        "classes": {i: s for i, (s, _) in statuses.items()},
        "kept": sorted(keep),
        "excluded_unknown": sorted(
            i for i, (s, _) in statuses.items() if s == "unknown"
        ),
    }
    return sub, report


def grouplike_check(A: TabulatedMonoid, max_len: Optional[int] = None):
    """Whether every pi0 class is invertible within the saturation bound.

    Returns (flag, certificate): inverses per class on success, the first
    failing class otherwise; plus a shear-map cross-check on the window
    multiplication grid ((x,y) -> (x, x+y) injective where defined).
    """
    pi0 = pi0_hocolim(A)
    statuses = _unit_statuses(A, pi0, max_len)
    cert: dict[str, Any] = {"window": A.ops.bound}
    shear = {}
    collision = None
    for (i, j), k in pi0.table.items():
        key = (i, k)
        if key in shear and shear[key] != j:
            collision = (i, j, shear[key])
        shear[key] = j
    cert["shear_injective"] = collision is None
    if collision is not None:
        cert["shear_collision"] = collision
    failing = [i for i, (s, _) in statuses.items() if s != "yes"]
    if failing:
        i = failing[0]
        cert["witness"] = {"class": i, "status": statuses[i][0]}
        return False, cert
    cert["inverses"] = {i: list(w) for i, (_, w) in statuses.items()}
    return True, cert


def degree_homomorphism(A: TabulatedMonoid) -> dict[int, int]:
    """pi0 class -> degree of its supporting objects; additive under mult."""
    if not isinstance(A.cat.objects[0], JObject):
        raise InputError("degree map requires a J-window base")
    pi0 = pi0_hocolim(A)
    degs = {}
    for i, c in enumerate(pi0.classes):
        ds = {degree(A.cat.objects[k]) for k, _ in c}
        if len(ds) != 1:
            raise InternalCheckError(f"pi0 class {i} spans several degrees")
        degs[i] = ds.pop()
    for (i, j), k in pi0.table.items():
        if degs[i] + degs[j] != degs[k]:
            raise InternalCheckError("degree map fails additivity")
    return degs


def hocolim_skeleton(A: TabulatedMonoid) -> PresentedCategory:
    """A skeleton of the category of elements of the underlying diagram.

    Requires every endomorphism in the window to be invertible (checked;
    InputError otherwise). Then two elements over the same object are
    isomorphic in the element category exactly when they lie in the same
    orbit of the automorphism action, so the full subcategory on one
    representative per orbit is a skeleton: its inclusion is an
    equivalence of categories and its classifying space is homotopy
    equivalent to the homotopy colimit. Dramatically smaller than the
    full element category when the window carries large automorphism
    groups."""
    cat = A.cat
    endos_by_obj: dict[int, list[int]] = {}
    for i in range(cat.n_morphisms):
        if cat.dom(i) == cat.cod(i):
            endos_by_obj.setdefault(cat.dom(i), []).append(i)
    for k, endos in endos_by_obj.items():
        for i in endos:
            if not any(
                cat.compose(j, i) == cat.identities[k]
                and cat.compose(i, j) == cat.identities[k]
                for j in endos
            ):
                raise InputError(
                    "window has a non-invertible endomorphism; the orbit "
                    "skeleton is not valid here"
                )
    reps: list[tuple[int, Any]] = []
    for k in range(cat.n_objects):
        endos = endos_by_obj.get(k, [])
        seen = set()
        for x in A.values[k]:
            orbit_min = min(A.action[g][x] for g in endos) if endos else x
            if orbit_min not in seen:
                seen.add(orbit_min)
                reps.append((k, x))
    obj_idx = {o: i for i, o in enumerate(reps)}
    mors = []
    for i in range(cat.n_morphisms):
        d, c = cat.dom(i), cat.cod(i)
        for (k, x) in reps:
            if k != d:
                continue
            y = A.action[i][x]
            if (c, y) in obj_idx:
                mors.append((obj_idx[(d, x)], obj_idx[(c, y)], i))
    midx = {m: n for n, m in enumerate(mors)}
    idents = [midx[(i, i, cat.identities[k])] for i, (k, _) in enumerate(reps)]
    skel = PresentedCategory(reps, mors, idents)

    def compose_pair(g: int, f: int) -> int:
        base = cat.compose(skel.payload(g), skel.payload(f))
        return midx[(skel.dom(f), skel.cod(g), base)]

    skel._compose_pair = compose_pair
    return skel


def restrict_along_delta(A: TabulatedMonoid) -> TabulatedMonoid:
    """Pull back along the diagonal m -> (m,m): values at (m,m), action
    via doubled injections, mult inherited."""
    if A.ops.category != "J":
        raise InputError("restriction along the diagonal needs a J-window")
    bound = A.ops.bound
    cat_I = truncate("I", bound)
    ops_I = PermutativeOps("I", bound, cat_I)
    j_obj = {o: i for i, o in enumerate(A.cat.objects)}
    j_mor = {t: i for i, t in enumerate(A.cat.morphisms)}
    diag_obj = {}
    for m in cat_I.objects:
        if JObject(m, m) not in j_obj:
            raise WindowError(f"diagonal object ({m},{m}) missing from the window")
        diag_obj[m] = j_obj[JObject(m, m)]
    values = [A.values[diag_obj[m]] for m in cat_I.objects]
    action = []
    for d, c, vals in cat_I.morphisms:
        from .combinat import Injection, complement

        comp = complement(Injection(d, c, vals))
        j_i = j_mor[(diag_obj[d], diag_obj[c], (vals, vals, comp))]
        action.append(dict(A.action[j_i]))
    mult = None
    if A.mult is not None:
        mult = {}
        for m in cat_I.objects:
            for n in cat_I.objects:
                if m + n > bound:
                    continue
                t = A.mult.get((diag_obj[m], diag_obj[n]))
                if t is not None:
                    mult[(m, n)] = dict(t)
    return TabulatedMonoid(ops_I, values, action, mult, A.unit)
