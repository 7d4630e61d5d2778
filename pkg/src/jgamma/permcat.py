"""The permutative indexing categories I (finite sets and injections),
Sigma (finite sets and bijections), and J (pairs of injections with a
matched-up complement bijection), with finite truncations.

A J-morphism (m1,m2) -> (n1,n2) exists only when n1-m1 = n2-m2 and is a
triple (beta1, beta2, sigma) with sigma a bijection from the complement
of beta1 to the complement of beta2, stored as a table keyed by the
ascending complement of beta1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from . import combinat as cb
from .catcore import CatFunctor, PresentedCategory
from .combinat import Injection
from .errors import InputError, WindowError

__all__ = [
    "JObject",
    "JMorphism",
    "degree",
    "j_identity",
    "j_compose",
    "j_homset",
    "j_homset_size",
    "j_product",
    "j_symmetry",
    "truncate",
    "PermutativeOps",
    "permutative_ops",
    "diagonal_functor",
]


@dataclass(frozen=True)
class JObject:
    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise InputError("object coordinates must be natural numbers")


def degree(x: JObject) -> int:
    return x.m2 - x.m1


@dataclass(frozen=True)
class JMorphism:
    """(beta1, beta2, sigma): sigma[i] is the image in complement(beta2) of
    the i-th smallest element of complement(beta1)."""

    beta1: Injection
    beta2: Injection
    sigma: tuple[int, ...]

    def __post_init__(self):
        d1 = self.beta1.codomain_size - self.beta1.domain_size
        d2 = self.beta2.codomain_size - self.beta2.domain_size
        if d1 != d2:
            raise InputError("degree not preserved: complements differ in size")
        comp2 = set(cb.complement(self.beta2))
        if len(self.sigma) != d1 or set(self.sigma) != comp2:
            raise InputError("sigma is not a bijection onto the second complement")

    @property
    def dom(self) -> JObject:
        return JObject(self.beta1.domain_size, self.beta2.domain_size)

    @property
    def cod(self) -> JObject:
        return JObject(self.beta1.codomain_size, self.beta2.codomain_size)

    def sigma_map(self) -> dict[int, int]:
        return dict(zip(cb.complement(self.beta1), self.sigma))

    @property
    def is_identity(self) -> bool:
        return (
            self.beta1.is_identity
            and self.beta2.is_identity
            and self.sigma == ()
        )

    def payload(self) -> tuple:
        return (self.beta1.values, self.beta2.values, self.sigma)

    def to_json(self) -> str:
        doc = {
            "schema": "jgamma/j-morphism/1",
            "dom": [self.dom.m1, self.dom.m2],
            "cod": [self.cod.m1, self.cod.m2],
            "beta1": list(self.beta1.values),
            "beta2": list(self.beta2.values),
            "sigma": list(self.sigma),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "JMorphism":
        doc = json.loads(text)
        if doc.get("schema") != "jgamma/j-morphism/1":
            raise InputError("unknown schema for JMorphism")
        (m1, m2), (n1, n2) = doc["dom"], doc["cod"]
        return cls(
            Injection(m1, n1, tuple(doc["beta1"])),
            Injection(m2, n2, tuple(doc["beta2"])),
            tuple(doc["sigma"]),
        )


def j_from_payload(dom: JObject, cod: JObject, payload: tuple) -> JMorphism:
    b1, b2, sig = payload
    return JMorphism(
        Injection(dom.m1, cod.m1, tuple(b1)),
        Injection(dom.m2, cod.m2, tuple(b2)),
        tuple(sig),
    )


def j_identity(x: JObject) -> JMorphism:
    return JMorphism(cb.identity(x.m1), cb.identity(x.m2), ())


def j_compose(second: JMorphism, first: JMorphism) -> JMorphism:
    """second after first; the complement bijection is sigma U beta2.rho.beta1^{-1}."""
    if first.cod != second.dom:
        raise InputError("J-morphisms not composable")
    b1 = cb.compose(second.beta1, first.beta1)
    b2 = cb.compose(second.beta2, first.beta2)
    sig_outer = second.sigma_map()
    rho = first.sigma_map()
    img_beta1 = second.beta1.image()
    # invert second.beta1 on its image
    beta1_inv = {v: i + 1 for i, v in enumerate(second.beta1.values)}
    out = []
    for x in cb.complement(b1):
        if x not in img_beta1:
            out.append(sig_outer[x])
        else:
            out.append(second.beta2(rho[beta1_inv[x]]))
    return JMorphism(b1, b2, tuple(out))


def j_compose_payload(
    dom: tuple[int, int], mid: tuple[int, int], cod: tuple[int, int], gp: tuple, fp: tuple
) -> tuple:
    """Payload-level j_compose for hot loops; no validation, no object churn.

    dom/mid/cod are (m1, m2) size pairs of the three objects involved.
    """
    gb1, gb2, gsig = gp
    fb1, fb2, fsig = fp
    b1 = tuple(gb1[v - 1] for v in fb1)
    b2 = tuple(gb2[v - 1] for v in fb2)
    n1 = cod[0]
    img_g1 = set(gb1)
    comp_g1 = [v for v in range(1, n1 + 1) if v not in img_g1]
    sig_outer = dict(zip(comp_g1, gsig))
    img_f1 = set(fb1)
    comp_f1 = [v for v in range(1, mid[0] + 1) if v not in img_f1]
    rho = dict(zip(comp_f1, fsig))
    inv = {v: i + 1 for i, v in enumerate(gb1)}
    img_b1 = set(b1)
    out = []
    for x in range(1, n1 + 1):
        if x in img_b1:
            continue
        if x not in inv:
            out.append(sig_outer[x])
        else:
            out.append(gb2[rho[inv[x]] - 1])
    return (b1, b2, tuple(out))


def j_homset_size(a: JObject, b: JObject) -> int:
    if degree(a) != degree(b) or b.m1 < a.m1 or b.m2 < a.m2:
        return 0
    k = b.m1 - a.m1
    return (
        math.factorial(b.m1)
        // math.factorial(k)
        * (math.factorial(b.m2) // math.factorial(k))
        * math.factorial(k)
    )


def j_homset(a: JObject, b: JObject) -> list[JMorphism]:
    """All J-morphisms a -> b, lexicographic in the (beta1, beta2, sigma) tables."""
    if degree(a) != degree(b) or b.m1 < a.m1 or b.m2 < a.m2:
        return []
    out = []
    for b1 in cb.all_injections(a.m1, b.m1):
        for b2 in cb.all_injections(a.m2, b.m2):
            comp2 = cb.complement(b2)
            for sig in itertools.permutations(comp2):
                out.append(JMorphism(b1, b2, sig))
    return out


def j_product(x, y):
    """Monoidal product: concatenation on objects, block sums on morphisms."""
    if isinstance(x, JObject) and isinstance(y, JObject):
        return JObject(x.m1 + y.m1, x.m2 + y.m2)
    if isinstance(x, JMorphism) and isinstance(y, JMorphism):
        b1 = cb.block_sum(x.beta1, y.beta1)
        b2 = cb.block_sum(x.beta2, y.beta2)
        shift1 = x.beta1.codomain_size
        shift2 = x.beta2.codomain_size
        sx = x.sigma_map()
        sy = y.sigma_map()
        sig = tuple(
            sx[v] if v <= shift1 else shift2 + sy[v - shift1]
            for v in cb.complement(b1)
        )
        return JMorphism(b1, b2, sig)
    raise InputError("j_product needs two objects or two morphisms")


def j_symmetry(a: JObject, b: JObject) -> JMorphism:
    """The block shuffle a (+) b -> b (+) a in J."""
    return JMorphism(cb.shuffle(a.m1, b.m1), cb.shuffle(a.m2, b.m2), ())


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------


def _truncate_injective(
    bound: int, bijective_only: bool, objects: Optional[list[int]] = None
) -> PresentedCategory:
    objects = list(range(bound + 1)) if objects is None else list(objects)
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = []
    for m in objects:
        for n in objects:
            if bijective_only and m != n:
                continue
            for f in cb.all_injections(m, n):
                morphisms.append((obj_index[m], obj_index[n], f.values))
    midx = {t: i for i, t in enumerate(morphisms)}
    identities = [
        midx[(i, i, tuple(range(1, m + 1)))] for i, m in enumerate(objects)
    ]

    def compose_payload(gp, fp):
        return tuple(gp[v - 1] for v in fp)

    return PresentedCategory(objects, morphisms, identities, compose_payload)


def _truncate_j(bound: int, objects: Optional[list[JObject]] = None) -> PresentedCategory:
    if objects is None:
        objects = [
            JObject(m1, m2) for m1 in range(bound + 1) for m2 in range(bound + 1)
        ]
    else:
        objects = list(objects)
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = []
    for a in objects:
        for b in objects:
            for f in j_homset(a, b):
                morphisms.append((obj_index[a], obj_index[b], f.payload()))
    midx = {t: i for i, t in enumerate(morphisms)}
    identities = [
        midx[(i, i, j_identity(o).payload())] for i, o in enumerate(objects)
    ]

    cat = PresentedCategory(objects, morphisms, identities)
    sizes = [(o.m1, o.m2) for o in objects]

    def compose_pair(g: int, f: int) -> int:
        gd, gc = cat.dom(g), cat.cod(g)
        fd = cat.dom(f)
        pay = j_compose_payload(
            sizes[fd], sizes[gd], sizes[gc], cat.payload(g), cat.payload(f)
        )
        return midx[(fd, gc, pay)]

    cat._compose_pair = compose_pair
    return cat


def truncate(
    category: str, bound: int, objects: Optional[list] = None
) -> PresentedCategory:
    """Full subcategory of I, J, or Sigma on objects with coordinates <= bound.

    An explicit object list restricts to that full subwindow without
    materializing the rest of the truncation."""
    if bound < 0:
        raise InputError("bound must be >= 0")
    if category == "I":
        return _truncate_injective(bound, bijective_only=False, objects=objects)
    if category in ("Sigma", "S"):
        return _truncate_injective(bound, bijective_only=True, objects=objects)
    if category == "J":
        return _truncate_j(bound, objects=objects)
    raise InputError(f"unknown category {category!r}; expected I, J, or Sigma")


class PermutativeOps:
    """The strict symmetric monoidal structure of a truncation, partial on
    the window: products landing outside raise WindowError."""

    def __init__(self, category: str, bound: int, cat: PresentedCategory):
        self.category = category
        self.bound = bound
        self.cat = cat
        self._obj_index = {o: i for i, o in enumerate(cat.objects)}
        self._midx = {t: i for i, t in enumerate(cat.morphisms)}

    @property
    def unit(self) -> int:
        return self._check_obj(JObject(0, 0) if self.category == "J" else 0)

    def _check_obj(self, o):
        key = o
        if key not in self._obj_index:
            raise WindowError(f"object {o} outside the bound-{self.bound} window")
        return self._obj_index[key]

    def _mor(self, d: int, c: int, payload) -> int:
        key = (d, c, payload)
        if key not in self._midx:
            raise WindowError("morphism outside the enumerated window")
        return self._midx[key]

    def product_obj(self, a: int, b: int) -> int:
        oa, ob = self.cat.objects[a], self.cat.objects[b]
        if self.category == "J":
            return self._check_obj(j_product(oa, ob))
        return self._check_obj(oa + ob)

    def product_mor(self, i: int, j: int) -> int:
        cat = self.cat
        if self.category == "J":
            objs = cat.objects
            fm = j_from_payload(objs[cat.dom(i)], objs[cat.cod(i)], cat.payload(i))
            gm = j_from_payload(objs[cat.dom(j)], objs[cat.cod(j)], cat.payload(j))
            prod = j_product(fm, gm)
            d = self._check_obj(prod.dom)
            c = self._check_obj(prod.cod)
            return self._mor(d, c, prod.payload())
        f = Injection(cat.objects[cat.dom(i)], cat.objects[cat.cod(i)], cat.payload(i))
        g = Injection(cat.objects[cat.dom(j)], cat.objects[cat.cod(j)], cat.payload(j))
        prod = cb.block_sum(f, g)
        d = self._check_obj(prod.domain_size)
        c = self._check_obj(prod.codomain_size)
        return self._mor(d, c, prod.values)

    def symmetry(self, a: int, b: int) -> int:
        oa, ob = self.cat.objects[a], self.cat.objects[b]
        if self.category == "J":
            chi = j_symmetry(oa, ob)
            c = self._check_obj(chi.cod)
            return self._mor(self.product_obj(a, b), c, chi.payload())
        chi = cb.shuffle(oa, ob)
        c = self._check_obj(chi.codomain_size)
        return self._mor(self.product_obj(a, b), c, chi.values)


def permutative_ops(category: str, bound: int) -> PermutativeOps:
    return PermutativeOps(category, bound, truncate(category, bound))


def diagonal_functor(bound: int) -> CatFunctor:
    """m |-> (m,m), alpha |-> (alpha, alpha, identity on the complement)."""
    I = truncate("I", bound)
    J = truncate("J", bound)
    j_obj = {o: i for i, o in enumerate(J.objects)}
    j_mor = {t: i for i, t in enumerate(J.morphisms)}
    object_map = [j_obj[JObject(m, m)] for m in I.objects]
    morphism_map = []
    for d, c, values in I.morphisms:
        alpha = Injection(d, c, values)
        comp = cb.complement(alpha)
        payload = (values, values, comp)
        morphism_map.append(j_mor[(object_map[d], object_map[c], payload)])
    return CatFunctor(I, J, object_map, morphism_map)
