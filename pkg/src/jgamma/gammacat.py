"""Finite based sets, the subset-indexed coherence category HK(S) over a
truncated permutative window, the Gamma-space b(K), and gamma(A) for
tabulated monoids.

Window design: singleton values are bounded by `bound`, while subset
values live in an ambient truncation of bound * |S-bar|, so unions of
in-window singletons always exist and the evaluation functor to the
product of singleton windows is genuinely full and essentially
surjective instead of failing at the window edge.

Isomorphic objects of the indexing windows are equal, so the subset
values are forced to be the iterated sums of the singleton values and
each coherence morphism sigma_{U,V} is an endomorphism-sized morphism
between literally equal objects.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .catcore import (
    CatFunctor,
    PresentedCategory,
    SetValuedDiagram,
    category_of_elements,
    nerve,
    product_category,
)
from .errors import InputError, InternalCheckError, WindowError
from .combinat import all_injections
from .permcat import JObject, j_compose_payload, j_homset, truncate
from .topo import TruncatedSimplicialSet, simplicial_circle_map

__all__ = [
    "BasedSet",
    "BasedMap",
    "HKObject",
    "HKMorphism",
    "HKWindow",
    "hk_category",
    "hk_pushforward",
    "hk_pushforward_morphism",
    "hk_pushforward_functor",
    "b_gamma",
    "element_category",
    "gamma_of_monoid",
    "gamma_structure_map",
    "gamma_structure_map_tabulated",
    "gamma_circle",
    "circle_based_map",
]


@dataclass(frozen=True)
class BasedSet:
    """The finite based set {0, 1, ..., k} with basepoint 0."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise InputError("based set size must be non-negative")


@dataclass(frozen=True)
class BasedMap:
    source: BasedSet
    target: BasedSet
    values: tuple[int, ...]  # images of 0..k, basepoint first

    def __post_init__(self):
        if len(self.values) != self.source.k + 1 or self.values[0] != 0:
            raise InputError("based map must fix the basepoint and be total")
        for v in self.values:
            if not 0 <= v <= self.target.k:
                raise InputError("based map value out of range")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def preimage_mask(self, mask: int) -> int:
        """Bitmask of non-base source elements landing in the masked subset."""
        out = 0
        for i in range(1, self.source.k + 1):
            v = self.values[i]
            if v != 0 and (mask >> (v - 1)) & 1:
                out |= 1 << (i - 1)
        return out

    def compose(self, other: "BasedMap") -> "BasedMap":
        """self after other."""
        if other.target != self.source:
            raise InputError("based maps not composable")
        return BasedMap(
            other.source, self.target, tuple(self.values[v] for v in other.values)
        )

    @staticmethod
    def identity(s: "BasedSet") -> "BasedMap":
        return BasedMap(s, s, tuple(range(s.k + 1)))


def circle_based_map(m: int, kind: str, i: int) -> BasedMap:
    """A face or degeneracy of the simplicial circle as a based map from m+."""
    table = simplicial_circle_map(m, kind, i)
    target = BasedSet(m - 1 if kind == "face" else m + 1)
    return BasedMap(BasedSet(m), target, tuple(table[j] for j in range(m + 1)))


def _disjoint_pairs(k: int) -> list[tuple[int, int]]:
    n = 1 << k
    return [(u, v) for u in range(n) for v in range(n) if u & v == 0]


_PAIR_INDEX_CACHE: dict[int, dict[tuple[int, int], int]] = {}


def _pair_index(k: int) -> dict[tuple[int, int], int]:
    if k not in _PAIR_INDEX_CACHE:
        _PAIR_INDEX_CACHE[k] = {p: i for i, p in enumerate(_disjoint_pairs(k))}
    return _PAIR_INDEX_CACHE[k]


@dataclass(frozen=True)
class HKObject:
    """Subset-indexed window values with coherence morphisms.

    s[mask] is the value at the subset with that bitmask; sigma is
    indexed by the ordered disjoint pairs in _disjoint_pairs(kbar) and
    stores morphism payloads s_U (+) s_V -> s_{U|V} (equal objects)."""

    kbar: int
    s: tuple
    sigma: tuple

    def sigma_at(self, u: int, v: int):
        return self.sigma[_pair_index(self.kbar)[(u, v)]]


@dataclass(frozen=True)
class HKMorphism:
    """A subset-indexed family of window morphism payloads."""

    f: tuple


# -- payload helpers shared by the window categories ------------------------


def _obj_sum(category: str, a, b):
    if category == "J":
        return JObject(a.m1 + b.m1, a.m2 + b.m2)
    return a + b


def _unit_obj(category: str):
    return JObject(0, 0) if category == "J" else 0


def _id_payload(category: str, o):
    if category == "J":
        return (tuple(range(1, o.m1 + 1)), tuple(range(1, o.m2 + 1)), ())
    return tuple(range(1, o + 1))


def _compose_pay(category: str, a, b, c, gp, fp):
    """g after f on payloads; a, b, c are dom(f), cod(f) = dom(g), cod(g)."""
    if category == "J":
        return j_compose_payload((a.m1, a.m2), (b.m1, b.m2), (c.m1, c.m2), gp, fp)
    return tuple(gp[v - 1] for v in fp)


def _block_sum_pay(category: str, f_cod, fp, gp):
    """f (+) g on payloads; f_cod is the codomain of f (the only endpoint
    the shift amounts depend on)."""
    if category == "J":
        b1, b2, s1 = fp
        g1, g2, s2 = gp
        return (
            b1 + tuple(v + f_cod.m1 for v in g1),
            b2 + tuple(v + f_cod.m2 for v in g2),
            s1 + tuple(v + f_cod.m2 for v in s2),
        )
    return fp + tuple(v + f_cod for v in gp)


def _shuffle_pay(category: str, a, b):
    """The symmetry a (+) b -> b (+) a as a payload."""
    if category == "J":
        return (
            tuple(range(b.m1 + 1, a.m1 + b.m1 + 1)) + tuple(range(1, b.m1 + 1)),
            tuple(range(b.m2 + 1, a.m2 + b.m2 + 1)) + tuple(range(1, b.m2 + 1)),
            (),
        )
    return tuple(range(b + 1, a + b + 1)) + tuple(range(1, b + 1))


def _invert_pay(category: str, pay):
    """Inverse of an isomorphism payload (bijective tables, empty complement)."""
    if category == "J":
        b1, b2, sig = pay
        if sig:
            raise InternalCheckError("cannot invert a payload with a complement")
        inv1 = [0] * len(b1)
        inv2 = [0] * len(b2)
        for i, v in enumerate(b1):
            inv1[v - 1] = i + 1
        for i, v in enumerate(b2):
            inv2[v - 1] = i + 1
        return (tuple(inv1), tuple(inv2), ())
    inv = [0] * len(pay)
    for i, v in enumerate(pay):
        inv[v - 1] = i + 1
    return tuple(inv)


class HKWindow:
    """The coherence category over a window, with its evaluation functor.

    sigma_mode 'all' enumerates every coherence choice satisfying the
    axioms; 'canonical' keeps one object per singleton tuple (identity
    coherence whenever min(U) < min(V)). The canonical objects form a
    full subcategory whose inclusion is an equivalence: every object is
    isomorphic to its canonical relabeling by the morphism family with
    identity singleton parts. materialize=False skips building the
    morphism list (for 'all' windows too large to store); lazy checks
    remain available through hom_families and check_evaluation_lazy.
    """

    def __init__(
        self,
        category: str,
        S: BasedSet,
        bound: int,
        ambient_bound: Optional[int] = None,
        sigma_mode: str = "all",
        materialize: bool = True,
        sbar_max: int = 3,
        objects: Optional[list] = None,
    ):
        if S.k > sbar_max:
            raise InputError(
                f"coherence enumeration limited to |S-bar| <= {sbar_max}; got {S.k}"
            )
        if sigma_mode not in ("all", "canonical"):
            raise InputError("sigma_mode must be 'all' or 'canonical'")
        self.category = category
        self.S = S
        self.k = S.k
        self.bound = bound
        self.ambient_bound = (
            ambient_bound if ambient_bound is not None else bound * max(S.k, 1)
        )
        if self.ambient_bound < bound * max(S.k, 1):
            raise WindowError("ambient bound too small for subset unions")
        self.sigma_mode = sigma_mode
        self._hom_cache: dict[tuple, list] = {}
        if objects is None:
            self.singleton_objects = list(truncate(category, bound).objects)
        else:
            self.singleton_objects = list(objects)
            for o in self.singleton_objects:
                if not self._in_ambient(o):
                    raise WindowError(f"restricted object {o} outside the window")
        self.pairs = _disjoint_pairs(self.k)
        self.pair_index = _pair_index(self.k)
        self.objects = self._enumerate_objects()
        for x in self.objects:
            errs = self.check_axioms(x)
            if errs:
                raise InternalCheckError(
                    "constructed object violates the axioms: " + errs[0]
                )
        self.cat: Optional[PresentedCategory] = None
        if materialize:
            self.cat = self._materialize()

    # -- object enumeration ----------------------------------------------

    def _subset_values(self, singles: tuple) -> tuple:
        s = [None] * (1 << self.k)
        s[0] = _unit_obj(self.category)
        for mask in range(1, 1 << self.k):
            low = mask & (-mask)
            i = low.bit_length() - 1
            s[mask] = (
                singles[i]
                if mask == low
                else _obj_sum(self.category, singles[i], s[mask ^ low])
            )
        return tuple(s)

    def _in_ambient(self, o) -> bool:
        if self.category == "J":
            return 0 <= o.m1 <= self.ambient_bound and 0 <= o.m2 <= self.ambient_bound
        return 0 <= o <= self.ambient_bound

    def _hom_payloads(self, a, b) -> list:
        """Hom-set payloads of the ambient window, enumerated on demand."""
        key = (a, b)
        if key in self._hom_cache:
            return self._hom_cache[key]
        if not (self._in_ambient(a) and self._in_ambient(b)):
            raise WindowError(f"objects {a}, {b} outside the ambient window")
        if self.category == "J":
            out = [m.payload() for m in j_homset(a, b)]
        elif self.category == "I":
            out = [f.values for f in all_injections(a, b)]
        else:
            out = [f.values for f in all_injections(a, b)] if a == b else []
        self._hom_cache[key] = out
        return out

    def _enumerate_objects(self) -> list[HKObject]:
        k = self.k
        cat = self.category
        if k == 0:
            unit = _unit_obj(cat)
            return [HKObject(0, (unit,), (_id_payload(cat, unit),))]
        # one orientation per unordered pair; the other follows from (iv)
        free_pairs = [
            (u, v) for (u, v) in self.pairs if u and v and (u & -u) < (v & -v)
        ]
        objects = []
        for singles in itertools.product(self.singleton_objects, repeat=k):
            s = self._subset_values(singles)
            if self.sigma_mode == "canonical":
                choice_sets = [[_id_payload(cat, s[u | v])] for u, v in free_pairs]
            else:
                choice_sets = [
                    self._hom_payloads(s[u | v], s[u | v]) for u, v in free_pairs
                ]
            for choice in itertools.product(*choice_sets):
                sigma = [None] * len(self.pairs)
                for idx, (u, v) in enumerate(self.pairs):
                    if u == 0 or v == 0:
                        sigma[idx] = _id_payload(cat, s[u | v])
                for (u, v), pay in zip(free_pairs, choice):
                    sigma[self.pair_index[(u, v)]] = pay
                    # (iv): the flipped coherence is the composite with the shuffle
                    chi = _shuffle_pay(cat, s[v], s[u])
                    sigma[self.pair_index[(v, u)]] = _compose_pay(
                        cat, s[u | v], s[u | v], s[u | v], pay, chi
                    )
                x = HKObject(k, s, tuple(sigma))
                if k >= 3 and not self._cocycle_holds(x):
                    continue
                objects.append(x)
        return objects

    def _cocycle_holds(self, x: HKObject) -> bool:
        cat = self.category
        s = x.s
        for u, v in self.pairs:
            if not u or not v:
                continue
            for w in range(1 << self.k):
                if w == 0 or w & (u | v):
                    continue
                o = s[u | v | w]
                lhs = _compose_pay(
                    cat,
                    o,
                    o,
                    o,
                    x.sigma_at(u | v, w),
                    _block_sum_pay(
                        cat, s[u | v], x.sigma_at(u, v), _id_payload(cat, s[w])
                    ),
                )
                rhs = _compose_pay(
                    cat,
                    o,
                    o,
                    o,
                    x.sigma_at(u, v | w),
                    _block_sum_pay(cat, s[u], _id_payload(cat, s[u]), x.sigma_at(v, w)),
                )
                if lhs != rhs:
                    return False
        return True

    def check_axioms(self, x: HKObject) -> list[str]:
        """Conditions (i)-(iv) on a single object, checked exactly."""
        errs = []
        cat = self.category
        if x.s[0] != _unit_obj(cat):
            errs.append("(i): empty-set value is not the unit object")
        for u, v in self.pairs:
            if (u == 0 or v == 0) and x.sigma_at(u, v) != _id_payload(cat, x.s[u | v]):
                errs.append("(ii): coherence at the empty set is not the identity")
        if not self._cocycle_holds(x):
            errs.append("(iii): cocycle condition fails")
        for u, v in self.pairs:
            if not u or not v:
                continue
            chi = _shuffle_pay(cat, x.s[u], x.s[v])
            lhs = _compose_pay(
                cat, x.s[u | v], x.s[u | v], x.s[u | v], x.sigma_at(v, u), chi
            )
            if lhs != x.sigma_at(u, v):
                errs.append("(iv): flipped coherence does not match the shuffle")
        return errs

    # -- morphisms --------------------------------------------------------

    def hom_families(self, x: HKObject, y: HKObject) -> Iterable[HKMorphism]:
        """All morphism families x -> y, determined by their singleton parts."""
        single_homs = [
            self._hom_payloads(x.s[1 << i], y.s[1 << i]) for i in range(self.k)
        ]
        for combo in itertools.product(*single_homs):
            fam = self._derive_family(x, y, combo)
            if fam is not None:
                yield fam

    def _derive_family(self, x, y, combo) -> Optional[HKMorphism]:
        k = self.k
        cat = self.category
        f = [None] * (1 << k)
        f[0] = _id_payload(cat, _unit_obj(cat))
        for i in range(k):
            f[1 << i] = combo[i]
        for mask in sorted(range(1, 1 << k), key=lambda m: bin(m).count("1")):
            if f[mask] is not None:
                continue
            low = mask & -mask
            rest = mask ^ low
            # f_U = tau . (f_low (+) f_rest) . sigma^{-1}
            blk = _block_sum_pay(cat, y.s[low], f[low], f[rest])
            pre = _compose_pay(
                cat,
                x.s[mask],
                x.s[mask],
                y.s[mask],
                blk,
                _invert_pay(cat, x.sigma_at(low, rest)),
            )
            f[mask] = _compose_pay(
                cat, x.s[mask], y.s[mask], y.s[mask], y.sigma_at(low, rest), pre
            )
        fam = HKMorphism(tuple(f))
        return fam if self._family_compatible(x, y, fam) else None

    def _family_compatible(self, x, y, fam: HKMorphism) -> bool:
        cat = self.category
        for u, v in self.pairs:
            if not u or not v:
                continue
            lhs = _compose_pay(
                cat, x.s[u | v], x.s[u | v], y.s[u | v], fam.f[u | v], x.sigma_at(u, v)
            )
            blk = _block_sum_pay(cat, y.s[u], fam.f[u], fam.f[v])
            rhs = _compose_pay(
                cat, x.s[u | v], y.s[u | v], y.s[u | v], y.sigma_at(u, v), blk
            )
            if lhs != rhs:
                return False
        return True

    def identity_family(self, x: HKObject) -> HKMorphism:
        return HKMorphism(
            tuple(_id_payload(self.category, x.s[m]) for m in range(1 << self.k))
        )

    def _materialize(self) -> PresentedCategory:
        morphisms = []
        for i, x in enumerate(self.objects):
            for j, y in enumerate(self.objects):
                for fam in self.hom_families(x, y):
                    morphisms.append((i, j, fam))
        midx = {t: n for n, t in enumerate(morphisms)}
        identities = [
            midx[(i, i, self.identity_family(x))] for i, x in enumerate(self.objects)
        ]
        window = self
        cat = PresentedCategory(self.objects, morphisms, identities)

        def compose_pair(g: int, f: int) -> int:
            fd, gc = cat.dom(f), cat.cod(g)
            x = cat.objects[fd]
            y = cat.objects[cat.dom(g)]
            z = cat.objects[gc]
            gp, fp = cat.payload(g), cat.payload(f)
            comp = tuple(
                _compose_pay(window.category, x.s[m], y.s[m], z.s[m], gp.f[m], fp.f[m])
                for m in range(1 << window.k)
            )
            return midx[(fd, gc, HKMorphism(comp))]

        cat._compose_pair = compose_pair
        return cat

    # -- evaluation -------------------------------------------------------

    def target_window(self) -> PresentedCategory:
        return truncate(self.category, self.bound)

    def evaluation(self) -> tuple[PresentedCategory, CatFunctor]:
        """The evaluation functor to the k-fold product of the singleton window."""
        if self.cat is None:
            raise InputError("evaluation functor needs a materialized category")
        if self.k == 0:
            T = PresentedCategory(["*"], [(0, 0, "id")], [0])
            return T, CatFunctor(
                self.cat, T, [0] * self.cat.n_objects, [0] * self.cat.n_morphisms
            )
        K = self.target_window()
        k_obj = {o: i for i, o in enumerate(K.objects)}
        # left-nested product K x K x ... with index dicts per level
        levels = [K]
        for _ in range(self.k - 1):
            levels.append(product_category(levels[-1], K))
        T = levels[-1]
        obj_dicts = [{o: i for i, o in enumerate(L.objects)} for L in levels]

        def fold_obj(tags):
            cur = k_obj[tags[0]]
            for lvl, t in enumerate(tags[1:], start=1):
                cur = obj_dicts[lvl][(cur, k_obj[t])]
            return cur

        def fold_mor(xs, ys, fams):
            cur = K.morphism_index(k_obj[xs[0]], k_obj[ys[0]], fams[0])
            dcur, ccur = k_obj[xs[0]], k_obj[ys[0]]
            for lvl in range(1, len(fams)):
                ki = K.morphism_index(k_obj[xs[lvl]], k_obj[ys[lvl]], fams[lvl])
                d2 = obj_dicts[lvl][(dcur, k_obj[xs[lvl]])]
                c2 = obj_dicts[lvl][(ccur, k_obj[ys[lvl]])]
                cur = levels[lvl].morphism_index(d2, c2, (cur, ki))
                dcur, ccur = d2, c2
            return cur

        obj_map = [
            fold_obj(tuple(x.s[1 << i] for i in range(self.k)))
            for x in self.cat.objects
        ]
        mor_map = []
        for n in range(self.cat.n_morphisms):
            x = self.cat.objects[self.cat.dom(n)]
            y = self.cat.objects[self.cat.cod(n)]
            fam = self.cat.payload(n)
            xs = tuple(x.s[1 << i] for i in range(self.k))
            ys = tuple(y.s[1 << i] for i in range(self.k))
            fams = tuple(fam.f[1 << i] for i in range(self.k))
            mor_map.append(fold_mor(xs, ys, fams))
        return T, CatFunctor(self.cat, T, obj_map, mor_map)

    def check_evaluation_lazy(self, sample_pairs: int = 50, seed: int = 0) -> dict:
        """Fullness and essential surjectivity without materializing morphisms.

        Essential surjectivity is exhaustive over the target objects.
        Fullness is checked through its exact reduction: a singleton
        family extends to a (unique) morphism iff its derived family is
        compatible at every disjoint pair; given axiom (iv), which every
        enumerated object satisfies, compatibility at a flipped pair
        reduces algebraically to naturality of the shuffle,
        (f (+) g) . chi = chi . (g (+) f), which is checked exhaustively
        over all pairs of window morphisms. A random sample of object
        pairs is additionally cross-checked by direct enumeration
        (every singleton combination must extend)."""
        K = self.target_window()
        hit = {tuple(x.s[1 << i] for i in range(self.k)) for x in self.objects}
        want = set(itertools.product(K.objects, repeat=self.k))
        report = {"essentially_surjective": want <= hit}
        nat_ok = True
        for i in range(K.n_morphisms):
            a, c = K.objects[K.dom(i)], K.objects[K.cod(i)]
            fp = K.payload(i)
            for j in range(K.n_morphisms):
                b, d = K.objects[K.dom(j)], K.objects[K.cod(j)]
                gp = K.payload(j)
                ab = _obj_sum(self.category, a, b)
                ba = _obj_sum(self.category, b, a)
                cd = _obj_sum(self.category, c, d)
                dc = _obj_sum(self.category, d, c)
                lhs = _compose_pay(
                    self.category,
                    ba,
                    ab,
                    cd,
                    _block_sum_pay(self.category, c, fp, gp),
                    _shuffle_pay(self.category, b, a),
                )
                rhs = _compose_pay(
                    self.category,
                    ba,
                    dc,
                    cd,
                    _shuffle_pay(self.category, d, c),
                    _block_sum_pay(self.category, d, gp, fp),
                )
                if lhs != rhs:
                    nat_ok = False
        report["shuffle_natural"] = nat_ok
        rng = random.Random(seed)
        sampled_full = True
        for _ in range(sample_pairs):
            x = rng.choice(self.objects)
            y = rng.choice(self.objects)
            expect = 1
            for i in range(self.k):
                expect *= len(self._hom_payloads(x.s[1 << i], y.s[1 << i]))
            got = sum(1 for _ in self.hom_families(x, y))
            if got != expect:
                sampled_full = False
        report["sampled_pairs"] = sample_pairs
        report["sampled_full"] = sampled_full
        report["full"] = nat_ok and sampled_full
        return report


def hk_category(
    category: str,
    S: BasedSet,
    bound: int,
    ambient_bound: Optional[int] = None,
    sigma_mode: str = "all",
    materialize: bool = True,
    objects: Optional[list] = None,
) -> HKWindow:
    """Build the coherence category over a window; see HKWindow."""
    return HKWindow(
        category, S, bound, ambient_bound, sigma_mode, materialize, objects=objects
    )


# ---------------------------------------------------------------------------
# Pushforward along based maps
# ---------------------------------------------------------------------------


def hk_pushforward(alpha: BasedMap, x: HKObject) -> HKObject:
    """Relabel subset data along a based map: s'_U = s at the preimage."""
    if x.kbar != alpha.source.k:
        raise InputError("object does not live over the source of the map")
    k2 = alpha.target.k
    s2 = tuple(x.s[alpha.preimage_mask(m)] for m in range(1 << k2))
    sigma2 = tuple(
        x.sigma_at(alpha.preimage_mask(u), alpha.preimage_mask(v))
        for u, v in _disjoint_pairs(k2)
    )
    return HKObject(k2, s2, sigma2)


def hk_pushforward_morphism(alpha: BasedMap, fam: HKMorphism) -> HKMorphism:
    k2 = alpha.target.k
    return HKMorphism(tuple(fam.f[alpha.preimage_mask(m)] for m in range(1 << k2)))


def hk_pushforward_functor(alpha: BasedMap, src: HKWindow, dst: HKWindow) -> CatFunctor:
    if src.cat is None or dst.cat is None:
        raise InputError("pushforward functor needs materialized categories")
    dst_obj = {x: i for i, x in enumerate(dst.cat.objects)}
    obj_map = []
    for x in src.cat.objects:
        y = hk_pushforward(alpha, x)
        if y not in dst_obj:
            raise WindowError("pushforward leaves the target window")
        obj_map.append(dst_obj[y])
    mor_map = []
    for n in range(src.cat.n_morphisms):
        fam = hk_pushforward_morphism(alpha, src.cat.payload(n))
        try:
            mor_map.append(
                dst.cat.morphism_index(
                    obj_map[src.cat.dom(n)], obj_map[src.cat.cod(n)], fam
                )
            )
        except InputError:
            raise WindowError("pushforward morphism leaves the target window")
    return CatFunctor(src.cat, dst.cat, obj_map, mor_map)


# ---------------------------------------------------------------------------
# Gamma-space values
# ---------------------------------------------------------------------------


def b_gamma(
    category: str,
    S: BasedSet,
    bound: int,
    dim: int,
    sigma_mode: str = "all",
    window: Optional[HKWindow] = None,
) -> TruncatedSimplicialSet:
    """The nerve of the coherence category: the Gamma-space of the window."""
    if window is None:
        window = HKWindow(category, S, bound, sigma_mode=sigma_mode)
    return nerve(window.cat, dim)


def element_category(A, window: HKWindow):
    """Category of elements of the diagram (s, sigma) -> prod_i A(s_i).

    A is a tabulated monoid (or plain tabulated space) whose window must
    contain every singleton value. Returns (category, diagram)."""
    if window.cat is None:
        raise InputError("element category needs a materialized window")
    a_obj = {o: i for i, o in enumerate(A.cat.objects)}
    k = window.k
    values = []
    for x in window.cat.objects:
        sets = []
        for i in range(k):
            tag = x.s[1 << i]
            if tag not in a_obj:
                raise WindowError(f"singleton value {tag} outside the monoid window")
            sets.append(A.values[a_obj[tag]])
        values.append([tuple(t) for t in itertools.product(*sets)])
    action = []
    for n in range(window.cat.n_morphisms):
        x = window.cat.objects[window.cat.dom(n)]
        y = window.cat.objects[window.cat.cod(n)]
        fam = window.cat.payload(n)
        comps = []
        for i in range(k):
            idx = A.cat.morphism_index(
                a_obj[x.s[1 << i]], a_obj[y.s[1 << i]], fam.f[1 << i]
            )
            comps.append(A.action[idx])
        action.append(
            {
                t: tuple(comps[i][t[i]] for i in range(k))
                for t in values[window.cat.dom(n)]
            }
        )
    diagram = SetValuedDiagram(window.cat, values, action)
    return category_of_elements(diagram), diagram


def gamma_of_monoid(
    A,
    S: BasedSet,
    bound: int,
    dim: int,
    sigma_mode: str = "canonical",
    window: Optional[HKWindow] = None,
) -> TruncatedSimplicialSet:
    """The Gamma-space value of a tabulated monoid: the nerve of the
    category of elements of its coherence diagram."""
    if window is None:
        window = HKWindow(A.ops.category, S, bound, sigma_mode=sigma_mode)
    el, _ = element_category(A, window)
    return nerve(el, dim)


def _fiber_iso_payload(window: HKWindow, x: HKObject, order: list[int]):
    """The iso (+)_{i in order} s_i -> s_V built from the coherence data,
    where V = set(order), nested to the right, as a window payload."""
    cat = window.category
    if not order:
        return _id_payload(cat, _unit_obj(cat))
    if len(order) == 1:
        return _id_payload(cat, x.s[1 << order[0]])
    head, rest = order[0], order[1:]
    rest_mask = 0
    for i in rest:
        rest_mask |= 1 << i
    mask = rest_mask | (1 << head)
    sub = _fiber_iso_payload(window, x, rest)
    blk = _block_sum_pay(cat, x.s[1 << head], _id_payload(cat, x.s[1 << head]), sub)
    return _compose_pay(
        cat, x.s[mask], x.s[mask], x.s[mask], x.sigma_at(1 << head, rest_mask), blk
    )


def _structure_assignments(
    alpha: BasedMap,
    A,
    src: HKWindow,
    dst: HKWindow,
    el_src: PresentedCategory,
    order: str,
):
    """Raw structure-map data, without touching the target element category.

    Returns (obj_tags, mor_tags): obj_tags maps a source element-category
    object index to (target base object index, element tuple); mor_tags
    maps a source morphism index to (source dom, source cod, target base
    morphism index). Entries are absent where the window truncation does
    not permit the value."""
    if A.mult is None or A.unit is None:
        raise InputError("structure maps need a multiplication and unit")
    a_obj = {o: i for i, o in enumerate(A.cat.objects)}
    dst_obj = {x: i for i, x in enumerate(dst.cat.objects)}

    def fiber(t: int) -> list[int]:
        out = [i for i in range(src.k) if alpha(i + 1) == t + 1]
        return out if order == "ascending" else out[::-1]

    def map_element(x: HKObject, elem: tuple):
        y = hk_pushforward(alpha, x)
        if y not in dst_obj:
            return None
        out = []
        for t in range(dst.k):
            V = fiber(t)
            if not V:
                out.append(A.unit)
                continue
            # fold right-to-left to match the right-nested coherence iso
            acc = elem[V[-1]]
            acc_obj = x.s[1 << V[-1]]
            for i in V[-2::-1]:
                if x.s[1 << i] not in a_obj or acc_obj not in a_obj:
                    return None
                table = A.mult.get((a_obj[x.s[1 << i]], a_obj[acc_obj]))
                if table is None:
                    return None
                acc = table[(elem[i], acc)]
                acc_obj = _obj_sum(src.category, x.s[1 << i], acc_obj)
            if acc_obj not in a_obj or y.s[1 << t] not in a_obj:
                return None
            iso = _fiber_iso_payload(src, x, V)
            try:
                idx = A.cat.morphism_index(a_obj[acc_obj], a_obj[y.s[1 << t]], iso)
            except InputError:
                return None
            out.append(A.action[idx][acc])
        return dst_obj[y], tuple(out)

    obj_tags: dict[int, tuple] = {}
    for n, (xi, elem) in enumerate(el_src.objects):
        res = map_element(src.cat.objects[xi], elem)
        if res is not None:
            obj_tags[n] = res
    mor_tags: dict[int, tuple] = {}
    for n in range(el_src.n_morphisms):
        d_el, c_el = el_src.dom(n), el_src.cod(n)
        if d_el not in obj_tags or c_el not in obj_tags:
            continue
        fam = hk_pushforward_morphism(alpha, src.cat.payload(el_src.payload(n)))
        try:
            base2 = dst.cat.morphism_index(
                obj_tags[d_el][0], obj_tags[c_el][0], fam
            )
        except InputError:
            continue
        mor_tags[n] = (d_el, c_el, base2)
    return obj_tags, mor_tags


def _partial_structure_maps(
    alpha: BasedMap,
    A,
    src: HKWindow,
    dst: HKWindow,
    el_src: PresentedCategory,
    el_dst: PresentedCategory,
    order: str,
):
    """Object and morphism maps of the induced functor on element
    categories, as dicts defined only where the window permits."""
    obj_tags, mor_tags = _structure_assignments(alpha, A, src, dst, el_src, order)
    dst_el_index = {t: i for i, t in enumerate(el_dst.objects)}
    el_dst_mor = {t: i for i, t in enumerate(el_dst.morphisms)}
    obj_map = {
        n: dst_el_index[tag] for n, tag in obj_tags.items() if tag in dst_el_index
    }
    mor_map = {}
    for n, (d_el, c_el, base2) in mor_tags.items():
        if d_el not in obj_map or c_el not in obj_map:
            continue
        key = (obj_map[d_el], obj_map[c_el], base2)
        if key in el_dst_mor:
            mor_map[n] = el_dst_mor[key]
    return obj_map, mor_map


def gamma_structure_map_tabulated(
    alpha: BasedMap,
    A,
    src: HKWindow,
    dst: HKWindow,
    order: str = "ascending",
    el_src: Optional[PresentedCategory] = None,
):
    """Structure map as a functor into the image truncation of the target.

    Avoids materializing the full target element category (whose action
    tables can be enormous); instead the composition-closed image of the
    map, plus identities, is built as a category. Returns (el_src,
    functor). Ordering independence is equality of the returned functors
    including their target categories."""
    if order not in ("ascending", "descending"):
        raise InputError("order must be 'ascending' or 'descending'")
    if el_src is None:
        el_src, _ = element_category(A, src)
    obj_tags, mor_tags = _structure_assignments(alpha, A, src, dst, el_src, order)
    if len(obj_tags) != el_src.n_objects or len(mor_tags) != el_src.n_morphisms:
        raise WindowError("structure map leaves the target window")
    objects = sorted(set(obj_tags.values()))
    obj_index = {t: i for i, t in enumerate(objects)}
    mor_set = set()
    for d_el, c_el, base2 in mor_tags.values():
        mor_set.add((obj_tags[d_el], obj_tags[c_el], base2))
    for tag in objects:
        mor_set.add((tag, tag, dst.cat.identities[tag[0]]))
    # close under composition in the target base
    changed = True
    while changed:
        changed = False
        by_dom: dict[tuple, list[tuple]] = {}
        for t in mor_set:
            by_dom.setdefault(t[0], []).append(t)
        for x_tag, y_tag, f_base in list(mor_set):
            for _, z_tag, g_base in by_dom.get(y_tag, ()):
                comp = (x_tag, z_tag, dst.cat.compose(g_base, f_base))
                if comp not in mor_set:
                    mor_set.add(comp)
                    changed = True
    morphisms = sorted(
        (obj_index[d], obj_index[c], b) for d, c, b in mor_set
    )
    midx = {t: i for i, t in enumerate(morphisms)}
    identities = [
        midx[(i, i, dst.cat.identities[tag[0]])] for i, tag in enumerate(objects)
    ]
    image_cat = PresentedCategory(objects, morphisms, identities)

    def compose_pair(g: int, f: int) -> int:
        d = image_cat.dom(f)
        c = image_cat.cod(g)
        b = dst.cat.compose(image_cat.payload(g), image_cat.payload(f))
        return midx[(d, c, b)]

    image_cat._compose_pair = compose_pair
    obj_map = [obj_index[obj_tags[i]] for i in range(el_src.n_objects)]
    mor_map = [
        midx[
            (
                obj_map[mor_tags[n][0]],
                obj_map[mor_tags[n][1]],
                mor_tags[n][2],
            )
        ]
        for n in range(el_src.n_morphisms)
    ]
    return el_src, CatFunctor(el_src, image_cat, obj_map, mor_map)


def gamma_structure_map(
    alpha: BasedMap,
    A,
    src: HKWindow,
    dst: HKWindow,
    order: str = "ascending",
    elements: Optional[tuple] = None,
) -> CatFunctor:
    """The functor on categories of elements induced by a based map.

    Per target element t, the fiber V = alpha^{-1}(t) contributes the map
    prod_{i in V} A(s_i) -> A(s_V): multiply in the chosen order of V and
    push along the coherence iso of that order. The result must not
    depend on the order; callers assert this by comparing the
    'ascending' and 'descending' runs on the same element categories
    (pass the same `elements = (el_src, el_dst)` to both calls)."""
    if order not in ("ascending", "descending"):
        raise InputError("order must be 'ascending' or 'descending'")
    if elements is None:
        el_src, _ = element_category(A, src)
        el_dst, _ = element_category(A, dst)
    else:
        el_src, el_dst = elements
    obj_map, mor_map = _partial_structure_maps(
        alpha, A, src, dst, el_src, el_dst, order
    )
    if len(obj_map) != el_src.n_objects or len(mor_map) != el_src.n_morphisms:
        raise WindowError("structure map leaves the target window")
    return CatFunctor(
        el_src,
        el_dst,
        [obj_map[i] for i in range(el_src.n_objects)],
        [mor_map[i] for i in range(el_src.n_morphisms)],
    )


# ---------------------------------------------------------------------------
# The simplicial circle
# ---------------------------------------------------------------------------


def _all_chains(el: PresentedCategory, m: int) -> list[tuple]:
    """All m-chains of el, identities included (vertex tuples at m = 0)."""
    if m == 0:
        return [(o,) for o in range(el.n_objects)]
    by_dom: dict[int, list[int]] = {}
    for f in range(el.n_morphisms):
        by_dom.setdefault(el.dom(f), []).append(f)
    chains = [(f,) for f in range(el.n_morphisms)]
    for _ in range(m - 1):
        chains = [c + (g,) for c in chains for g in by_dom.get(el.cod(c[-1]), ())]
    return chains


def gamma_circle(A, bound: int, level_max: int, dim: int):
    """Evaluate the Gamma-space on the simplicial circle and take the diagonal.

    Level m of the circle is the based set m+; the m-simplices of the
    diagonal are the m-simplices of the value at m+, degenerate ones
    included, so homology is computed from the unnormalized complex
    (which agrees with the normalized one). Returns (diagonal,
    comparison), where comparison is the composable-tuple bar
    construction of the window pi0 monoid of A."""
    from .jmonoid import pi0_hocolim

    if level_max < 2:
        raise InputError("level_max must be >= 2")
    if dim > level_max:
        raise InputError("diagonal dimension cannot exceed level_max")
    windows = []
    elements = []
    for m in range(dim + 1):
        w = HKWindow(A.ops.category, BasedSet(m), bound, sigma_mode="canonical")
        windows.append(w)
        el, _ = element_category(A, w)
        elements.append(el)

    partials = {}
    for m in range(1, dim + 1):
        for i in range(m + 1):
            alpha = circle_based_map(m, "face", i)
            partials[(m, i)] = _partial_structure_maps(
                alpha, A, windows[m], windows[m - 1],
                elements[m], elements[m - 1], "ascending",
            )

    # keep only simplices all of whose faces stay representable in the
    # uniform window; the kept set is closed under degeneracies because
    # degeneracies never enlarge the subset values
    simplices: list[list] = [_all_chains(elements[0], 0)]
    level_index = [{c: i for i, c in enumerate(simplices[0])}]
    faces: list[list] = [[]]
    for m in range(1, dim + 1):
        el = elements[m]
        kept = []
        kept_faces = []
        for c in _all_chains(el, m):
            fs = []
            for i in range(m + 1):
                if m == 1:
                    inner = (el.cod(c[0]),) if i == 0 else (el.dom(c[0]),)
                elif i == 0:
                    inner = c[1:]
                elif i == m:
                    inner = c[:-1]
                else:
                    inner = c[: i - 1] + (el.compose(c[i], c[i - 1]),) + c[i + 1 :]
                obj_map, mor_map = partials[(m, i)]
                if m == 1:
                    mapped = (
                        (obj_map[inner[0]],) if inner[0] in obj_map else None
                    )
                else:
                    mapped = tuple(
                        mor_map[f] if f in mor_map else None for f in inner
                    )
                    if None in mapped:
                        mapped = None
                if mapped is None or mapped not in level_index[m - 1]:
                    fs = None
                    break
                fs.append((level_index[m - 1][mapped], ()))
            if fs is not None:
                kept.append(c)
                kept_faces.append(tuple(fs))
        simplices.append(kept)
        level_index.append({c: i for i, c in enumerate(kept)})
        faces.append(kept_faces)
    diag = TruncatedSimplicialSet(dim, simplices, faces)

    # comparison: composable-tuple bar construction of the pi0 monoid
    pi0 = pi0_hocolim(A)
    n = pi0.n_classes

    def all_products_defined(tup) -> bool:
        for a in range(len(tup)):
            prod = tup[a]
            for b in range(a + 1, len(tup)):
                key = (prod, tup[b])
                if key not in pi0.table:
                    return False
                prod = pi0.table[key]
        return True

    bar_simplices: list[list] = [[()]]
    for m in range(1, dim + 1):
        bar_simplices.append(
            [
                tup
                for tup in itertools.product(range(n), repeat=m)
                if all_products_defined(tup)
            ]
        )
    bar_index = [{s: i for i, s in enumerate(lv)} for lv in bar_simplices]
    bar_faces: list[list] = [[]]
    for m in range(1, dim + 1):
        level_faces = []
        for tup in bar_simplices[m]:
            fs = []
            for i in range(m + 1):
                if i == 0:
                    sub = tup[1:]
                elif i == m:
                    sub = tup[:-1]
                else:
                    sub = (
                        tup[: i - 1]
                        + (pi0.table[(tup[i - 1], tup[i])],)
                        + tup[i + 1 :]
                    )
                fs.append((bar_index[m - 1][sub], ()))
            level_faces.append(tuple(fs))
        bar_faces.append(level_faces)
    comparison = TruncatedSimplicialSet(dim, bar_simplices, bar_faces)
    return diag, comparison
