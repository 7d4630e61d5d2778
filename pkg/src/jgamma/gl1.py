"""Graded unit-group invariants: periodicity, the five-term exact
sequence for the connective delooping of the units, and the
first-k-invariant criterion.

The input is a presented graded abelian group of units together with a
distinguished order-two degree-zero element (the class of -1). All
computations are exact integer linear algebra via Smith normal form;
nothing here touches spectra, only the algebra of the unit group.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import InputError, InternalCheckError
from .topo import AbelianInvariants, smith_normal_form

__all__ = [
    "GradedUnitGroup",
    "FiveTermSequence",
    "periodicity",
    "five_term",
    "k_invariant_nonzero",
    "k_invariant_report",
    "hopf_image",
    "gl1_report",
    "GRADED_UNIT_GROUP_SCHEMA",
]

GRADED_UNIT_GROUP_SCHEMA = "jgamma/graded-unit-group/v1"


# ---------------------------------------------------------------------------
# integer lattice utilities (dense, exact, SNF-backed)


def _columns_matrix(cols: list[tuple[int, ...]], n: int) -> list[list[int]]:
    return [[cols[j][i] for j in range(len(cols))] for i in range(n)]


def _mat_vec(M: list[list[int]], x) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in M]


def _in_lattice(rows: list[tuple[int, ...]], x, n: int) -> bool:
    """Is x in the integer span of the given length-n row vectors?"""
    if n == 0:
        return True
    if not rows:
        return all(v == 0 for v in x)
    A = _columns_matrix(list(rows), n)
    res = smith_normal_form(A, verify=False)
    u = _mat_vec(res.U, x)
    for i in range(n):
        d = res.diagonal[i] if i < len(res.diagonal) else 0
        if d == 0:
            if u[i] != 0:
                return False
        elif u[i] % d != 0:
            return False
    return True


def _integer_kernel(M: list[list[int]]) -> list[tuple[int, ...]]:
    """A saturated basis of {x : M x = 0} over the integers."""
    if not M or not M[0]:
        cols = len(M[0]) if M else 0
        return [tuple(int(i == j) for i in range(cols)) for j in range(cols)]
    res = smith_normal_form(M, verify=False)
    cols = len(M[0])
    out = []
    for j in range(cols):
        d = res.diagonal[j] if j < len(res.diagonal) else 0
        if d == 0:
            out.append(tuple(res.V[i][j] for i in range(cols)))
    return out


def _solve_saturated(basis: list[tuple[int, ...]], x, n: int) -> tuple[int, ...]:
    """Coordinates of x in a saturated lattice basis (columns of length n)."""
    if not basis:
        if any(v != 0 for v in x):
            raise InternalCheckError("vector outside the saturated sublattice")
        return ()
    A = _columns_matrix(basis, n)
    res = smith_normal_form(A, verify=False)
    u = _mat_vec(res.U, x)
    z = []
    for i in range(n):
        d = res.diagonal[i] if i < len(res.diagonal) else 0
        if d == 0:
            if u[i] != 0:
                raise InternalCheckError("vector outside the saturated sublattice")
        else:
            if u[i] % d != 0:
                raise InternalCheckError("vector outside the saturated sublattice")
            z.append(u[i] // d)
    z += [0] * (len(basis) - len(z))
    coeff = _mat_vec(res.V, z[: len(basis)])
    return tuple(coeff)


def _invariants(n: int, rows: list[tuple[int, ...]]) -> AbelianInvariants:
    """Structure of Z^n modulo the row lattice."""
    if n == 0:
        return AbelianInvariants(0, ())
    if not rows:
        return AbelianInvariants(n, ())
    res = smith_normal_form([list(r) for r in rows], verify=False)
    nonzero = [d for d in res.diagonal if d != 0]
    torsion = tuple(d for d in nonzero if d > 1)
    return AbelianInvariants(n - len(nonzero), torsion)


def _lattice_equal(
    rows_a: list[tuple[int, ...]], rows_b: list[tuple[int, ...]], n: int
) -> bool:
    return all(_in_lattice(rows_b, r, n) for r in rows_a) and all(
        _in_lattice(rows_a, r, n) for r in rows_b
    )


# ---------------------------------------------------------------------------
# the presented unit group


@dataclass(frozen=True)
class GradedUnitGroup:
    """A finitely presented graded abelian group of units.

    generators[i] = (name, degree, order) with order 0 meaning infinite;
    relations are exponent-vector rows imposed beyond the stated orders;
    sign is the exponent vector of the distinguished class of -1.
    """

    generators: tuple[tuple[str, int, int], ...]
    relations: tuple[tuple[int, ...], ...] = ()
    sign: tuple[int, ...] = None  # defaults to the identity element

    def __post_init__(self):
        gens = tuple((str(n), int(d), int(o)) for n, d, o in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(
            self, "relations", tuple(tuple(int(v) for v in r) for r in self.relations)
        )
        sign = self.sign if self.sign is not None else (0,) * len(gens)
        object.__setattr__(self, "sign", tuple(int(v) for v in sign))
        self._validate()

    def _validate(self) -> None:
        names = set()
        for name, deg, order in self.generators:
            if name in names:
                raise InputError(f"duplicate generator name {name!r}")
            names.add(name)
            if order < 0:
                raise InputError(f"generator {name!r} has negative order")
            if order > 0 and deg != 0:
                raise InputError(
                    f"generator {name!r} has finite order {order} but nonzero "
                    f"degree {deg}: degree would not be a homomorphism"
                )
        n = len(self.generators)
        for row in self.relations:
            if len(row) != n:
                raise InputError("relation row length does not match generators")
            if sum(e * g[1] for e, g in zip(row, self.generators)) != 0:
                raise InputError("relation with nonzero degree-weighted sum")
        if len(self.sign) != n:
            raise InputError("sign vector length does not match generators")
        if self.degree_of(self.sign) != 0:
            raise InputError("sign element must have degree 0")
        square = tuple(2 * v for v in self.sign)
        if not _in_lattice(self.lattice_rows(), square, n):
            raise InputError("sign element must square to the identity")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g[1] for g in self.generators)

    def degree_of(self, word) -> int:
        return sum(e * d for e, d in zip(word, self.degrees))

    def lattice_rows(self) -> list[tuple[int, ...]]:
        """Rows presenting the group as Z^n modulo this lattice."""
        n = self.n_generators
        rows = [
            tuple(order * int(i == j) for j in range(n))
            for i, (_, _, order) in enumerate(self.generators)
            if order > 0
        ]
        rows.extend(self.relations)
        return rows

    def structure(self) -> AbelianInvariants:
        return _invariants(self.n_generators, self.lattice_rows())

    def is_trivial_element(self, word) -> bool:
        return _in_lattice(self.lattice_rows(), tuple(word), self.n_generators)

    def format_word(self, word) -> str:
        parts = []
        for (name, _, _), e in zip(self.generators, word):
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "e"

    # -- JSON interchange ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": GRADED_UNIT_GROUP_SCHEMA,
                "generators": [
                    {"name": n, "degree": d, "order": o}
                    for n, d, o in self.generators
                ],
                "relations": [list(r) for r in self.relations],
                "sign": list(self.sign),
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GradedUnitGroup":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("graded unit group JSON must be an object")
        if data.get("schema") != GRADED_UNIT_GROUP_SCHEMA:
            raise InputError(
                f"unsupported schema {data.get('schema')!r}; "
                f"expected {GRADED_UNIT_GROUP_SCHEMA!r}"
            )
        try:
            gens = tuple(
                (g["name"], int(g["degree"]), int(g["order"]))
                for g in data["generators"]
            )
            rels = tuple(tuple(int(v) for v in r) for r in data.get("relations", []))
            sign = data.get("sign")
            sign = tuple(int(v) for v in sign) if sign is not None else None
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graded unit group JSON: {exc}") from exc
        return cls(gens, rels, sign)


# ---------------------------------------------------------------------------
# invariants


def periodicity(G: GradedUnitGroup) -> int:
    """The nonnegative generator of the degree image: the smallest positive
    degree of a unit, or 0 when all units sit in degree 0."""
    return math.gcd(*G.degrees) if G.degrees else 0


def _kernel_presentation(G: GradedUnitGroup):
    """The degree-zero subgroup: a saturated basis of ker(deg) in Z^n and
    the presenting relation rows in that basis."""
    n = G.n_generators
    basis = _integer_kernel([list(G.degrees)]) if n else []
    rels = [_solve_saturated(basis, row, n) for row in G.lattice_rows()]
    return basis, rels


@dataclass(frozen=True)
class FiveTermSequence:
    """The exact sequence {±1} -> units_0 -> units/{±1} -> Z -> Z/n -> 0.

    units_0 is the kernel of the degree map (the degree-zero units);
    sign_coords expresses the image of -1 in the chosen basis of units_0;
    kernel_basis columns include units_0 into the ambient generators; the
    degree vector is the third map and n gives the final reduction."""

    n: int
    sign_image: AbelianInvariants
    pi0_units: AbelianInvariants
    units_mod_sign: AbelianInvariants
    sign_coords: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...]
    degree_map: tuple[int, ...]

    @property
    def pi0_b(self) -> AbelianInvariants:
        """pi_0 of the connective delooping of the units: Z/n (Z when n=0)."""
        if self.n == 0:
            return AbelianInvariants(1, ())
        return AbelianInvariants(0, (self.n,) if self.n > 1 else ())

    @property
    def pi1_b(self) -> AbelianInvariants:
        """pi_1 of the connective delooping: the degree-zero units."""
        return self.pi0_units

    def __str__(self):
        return (
            f"{self.sign_image} -> {self.pi0_units} -> {self.units_mod_sign} "
            f"-> Z -> {self.pi0_b} -> 0"
        )


def five_term(G: GradedUnitGroup) -> FiveTermSequence:
    """The five-term sequence of the unit group, with exactness verified by
    Smith normal form at all three interior nodes."""
    n_gen = G.n_generators
    n = periodicity(G)
    lat = G.lattice_rows()
    basis, ker_rels = _kernel_presentation(G)
    k = len(basis)
    sign_coords = _solve_saturated(basis, G.sign, n_gen)
    lat_sign = lat + [G.sign]

    # exactness at the degree-zero units: ker(project mod sign) = <sign>
    if basis:
        block = [
            [basis[j][i] for j in range(k)] + [-r[i] for r in lat_sign]
            for i in range(n_gen)
        ]
        ker2 = [v[:k] for v in _integer_kernel(block)]
    else:
        ker2 = []
    if not _lattice_equal(ker2 + ker_rels, [sign_coords] + ker_rels, k):
        raise InternalCheckError("five-term sequence: exactness fails at units_0")

    # exactness at units mod sign: ker(deg) = image of units_0
    ker3 = _integer_kernel([list(G.degrees)]) if n_gen else []
    if not _lattice_equal(
        [tuple(b) for b in ker3] + lat_sign, [tuple(b) for b in basis] + lat_sign, n_gen
    ):
        raise InternalCheckError("five-term sequence: exactness fails at units/sign")

    # exactness at Z: image of deg = n Z = ker(Z -> Z/n)
    image_gcd = math.gcd(*G.degrees) if G.degrees else 0
    if image_gcd != n:
        raise InternalCheckError("five-term sequence: exactness fails at Z")

    sign_sub = (
        AbelianInvariants(0, ())
        if G.is_trivial_element(G.sign)
        else AbelianInvariants(0, (2,))
    )
    return FiveTermSequence(
        n=n,
        sign_image=sign_sub,
        pi0_units=_invariants(k, ker_rels),
        units_mod_sign=_invariants(n_gen, lat_sign),
        sign_coords=sign_coords,
        kernel_basis=tuple(tuple(b) for b in basis),
        degree_map=G.degrees,
    )


def k_invariant_nonzero(G: GradedUnitGroup) -> bool:
    """Whether the class of -1 is nontrivial among the degree-zero units:
    the testable form of a nonvanishing first Postnikov obstruction."""
    return not G.is_trivial_element(G.sign)


def k_invariant_report(G: GradedUnitGroup) -> dict:
    """The criterion's hypothesis and conclusion, in words.

    The stable-operation name is attached only in the order-two-on-
    order-two situation where that identification holds."""
    seq = five_term(G)
    nonzero = k_invariant_nonzero(G)
    report = {
        "hypothesis": "the class of -1 is nontrivial among the degree-zero units",
        "hypothesis_holds": nonzero,
        "conclusion": (
            "the two-stage Postnikov piece of the delooped units does not split"
            if nonzero
            else "no obstruction is detected by the class of -1"
        ),
        "pi0": str(seq.pi0_b),
        "pi1": str(seq.pi1_b),
        "k_invariant_nonzero": nonzero,
    }
    z2 = AbelianInvariants(0, (2,))
    if nonzero and seq.pi0_b == z2 and seq.pi1_b == z2:
        report["operation"] = "Sq^2"
    if nonzero and seq.n == 0:
        report["note"] = (
            "pi0 of the delooping is infinite cyclic; the splitting question "
            "differs from the torsion case"
        )
    return report


def hopf_image(G: GradedUnitGroup) -> tuple[int, ...]:
    """Image of the generator of the first stable stem among the units:
    the class of -1, as an exponent vector."""
    return G.sign


def gl1_report(G: GradedUnitGroup) -> dict:
    """Full invariant report for a graded unit group, JSON-serializable."""
    seq = five_term(G)
    return {
        "schema": "jgamma/gl1-report/v1",
        "generators": [
            {"name": n, "degree": d, "order": o} for n, d, o in G.generators
        ],
        "unit_group": str(G.structure()),
        "periodicity": periodicity(G),
        "five_term": {
            "sequence": str(seq),
            "sign_image": str(seq.sign_image),
            "degree_zero_units": str(seq.pi0_units),
            "units_mod_sign": str(seq.units_mod_sign),
            "exact": True,
        },
        "pi0_delooping": str(seq.pi0_b),
        "pi1_delooping": str(seq.pi1_b),
        "k_invariant": k_invariant_report(G),
        "hopf_image": {
            "word": list(hopf_image(G)),
            "pretty": G.format_word(hopf_image(G)),
            "trivial": G.is_trivial_element(G.sign),
        },
    }
