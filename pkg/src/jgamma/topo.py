"""Truncated simplicial sets, integral homology via Smith normal form,
components, and edge-path fundamental-group presentations.

Only nondegenerate simplices are materialized; a face that happens to be
degenerate is stored as (nondegenerate target index, degeneracy word).
The word (j1,...,jt) means s_{j1} o ... o s_{jt} applied to the target.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .errors import InputError, InternalCheckError

__all__ = [
    "TruncatedSimplicialSet",
    "AbelianInvariants",
    "GroupPresentation",
    "SNFResult",
    "smith_normal_form",
    "invariant_factors_sparse",
    "ColumnLatticeReducer",
    "components",
    "homology",
    "pi1_presentation",
    "abelianize",
    "face_of",
    "simplicial_circle_map",
]

Face = tuple[int, tuple[int, ...]]


class TruncatedSimplicialSet:
    """Simplices in dimensions 0..dim with nondegenerate storage.

    simplices[n] is a list of opaque simplex keys; faces[n][j][i] is the
    i-th face of the j-th n-simplex as (index, degeneracy word) in
    dimension n-1.
    """

    def __init__(self, dim: int, simplices: list[list], faces: list[list]):
        if dim < 0 or len(simplices) != dim + 1 or len(faces) != dim + 1:
            raise InputError("dimension cap inconsistent with simplex data")
        self.dim = dim
        self.simplices = simplices
        self.faces = faces

    def n_cells(self, n: int) -> int:
        if n > self.dim:
            raise InputError(f"dimension {n} above truncation {self.dim}")
        return len(self.simplices[n])

    def total_cells(self, n: int) -> int:
        """Count of all n-simplices, degenerate ones included.

        Uses that the monotone surjections [n] ->> [m] number C(n, n-m).
        """
        return sum(
            math.comb(n, n - m) * self.n_cells(m) for m in range(0, min(n, self.dim) + 1)
        )

    def face(self, n: int, j: int, i: int) -> Face:
        return self.faces[n][j][i]

    def check_simplicial_identities(self) -> list[str]:
        """Verify d_i d_j = d_{j-1} d_i for i < j on every stored simplex."""
        errs = []
        for n in range(2, self.dim + 1):
            for j_s in range(len(self.simplices[n])):
                expr = (n, (j_s, ()))
                for j in range(1, n + 1):
                    for i in range(0, j):
                        lhs = face_of(self, *face_expr(self, n, (j_s, ()), j), i)
                        rhs = face_of(self, *face_expr(self, n, (j_s, ()), i), j - 1)
                        if lhs != rhs:
                            errs.append(
                                f"d_{i} d_{j} != d_{j-1} d_{i} at {n}-simplex {j_s}"
                            )
        return errs

    def to_json(self) -> str:
        doc = {
            "schema": "jgamma/simplicial-set/1",
            "dim": self.dim,
            "simplices": [[_plain(s) for s in level] for level in self.simplices],
            "faces": [
                [[[idx, list(word)] for idx, word in fs] for fs in level]
                for level in self.faces
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSimplicialSet":
        doc = json.loads(text)
        if doc.get("schema") != "jgamma/simplicial-set/1":
            raise InputError("unknown schema for TruncatedSimplicialSet")
        simplices = [[_refreeze(s) for s in level] for level in doc["simplices"]]
        faces = [
            [tuple((idx, tuple(word)) for idx, word in fs) for fs in level]
            for level in doc["faces"]
        ]
        return cls(doc["dim"], simplices, faces)


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    return x


def _refreeze(x):
    if isinstance(x, list):
        return tuple(_refreeze(v) for v in x)
    return x


def face_expr(X: TruncatedSimplicialSet, n: int, expr: Face, i: int) -> tuple[int, Face]:
    """d_i applied to an n-dimensional simplex expression; returns (n-1, expr)."""
    idx, word = expr
    if not word:
        if n == 0:
            raise InputError("vertices have no faces")
        return n - 1, X.face(n, idx, i)
    j, rest = word[0], word[1:]
    if i < j:
        m, sub = face_expr(X, n - 1, (idx, rest), i)
        return m + 1, (sub[0], _normalize_word((j - 1,) + sub[1]))
    if i in (j, j + 1):
        return n - 1, (idx, rest)
    m, sub = face_expr(X, n - 1, (idx, rest), i - 1)
    return m + 1, (sub[0], _normalize_word((j,) + sub[1]))


def face_of(X: TruncatedSimplicialSet, n: int, expr: Face, i: int) -> Face:
    _, res = face_expr(X, n, expr, i)
    return res


def _normalize_word(word: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical decreasing form via s_i s_j = s_{j+1} s_i for i <= j."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] <= w[k + 1]:
                w[k], w[k + 1] = w[k + 1] + 1, w[k]
                changed = True
    return tuple(w)


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated abelian group: free rank plus torsion factors."""

    rank: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass
class GroupPresentation:
    n_generators: int
    relators: list[tuple[int, ...]]  # signed 1-based generator indices

    def __post_init__(self):
        for rel in self.relators:
            for g in rel:
                if g == 0 or abs(g) > self.n_generators:
                    raise InputError(f"relator index {g} out of range")


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SNFResult:
    """diag entries d1 | d2 | ... with unimodular certificates U A V = D."""

    diagonal: list[int]
    U: list[list[int]]
    V: list[list[int]]
    matrix: list[list[int]]

    def verify(self) -> None:
        n, m = len(self.matrix), len(self.matrix[0]) if self.matrix else 0
        D = _mat_mul(_mat_mul(self.U, self.matrix), self.V)
        for i in range(n):
            for j in range(m):
                want = self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                if D[i][j] != want:
                    raise InternalCheckError("U*A*V does not equal the SNF diagonal")
        for i in range(len(self.diagonal) - 1):
            if self.diagonal[i] and self.diagonal[i + 1] % self.diagonal[i]:
                raise InternalCheckError("SNF divisibility chain broken")
        if abs(_det(self.U)) != 1 or abs(_det(self.V)) != 1:
            raise InternalCheckError("SNF certificate is not unimodular")

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def _mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def _det(M):
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(M)
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def smith_normal_form(matrix: list[list[int]], verify: bool = True) -> SNFResult:
    """Dense SNF with unimodular certificates, exact over Z."""
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    A = [[int(x) for x in row] for row in matrix]
    if any(len(row) != m for row in A):
        raise InputError("ragged matrix")
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, k, q):  # row i -= q * row k
        A[i] = [a - q * b for a, b in zip(A[i], A[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    def col_op(j, k, q):  # col j -= q * col k
        for row in A:
            row[j] -= q * row[k]
        for row in V:
            row[j] -= q * row[k]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(n, m):
        # pivot: smallest nonzero absolute value in the remaining block
        piv = None
        best = None
        for i in range(t, n):
            for j in range(t, m):
                a = A[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            done = True
            for i in range(t + 1, n):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                break
        # divisibility: pivot must divide the remaining block
        stray = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % A[t][t]:
                    stray = (i, j)
                    break
            if stray:
                break
        if stray:
            row_op(t, stray[0], -1)  # add stray row into pivot row
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diagonal = [A[i][i] for i in range(min(n, m))]
    res = SNFResult(diagonal, U, V, [[int(x) for x in row] for row in matrix])
    if verify:
        res.verify()
    return res


class ColumnLatticeReducer:
    """Incremental integer column-echelon reduction.

    Maintains, via unimodular column operations only, a basis of the
    lattice spanned by all columns fed in; basis columns are keyed by
    their largest-index nonzero row. Suitable for streaming very wide
    boundary matrices without materializing them.
    """

    def __init__(self):
        self.basis: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def add_column(self, col: dict[int, int]) -> None:
        col = {r: v for r, v in col.items() if v}
        while col:
            r = max(col)
            b = self.basis.get(r)
            if b is None:
                self.basis[r] = col
                return
            p, a = b[r], col[r]
            if a % p == 0:
                q = a // p
                for rr, vv in b.items():
                    nv = col.get(rr, 0) - q * vv
                    if nv:
                        col[rr] = nv
                    else:
                        col.pop(rr, None)
            else:
                g, x, y = _xgcd(p, a)
                newb: dict[int, int] = {}
                rows = set(b) | set(col)
                for rr in rows:
                    nv = x * b.get(rr, 0) + y * col.get(rr, 0)
                    if nv:
                        newb[rr] = nv
                newcol: dict[int, int] = {}
                for rr in rows:
                    nv = (p // g) * col.get(rr, 0) - (a // g) * b.get(rr, 0)
                    if nv:
                        newcol[rr] = nv
                self.basis[r] = newb
                col = newcol

    def basis_columns(self) -> list[dict[int, int]]:
        return [self.basis[r] for r in sorted(self.basis)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def invariant_factors_sparse(columns: Iterable[dict[int, int]]) -> list[int]:
    """Invariant factors of the matrix with the given sparse columns.

    Markowitz-flavored elimination: prefer +-1 pivots with minimal fill;
    a general pivot is first made to divide its row and column by gcd
    steps. The collected pivots are folded into a divisibility chain.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[j] = v
                cols.setdefault(j, {})[r] = v

    def set_entry(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v
        else:
            if r in rows and c in rows[r]:
                del rows[r][c]
                if not rows[r]:
                    del rows[r]
            if c in cols and r in cols[c]:
                del cols[c][r]
                if not cols[c]:
                    del cols[c]

    pivots: list[int] = []
    while rows:
        # choose pivot: unit entries first, minimal (nnz_row-1)*(nnz_col-1)
        best = None
        best_cost = None
        best_unit = False
        scan = 0
        for r, rdict in rows.items():
            for c, v in rdict.items():
                unit = abs(v) == 1
                cost = (len(rdict) - 1) * (len(cols[c]) - 1)
                key_better = (
                    best is None
                    or (unit and not best_unit)
                    or (unit == best_unit and cost < best_cost)
                )
                if key_better:
                    best, best_cost, best_unit = (r, c), cost, unit
                scan += 1
            if best_unit and best_cost == 0:
                break
            if scan > 5000 and best_unit:
                break
        r, c = best

        def col_pair(c1, c2, x, y, u, w):
            # (col c1, col c2) <- (x*c1 + y*c2, u*c2 - w*c1); det = xu + yw
            c1_old = dict(cols.get(c1, {}))
            c2_old = dict(cols.get(c2, {}))
            for rr in set(c1_old) | set(c2_old):
                set_entry(rr, c1, x * c1_old.get(rr, 0) + y * c2_old.get(rr, 0))
                set_entry(rr, c2, u * c2_old.get(rr, 0) - w * c1_old.get(rr, 0))

        def row_pair(r1, r2, x, y, u, w):
            r1_old = dict(rows.get(r1, {}))
            r2_old = dict(rows.get(r2, {}))
            for cc in set(r1_old) | set(r2_old):
                set_entry(r1, cc, x * r1_old.get(cc, 0) + y * r2_old.get(cc, 0))
                set_entry(r2, cc, u * r2_old.get(cc, 0) - w * r1_old.get(cc, 0))

        # make pivot divide its row and column via unimodular gcd pairs
        while True:
            p = rows[r][c]
            stray_c = next((cc for cc, v in rows[r].items() if cc != c and v % p), None)
            if stray_c is not None:
                a = rows[r][stray_c]
                g, x, y = _xgcd(p, a)
                col_pair(c, stray_c, x, y, p // g, a // g)
                continue
            stray_r = next((rr for rr, v in cols[c].items() if rr != r and v % p), None)
            if stray_r is not None:
                a = cols[c][stray_r]
                g, x, y = _xgcd(p, a)
                row_pair(r, stray_r, x, y, p // g, a // g)
                continue
            break
        p = rows[r][c]
        # eliminate: row r and column c
        col_entries = [(rr, v) for rr, v in cols[c].items() if rr != r]
        row_entries = [(cc, v) for cc, v in rows[r].items() if cc != c]
        for rr, v in col_entries:
            q = v // p
            for cc, w in list(rows[r].items()):
                if cc == c:
                    continue
                set_entry(rr, cc, rows.get(rr, {}).get(cc, 0) - q * w)
            set_entry(rr, c, 0)
        for cc, _ in row_entries:
            set_entry(r, cc, 0)
        set_entry(r, c, 0)
        pivots.append(abs(p))
    return _divisibility_chain(pivots)


def _divisibility_chain(values: list[int]) -> list[int]:
    """Fold a diagonal multiset into SNF invariant factors."""
    vals = [v for v in values if v]
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[j] % vals[i]:
                    g = math.gcd(vals[i], vals[j])
                    lcm = vals[i] * vals[j] // g
                    vals[i], vals[j] = g, lcm
                    changed = True
    return sorted(vals)


# ---------------------------------------------------------------------------
# Topological invariants
# ---------------------------------------------------------------------------


def components(X: TruncatedSimplicialSet) -> list[set[int]]:
    """Partition of the vertex indices by 1-skeleton connectivity."""
    if X.dim < 1:
        raise InputError("components need at least the 1-skeleton")
    parent = list(range(X.n_cells(0)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for fs in X.faces[1]:
        (a, wa), (b, wb) = fs[0], fs[1]
        if wa or wb:
            raise InternalCheckError("edge face landed on a degenerate vertex")
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, set[int]] = {}
    for v in range(len(parent)):
        groups.setdefault(find(v), set()).add(v)
    return sorted(groups.values(), key=min)


def boundary_columns(X: TruncatedSimplicialSet, n: int):
    """Columns of the normalized boundary C_n -> C_{n-1} (degenerate faces drop)."""
    for j in range(X.n_cells(n)):
        col: dict[int, int] = {}
        for i, (idx, word) in enumerate(X.faces[n][j]):
            if word:
                continue
            col[idx] = col.get(idx, 0) + (1 if i % 2 == 0 else -1)
        yield {r: v for r, v in col.items() if v}


def _rank_of_boundary(X: TruncatedSimplicialSet, n: int) -> int:
    if n == 0 or n > X.dim:
        return 0
    red = ColumnLatticeReducer()
    for col in boundary_columns(X, n):
        red.add_column(col)
    return red.rank


def homology(X: TruncatedSimplicialSet, n: int) -> AbelianInvariants:
    """H_n of the normalized chain complex, exact over Z."""
    if n < 0:
        raise InputError("negative homology degree")
    if n + 1 > X.dim:
        raise InputError(
            f"H_{n} needs simplices up to dimension {n + 1}; truncation is {X.dim}"
        )
    c_n = X.n_cells(n)
    rank_dn = _rank_of_boundary(X, n)
    red = ColumnLatticeReducer()
    for col in boundary_columns(X, n + 1):
        red.add_column(col)
    rank_up = red.rank
    torsion = [d for d in invariant_factors_sparse(red.basis_columns()) if d > 1]
    free_rank = c_n - rank_dn - rank_up
    if free_rank < 0:
        raise InternalCheckError("negative free rank; boundary ranks inconsistent")
    return AbelianInvariants(free_rank, tuple(torsion))


def check_boundary_squares_to_zero(X: TruncatedSimplicialSet) -> None:
    for n in range(2, X.dim + 1):
        lower = [dict() for _ in range(X.n_cells(n - 1))]
        for j, col in enumerate(boundary_columns(X, n - 1)):
            lower[j] = col
        for col in boundary_columns(X, n):
            acc: dict[int, int] = {}
            for r, v in col.items():
                for rr, vv in lower[r].items():
                    acc[rr] = acc.get(rr, 0) + v * vv
            if any(acc.values()):
                raise InternalCheckError(f"boundary squared nonzero in dimension {n}")


def pi1_presentation(X: TruncatedSimplicialSet, basepoint: int = 0) -> GroupPresentation:
    """Edge-path presentation of pi_1 of the component of the basepoint.

    Spanning tree by BFS from the basepoint in lexicographic edge order;
    generators are the non-tree nondegenerate edges of the component,
    relators come from the nondegenerate 2-simplices.
    """
    if X.dim < 2:
        raise InputError("pi1 needs the 2-skeleton")
    n_vert = X.n_cells(0)
    if not 0 <= basepoint < n_vert:
        raise InputError("basepoint out of range")
    edges = []
    for j, fs in enumerate(X.faces[1]):
        cod, dom = fs[0][0], fs[1][0]
        edges.append((dom, cod))
    comp = components(X)
    my_comp = next(c for c in comp if basepoint in c)
    # BFS tree
    adj: dict[int, list[tuple[int, int]]] = {}
    for j, (a, b) in enumerate(edges):
        adj.setdefault(a, []).append((b, j))
        adj.setdefault(b, []).append((a, j))
    tree_edges: set[int] = set()
    seen = {basepoint}
    frontier = [basepoint]
    while frontier:
        nxt = []
        for v in frontier:
            for w, j in sorted(adj.get(v, [])):
                if w not in seen:
                    seen.add(w)
                    tree_edges.add(j)
                    nxt.append(w)
        frontier = nxt
    gen_of_edge: dict[int, int] = {}
    for j, (a, b) in enumerate(edges):
        if a in my_comp and j not in tree_edges:
            gen_of_edge[j] = len(gen_of_edge) + 1
    relators = []
    for j in range(X.n_cells(2)):
        fs = X.faces[2][j]
        in_comp = False
        for idx, word in fs:
            if not word and edges[idx][0] in my_comp:
                in_comp = True
        if not in_comp:
            continue
        word_letters = []
        for which, sign in ((2, 1), (0, 1), (1, -1)):
            idx, dword = fs[which]
            if dword:
                continue  # degenerate face: identity edge
            g = gen_of_edge.get(idx)
            if g is not None:
                word_letters.append(sign * g)
        if word_letters:
            relators.append(tuple(word_letters))
    return GroupPresentation(len(gen_of_edge), relators)


def abelianize(P: GroupPresentation) -> AbelianInvariants:
    """Abelian invariants of a group presentation, via SNF of the relator matrix."""
    red = ColumnLatticeReducer()
    for rel in P.relators:
        col: dict[int, int] = {}
        for g in rel:
            col[abs(g) - 1] = col.get(abs(g) - 1, 0) + (1 if g > 0 else -1)
        col = {r: v for r, v in col.items() if v}
        if col:
            red.add_column(col)
    rank = P.n_generators - red.rank
    torsion = [d for d in invariant_factors_sparse(red.basis_columns()) if d > 1]
    return AbelianInvariants(rank, tuple(torsion))


def simplicial_circle_map(m: int, kind: str, i: int) -> dict[int, int]:
    """Face/degeneracy of the simplicial circle Delta^1/boundary, as a based map.

    Level m has the based set {0,1..m}; kind is "face" (target level m-1)
    or "degeneracy" (target level m+1); element 0 is the basepoint.
    """
    out: dict[int, int] = {0: 0}
    if kind == "face":
        if not 0 <= i <= m:
            raise InputError("face index out of range")
        for k in range(1, m + 1):
            v = k if k <= i else k - 1
            out[k] = 0 if v == 0 or v == m else v
    elif kind == "degeneracy":
        if not 0 <= i <= m:
            raise InputError("degeneracy index out of range")
        for k in range(1, m + 1):
            out[k] = k if k <= i else k + 1
    else:
        raise InputError("kind must be 'face' or 'degeneracy'")
    return out
