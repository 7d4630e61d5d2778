"""Shared regression corpus: small simplicial complexes with known
homology, built as truncated simplicial sets with empty degeneracy data.
"""

from __future__ import annotations

import itertools

from jgamma.topo import TruncatedSimplicialSet


def from_facets(facets, dim: int = 2) -> TruncatedSimplicialSet:
    """The simplicial set of an abstract simplicial complex.

    Faces of strictly increasing vertex tuples are never degenerate, so
    every stored face carries an empty degeneracy word."""
    simps = [set() for _ in range(dim + 1)]
    for f in facets:
        f = tuple(sorted(set(f)))
        for r in range(1, min(len(f), dim + 1) + 1):
            for sub in itertools.combinations(f, r):
                simps[r - 1].add(sub)
    simplices = [sorted(s) for s in simps]
    index = [{s: i for i, s in enumerate(level)} for level in simplices]
    faces = [[]]
    for n in range(1, dim + 1):
        lvl = []
        for s in simplices[n]:
            lvl.append(
                tuple((index[n - 1][s[:i] + s[i + 1 :]], ()) for i in range(n + 1))
            )
        faces.append(lvl)
    return TruncatedSimplicialSet(dim, simplices, faces)


def grid_surface(w: int, h: int, flip: bool = False) -> list[tuple[int, int, int]]:
    """Triangulated w-by-h grid with torus identifications; flip reverses
    the vertical gluing on the wrapped column (Klein bottle)."""

    def v(i: int, j: int) -> int:
        if i == w:
            i = 0
            if flip:
                j = (-j) % h
        return (i % w) * h + (j % h)

    tris = []
    for i in range(w):
        for j in range(h):
            a, b, c, d = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return tris


# name -> (facets, expected H1 string)
CORPUS: dict[str, tuple[list, str]] = {
    "circle": ([(0, 1), (1, 2), (0, 2)], "Z"),
    "sphere": (list(itertools.combinations(range(4), 3)), "0"),
    "torus": (grid_surface(3, 3), "Z + Z"),
    "torus_4x4": (grid_surface(4, 4), "Z + Z"),
    "klein": (grid_surface(4, 3, flip=True), "Z + Z/2"),
    "projective_plane": (
        [
            (1, 2, 4),
            (1, 2, 5),
            (1, 3, 4),
            (1, 3, 6),
            (1, 5, 6),
            (2, 3, 5),
            (2, 3, 6),
            (2, 4, 6),
            (3, 4, 5),
            (4, 5, 6),
        ],
        "Z/2",
    ),
    "disk": ([(0, 1, 2)], "0"),
    "annulus": (
        [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (0, 2, 5), (0, 3, 5)],
        "Z",
    ),
    "mobius": ([(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4)], "Z"),
    "figure_eight": ([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)], "Z + Z"),
    "complete_graph_5": (list(itertools.combinations(range(5), 2)), " + ".join(["Z"] * 6)),
    "two_spheres_wedge": (
        [s for s in itertools.combinations(range(4), 3)]
        + [tuple(sorted((0, a, b))) for a, b in itertools.combinations((4, 5, 6), 2)]
        + [(4, 5, 6)],
        "0",
    ),
}
