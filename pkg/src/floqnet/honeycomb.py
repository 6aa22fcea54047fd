"""Brick-wall honeycomb lattice on a torus, three-colored.

Convention, fixed and relied on everywhere: vertices form a W x H grid
with W = 3*lx columns and H = ly rows; qubit id = y*W + x.  Every vertex
has horizontal edges to both neighbors and one vertical edge (present
when x + y is even), giving degree 3.  Faces are two-row bricks anchored
at even x + y, spanning columns x..x+2, so there are (3/2)*lx*ly faces
on 3*lx*ly qubits.

Face colors follow c = (u + 2*(y % 2)) mod 3 with u = (x - y % 2)/2,
which gives every pair of adjacent faces distinct colors.  Each edge is
then assigned the third color, the one neither adjacent face carries.
Consequently each vertex touches one edge of every color (the three
rounds are perfect matchings) and each face boundary alternates the two
non-face colors, three of each.  A face of color c supports the 6-body
plaquette stabilizer made of the color-c Pauli on all its vertices.

Both dimensions must be even: odd lx breaks the brick parity around the
horizontal wrap, odd ly breaks the color pattern at the vertical wrap.
The face-count multiple of three is not incidental; a period-3 pairwise
schedule can only regenerate every plaquette if the faces are properly
three-colorable, which on this torus forces 3 | face count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from floqnet.pauli import PauliString

# measurement type by edge color: color-c edges carry two-body checks of
# this Pauli kind, and color-c faces carry the matching 6-body stabilizer
COLOR_PAULI = "XYZ"


class Edge(NamedTuple):
    a: int
    b: int
    color: int


class Plaquette(NamedTuple):
    qubits: tuple
    color: int
    boundary: tuple  # indices into lattice.edges of the six boundary edges


@dataclass
class HoneycombLattice:
    lx: int
    ly: int
    width: int
    height: int
    n: int
    edges: list
    plaquettes: list
    _edge_color: dict = field(repr=False)

    def vertex(self, x: int, y: int) -> int:
        return (y % self.height) * self.width + (x % self.width)

    def edges_of_color(self, color: int) -> list:
        return [e for e in self.edges if e.color == color]

    def _walk_operator(self, keys: list) -> PauliString:
        """Pauli of a closed self-avoiding edge walk.

        At each visited vertex the symbol is the Pauli of the third color,
        the one of the vertex's unused edge; such operators commute with
        every check of every round.
        """
        x = np.zeros(self.n, dtype=np.uint8)
        z = np.zeros(self.n, dtype=np.uint8)
        endpoints = [set(self._edge_endpoints(k)) for k in keys]
        seen = set()
        for i, cur in enumerate(endpoints):
            nxt = endpoints[(i + 1) % len(keys)]
            shared = cur & nxt
            if len(shared) != 1:
                raise AssertionError("walk edges must chain through one vertex")
            v = shared.pop()
            if v in seen:
                raise AssertionError("walk is not self-avoiding")
            seen.add(v)
            c1 = self._edge_color[keys[i]]
            c2 = self._edge_color[keys[(i + 1) % len(keys)]]
            if c1 == c2:
                raise AssertionError("consecutive walk edges share a color")
            kind = COLOR_PAULI[3 - c1 - c2]
            x[v] = kind in "XY"
            z[v] = kind in "ZY"
        return PauliString(x, z)

    def _edge_endpoints(self, key) -> tuple:
        kind, ex, ey = key
        if kind == "h":
            return self.vertex(ex, ey), self.vertex(ex + 1, ey)
        return self.vertex(ex, ey), self.vertex(ex, ey + 1)

    def logical_operators(self) -> list:
        """Two independent non-contractible cycle operators (one winding
        each way around the torus), commuting with every scheduled check."""
        w, h = self.width, self.height
        horizontal = [("h", xx, 0) for xx in range(w)]
        vertical = []
        for y in range(h):
            vertical.append(("v", y % 2, y))
            vertical.append(("h", 0, (y + 1) % h))
        ops = [self._walk_operator(horizontal), self._walk_operator(vertical)]
        for op in ops:
            for a, b, color in self.edges:
                check = PauliString.two_body(self.n, COLOR_PAULI[color], a, b)
                if not op.commutes_with(check):
                    raise AssertionError("cycle operator fails to commute")
        return ops


def _face_color(x: int, y: int) -> int:
    u = (x - y % 2) // 2
    return (u + 2 * (y % 2)) % 3


def build_honeycomb(lx: int, ly: int) -> HoneycombLattice:
    """Construct the torus lattice; both dimensions must be even and >= 2."""
    if lx % 2 or ly % 2:
        raise ValueError(f"honeycomb dimensions must be even, got {lx}x{ly}")
    if lx < 2 or ly < 2:
        raise ValueError(f"honeycomb dimensions must be >= 2, got {lx}x{ly}")
    w, h = 3 * lx, ly
    n = w * h

    def vid(x, y):
        return (y % h) * w + (x % w)

    def hkey(x, y):
        return ("h", x % w, y % h)

    def vkey(x, y):
        return ("v", x % w, y % h)

    faces = []
    edge_faces: dict = {}
    for y in range(h):
        for x in range(y % 2, w, 2):
            color = _face_color(x, y)
            qubits = tuple(
                vid(x + dx, y + dy) for dy in (0, 1) for dx in (0, 1, 2)
            )
            boundary = [
                hkey(x, y),
                hkey(x + 1, y),
                hkey(x, y + 1),
                hkey(x + 1, y + 1),
                vkey(x, y),
                vkey(x + 2, y),
            ]
            faces.append((qubits, color, boundary))
            for key in boundary:
                edge_faces.setdefault(key, []).append(color)

    edge_color = {}
    for key, colors in edge_faces.items():
        if len(colors) != 2 or colors[0] == colors[1]:
            raise AssertionError(f"edge {key} has bad face adjacency {colors}")
        edge_color[key] = 3 - colors[0] - colors[1]

    edges = []
    edge_index = {}
    for y in range(h):
        for x in range(w):
            edge_index[hkey(x, y)] = len(edges)
            edges.append(Edge(vid(x, y), vid(x + 1, y), edge_color[hkey(x, y)]))
            if (x + y) % 2 == 0:
                edge_index[vkey(x, y)] = len(edges)
                edges.append(Edge(vid(x, y), vid(x, y + 1), edge_color[vkey(x, y)]))

    # every qubit must touch exactly one edge of each color
    per_vertex = [[] for _ in range(n)]
    for a, b, color in edges:
        per_vertex[a].append(color)
        per_vertex[b].append(color)
    for q, colors in enumerate(per_vertex):
        if sorted(colors) != [0, 1, 2]:
            raise AssertionError(f"qubit {q} sees edge colors {colors}")

    # each face boundary holds three edges of each non-matching color
    plaquettes = []
    for qubits, color, boundary in faces:
        bcolors = sorted(edge_color[k] for k in boundary)
        expect = sorted([c for c in range(3) if c != color] * 3)
        if bcolors != expect:
            raise AssertionError(f"face {qubits} boundary colors {bcolors}")
        plaquettes.append(
            Plaquette(qubits, color, tuple(edge_index[k] for k in boundary))
        )

    return HoneycombLattice(
        lx=lx,
        ly=ly,
        width=w,
        height=h,
        n=n,
        edges=edges,
        plaquettes=plaquettes,
        _edge_color=edge_color,
    )
