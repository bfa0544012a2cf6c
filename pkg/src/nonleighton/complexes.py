"""Finite combinatorial 2-complexes.

Vertices, edges and cells are named by strings.  A cell is attached along a
boundary word: a cyclic sequence of signed edges ``(edge, +1 | -1)`` where
``-1`` traverses the edge from head to tail.  Boundary words are stored exactly
as given; nothing here reduces them.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .report import VerificationReport
from .words import Presentation, Word, inverse, rotate

TAIL = "tail"
HEAD = "head"


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Edge:
    name: str
    tail: str
    head: str


@dataclass(frozen=True, order=True)
class Cell:
    name: str
    boundary: Word

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple((str(e), int(s)) for e, s in self.boundary))


@dataclass(frozen=True)
class TwoComplex:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    cells: tuple[Cell, ...] = ()

    def __post_init__(self):
        # canonical (lexicographic) order so equality is order-independent
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "cells", tuple(sorted(self.cells)))

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    @cached_property
    def cell(self) -> dict[str, Cell]:
        return {c.name: c for c in self.cells}

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.cells)

    def start(self, letter) -> str:
        e, s = letter
        rec = self.edge[e]
        return rec.tail if s == 1 else rec.head

    def end(self, letter) -> str:
        e, s = letter
        rec = self.edge[e]
        return rec.head if s == 1 else rec.tail

    # --- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": e.name, "tail": e.tail, "head": e.head} for e in self.edges],
            "cells": [
                {"name": c.name, "boundary": [{"edge": e, "sign": s} for e, s in c.boundary]}
                for c in self.cells
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TwoComplex":
        return cls(
            tuple(data["vertices"]),
            tuple(Edge(e["name"], e["tail"], e["head"]) for e in data.get("edges", [])),
            tuple(
                Cell(c["name"], tuple((x["edge"], int(x["sign"])) for x in c["boundary"]))
                for c in data.get("cells", [])
            ),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def make_complex(vertices: Iterable[str], edges: Iterable[tuple[str, str, str]],
                 cells: Iterable[tuple[str, Word]] = ()) -> TwoComplex:
    return TwoComplex(
        tuple(vertices),
        tuple(Edge(*e) for e in edges),
        tuple(Cell(name, tuple(b)) for name, b in cells),
    )


# --- validation --------------------------------------------------------------


def validate_complex(cx: TwoComplex) -> VerificationReport:
    rep = VerificationReport("complex")
    for kind, names in (
        ("vertex", cx.vertices),
        ("edge", [e.name for e in cx.edges]),
        ("cell", [c.name for c in cx.cells]),
    ):
        for name, k in Counter(names).items():
            if k > 1:
                rep.error(name, f"duplicate {kind} identifier", count=k)
    verts = cx.vertex_set
    for e in cx.edges:
        for end in (e.tail, e.head):
            if end not in verts:
                rep.error(e.name, "edge endpoint is not a declared vertex", vertex=end)
    for c in cx.cells:
        if not c.boundary:
            rep.error(c.name, "empty boundary word")
            continue
        unknown = [e for e, _ in c.boundary if e not in cx.edge]
        bad_sign = [s for _, s in c.boundary if s not in (1, -1)]
        if unknown or bad_sign:
            rep.error(c.name, "boundary uses unknown edge or bad sign",
                      unknown=sorted(set(unknown)), signs=bad_sign)
            continue
        w = c.boundary
        for i in range(len(w)):
            nxt = w[(i + 1) % len(w)]
            if cx.end(w[i]) != cx.start(nxt):
                rep.error(c.name, "boundary not closed", position=i,
                          arrives=cx.end(w[i]), next_starts=cx.start(nxt))
                break
    return rep


def euler_characteristic(cx: TwoComplex) -> int:
    v, e, f = cx.counts()
    return v - e + f


# --- links ---------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Corner:
    """Vertex where boundary letter ``position`` ends and the next one starts."""
    cell: str
    position: int
    incoming: tuple[str, str]
    outgoing: tuple[str, str]


@dataclass(frozen=True)
class LinkProfile:
    vertex: str
    edge_ends: tuple[tuple[str, str], ...]
    corners: tuple[Corner, ...]


def arriving_end(letter) -> tuple[str, str]:
    e, s = letter
    return (e, HEAD if s == 1 else TAIL)


def leaving_end(letter) -> tuple[str, str]:
    e, s = letter
    return (e, TAIL if s == 1 else HEAD)


@dataclass
class _LinkIndex:
    ends: dict[str, list]
    corners: dict[str, list]


def _link_index(cx: TwoComplex) -> _LinkIndex:
    ends: dict[str, list] = {v: [] for v in cx.vertices}
    corners: dict[str, list] = {v: [] for v in cx.vertices}
    for e in cx.edges:
        ends[e.tail].append((e.name, TAIL))
        ends[e.head].append((e.name, HEAD))
    for c in cx.cells:
        w = c.boundary
        for i, letter in enumerate(w):
            nxt = w[(i + 1) % len(w)]
            corners[cx.end(letter)].append(Corner(c.name, i, arriving_end(letter), leaving_end(nxt)))
    return _LinkIndex(ends, corners)


def all_links(cx: TwoComplex) -> dict[str, LinkProfile]:
    idx = _link_index(cx)
    return {
        v: LinkProfile(v, tuple(sorted(idx.ends[v])), tuple(sorted(idx.corners[v])))
        for v in cx.vertices
    }


def vertex_link(cx: TwoComplex, v: str) -> LinkProfile:
    if v not in cx.vertex_set:
        raise ComplexError(f"unknown vertex {v!r}")
    ends = sorted([(e.name, TAIL) for e in cx.edges if e.tail == v]
                  + [(e.name, HEAD) for e in cx.edges if e.head == v])
    corners = []
    for c in cx.cells:
        w = c.boundary
        for i, letter in enumerate(w):
            if cx.end(letter) == v:
                nxt = w[(i + 1) % len(w)]
                corners.append(Corner(c.name, i, arriving_end(letter), leaving_end(nxt)))
    return LinkProfile(v, tuple(ends), tuple(sorted(corners)))


# --- constructions -----------------------------------------------------------


def standard_complex(p: Presentation, vertex: str = "v") -> TwoComplex:
    """One vertex, a loop per generator, a 2-cell per relator (named r0, r1, ...)."""
    for i, r in enumerate(p.relators):
        if not r:
            raise ComplexError(f"relator {i} is empty")
    return make_complex(
        [vertex],
        [(g, vertex, vertex) for g in p.generators],
        [(f"r{i}", r) for i, r in enumerate(p.relators)],
    )


def merge_cells_along_edge(cx: TwoComplex, e: str, name: Optional[str] = None) -> TwoComplex:
    """Delete ``e`` and fuse the two cells on either side of it into one.

    ``e`` must occur exactly twice among all boundary words, once in each of
    two distinct cells.
    """
    if e not in cx.edge:
        raise ComplexError(f"edge {e!r} is absent")
    hits = [(c.name, i) for c in cx.cells for i, (x, _) in enumerate(c.boundary) if x == e]
    if len(hits) != 2:
        raise ComplexError(f"edge {e!r} occurs {len(hits)} times in cell boundaries, need 2")
    (c1, i1), (c2, i2) = hits
    if c1 == c2:
        raise ComplexError(f"both occurrences of {e!r} lie in cell {c1!r}")
    w1 = rotate(cx.cell[c1].boundary, i1 + 1)  # u e^s, with e^s last
    s1 = w1[-1][1]
    w2 = cx.cell[c2].boundary
    if w2[i2][1] == s1:
        w2 = inverse(w2)
        i2 = len(w2) - 1 - i2
    w2 = rotate(w2, i2)  # e^-s v, with e^-s first
    merged = w1[:-1] + w2[1:]
    new = Cell(name or f"{c1}+{c2}", merged)
    return TwoComplex(
        cx.vertices,
        tuple(x for x in cx.edges if x.name != e),
        tuple(c for c in cx.cells if c.name not in (c1, c2)) + (new,),
    )


def connected_components(cx: TwoComplex) -> list[list[str]]:
    adj: dict[str, set] = {v: set() for v in cx.vertices}
    for e in cx.edges:
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    seen, comps = set(), []
    for v in cx.vertices:
        if v in seen:
            continue
        comp, queue = [], deque([v])
        seen.add(v)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for x in sorted(adj[u]):
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
        comps.append(sorted(comp))
    return comps


def is_connected(cx: TwoComplex) -> bool:
    return len(connected_components(cx)) <= 1


# --- cell isomorphism --------------------------------------------------------


@dataclass
class CellIsomorphism:
    vertex_map: dict[str, str]
    edge_map: dict[str, tuple[str, int]]
    cell_map: dict[str, tuple[str, int, bool]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "vertex_map": dict(sorted(self.vertex_map.items())),
            "edge_map": {e: {"edge": f, "orientation": o} for e, (f, o) in sorted(self.edge_map.items())},
            "cell_map": {c: {"cell": d, "rotation": r, "reversed": rev}
                         for c, (d, r, rev) in sorted(self.cell_map.items())},
        }


def _mapped_word(w: Word, edge_map: dict[str, tuple[str, int]]) -> Word:
    return tuple((edge_map[e][0], s * edge_map[e][1]) for e, s in w)


def _cyclic_key(w: Word) -> Word:
    return min([rotate(w, k) for k in range(len(w))] + [rotate(inverse(w), k) for k in range(len(w))])


def match_rotation(mapped: Word, target: Word, allow_reverse: bool = True) -> Optional[tuple[int, bool]]:
    """Return ``(r, reversed)`` with ``rotate(mapped or its inverse, r) == target``."""
    if len(mapped) != len(target):
        return None
    for rev in ((False, True) if allow_reverse else (False,)):
        m = inverse(mapped) if rev else mapped
        for r in range(len(m)):
            if rotate(m, r) == target:
                return r, rev
    return None


def apply_isomorphism(a: TwoComplex, iso: CellIsomorphism) -> TwoComplex:
    edges = []
    for e in a.edges:
        f, o = iso.edge_map[e.name]
        t, h = iso.vertex_map[e.tail], iso.vertex_map[e.head]
        edges.append(Edge(f, t, h) if o == 1 else Edge(f, h, t))
    cells = []
    for c in a.cells:
        d, r, rev = iso.cell_map[c.name]
        m = _mapped_word(c.boundary, iso.edge_map)
        cells.append(Cell(d, rotate(inverse(m) if rev else m, r)))
    return TwoComplex(tuple(iso.vertex_map[v] for v in a.vertices), tuple(edges), tuple(cells))


def _edge_signature(cx: TwoComplex, e: Edge, cell_len: dict[str, int]) -> tuple:
    occ = Counter(c.name for c in cx.cells for x, _ in c.boundary if x == e.name)
    return (e.tail == e.head, tuple(sorted((cell_len[c], k) for c, k in occ.items())))


def _vertex_signature(cx: TwoComplex) -> dict[str, tuple]:
    deg = Counter()
    loops = Counter()
    for e in cx.edges:
        deg[e.tail] += 1
        deg[e.head] += 1
        if e.tail == e.head:
            loops[e.tail] += 1
    return {v: (deg[v], loops[v]) for v in cx.vertices}


def complex_isomorphic(a: TwoComplex, b: TwoComplex) -> Optional[CellIsomorphism]:
    """Search exhaustively for a cellular isomorphism ``a -> b``.

    Edges may be mapped with reversed orientation; cells may be mapped onto a
    rotation of the image boundary or of its inverse.
    """
    if a.counts() != b.counts():
        return None
    if sorted(len(c.boundary) for c in a.cells) != sorted(len(c.boundary) for c in b.cells):
        return None
    vsig_a, vsig_b = _vertex_signature(a), _vertex_signature(b)
    if sorted(vsig_a.values()) != sorted(vsig_b.values()):
        return None
    len_a = {c.name: len(c.boundary) for c in a.cells}
    len_b = {c.name: len(c.boundary) for c in b.cells}
    esig_a = {e.name: _edge_signature(a, e, len_a) for e in a.edges}
    esig_b = {e.name: _edge_signature(b, e, len_b) for e in b.edges}
    if sorted(esig_a.values()) != sorted(esig_b.values()):
        return None

    # order a's edges so each one touches an already-placed vertex when possible
    order: list[Edge] = []
    placed_v: set[str] = set()
    remaining = list(a.edges)
    while remaining:
        pick = next((e for e in remaining if e.tail in placed_v or e.head in placed_v), remaining[0])
        remaining.remove(pick)
        order.append(pick)
        placed_v.update((pick.tail, pick.head))
    pos = {e.name: i for i, e in enumerate(order)}
    due: dict[int, list[Cell]] = {}
    for c in a.cells:
        last = max(pos[e] for e, _ in c.boundary)
        due.setdefault(last, []).append(c)

    candidates = {e.name: [f for f in b.edges if esig_b[f.name] == esig_a[e.name]] for e in a.edges}
    b_keys = Counter(_cyclic_key(c.boundary) for c in b.cells)

    vmap: dict[str, str] = {}
    vinv: dict[str, str] = {}
    emap: dict[str, tuple[str, int]] = {}
    used_e: set[str] = set()

    def bind(x: str, y: str, undo: list) -> bool:
        if x in vmap:
            return vmap[x] == y
        if y in vinv or vsig_a[x] != vsig_b[y]:
            return False
        vmap[x] = y
        vinv[y] = x
        undo.append(x)
        return True

    def solve(k: int) -> bool:
        if k == len(order):
            return True
        e = order[k]
        for f in candidates[e.name]:
            if f.name in used_e:
                continue
            for o in (1, -1):
                t, h = (f.tail, f.head) if o == 1 else (f.head, f.tail)
                undo: list[str] = []
                if bind(e.tail, t, undo) and bind(e.head, h, undo):
                    emap[e.name] = (f.name, o)
                    used_e.add(f.name)
                    consumed = []
                    ok = True
                    for c in due.get(k, ()):
                        key = _cyclic_key(_mapped_word(c.boundary, emap))
                        if b_keys[key] > 0:
                            b_keys[key] -= 1
                            consumed.append(key)
                        else:
                            ok = False
                            break
                    if ok and solve(k + 1):
                        return True
                    for key in consumed:
                        b_keys[key] += 1
                    used_e.discard(f.name)
                    del emap[e.name]
                for x in undo:
                    del vinv[vmap.pop(x)]
        return False

    if not solve(0):
        return None
    free_a = [v for v in a.vertices if v not in vmap]
    free_b = [v for v in b.vertices if v not in vinv]
    for x, y in zip(free_a, free_b):
        vmap[x] = y
    cell_map: dict[str, tuple[str, int, bool]] = {}
    pool: dict[Word, list[str]] = {}
    for c in b.cells:
        pool.setdefault(_cyclic_key(c.boundary), []).append(c.name)
    for c in a.cells:
        m = _mapped_word(c.boundary, emap)
        d = pool[_cyclic_key(m)].pop(0)
        r, rev = match_rotation(m, b.cell[d].boundary)
        cell_map[c.name] = (d, r, rev)
    return CellIsomorphism(vmap, emap, cell_map)


def rename_complex(cx: TwoComplex, vertices: dict[str, str] = None, edges: dict[str, str] = None,
                   cells: dict[str, str] = None) -> TwoComplex:
    vertices, edges, cells = vertices or {}, edges or {}, cells or {}
    V = lambda v: vertices.get(v, v)
    E = lambda e: edges.get(e, e)
    return TwoComplex(
        tuple(V(v) for v in cx.vertices),
        tuple(Edge(E(e.name), V(e.tail), V(e.head)) for e in cx.edges),
        tuple(Cell(cells.get(c.name, c.name), tuple((E(e), s) for e, s in c.boundary)) for c in cx.cells),
    )
