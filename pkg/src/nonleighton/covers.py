"""Cellular maps, the combinatorial covering criterion, and finite covers.

A cellular map sends vertices to vertices, edges to edges (respecting
orientation) and each cell onto a target cell.  The cell image is recorded as
``CellImage(cell, rotation, reversed)``: the edge-mapped source boundary,
inverted when ``reversed``, equals the target boundary rotated by
``rotation`` (``rotate(target, rotation)``).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Optional

from .complexes import (
    Cell,
    CellIsomorphism,
    Edge,
    TwoComplex,
    _link_index,
    complex_isomorphic,
)
from .report import VerificationReport
from .words import Word, inverse, rotate


class CellMapError(ValueError):
    pass


class NoMatch(CellMapError):
    pass


class Ambiguous(CellMapError):
    pass


class VoltageError(ValueError):
    pass


class CellImage(NamedTuple):
    cell: str
    rotation: int = 0
    reversed: bool = False


@dataclass(frozen=True)
class CellularMap:
    source: TwoComplex
    target: TwoComplex
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    cell_map: Optional[dict[str, CellImage]] = None
    interior: Optional[frozenset[str]] = None

    def interior_vertices(self) -> frozenset[str]:
        return self.source.vertex_set if self.interior is None else self.interior

    def image_word(self, w: Word) -> Word:
        return tuple((self.edge_map[e], s) for e, s in w)

    def to_dict(self, embed: bool = True) -> dict:
        d = {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "vertex_map": dict(sorted(self.vertex_map.items())),
            "edge_map": dict(sorted(self.edge_map.items())),
        }
        if self.cell_map is not None:
            d["cell_map"] = {
                c: {"cell": im.cell, "rotation": im.rotation, "reversed": im.reversed}
                for c, im in sorted(self.cell_map.items())
            }
        if self.interior is not None:
            d["interior"] = sorted(self.interior)
        return d

    @classmethod
    def from_dict(cls, d: dict, load=None) -> "CellularMap":
        def complex_of(x):
            if isinstance(x, str):
                if load is None:
                    with open(x) as fh:
                        x = json.load(fh)
                else:
                    x = load(x)
            return TwoComplex.from_dict(x)

        cm = d.get("cell_map")
        return cls(
            complex_of(d["source"]),
            complex_of(d["target"]),
            dict(d["vertex_map"]),
            dict(d["edge_map"]),
            None if cm is None else {
                c: CellImage(v["cell"], int(v.get("rotation", 0)), bool(v.get("reversed", False)))
                for c, v in cm.items()
            },
            None if d.get("interior") is None else frozenset(d["interior"]),
        )


def identity_map(cx: TwoComplex) -> CellularMap:
    return CellularMap(
        cx, cx,
        {v: v for v in cx.vertices},
        {e.name: e.name for e in cx.edges},
        {c.name: CellImage(c.name, 0, False) for c in cx.cells},
    )


def _match_cell(word: Word, target: TwoComplex) -> list[CellImage]:
    hits = []
    inv = inverse(word)
    for c in target.cells:
        b = c.boundary
        if len(b) != len(word):
            continue
        for rev, w in ((False, word), (True, inv)):
            for r in range(len(b)):
                if rotate(b, r) == w:
                    hits.append(CellImage(c.name, r, rev))
    return hits


def derive_cell_map(m: CellularMap) -> CellularMap:
    """Recover each cell's image from the edge map."""
    cell_map = {}
    for c in m.source.cells:
        img = m.image_word(c.boundary)
        hits = _match_cell(img, m.target)
        if not hits:
            raise NoMatch(f"image of cell {c.name!r} matches no target cell")
        if len(hits) > 1:
            raise Ambiguous(f"image of cell {c.name!r} matches {len(hits)} target cells/rotations")
        cell_map[c.name] = hits[0]
    return replace(m, cell_map=cell_map)


def _image_corner_position(im: CellImage, i: int, length: int) -> int:
    if not im.reversed:
        return (i + im.rotation) % length
    return (length - 2 - i - im.rotation) % length


def verify_covering(m: CellularMap) -> VerificationReport:
    """Cell compatibility everywhere plus edge-end and corner bijectivity at
    every interior vertex."""
    rep = VerificationReport("covering")
    src, tgt = m.source, m.target
    if m.cell_map is None:
        raise CellMapError("cell map is missing; derive it first")
    missing_v = [v for v in src.vertices if v not in m.vertex_map]
    missing_e = [e.name for e in src.edges if e.name not in m.edge_map]
    missing_c = [c.name for c in src.cells if c.name not in m.cell_map]
    if missing_v or missing_e or missing_c:
        raise CellMapError(f"incomplete map: vertices {missing_v[:3]}, edges {missing_e[:3]}, cells {missing_c[:3]}")

    for v, w in m.vertex_map.items():
        if w not in tgt.vertex_set:
            rep.error(v, "vertex image is not a target vertex", image=w)
    for e in src.edges:
        f = tgt.edge.get(m.edge_map[e.name])
        if f is None:
            rep.error(e.name, "edge image is not a target edge", image=m.edge_map[e.name])
        elif (m.vertex_map[e.tail], m.vertex_map[e.head]) != (f.tail, f.head):
            rep.error(e.name, "edge map does not commute with endpoints", image=f.name)
    if rep.errors():
        return rep

    for c in src.cells:
        im = m.cell_map[c.name]
        d = tgt.cell.get(im.cell)
        img = m.image_word(c.boundary)
        if d is None:
            rep.error(c.name, "cell image is not a target cell", image=im.cell)
            continue
        expect = rotate(d.boundary, im.rotation)
        if (inverse(img) if im.reversed else img) != expect:
            rep.error(c.name, "boundary of cell does not map onto its image cell", image=im.cell)
    if rep.errors():
        return rep

    src_idx, tgt_idx = _link_index(src), _link_index(tgt)
    tgt_len = {c.name: len(c.boundary) for c in tgt.cells}
    for v in sorted(m.interior_vertices()):
        w = m.vertex_map[v]
        seen: dict = {}
        for end in src_idx.ends[v]:
            image = (m.edge_map[end[0]], end[1])
            if image in seen:
                rep.error(v, "edge-end collision", ends=[list(seen[image]), list(end)], image=list(image))
            else:
                seen[image] = end
        missed = sorted(set(tgt_idx.ends[w]) - set(seen))
        if missed:
            rep.error(v, "edge-ends at image vertex not covered", missing=[list(x) for x in missed])
        seen_c: dict = {}
        for corner in src_idx.corners[v]:
            im = m.cell_map[corner.cell]
            image = (im.cell, _image_corner_position(im, corner.position, tgt_len[im.cell]))
            if image in seen_c:
                rep.error(v, "corner collision", corners=[[seen_c[image].cell, seen_c[image].position],
                                                          [corner.cell, corner.position]],
                          image=list(image))
            else:
                seen_c[image] = corner
        tgt_corners = {(c.cell, c.position) for c in tgt_idx.corners[w]}
        stray = sorted(set(seen_c) - tgt_corners)
        if stray:
            rep.error(v, "corner image not at the image vertex", images=[list(x) for x in stray])
        missed_c = sorted(tgt_corners - set(seen_c))
        if missed_c:
            rep.error(v, "corners at image vertex not covered", missing=[list(x) for x in missed_c])
    return rep


# --- permutation voltages ------------------------------------------------------

Perm = tuple[int, ...]


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@dataclass(frozen=True)
class Voltage:
    """``sheets`` and, per base edge, a 0-based permutation of the sheets;
    lifted edge ``(e, s)`` runs from ``(tail e, s)`` to ``(head e, perm[e][s])``."""
    sheets: int
    perms: dict[str, Perm] = field(default_factory=dict)

    def perm(self, e: str) -> Perm:
        return self.perms.get(e, tuple(range(self.sheets)))

    def key(self, edges: Iterable[str]) -> tuple:
        return tuple(self.perm(e) for e in edges)

    def to_dict(self) -> dict:
        return {
            "sheets": self.sheets,
            "permutations": {e: [x + 1 for x in p] for e, p in sorted(self.perms.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Voltage":
        n = int(d["sheets"])
        perms = {}
        for e, p in d.get("permutations", {}).items():
            p = tuple(int(x) - 1 for x in p)
            if sorted(p) != list(range(n)):
                raise VoltageError(f"permutation for {e!r} is not a permutation of 1..{n}")
            perms[e] = p
        return cls(n, perms)


def walk(volt: Voltage, w: Word, sheet: int) -> int:
    for e, s in w:
        p = volt.perm(e)
        sheet = p[sheet] if s == 1 else perm_inverse(p)[sheet]
    return sheet


def cell_monodromy(volt: Voltage, w: Word) -> Perm:
    return tuple(walk(volt, w, s) for s in range(volt.sheets))


def voltage_violations(base: TwoComplex, volt: Voltage) -> list[str]:
    ident = tuple(range(volt.sheets))
    return [c.name for c in base.cells if cell_monodromy(volt, c.boundary) != ident]


def _lift_name(x: str, s: int) -> str:
    return f"{x}#{s + 1}"


def build_cover(base: TwoComplex, volt: Voltage) -> tuple[TwoComplex, CellularMap]:
    n = volt.sheets
    if n < 1:
        raise VoltageError("need at least one sheet")
    for e, p in volt.perms.items():
        if e not in base.edge:
            raise VoltageError(f"voltage on unknown edge {e!r}")
        if sorted(p) != list(range(n)):
            raise VoltageError(f"voltage on {e!r} is not a permutation of {n} sheets")
    bad = voltage_violations(base, volt)
    if bad:
        raise VoltageError(f"voltage does not lift cell(s) {bad}")
    vertices = [_lift_name(v, s) for v in base.vertices for s in range(n)]
    edges = []
    for e in base.edges:
        p = volt.perm(e.name)
        for s in range(n):
            edges.append(Edge(_lift_name(e.name, s), _lift_name(e.tail, s), _lift_name(e.head, p[s])))
    cells = []
    for c in base.cells:
        for s0 in range(n):
            s, lifted = s0, []
            for e, sign in c.boundary:
                p = volt.perm(e)
                if sign == 1:
                    lifted.append((_lift_name(e, s), 1))
                    s = p[s]
                else:
                    s = perm_inverse(p)[s]
                    lifted.append((_lift_name(e, s), -1))
            cells.append(Cell(_lift_name(c.name, s0), tuple(lifted)))
    cover = TwoComplex(tuple(vertices), tuple(edges), tuple(cells))
    proj = CellularMap(
        cover, base,
        {_lift_name(v, s): v for v in base.vertices for s in range(n)},
        {_lift_name(e.name, s): e.name for e in base.edges for s in range(n)},
        {_lift_name(c.name, s): CellImage(c.name, 0, False) for c in base.cells for s in range(n)},
    )
    return cover, proj


def cover_is_connected(base: TwoComplex, volt: Voltage) -> bool:
    n = volt.sheets
    parent = {(v, s): (v, s) for v in base.vertices for s in range(n)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in base.edges:
        p = volt.perm(e.name)
        for s in range(n):
            a, b = find((e.tail, s)), find((e.head, p[s]))
            parent[a] = b
    return len({find(x) for x in parent}) <= 1


class CoverClass(NamedTuple):
    voltage: Voltage
    connected: bool


def _conjugate_key(key: tuple, pi: Perm) -> tuple:
    pi_inv = perm_inverse(pi)
    return tuple(perm_compose(pi, perm_compose(p, pi_inv)) for p in key)


def canonical_voltage_key(key: tuple, n: int) -> tuple:
    """Lexicographically least representative under simultaneous conjugation."""
    return min(_conjugate_key(key, pi) for pi in itertools.permutations(range(n)))


def enumerate_covers(base: TwoComplex, n: int) -> list[CoverClass]:
    """All voltage assignments on ``n`` sheets that lift every cell, one per
    sheet-relabeling class, in lexicographic order of the canonical
    representative (per edge, in edge-name order)."""
    if n < 1:
        raise ValueError("need at least one sheet")
    names = [e.name for e in base.edges]
    pos = {e: i for i, e in enumerate(names)}
    due: dict[int, list[Word]] = {}
    for c in base.cells:
        last = max(pos[e] for e, _ in c.boundary)
        due.setdefault(last, []).append(c.boundary)
    ident = tuple(range(n))
    perms = list(itertools.permutations(range(n)))
    conjugators = perms[1:]
    found: list[tuple] = []
    assign: list[Perm] = []

    def lifts(words) -> bool:
        volt = Voltage(n, dict(zip(names, assign)))
        return all(cell_monodromy(volt, w) == ident for w in words)

    def rec(k: int):
        if k == len(names):
            key = tuple(assign)
            if all(key <= _conjugate_key(key, pi) for pi in conjugators):
                found.append(key)
            return
        for p in perms:
            assign.append(p)
            if lifts(due.get(k, ())):
                rec(k + 1)
            assign.pop()

    rec(0)
    out = []
    for key in sorted(found):
        volt = Voltage(n, dict(zip(names, key)))
        out.append(CoverClass(volt, cover_is_connected(base, volt)))
    return out


@dataclass
class CommonCover:
    voltage_a: Voltage
    voltage_b: Voltage
    isomorphism: CellIsomorphism

    def to_dict(self) -> dict:
        return {
            "voltage_a": self.voltage_a.to_dict(),
            "voltage_b": self.voltage_b.to_dict(),
            "isomorphism": self.isomorphism.to_dict(),
        }


def search_common_cover(a: TwoComplex, b: TwoComplex, max_sheets_a: int, max_sheets_b: int,
                        stats: Optional[dict] = None) -> Optional[CommonCover]:
    """Scan connected covers of ``a`` and ``b`` with at most the given numbers
    of sheets and return the first pair whose total complexes are isomorphic."""
    stats = {} if stats is None else stats
    stats.setdefault("compared", 0)
    covers_a = {n: [c.voltage for c in enumerate_covers(a, n) if c.connected] for n in range(1, max_sheets_a + 1)}
    covers_b = {n: [c.voltage for c in enumerate_covers(b, n) if c.connected] for n in range(1, max_sheets_b + 1)}
    stats["covers_a"] = {n: len(v) for n, v in covers_a.items()}
    stats["covers_b"] = {n: len(v) for n, v in covers_b.items()}
    ca, cb = a.counts(), b.counts()
    built_b: dict = {}
    for na in range(1, max_sheets_a + 1):
        for nb in range(1, max_sheets_b + 1):
            if tuple(na * x for x in ca) != tuple(nb * x for x in cb):
                continue
            for va in covers_a[na]:
                cover_a, _ = build_cover(a, va)
                for j, vb in enumerate(covers_b[nb]):
                    if (nb, j) not in built_b:
                        built_b[(nb, j)] = build_cover(b, vb)[0]
                    stats["compared"] += 1
                    iso = complex_isomorphic(cover_a, built_b[(nb, j)])
                    if iso is not None:
                        return CommonCover(va, vb, iso)
    return None
