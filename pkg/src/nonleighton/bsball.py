"""Finite pieces of the Baumslag-Solitar complex X_{2,4} and its two coverings.

The underlying tree is directed, every vertex has in-degree 4 and out-degree
2.  Each tree edge carries two bits ``(gamma, delta)``: the four edges into a
vertex carry all four pairs, the two edges out of a vertex carry both values of
each bit.  X_{2,4} is the tree times the line: a vertex ``v@i`` for each tree
vertex ``v`` and integer height ``i``, vertical edges ``v@i -> v@(i+1)``, skew
edges ``e@i : v@i -> w@(2i + gamma(e))`` for each tree edge ``e = (v, w)``,
and one square-ish 2-cell per tree edge and height.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .catalog import BLACK, C_B, C_W, WHITE, complex_K, complex_L
from .complexes import Cell, Edge, TwoComplex
from .covers import CellularMap, derive_cell_map
from .report import VerificationReport

ROOT = "o"
OUT_TYPES = (((0, 0), (1, 1)), ((0, 1), (1, 0)))
ALL_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class TreeEdge:
    name: str
    tail: str
    head: str
    gamma: int
    delta: int

    @property
    def label(self) -> tuple[int, int]:
        return (self.gamma, self.delta)


@dataclass
class LabeledTree:
    colors: dict[str, str]
    edges: dict[str, TreeEdge]
    complete: frozenset[str]
    depth: dict[str, int] = field(default_factory=dict)

    @property
    def vertices(self) -> list[str]:
        return sorted(self.colors)

    def out_edges(self, v: str) -> list[TreeEdge]:
        return sorted((e for e in self.edges.values() if e.tail == v), key=lambda e: e.label)

    def in_edges(self, v: str) -> list[TreeEdge]:
        return sorted((e for e in self.edges.values() if e.head == v), key=lambda e: e.label)

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": [{"name": e.name, "tail": e.tail, "head": e.head} for e in sorted(self.edges.values(), key=lambda e: e.name)],
            "cells": [],
            "labels": {e.name: [e.gamma, e.delta] for e in sorted(self.edges.values(), key=lambda e: e.name)},
            "colors": dict(sorted(self.colors.items())),
            "complete": sorted(self.complete),
            "depth": dict(sorted(self.depth.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledTree":
        edges = {}
        for e in d["edges"]:
            g, dl = d["labels"][e["name"]]
            edges[e["name"]] = TreeEdge(e["name"], e["tail"], e["head"], int(g), int(dl))
        return cls(dict(d["colors"]), edges, frozenset(d["complete"]), dict(d.get("depth", {})))

    def __eq__(self, other):
        return isinstance(other, LabeledTree) and self.to_dict() == other.to_dict()


def labeled_tree_ball(radius: int) -> LabeledTree:
    """Deterministic ball of the given radius around a black root.

    Vertices are completed in breadth-first order.  When a vertex's out-pair
    is not forced by its parent edge, completion step ``k`` uses the pair type
    ``OUT_TYPES[k % 2]``.  New neighbours are created out-edges first, then
    in-edges, each in label order.  A vertex is named by its parent's name
    plus ``/+gd`` (reached along an out-edge) or ``/-gd`` (along an in-edge).
    """
    colors = {ROOT: BLACK}
    depth = {ROOT: 0}
    edges: dict[str, TreeEdge] = {}
    parent_edge: dict[str, TreeEdge] = {}
    complete = set()
    queue = deque([ROOT])
    step = 0
    while queue:
        v = queue.popleft()
        if depth[v] >= radius:
            continue
        pe = parent_edge.get(v)
        in_have = {pe.label} if pe is not None and pe.head == v else set()
        if pe is not None and pe.tail == v:
            g, d = pe.label
            outs = [(1 - g, 1 - d)]
        else:
            outs = list(OUT_TYPES[step % 2])
        ins = [lab for lab in ALL_LABELS if lab not in in_have]
        other = WHITE if colors[v] == BLACK else BLACK
        for sign, labels in (("+", outs), ("-", ins)):
            for g, d in labels:
                child = f"{v}/{sign}{g}{d}"
                tail, head = (v, child) if sign == "+" else (child, v)
                te = TreeEdge(child, tail, head, g, d)
                edges[child] = te
                parent_edge[child] = te
                colors[child] = other
                depth[child] = depth[v] + 1
                queue.append(child)
        complete.add(v)
        step += 1
    return LabeledTree(colors, edges, frozenset(complete), depth)


def check_tree(t: LabeledTree) -> VerificationReport:
    rep = VerificationReport("labeled tree")
    verts = set(t.colors)
    if len(t.edges) != len(verts) - 1:
        rep.error("tree", "edge count is not vertex count minus one")
    adj = {v: [] for v in verts}
    for e in t.edges.values():
        if e.tail not in verts or e.head not in verts:
            rep.error(e.name, "endpoint not a vertex")
            continue
        adj[e.tail].append(e.head)
        adj[e.head].append(e.tail)
        if t.colors[e.tail] == t.colors[e.head]:
            rep.error(e.name, "edge joins vertices of the same colour")
        if e.gamma not in (0, 1) or e.delta not in (0, 1):
            rep.error(e.name, "label bits must be 0 or 1")
    if verts:
        start = min(verts)
        seen, stack = {start}, [start]
        while stack:
            for x in adj[stack.pop()]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if seen != verts:
            rep.error("tree", "not connected")
    for v in sorted(verts):
        ins = [e.label for e in t.in_edges(v)]
        outs = [e.label for e in t.out_edges(v)]
        if len(set(ins)) != len(ins):
            rep.error(v, "repeated incoming label pair", labels=ins)
        if len({g for g, _ in outs}) != len(outs) or len({d for _, d in outs}) != len(outs):
            rep.error(v, "repeated outgoing gamma or delta", labels=outs)
        if len(ins) > 4 or len(outs) > 2:
            rep.error(v, "degree too large", indeg=len(ins), outdeg=len(outs))
        if v in t.complete and (sorted(ins) != list(ALL_LABELS) or len(outs) != 2):
            rep.error(v, "complete vertex lacks full labelled degree", ins=ins, outs=outs)
    return rep


# --- truncated complexes -------------------------------------------------------


def vname(v: str, i: int) -> str:
    return f"{v}@{i}"


def vertical_name(v: str, i: int) -> str:
    return f"E[{v}]@{i}"


def skew_name(e: str, i: int) -> str:
    return f"e[{e}]@{i}"


def cell_name(e: str, i: int) -> str:
    return f"D[{e}]@{i}"


def cell_boundary(te: TreeEdge, i: int):
    """``e_i^-1 E_{v,i} e_{i+1} E_{w,2i+1+g}^-1 E_{w,2i+g}^-1``."""
    v, w, g = te.tail, te.head, te.gamma
    return (
        (skew_name(te.name, i), -1),
        (vertical_name(v, i), 1),
        (skew_name(te.name, i + 1), 1),
        (vertical_name(w, 2 * i + 1 + g), -1),
        (vertical_name(w, 2 * i + g), -1),
    )


@dataclass
class BSBall:
    tree: LabeledTree
    i_min: int
    i_max: int
    complex: TwoComplex
    interior: frozenset[str]
    vertex_info: dict[str, tuple[str, int]]
    vertical_info: dict[str, tuple[str, int]]
    skew_info: dict[str, tuple[TreeEdge, int]]
    cell_info: dict[str, tuple[TreeEdge, int]]


def star(tree: LabeledTree, v: str, i: int) -> tuple[list[str], list[str]]:
    """Edges and cells of the untruncated complex incident to ``v@i``
    (``v`` must be a complete tree vertex)."""
    edges = [vertical_name(v, i), vertical_name(v, i - 1)]
    cells = []
    for te in tree.out_edges(v):
        edges.append(skew_name(te.name, i))
        cells += [cell_name(te.name, i), cell_name(te.name, i - 1)]
    for te in tree.in_edges(v):
        g = te.gamma
        if (i - g) % 2 == 0:
            edges.append(skew_name(te.name, (i - g) // 2))
        # head-side vertices of D_{e,j} sit at heights 2j+g .. 2j+g+2
        for j in range(-((g + 2 - i) // 2), (i - g) // 2 + 1):
            cells.append(cell_name(te.name, j))
    return edges, cells


def bs_ball(tree: LabeledTree, i_min: int, i_max: int) -> BSBall:
    if not i_min < i_max:
        raise ValueError("empty height range: need i_min < i_max")
    rng = range(i_min, i_max + 1)
    inr = lambda h: i_min <= h <= i_max
    vertices, vertex_info = [], {}
    edges, vertical_info, skew_info = [], {}, {}
    cells, cell_info = [], {}
    for v in tree.vertices:
        for i in rng:
            vertices.append(vname(v, i))
            vertex_info[vname(v, i)] = (v, i)
            if inr(i + 1):
                n = vertical_name(v, i)
                edges.append(Edge(n, vname(v, i), vname(v, i + 1)))
                vertical_info[n] = (v, i)
    for te in sorted(tree.edges.values(), key=lambda e: e.name):
        for i in rng:
            h = 2 * i + te.gamma
            if inr(h):
                n = skew_name(te.name, i)
                edges.append(Edge(n, vname(te.tail, i), vname(te.head, h)))
                skew_info[n] = (te, i)
            if inr(i + 1) and inr(h) and inr(h + 2):
                n = cell_name(te.name, i)
                cells.append(Cell(n, cell_boundary(te, i)))
                cell_info[n] = (te, i)
    cx = TwoComplex(tuple(vertices), tuple(edges), tuple(cells))
    interior = set()
    for v in sorted(tree.complete):
        for i in rng:
            es, cs = star(tree, v, i)
            if all(e in cx.edge for e in es) and all(c in cx.cell for c in cs):
                interior.add(vname(v, i))
    return BSBall(tree, i_min, i_max, cx, frozenset(interior), vertex_info, vertical_info, skew_info, cell_info)


# --- covering maps -------------------------------------------------------------

LITERAL = "literal"
CORRECTED = "corrected"


def k_edge_image(te: TreeEdge, i: int, rule: str = CORRECTED) -> str:
    if rule == LITERAL:
        parity = i % 2
    elif rule == CORRECTED:
        parity = (i + te.delta) % 2
    else:
        raise ValueError(f"unknown rule variant {rule!r}")
    return "d" if parity == 0 else "z"


def l_edge_image(tree: LabeledTree, te: TreeEdge, i: int) -> str:
    if tree.colors[te.tail] == BLACK:
        return "y" if te.delta == 0 else "z"
    return "t" if (i + te.delta) % 2 == 0 else "t1"


def covering_to_K(ball: BSBall, rule: str = CORRECTED) -> CellularMap:
    K = complex_K()
    (kv,) = K.vertices
    emap = {n: "c" for n in ball.vertical_info}
    for n, (te, i) in ball.skew_info.items():
        emap[n] = k_edge_image(te, i, rule)
    m = CellularMap(ball.complex, K, {v: kv for v in ball.complex.vertices}, emap, None, ball.interior)
    return derive_cell_map(m)


def covering_to_L(ball: BSBall) -> CellularMap:
    tree = ball.tree
    vmap = {n: tree.colors[v] for n, (v, _) in ball.vertex_info.items()}
    emap = {n: (C_B if tree.colors[v] == BLACK else C_W) for n, (v, _) in ball.vertical_info.items()}
    for n, (te, i) in ball.skew_info.items():
        emap[n] = l_edge_image(tree, te, i)
    m = CellularMap(ball.complex, complex_L(), vmap, emap, None, ball.interior)
    return derive_cell_map(m)


def tabulated_L_cell(tree: LabeledTree, te: TreeEdge, i: int) -> str:
    """Cell table keyed on tail colour with gamma (black) or height (white)."""
    if tree.colors[te.tail] == BLACK:
        return "A" if te.gamma == 0 else "B"
    return "C" if i % 2 == 0 else "D"


def compare_L_cell_tables(ball: BSBall, m: Optional[CellularMap] = None) -> list[dict]:
    """Cells where the derived image differs from :func:`tabulated_L_cell`."""
    m = m or covering_to_L(ball)
    out = []
    for n, (te, i) in sorted(ball.cell_info.items()):
        derived = m.cell_map[n].cell
        table = tabulated_L_cell(ball.tree, te, i)
        if derived != table:
            out.append({"cell": n, "tail_colour": ball.tree.colors[te.tail], "gamma": te.gamma,
                        "delta": te.delta, "height": i, "derived": derived, "tabulated": table})
    return out

