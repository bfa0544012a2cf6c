"""Fundamental-group presentations, checked Tietze moves and invariants.

Every Tietze move here carries enough data to be re-verified by free
reduction alone: consequences of the relators are justified by explicit
certificates (products of conjugated relators).
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .complexes import TwoComplex, connected_components
from .smith import invariant_factors
from .words import (
    EMPTY,
    Presentation,
    Word,
    cyclic_canonical,
    cyclic_reduce,
    exponent_sum,
    format_word,
    free_reduce,
    inverse,
    multiply,
    occurrences,
    parse_word,
    rotate,
    substitute,
)


class PresentationError(ValueError):
    pass


class CertificateError(PresentationError):
    pass


# --- fundamental group of a complex ------------------------------------------


def bfs_spanning_tree(cx: TwoComplex) -> frozenset[str]:
    if not cx.vertices:
        return frozenset()
    adj: dict[str, list] = {v: [] for v in cx.vertices}
    for e in cx.edges:  # edges are in lexicographic order
        if e.tail != e.head:
            adj[e.tail].append((e.name, e.head))
            adj[e.head].append((e.name, e.tail))
    root = cx.vertices[0]
    seen, tree, queue = {root}, set(), deque([root])
    while queue:
        u = queue.popleft()
        for name, w in adj[u]:
            if w not in seen:
                seen.add(w)
                tree.add(name)
                queue.append(w)
    return frozenset(tree)


def _is_spanning_tree(cx: TwoComplex, tree: Iterable[str]) -> bool:
    tree = set(tree)
    if not tree <= set(cx.edge) or len(tree) != len(cx.vertices) - 1:
        return False
    parent = {v: v for v in cx.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for name in tree:
        e = cx.edge[name]
        a, b = find(e.tail), find(e.head)
        if a == b:
            return False
        parent[a] = b
    return True


def pi1_from_complex(cx: TwoComplex, tree: Optional[Iterable[str]] = None) -> Presentation:
    """Generators are all edges; relators are the cell words followed by one
    single-letter relator per spanning-tree edge."""
    if len(connected_components(cx)) > 1:
        raise PresentationError("complex is disconnected")
    tree = bfs_spanning_tree(cx) if tree is None else frozenset(tree)
    if not _is_spanning_tree(cx, tree):
        raise PresentationError(f"{sorted(tree)} is not a spanning tree")
    rels = [c.boundary for c in cx.cells] + [((e, 1),) for e in sorted(tree)]
    return Presentation(tuple(e.name for e in cx.edges), tuple(rels))


# --- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    conjugator: Word
    relator: int
    sign: int


Certificate = tuple[Factor, ...]


def certificate_product(p: Presentation, cert: Sequence[Factor]) -> Word:
    out: list = []
    for f in cert:
        r = p.relators[f.relator]
        out.extend(f.conjugator)
        out.extend(r if f.sign == 1 else inverse(r))
        out.extend(inverse(f.conjugator))
    return free_reduce(out)


def verify_certificate(p: Presentation, target: Word, cert: Sequence[Factor]) -> bool:
    for f in cert:
        if not 0 <= f.relator < len(p.relators) or f.sign not in (1, -1):
            return False
    return multiply(certificate_product(p, cert), inverse(target)) == EMPTY


def find_certificate(p: Presentation, target: Word, max_factors: int = 4, max_conjugator: int = 6,
                     exclude: Iterable[int] = ()) -> Optional[Certificate]:
    """Bounded search for a certificate that ``target`` is a consequence.

    Works backwards from ``target``: each step inserts a cyclic rotation of a
    relator (or its inverse) somewhere in the current reduced word, until the
    word is empty.  Iterative deepening on the number of factors, so the first
    certificate found is one of minimal length; the branch order is fixed, so
    the result is deterministic.
    """
    exclude = set(exclude)
    pieces = []  # (rho, relator index, sign, rotation offset k)
    for i, r in enumerate(p.relators):
        if i in exclude or not r:
            continue
        for s in (1, -1):
            rs = r if s == 1 else inverse(r)
            for k in range(len(rs)):
                pieces.append((rotate(rs, k), i, s, k, rs[:k]))
    # last step: a rho with  a rho b = 1  where w = a b
    closing: dict[Word, tuple] = {}
    for piece in pieces:
        closing.setdefault(free_reduce(piece[0]), piece)
    lengths = sorted((len(pc[0]) for pc in pieces), reverse=True)
    target = free_reduce(target)

    def factor_for(prefix: Word, piece) -> Optional[Factor]:
        rho, i, s, k, x = piece
        # inserting rho after prefix a multiplies by a rho a^-1 on the left;
        # rho = x^-1 r^s x, so the certificate factor is (a x^-1) r^-s (a x^-1)^-1
        conj = multiply(prefix, inverse(x))
        if len(conj) > max_conjugator:
            return None
        return Factor(conj, i, -s)

    def search(w: Word, depth: int, dead: set) -> Optional[list[Factor]]:
        if not w:
            return []
        # one factor c r c^-1 can cancel at most len(r) + 2 len(c) letters
        if depth == 0 or len(w) > sum(lengths[:depth]) + 2 * max_conjugator * depth or (w, depth) in dead:
            return None
        if depth == 1:
            for pos in range(len(w) + 1):
                need = multiply(inverse(w[:pos]), inverse(w[pos:]))
                piece = closing.get(need)
                if piece is not None:
                    f = factor_for(w[:pos], piece)
                    if f is not None:
                        return [f]
            dead.add((w, depth))
            return None
        for pos in range(len(w) + 1):
            a, b = w[:pos], w[pos:]
            for piece in pieces:
                f = factor_for(a, piece)
                if f is None:
                    continue
                nxt = multiply(a, piece[0], b)
                rest = search(nxt, depth - 1, dead)
                if rest is not None:
                    return [f] + rest
        dead.add((w, depth))
        return None

    for depth in range(0, max_factors + 1):
        found = search(target, depth, set())
        if found is not None:
            cert = tuple(found)
            assert verify_certificate(p, target, cert)
            return cert
    return None


# --- Tietze moves ------------------------------------------------------------


@dataclass(frozen=True)
class AddGenerator:
    generator: str
    definition: Word


@dataclass(frozen=True)
class RemoveGenerator:
    generator: str
    relator: int


@dataclass(frozen=True)
class AddRelator:
    word: Word
    certificate: Certificate


@dataclass(frozen=True)
class RemoveRelator:
    relator: int
    certificate: Certificate


@dataclass(frozen=True)
class FreeReduceAll:
    pass


@dataclass(frozen=True)
class CyclicReduceAll:
    pass


@dataclass(frozen=True)
class RenameGenerators:
    """Pure relabeling; not a Tietze move proper but trivially an isomorphism."""
    mapping: tuple[tuple[str, str], ...]


TietzeMove = Union[AddGenerator, RemoveGenerator, AddRelator, RemoveRelator,
                   FreeReduceAll, CyclicReduceAll, RenameGenerators]


def solve_for(relator: Word, gen: str) -> Word:
    """Given a relator with exactly one occurrence of ``gen``, the word that
    ``gen`` equals modulo that relator."""
    idx = [i for i, (g, _) in enumerate(relator) if g == gen]
    if len(idx) != 1:
        raise PresentationError(f"{gen!r} occurs {len(idx)} times in the relator, need exactly 1")
    i = idx[0]
    e = relator[i][1]
    rest = relator[i + 1:] + relator[:i]  # gen^e * rest = 1 (cyclically)
    return free_reduce(inverse(rest) if e == 1 else rest)


def tietze_apply(p: Presentation, move: TietzeMove) -> Presentation:
    gens, rels = list(p.generators), list(p.relators)
    if isinstance(move, AddGenerator):
        if move.generator in gens:
            raise PresentationError(f"generator {move.generator!r} already exists")
        for g, _ in move.definition:
            if g not in gens:
                raise PresentationError(f"definition uses unknown generator {g!r}")
        return Presentation(tuple(gens + [move.generator]),
                            tuple(rels + [((move.generator, 1),) + inverse(move.definition)]))
    if isinstance(move, RemoveGenerator):
        g = move.generator
        if g not in gens:
            raise PresentationError(f"unknown generator {g!r}")
        if not 0 <= move.relator < len(rels):
            raise PresentationError("relator index out of range")
        value = solve_for(rels[move.relator], g)
        new_rels = [substitute(r, g, value) for i, r in enumerate(rels) if i != move.relator]
        return Presentation(tuple(x for x in gens if x != g), tuple(new_rels))
    if isinstance(move, AddRelator):
        if not verify_certificate(p, move.word, move.certificate):
            raise CertificateError(f"certificate does not prove {format_word(move.word)}")
        return Presentation(p.generators, tuple(rels + [tuple(move.word)]))
    if isinstance(move, RemoveRelator):
        if not 0 <= move.relator < len(rels):
            raise PresentationError("relator index out of range")
        if any(f.relator == move.relator for f in move.certificate):
            raise CertificateError("certificate may not use the relator being removed")
        if not verify_certificate(p, rels[move.relator], move.certificate):
            raise CertificateError(f"certificate does not prove relator {move.relator}")
        return Presentation(p.generators, tuple(r for i, r in enumerate(rels) if i != move.relator))
    if isinstance(move, FreeReduceAll):
        return Presentation(p.generators, tuple(free_reduce(r) for r in rels))
    if isinstance(move, CyclicReduceAll):
        return Presentation(p.generators, tuple(cyclic_reduce(r) for r in rels))
    if isinstance(move, RenameGenerators):
        mapping = dict(move.mapping)
        new = [mapping.get(g, g) for g in gens]
        if len(set(new)) != len(new):
            raise PresentationError("renaming is not injective")
        return p.rename(mapping)
    raise TypeError(f"not a Tietze move: {move!r}")


def apply_moves(p: Presentation, moves: Iterable[TietzeMove]) -> Presentation:
    for m in moves:
        p = tietze_apply(p, m)
    return p


def move_to_dict(m: TietzeMove) -> dict:
    def cert(c):
        return [{"conjugator": format_word(f.conjugator), "relator": f.relator, "sign": f.sign} for f in c]

    if isinstance(m, AddGenerator):
        return {"move": "add_generator", "generator": m.generator, "definition": format_word(m.definition)}
    if isinstance(m, RemoveGenerator):
        return {"move": "remove_generator", "generator": m.generator, "relator": m.relator}
    if isinstance(m, AddRelator):
        return {"move": "add_relator", "word": format_word(m.word), "certificate": cert(m.certificate)}
    if isinstance(m, RemoveRelator):
        return {"move": "remove_relator", "relator": m.relator, "certificate": cert(m.certificate)}
    if isinstance(m, FreeReduceAll):
        return {"move": "free_reduce_all"}
    if isinstance(m, CyclicReduceAll):
        return {"move": "cyclic_reduce_all"}
    if isinstance(m, RenameGenerators):
        return {"move": "rename", "mapping": dict(m.mapping)}
    raise TypeError(m)


def move_from_dict(d: dict) -> TietzeMove:
    def cert(c):
        return tuple(Factor(parse_word(f["conjugator"]), int(f["relator"]), int(f["sign"])) for f in c)

    kind = d["move"]
    if kind == "add_generator":
        return AddGenerator(d["generator"], parse_word(d["definition"]))
    if kind == "remove_generator":
        return RemoveGenerator(d["generator"], int(d["relator"]))
    if kind == "add_relator":
        return AddRelator(parse_word(d["word"]), cert(d["certificate"]))
    if kind == "remove_relator":
        return RemoveRelator(int(d["relator"]), cert(d["certificate"]))
    if kind == "free_reduce_all":
        return FreeReduceAll()
    if kind == "cyclic_reduce_all":
        return CyclicReduceAll()
    if kind == "rename":
        return RenameGenerators(tuple(d["mapping"].items()))
    raise ValueError(f"unknown move {kind!r}")


# --- simplification ----------------------------------------------------------


def auto_simplify(p: Presentation) -> tuple[Presentation, list[TietzeMove]]:
    """Greedy Tietze simplification to a fixed point.

    Repeatedly: cyclically reduce, drop empty relators, then eliminate one
    generator that occurs exactly once in some relator (shortest relator first,
    ties broken by the relator's text and then the generator name).
    """
    log: list[TietzeMove] = []

    def do(move):
        nonlocal p
        p = tietze_apply(p, move)
        log.append(move)

    while True:
        if any(cyclic_reduce(r) != r for r in p.relators):
            do(CyclicReduceAll())
        empties = [i for i, r in enumerate(p.relators) if not r]
        for i in reversed(empties):
            do(RemoveRelator(i, ()))
        best = None
        for i, r in enumerate(p.relators):
            counts = Counter(g for g, _ in r)
            for g in sorted(x for x, k in counts.items() if k == 1):
                key = (len(r), format_word(r), g)
                if best is None or key < best[0]:
                    best = (key, i, g)
        if best is None:
            return p, log
        do(RemoveGenerator(best[2], best[1]))


# --- isomorphism by renaming ---------------------------------------------------


def _canonical_relators(p: Presentation) -> list[Word]:
    return sorted(c for c in (cyclic_canonical(r) for r in p.relators) if c)


def _gen_signature(p: Presentation, g: str) -> tuple:
    rows = []
    for r in p.relators:
        r = cyclic_reduce(r)
        if r:
            rows.append((len(r), occurrences(r, g), abs(exponent_sum(r, g))))
    return tuple(sorted(rows))


def rename_isomorphic(p: Presentation, q: Presentation) -> Optional[dict[str, tuple[str, int]]]:
    """Find a generator bijection (with optional inversion of each generator)
    carrying the relators of ``p`` onto those of ``q``, up to cyclic rotation,
    free/cyclic reduction and inversion of relators."""
    if len(p.generators) != len(q.generators):
        return None
    target = _canonical_relators(q)
    if len(_canonical_relators(p)) != len(target):
        return None
    sig_p = {g: _gen_signature(p, g) for g in p.generators}
    sig_q = {h: _gen_signature(q, h) for h in q.generators}
    if sorted(sig_p.values()) != sorted(sig_q.values()):
        return None
    classes: dict[tuple, tuple[list, list]] = {}
    for g in p.generators:
        classes.setdefault(sig_p[g], ([], []))[0].append(g)
    for h in q.generators:
        classes[sig_q[h]][1].append(h)
    keys = sorted(classes)
    src = [g for k in keys for g in classes[k][0]]
    per_class = [itertools.permutations(classes[k][1]) for k in keys]
    for images in itertools.product(*[list(x) for x in per_class]):
        flat = [h for part in images for h in part]
        for signs in itertools.product((1, -1), repeat=len(src)):
            m = {g: (h, s) for g, h, s in zip(src, flat, signs)}
            mapped = [tuple((m[g][0], e * m[g][1]) for g, e in r) for r in p.relators]
            if sorted(c for c in (cyclic_canonical(r) for r in mapped) if c) == target:
                return {g: m[g] for g in p.generators}
    return None


# --- abelianization ------------------------------------------------------------


def relation_matrix(p: Presentation) -> list[list[int]]:
    return [[exponent_sum(r, g) for g in p.generators] for r in p.relators]


def abelian_invariants(p: Presentation) -> tuple[int, list[int]]:
    """``(free rank, torsion divisors)`` of the abelianization."""
    factors = invariant_factors(relation_matrix(p)) if p.relators and p.generators else []
    return len(p.generators) - len(factors), [d for d in factors if d > 1]


def is_commutator_with(r: Word, q: str) -> Optional[str]:
    """If ``r`` is cyclically ``[q, x]`` (up to inversion), return ``x``."""
    c = cyclic_canonical(r)
    if len(c) != 4:
        return None
    others = {g for g, _ in c} - {q}
    if len(others) != 1 or occurrences(c, q) != 2:
        return None
    x = others.pop()
    for e in (1, -1):
        if cyclic_canonical(((q, -1), (x, -e), (q, 1), (x, e))) == c:
            return x
    return None


def is_conjugation_power(r: Word, q: str, k: int) -> Optional[str]:
    """If ``r`` is cyclically ``x^-1 q x q^-k`` (up to inversion of ``x`` and of
    the relator), return ``x``."""
    c = cyclic_canonical(r)
    others = {g for g, _ in c} - {q}
    if len(others) != 1:
        return None
    x = others.pop()
    for e in (1, -1):
        cand = ((x, -e), (q, 1), (x, e)) + ((q, -1),) * k
        if cyclic_canonical(cand) == c:
            return x
    return None
