"""Kernels of homomorphisms onto finite cyclic groups (Reidemeister-Schreier).

The transversal is ``{g^0, ..., g^(k-1)}`` for a designated generator ``g``
whose image is a unit mod ``k``.  Cosets are identified with residues; the
representative of residue ``r`` is ``g^(u^-1 r mod k)`` where ``u`` is the
residue of ``g``.  Schreier generators are named ``x@r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .words import Presentation, Word, free_reduce, inverse, power


class HomError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicHom:
    modulus: int
    images: dict[str, int] = field(default_factory=dict)
    designated: str = ""

    def residue(self, gen: str) -> int:
        return self.images.get(gen, 0) % self.modulus

    def word_residue(self, w: Word) -> int:
        return sum(e * self.residue(g) for g, e in w) % self.modulus


def check_hom(p: Presentation, h: CyclicHom) -> None:
    if h.modulus < 1:
        raise HomError("modulus must be positive")
    unknown = set(h.images) - set(p.generators)
    if unknown:
        raise HomError(f"images given for unknown generators {sorted(unknown)}")
    if h.modulus > 1:
        if h.designated not in p.generators:
            raise HomError(f"designated generator {h.designated!r} is not a generator")
        if gcd(h.residue(h.designated), h.modulus) != 1:
            raise HomError(f"residue of {h.designated!r} is not a unit mod {h.modulus}")
    for i, r in enumerate(p.relators):
        if h.word_residue(r):
            raise HomError(f"relator {i} has nonzero residue sum; homomorphism undefined")


class _Transversal:
    def __init__(self, p: Presentation, h: CyclicHom):
        self.k = h.modulus
        self.h = h
        self.g = h.designated
        u = h.residue(self.g) if self.k > 1 else 1
        self.u_inv = pow(u, -1, self.k) if self.k > 1 else 0

    def exponent(self, r: int) -> int:
        return (self.u_inv * r) % self.k if self.k > 1 else 0

    def rep(self, r: int) -> Word:
        return power(self.g, self.exponent(r)) if self.k > 1 else ()

    def schreier_word(self, r: int, x: str) -> Word:
        """``rep(r) x rep(r + res(x))^-1``, freely reduced."""
        nxt = (r + self.h.residue(x)) % self.k
        return free_reduce(self.rep(r) + ((x, 1),) + inverse(self.rep(nxt)))


def schreier_generators(p: Presentation, h: CyclicHom) -> dict[tuple[str, int], Word]:
    """Nontrivial Schreier generators keyed by ``(ambient generator, coset)``."""
    T = _Transversal(p, h)
    out = {}
    for x in p.generators:
        for r in range(h.modulus):
            w = T.schreier_word(r, x)
            if w:
                out[(x, r)] = w
    return out


def rewrite(w: Word, p: Presentation, h: CyclicHom, start: int = 0) -> Word:
    """Reidemeister rewriting of ``w`` read from coset ``start``."""
    gens = schreier_generators(p, h)
    coset = start
    out = []
    for x, e in w:
        if e == 1:
            if (x, coset) in gens:
                out.append((f"{x}@{coset}", 1))
            coset = (coset + h.residue(x)) % h.modulus
        else:
            coset = (coset - h.residue(x)) % h.modulus
            if (x, coset) in gens:
                out.append((f"{x}@{coset}", -1))
    return free_reduce(out)


def subgroup_presentation(p: Presentation, h: CyclicHom) -> tuple[Presentation, int]:
    """Presentation of the kernel of ``h`` and its index ``h.modulus``."""
    check_hom(p, h)
    T = _Transversal(p, h)
    gens = schreier_generators(p, h)
    names = tuple(f"{x}@{r}" for x in p.generators for r in range(h.modulus) if (x, r) in gens)
    rels = []
    for rel in p.relators:
        for r in range(h.modulus):
            rep = T.rep(r)
            rels.append(rewrite(rep + rel + inverse(rep), p, h))
    return Presentation(names, tuple(rels)), h.modulus


def index_check(p: Presentation, h: CyclicHom) -> int:
    check_hom(p, h)
    T = _Transversal(p, h)
    residues = {h.word_residue(T.rep(r)) for r in range(h.modulus)}
    if len(residues) != h.modulus:
        raise HomError("transversal representatives are not pairwise distinct cosets")
    return h.modulus
