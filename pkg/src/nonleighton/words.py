"""Free-group words and finite group presentations.

A word is a tuple of letters ``(generator, exponent)`` with exponent ``+1`` or
``-1``.  Words are never reduced implicitly; callers reduce when they need to.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Letter = tuple[str, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()


def word(letters: Iterable[Sequence]) -> Word:
    """Coerce an iterable of ``(gen, exp)`` pairs into a Word."""
    out = []
    for gen, exp in letters:
        if exp not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {exp!r}")
        out.append((str(gen), int(exp)))
    return tuple(out)


def power(gen: str, k: int) -> Word:
    sign = 1 if k >= 0 else -1
    return ((gen, sign),) * abs(k)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Sequence[Letter]) -> Word:
    stack: list[Letter] = []
    for g, e in w:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


def multiply(*words: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    """Freely reduce, then strip inverse letter pairs from the two ends."""
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return w[i:j]


def rotate(w: Sequence[Letter], k: int) -> Word:
    w = tuple(w)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def rotations(w: Word) -> list[Word]:
    return [rotate(w, k) for k in range(len(w))] or [EMPTY]


def cyclic_canonical(w: Sequence[Letter], allow_inverse: bool = True) -> Word:
    """Lexicographically least rotation of the cyclic reduction of ``w``
    (or of its inverse when ``allow_inverse``)."""
    w = cyclic_reduce(w)
    cands = rotations(w)
    if allow_inverse:
        cands += rotations(inverse(w))
    return min(cands)


def is_rotation(a: Sequence[Letter], b: Sequence[Letter]) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    return not a or any(rotate(a, k) == b for k in range(len(a)))


def substitute(w: Sequence[Letter], gen: str, replacement: Sequence[Letter]) -> Word:
    """Replace every ``gen^{+-1}`` by ``replacement^{+-1}`` and freely reduce."""
    rep = tuple(replacement)
    rep_inv = inverse(rep)
    out: list[Letter] = []
    for g, e in w:
        if g == gen:
            out.extend(rep if e == 1 else rep_inv)
        else:
            out.append((g, e))
    return free_reduce(out)


def exponent_sum(w: Iterable[Letter], gen: str) -> int:
    return sum(e for g, e in w if g == gen)


def occurrences(w: Iterable[Letter], gen: str) -> int:
    return sum(1 for g, _ in w if g == gen)


def commutator(a: Sequence[Letter], b: Sequence[Letter]) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    a, b = tuple(a), tuple(b)
    return inverse(a) + inverse(b) + a + b


def conjugate(x: Sequence[Letter], y: Sequence[Letter]) -> Word:
    """``x^y = y^-1 x y``."""
    y = tuple(y)
    return inverse(y) + tuple(x) + y


# --- text form -------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_@'.]*"
_TOKEN = re.compile(rf"\s*(\[|\]|,|\(|\)|{_NAME}|\^|-?\d+)")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _WordParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> Word:
        w = self.product()
        if self.peek() is not None:
            raise ValueError(f"unexpected token {self.peek()!r}")
        return w

    def product(self) -> Word:
        out: Word = ()
        while self.peek() not in (None, "]", ",", ")"):
            out += self.factor()
        return out

    def factor(self) -> Word:
        tok = self.peek()
        if tok == "[":
            self.take("[")
            a = self.product()
            self.take(",")
            b = self.product()
            self.take("]")
            base = commutator(a, b)
        elif tok == "(":
            self.take("(")
            base = self.product()
            self.take(")")
        elif tok is not None and re.fullmatch(_NAME, tok):
            self.take()
            base = ((tok, 1),)
        elif tok == "1":
            self.take()
            base = ()
        else:
            raise ValueError(f"unexpected token {tok!r}")
        while self.peek() == "^":
            self.take("^")
            ex = self.take()
            if re.fullmatch(r"-?\d+", ex):
                k = int(ex)
                base = (base if k >= 0 else inverse(base)) * abs(k)
            elif re.fullmatch(_NAME, ex):
                base = conjugate(base, ((ex, 1),))
            else:
                raise ValueError(f"bad exponent {ex!r}")
        return base


def parse_word(text: str) -> Word:
    """Parse the compact text form, e.g. ``"y^-1 c y c^-2"``, ``"[q, x1]"``,
    ``"c^d"`` (conjugation ``d^-1 c d``) or ``"1"`` for the empty word."""
    return _WordParser(text).parse()


def format_word(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def format_word_compact(w: Sequence[Letter]) -> str:
    """Group equal consecutive letters into powers: ``c^2 d c^-4``."""
    if not w:
        return "1"
    parts, i = [], 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = (j - i) * w[i][1]
        parts.append(w[i][0] if k == 1 else f"{w[i][0]}^{k}")
        i = j
    return " ".join(parts)


# --- presentations ---------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(word(r) for r in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        known = set(self.generators)
        for r in self.relators:
            for g, _ in r:
                if g not in known:
                    raise ValueError(f"relator uses undeclared generator {g!r}")

    @classmethod
    def from_text(cls, generators: Iterable[str], relators: Iterable[str]) -> "Presentation":
        return cls(tuple(generators), tuple(parse_word(r) for r in relators))

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[{"gen": g, "exp": e} for g, e in r] for r in self.relators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        rels = []
        for r in data["relators"]:
            if isinstance(r, str):
                rels.append(parse_word(r))
            else:
                rels.append(tuple((x["gen"], int(x["exp"])) for x in r))
        return cls(tuple(data["generators"]), tuple(rels))

    def __str__(self) -> str:
        rels = ", ".join(format_word_compact(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"

    def rename(self, mapping: dict[str, str]) -> "Presentation":
        gens = tuple(mapping.get(g, g) for g in self.generators)
        rels = tuple(tuple((mapping.get(g, g), e) for g, e in r) for r in self.relators)
        return Presentation(gens, rels)


def bs_presentation(n: int, m: int, a: str = "c", b: str = "d") -> Presentation:
    """``BS(n, m) = < a, b | b^-1 a^n b a^-m >``."""
    if n < 1 or m < 1:
        raise ValueError("BS(n, m) needs positive n and m")
    rel = ((b, -1),) + power(a, n) + ((b, 1),) + power(a, -m)
    return Presentation((a, b), (rel,))
