"""Named complexes and presentations: K, L, BS(n, m) and friends."""

from __future__ import annotations

from .complexes import TwoComplex, make_complex, standard_complex
from .covers import Voltage
from .words import Presentation, bs_presentation, parse_word

BLACK = "black"
WHITE = "white"

# edge names of L
C_B, C_W = "c_b", "c_w"


def presentation_K() -> Presentation:
    """``< c, d, z | c^-1 d c^2 z^-1, z^-1 c d c^-2 >``."""
    return Presentation.from_text("cdz", ["c^-1 d c c z^-1", "z^-1 c d c^-1 c^-1"])


def complex_K() -> TwoComplex:
    return standard_complex(presentation_K())


def complex_L() -> TwoComplex:
    w = parse_word
    return make_complex(
        [BLACK, WHITE],
        [
            (C_B, BLACK, BLACK),
            (C_W, WHITE, WHITE),
            ("y", BLACK, WHITE),
            ("z", BLACK, WHITE),
            ("t", WHITE, BLACK),
            ("t1", WHITE, BLACK),
        ],
        [
            ("A", w("y^-1 c_b y c_w^-2")),
            ("B", w("z^-1 c_b z c_w^-2")),
            ("C", w("t1^-1 c_w t c_b^-2")),
            ("D", w("t^-1 c_w t1 c_b^-2")),
        ],
    )


def complex_BS(n: int, m: int) -> TwoComplex:
    return standard_complex(bs_presentation(n, m))


def presentation_L_simplified() -> Presentation:
    """``< c, y, t | y^-1 c^2 y c^-2, t^-1 c^2 t c^-8 >``."""
    return Presentation.from_text("cyt", ["y^-1 c^2 y c^-2", "t^-1 c^2 t c^-8"])


def presentation_BS_4_16() -> Presentation:
    return bs_presentation(4, 16, "a", "b")


def star_form() -> Presentation:
    """Target shape for the index-2 kernel of pi_1(L)."""
    return Presentation.from_text(
        ["q", "y", "x1", "x2", "x3"], ["q^y q^-4", "[q, x1]", "[q, x2]", "[q, x3]"])


def double_star_form() -> Presentation:
    """Target shape for the index-4 kernel of BS(4, 16)."""
    return Presentation.from_text(
        ["q", "b", "x1", "x2", "x3"], ["q^b q^-4", "[q, x1]", "[q, x2]", "[q, x3]"])


def displayed_H() -> Presentation:
    """Four conjugation relators ``q^x = q^4`` for x in y, t, yh, th."""
    return Presentation.from_text(
        ["q", "y", "t", "yh", "th"], ["q^y q^-4", "q^t q^-4", "q^yh q^-4", "q^th q^-4"])


def double_cover_voltage_L() -> Voltage:
    """Two sheets; the transposition on ``c_w`` and ``t1``, identity elsewhere."""
    return Voltage(2, {C_W: (1, 0), "t1": (1, 0)})


def catalog_complexes() -> dict[str, TwoComplex]:
    return {
        "K": complex_K(),
        "L": complex_L(),
        "BS(2,4)": complex_BS(2, 4),
        "BS(4,16)": complex_BS(4, 16),
    }
