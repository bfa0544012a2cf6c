"""Reidemeister-Schreier checked two independent ways: rewriting followed by
substitution of the Schreier words must recover the original element, and
the kernel's abelianization must match that of the cyclic cover of the
presentation complex (built by permutation voltages, not by rewriting)."""

import pytest
from hypothesis import assume, given, settings, strategies as st

from nonleighton.catalog import presentation_BS_4_16, presentation_L_simplified
from nonleighton.complexes import standard_complex
from nonleighton.covers import Voltage, build_cover
from nonleighton.presentations import abelian_invariants, pi1_from_complex
from nonleighton.schreier import (
    CyclicHom,
    HomError,
    check_hom,
    index_check,
    rewrite,
    schreier_generators,
    subgroup_presentation,
)
from nonleighton.words import Presentation, free_reduce, parse_word


def unwrap(w, p, h):
    """Replace each Schreier generator by its word in the ambient generators."""
    gens = schreier_generators(p, h)
    out = []
    for g, e in w:
        x, r = g.rsplit("@", 1)
        piece = gens[(x, int(r))]
        out.extend(piece if e == 1 else tuple((a, -b) for a, b in reversed(piece)))
    return free_reduce(out)


def cyclic_cover_invariants(p, h):
    k = h.modulus
    perms = {g: tuple((s + h.residue(g)) % k for s in range(k)) for g in p.generators}
    cover, _ = build_cover(standard_complex(p), Voltage(k, perms))
    return abelian_invariants(pi1_from_complex(cover))


H = CyclicHom(2, {"c": 1}, "c")
H4 = CyclicHom(4, {"a": 1}, "a")


class TestKnownKernels:
    def test_H_counts_and_index(self):
        sub, k = subgroup_presentation(presentation_L_simplified(), H)
        assert k == 2 == index_check(presentation_L_simplified(), H)
        assert (len(sub.generators), len(sub.relators)) == (5, 4)
        assert abelian_invariants(sub) == (4, [3])

    def test_H_tilde_counts_and_index(self):
        sub, k = subgroup_presentation(presentation_BS_4_16(), H4)
        assert k == 4
        assert (len(sub.generators), len(sub.relators)) == (5, 4)
        assert abelian_invariants(sub) == (4, [3])

    @pytest.mark.parametrize("p, h", [(presentation_L_simplified(), H), (presentation_BS_4_16(), H4)])
    def test_cover_oracle(self, p, h):
        sub, _ = subgroup_presentation(p, h)
        assert abelian_invariants(sub) == cyclic_cover_invariants(p, h)

    def test_names(self):
        sub, _ = subgroup_presentation(presentation_L_simplified(), H)
        assert set(sub.generators) == {"c@1", "y@0", "y@1", "t@0", "t@1"}


class TestErrors:
    def test_undefined_hom(self):
        with pytest.raises(HomError):
            check_hom(Presentation.from_text("a", ["a^3"]), CyclicHom(2, {"a": 1}, "a"))

    def test_designated_not_unit(self):
        with pytest.raises(HomError):
            check_hom(Presentation.from_text("ab", []), CyclicHom(4, {"a": 2, "b": 1}, "a"))

    def test_unknown_generator_image(self):
        with pytest.raises(HomError):
            check_hom(Presentation.from_text("a", []), CyclicHom(2, {"x": 1}, "a"))

    def test_missing_images_default_to_zero(self):
        p = Presentation.from_text("ab", ["b^2"])
        sub, k = subgroup_presentation(p, CyclicHom(3, {"a": 1}, "a"))
        assert k == 3 and len(sub.relators) == 3


gen_word = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1))), max_size=10).map(tuple)


@settings(max_examples=80, deadline=None)
@given(gen_word, st.integers(2, 5), st.integers(0, 4), st.integers(0, 4))
def test_rewrite_recovers_kernel_elements(w, k, rb, rc):
    p = Presentation(("a", "b", "c"), ())
    h = CyclicHom(k, {"a": 1, "b": rb, "c": rc}, "a")
    assume(h.word_residue(w) == 0)
    assert unwrap(rewrite(w, p, h), p, h) == free_reduce(w)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.data())
def test_kernel_invariants_match_cyclic_cover(k, data):
    h = CyclicHom(k, {"a": 1, "b": data.draw(st.integers(0, k - 1))}, "a")
    rels = data.draw(st.lists(st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from((1, -1))),
                                       min_size=1, max_size=8).map(tuple), min_size=1, max_size=2))
    rels = [r for r in rels if h.word_residue(r) == 0 and free_reduce(r)]
    assume(rels)
    p = Presentation(("a", "b"), tuple(rels))
    sub, _ = subgroup_presentation(p, h)
    assert len(sub.generators) == k * (len(p.generators) - 1) + 1
    assert len(sub.relators) == k * len(p.relators)
    assert abelian_invariants(sub) == cyclic_cover_invariants(p, h)


def test_rewrite_example():
    p = Presentation.from_text("cy", [])
    h = CyclicHom(2, {"c": 1}, "c")
    assert rewrite(parse_word("c y c^-1"), p, h) == (("y@1", 1),)
