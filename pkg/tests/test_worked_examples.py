"""Small hand-checkable examples across modules."""

import json

import pytest

from nonleighton.catalog import complex_BS, complex_K, complex_L
from nonleighton.cli import main
from nonleighton.complexes import (
    complex_isomorphic,
    connected_components,
    euler_characteristic,
    make_complex,
    rename_complex,
    standard_complex,
    validate_complex,
    vertex_link,
)
from nonleighton.covers import CellImage, CellularMap, NoMatch, derive_cell_map, enumerate_covers, identity_map
from nonleighton.presentations import (
    AddGenerator,
    Factor,
    RemoveRelator,
    abelian_invariants,
    auto_simplify,
    find_certificate,
    pi1_from_complex,
    rename_isomorphic,
    tietze_apply,
    verify_certificate,
)
from nonleighton.schreier import CyclicHom, index_check, subgroup_presentation
from nonleighton.words import (
    Presentation,
    bs_presentation,
    commutator,
    cyclic_reduce,
    free_reduce,
    parse_word,
    substitute,
)

w = parse_word


class TestTrivialComplexes:
    point = make_complex(["p"], [])

    def test_point(self):
        assert validate_complex(self.point).passed
        assert euler_characteristic(self.point) == 1
        link = vertex_link(self.point, "p")
        assert link.edge_ends == () and link.corners == ()

    def test_empty_presentation(self):
        cx = standard_complex(Presentation((), ()))
        assert cx.counts() == (1, 0, 0)
        assert abelian_invariants(Presentation((), ())) == (0, [])

    def test_components(self):
        assert len(connected_components(make_complex("pq", []))) == 2
        assert len(connected_components(complex_K())) == 1

    def test_one_loop(self):
        loop = make_complex("p", [("a", "p", "p")])
        assert pi1_from_complex(loop) == Presentation(("a",), ())
        assert len(enumerate_covers(loop, 2)) == 2


def test_standard_complex_of_K_presentation():
    p = Presentation.from_text("cdz", ["c^-1 d c^2 z^-1", "z^-1 c d c^-2"])
    assert standard_complex(p) == complex_K()
    assert complex_BS(2, 4).counts() == (1, 2, 1)


def test_renamed_K_is_isomorphic():
    K = complex_K()
    renamed = rename_complex(K, {"v": "o"}, {"c": "x1", "d": "x2", "z": "x3"}, {"r0": "s", "r1": "t"})
    assert complex_isomorphic(K, renamed) is not None


class TestWords:
    def test_free_reduction(self):
        assert free_reduce(w("c c^-1")) == ()
        assert free_reduce(w("y^-1 c c y y^-1 c^-1")) == w("y^-1 c")

    def test_cyclic_reduction(self):
        assert cyclic_reduce(w("d c d^-1")) == w("c")
        assert cyclic_reduce(()) == ()

    def test_substitution(self):
        assert substitute(w("z^-1 c_b z c_w^-2"), "z", ()) == w("c_b c_w^-2")
        assert substitute(w("c_b c_w^-2"), "c_b", w("c_w^2")) == ()
        assert substitute(w("a b"), "q", w("c")) == w("a b")


class TestPresentations:
    def test_L_pi1_with_tree_z(self):
        p = pi1_from_complex(complex_L(), ["z"])
        assert (len(p.generators), len(p.relators)) == (6, 5)
        assert p.relators[-1] == w("z")

    def test_K_pi1_no_tree(self):
        p = pi1_from_complex(complex_K(), [])
        assert p.generators == ("c", "d", "z") and len(p.relators) == 2

    def test_free_generator_elimination(self):
        q, _ = auto_simplify(Presentation.from_text("ab", ["b"]))
        assert q == Presentation(("a",), ())

    def test_add_generator_relator(self):
        p = Presentation.from_text(["y", "t"], [])
        q = tietze_apply(p, AddGenerator("x1", w("y t^-1")))
        assert q.relators[-1] == w("x1 t y^-1")

    def test_remove_duplicate(self):
        p = Presentation.from_text("ab", ["a b a^-1 b^-1", "a b a^-1 b^-1"])
        q = tietze_apply(p, RemoveRelator(1, (Factor((), 0, 1),)))
        assert len(q.relators) == 1

    def test_conjugated_relator_certificate(self):
        p = Presentation.from_text("cd", ["c^2 d"])
        assert verify_certificate(p, w("c c^2 d c^-1"), (Factor(w("c"), 0, 1),))
        assert not verify_certificate(p, w("c"), (Factor(w("c"), 0, 1),))

    def test_commuting_consequence(self):
        p = Presentation.from_text(["q", "t", "th"], ["q^t q^-4", "q^th q^-4"])
        target = commutator(w("q"), w("t th^-1"))
        cert = find_certificate(p, target, max_factors=4, max_conjugator=6)
        assert cert is not None and verify_certificate(p, target, cert)

    def test_rename_isomorphic_cases(self):
        p = bs_presentation(2, 4)
        assert rename_isomorphic(p, p) == {"c": ("c", 1), "d": ("d", 1)}
        assert rename_isomorphic(Presentation.from_text("a", ["a^2"]), Presentation.from_text("b", ["b^3"])) is None

    @pytest.mark.parametrize("p, inv", [
        (bs_presentation(1, 1), (2, [])),
        (bs_presentation(4, 16), (1, [12])),
    ])
    def test_invariants(self, p, inv):
        assert abelian_invariants(p) == inv


def test_trivial_quotient():
    p = bs_presentation(2, 4)
    sub, k = subgroup_presentation(p, CyclicHom(1))
    assert k == 1 == index_check(p, CyclicHom(1))
    assert rename_isomorphic(sub, p) is not None


class TestCellMaps:
    def test_identity_rotation_zero(self):
        K = complex_K()
        m = derive_cell_map(CellularMap(K, K, {"v": "v"}, {e.name: e.name for e in K.edges}))
        assert m.cell_map == {"r0": CellImage("r0", 0, False), "r1": CellImage("r1", 0, False)}
        assert identity_map(K).cell_map == m.cell_map

    def test_everything_to_c(self):
        K = complex_K()
        with pytest.raises(NoMatch):
            derive_cell_map(CellularMap(K, K, {"v": "v"}, {"c": "c", "d": "c", "z": "c"}))


class TestExport:
    def dot(self, tmp_path, capsys, argv):
        path = tmp_path / "x.json"
        assert main(argv + ["--out", str(path), "--quiet"]) == 0
        assert main(["export", "--input", str(path), "--format", "dot"]) == 0
        return capsys.readouterr().out

    def test_L(self, tmp_path, capsys):
        out = self.dot(tmp_path, capsys, ["build", "L"])
        nodes = [l for l in out.splitlines() if l.strip().endswith(";") and "->" not in l]
        arcs = [l for l in out.splitlines() if "->" in l and "label=" in l]
        assert len(nodes) == 2 and len(arcs) == 6

    def test_tree(self, tmp_path, capsys):
        out = self.dot(tmp_path, capsys, ["build", "tree", "1"])
        nodes = [l for l in out.splitlines() if l.strip().endswith(";") and "->" not in l]
        assert len(nodes) == 7


def test_paper_verify_with_one_sheet(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"sheets": [1, 1]}))
    assert main(["paper-verify", "--config", str(cfg), "--quiet"]) == 0
    report = json.loads(capsys.readouterr().out)
    step = next(s for s in report["steps"] if s["name"] == "common finite cover search")
    assert step["findings"][0]["message"] == "none up to 1 sheet"
