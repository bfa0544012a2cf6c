import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nonleighton.catalog import complex_BS, complex_K, complex_L, double_cover_voltage_L
from nonleighton.complexes import euler_characteristic, is_connected, make_complex
from nonleighton.covers import (
    CellImage,
    CellMapError,
    CellularMap,
    NoMatch,
    Ambiguous,
    Voltage,
    VoltageError,
    build_cover,
    canonical_voltage_key,
    cell_monodromy,
    derive_cell_map,
    enumerate_covers,
    identity_map,
    search_common_cover,
    verify_covering,
)
from nonleighton.presentations import abelian_invariants, pi1_from_complex
from nonleighton.words import parse_word


def brute_force_classes(base, n):
    """Every voltage assignment, filtered by the lifting condition, grouped by
    simultaneous conjugation.  Returns the set of orbits (as frozensets)."""
    names = [e.name for e in base.edges]
    perms = list(itertools.permutations(range(n)))
    ident = tuple(range(n))
    lifting = []
    for combo in itertools.product(perms, repeat=len(names)):
        volt = Voltage(n, dict(zip(names, combo)))
        if all(cell_monodromy(volt, c.boundary) == ident for c in base.cells):
            lifting.append(combo)
    orbits = set()
    for combo in lifting:
        orbit = set()
        for pi in perms:
            inv = [0] * n
            for i, x in enumerate(pi):
                inv[x] = i
            orbit.add(tuple(tuple(pi[p[inv[s]]] for s in range(n)) for p in combo))
        orbits.add(frozenset(orbit))
    return orbits


@pytest.mark.parametrize("base, n", [
    (complex_K(), 1), (complex_K(), 2), (complex_K(), 3),
    (complex_L(), 1), (complex_L(), 2),
    (complex_BS(2, 4), 2), (complex_BS(2, 4), 3),
])
def test_enumeration_matches_brute_force(base, n):
    orbits = brute_force_classes(base, n)
    classes = enumerate_covers(base, n)
    assert len(classes) == len(orbits)
    names = [e.name for e in base.edges]
    keys = [tuple(c.voltage.perm(e) for e in names) for c in classes]
    # one representative per orbit, and it is the orbit's least element
    assert sorted(min(o) for o in orbits) == keys
    for c in classes:
        cover, _ = build_cover(base, c.voltage)
        assert c.connected == is_connected(cover)


def test_known_census():
    assert [len(enumerate_covers(complex_K(), n)) for n in (1, 2, 3)] == [1, 4, 8]
    assert [sum(c.connected for c in enumerate_covers(complex_L(), n)) for n in (1, 2)] == [1, 14]


@pytest.mark.parametrize("base, n", [(complex_K(), 2), (complex_K(), 3), (complex_L(), 2)])
def test_every_enumerated_cover_is_a_covering(base, n):
    for c in enumerate_covers(base, n):
        cover, proj = build_cover(base, c.voltage)
        assert verify_covering(proj).passed
        assert euler_characteristic(cover) == n * euler_characteristic(base)
        assert cover.counts() == tuple(n * x for x in base.counts())


class TestDoubleCoverOfL:
    def test_properties(self):
        cover, proj = build_cover(complex_L(), double_cover_voltage_L())
        assert cover.counts() == (4, 12, 8)
        assert euler_characteristic(cover) == 0
        assert is_connected(cover)
        assert verify_covering(proj).passed
        assert abelian_invariants(pi1_from_complex(cover)) == (4, [3])

    def test_voltage_json_is_one_based(self):
        d = double_cover_voltage_L().to_dict()
        assert d["permutations"]["c_w"] == [2, 1]
        assert Voltage.from_dict(d) == double_cover_voltage_L()


class TestVoltageErrors:
    def test_non_lifting(self):
        with pytest.raises(VoltageError) as exc:
            build_cover(complex_K(), Voltage(2, {"c": (1, 0)}))
        assert "r0" in str(exc.value) and "r1" in str(exc.value)

    def test_unknown_edge(self):
        with pytest.raises(VoltageError):
            build_cover(complex_K(), Voltage(2, {"zz": (1, 0)}))

    def test_not_a_permutation(self):
        with pytest.raises(VoltageError):
            Voltage.from_dict({"sheets": 2, "permutations": {"c": [1, 1]}})


class TestVerifyCovering:
    def test_identity(self):
        for cx in (complex_K(), complex_L()):
            assert verify_covering(identity_map(cx)).passed

    def test_folding_two_loops(self):
        src = make_complex("u", [("a", "u", "u"), ("b", "u", "u")])
        tgt = make_complex("v", [("c", "v", "v")])
        rep = verify_covering(CellularMap(src, tgt, {"u": "v"}, {"a": "c", "b": "c"}, {}))
        assert "edge-end collision" in [f.message for f in rep.errors()]

    def test_missing_ends(self):
        src = make_complex("u", [("a", "u", "u")])
        tgt = make_complex("v", [("c", "v", "v"), ("d", "v", "v")])
        rep = verify_covering(CellularMap(src, tgt, {"u": "v"}, {"a": "c"}, {}))
        assert "edge-ends at image vertex not covered" in [f.message for f in rep.errors()]

    def test_endpoint_mismatch(self):
        L = complex_L()
        m = identity_map(L)
        bad = CellularMap(L, L, m.vertex_map, {**m.edge_map, "y": "t"}, m.cell_map)
        rep = verify_covering(bad)
        assert not rep.passed

    def test_bad_cell_image(self):
        K = complex_K()
        m = identity_map(K)
        bad = CellularMap(K, K, m.vertex_map, m.edge_map, {"r0": CellImage("r1", 0, False), "r1": m.cell_map["r1"]})
        assert "boundary of cell does not map onto its image cell" in [f.message for f in verify_covering(bad).errors()]

    def test_needs_cell_map(self):
        K = complex_K()
        m = CellularMap(K, K, {"v": "v"}, {e.name: e.name for e in K.edges})
        with pytest.raises(CellMapError):
            verify_covering(m)
        assert derive_cell_map(m).cell_map == identity_map(K).cell_map

    def test_no_match_and_ambiguous(self):
        K = complex_K()
        m = CellularMap(K, K, {"v": "v"}, {"c": "d", "d": "c", "z": "z"})
        with pytest.raises(NoMatch):
            derive_cell_map(m)
        src = make_complex("u", [("a", "u", "u")], [("s", parse_word("a a"))])
        tgt = make_complex("v", [("c", "v", "v")], [("t", parse_word("c c"))])
        with pytest.raises(Ambiguous):
            derive_cell_map(CellularMap(src, tgt, {"u": "v"}, {"a": "c"}))

    def test_interior_restricts_link_checks(self):
        src = make_complex("uw", [("a", "u", "u"), ("b", "u", "u"), ("e", "w", "w")])
        tgt = make_complex("v", [("c", "v", "v")])
        m = CellularMap(src, tgt, {"u": "v", "w": "v"}, {"a": "c", "b": "c", "e": "c"}, {}, frozenset({"w"}))
        assert verify_covering(m).passed

    def test_map_round_trip(self):
        cover, proj = build_cover(complex_L(), double_cover_voltage_L())
        assert CellularMap.from_dict(proj.to_dict()) == proj


# --- random voltages on graphs (no cells, so every voltage lifts) -------------

@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_random_graph_voltages(n, data):
    edges = [("a", "u", "u"), ("b", "u", "w"), ("e", "w", "u")]
    base = make_complex("uw", edges)
    perms = list(itertools.permutations(range(n)))
    volt = Voltage(n, {e: data.draw(st.sampled_from(perms)) for e, _, _ in edges})
    cover, proj = build_cover(base, volt)
    assert verify_covering(proj).passed
    assert euler_characteristic(cover) == n * euler_characteristic(base)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_canonical_key_is_class_invariant(data):
    n = 3
    perms = list(itertools.permutations(range(n)))
    key = tuple(data.draw(st.sampled_from(perms)) for _ in range(3))
    pi = data.draw(st.sampled_from(perms))
    inv = [0] * n
    for i, x in enumerate(pi):
        inv[x] = i
    conj = tuple(tuple(pi[p[inv[s]]] for s in range(n)) for p in key)
    assert canonical_voltage_key(conj, n) == canonical_voltage_key(key, n)


class TestCommonCoverSearch:
    def test_K_L_none_up_to_three(self):
        stats = {}
        assert search_common_cover(complex_K(), complex_L(), 3, 3, stats) is None
        assert stats["covers_a"] == {1: 1, 2: 3, 3: 4}

    def test_self_pairs(self):
        found = search_common_cover(complex_K(), complex_K(), 1, 1)
        assert found is not None
        assert search_common_cover(complex_L(), complex_L(), 1, 1) is not None

    def test_bs_double_cover_relation(self):
        # the two complexes are isomorphic, so one sheet each already suffices
        assert search_common_cover(complex_BS(2, 4), complex_BS(4, 2), 1, 1) is not None
