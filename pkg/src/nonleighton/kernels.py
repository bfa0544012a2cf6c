"""Index-2 kernel of pi_1(L) and index-4 kernel of BS(4, 16), end to end.

The Tietze scripts that take each Reidemeister-Schreier output to the common
shape ``< q, s, x1, x2, x3 | q^s = q^4, [q, xi] = 1 >`` are shipped as data
(``data/tietze_scripts.json``); :func:`generate_tietze_scripts` rebuilds them
with the bounded certificate search.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .catalog import (
    complex_K,
    complex_L,
    displayed_H,
    double_star_form,
    presentation_BS_4_16,
    presentation_L_simplified,
    star_form,
)
from .presentations import (
    AddGenerator,
    AddRelator,
    RemoveGenerator,
    RemoveRelator,
    RenameGenerators,
    TietzeMove,
    abelian_invariants,
    auto_simplify,
    find_certificate,
    is_commutator_with,
    is_conjugation_power,
    move_from_dict,
    move_to_dict,
    pi1_from_complex,
    rename_isomorphic,
    tietze_apply,
    verify_certificate,
)
from .report import VerificationReport
from .schreier import CyclicHom, index_check, subgroup_presentation
from .words import Presentation, bs_presentation, commutator, format_word

HOM_H = CyclicHom(2, {"c": 1, "y": 0, "t": 0}, "c")
HOM_H_TILDE = CyclicHom(4, {"a": 1, "b": 0}, "a")


def kernel_H_raw() -> tuple[Presentation, int]:
    return subgroup_presentation(presentation_L_simplified(), HOM_H)


def kernel_H_tilde_raw() -> tuple[Presentation, int]:
    return subgroup_presentation(presentation_BS_4_16(), HOM_H_TILDE)


START = {"H": kernel_H_raw, "H~": kernel_H_tilde_raw}


def _difference_steps(p: Presentation, q: str, base: str, other: str, new: str,
                      max_factors: int, max_conjugator: int) -> tuple[Presentation, list[TietzeMove]]:
    """Trade the conjugating generator ``other`` for ``new = base other^-1``,
    whose commutation with ``q`` follows from the two conjugation relators."""
    moves = []

    def do(m):
        nonlocal p
        p = tietze_apply(p, m)
        moves.append(m)

    do(AddGenerator(new, ((base, 1), (other, -1))))
    do(RemoveGenerator(other, len(p.relators) - 1))
    target = commutator(((q, 1),), ((new, 1),))
    cert = find_certificate(p, target, max_factors, max_conjugator)
    if cert is None:
        raise RuntimeError(f"no certificate for [{q}, {new}] within bounds")
    do(AddRelator(target, cert))
    (old,) = [i for i, r in enumerate(p.relators[:-1]) if any(g == new for g, _ in r)]
    cert = find_certificate(p, p.relators[old], max_factors, max_conjugator, exclude={old})
    if cert is None:
        raise RuntimeError(f"no certificate for relator {old} within bounds")
    do(RemoveRelator(old, cert))
    return p, moves


def generate_tietze_scripts(max_factors: int = 4, max_conjugator: int = 6) -> dict[str, list[TietzeMove]]:
    scripts = {}

    p, _ = kernel_H_raw()
    moves: list[TietzeMove] = [RenameGenerators((("c@1", "q"), ("y@0", "y"), ("y@1", "yh"), ("t@0", "t"), ("t@1", "th")))]
    p = tietze_apply(p, moves[0])
    p, more = _difference_steps(p, "q", "t", "th", "x1", max_factors, max_conjugator)
    moves += more
    moves.append(RenameGenerators((("y", "x2"), ("yh", "x3"))))
    scripts["H"] = moves

    p, _ = kernel_H_tilde_raw()
    moves = [RenameGenerators((("a@3", "q"), ("b@0", "b"), ("b@1", "b1"), ("b@2", "b2"), ("b@3", "b3")))]
    p = tietze_apply(p, moves[0])
    for j in (1, 2, 3):
        p, more = _difference_steps(p, "q", "b", f"b{j}", f"x{j}", max_factors, max_conjugator)
        moves += more
    scripts["H~"] = moves
    return scripts


def scripts_to_json(scripts: dict[str, list[TietzeMove]]) -> str:
    return json.dumps({k: [move_to_dict(m) for m in v] for k, v in scripts.items()}, indent=2) + "\n"


@lru_cache(maxsize=1)
def _bundled_text() -> str:
    return resources.files("nonleighton").joinpath("data/tietze_scripts.json").read_text()


def bundled_tietze_scripts() -> dict[str, list[TietzeMove]]:
    data = json.loads(_bundled_text())
    return {k: [move_from_dict(m) for m in v] for k, v in data.items()}


def run_script(name: str, scripts=None, check_invariants: bool = True) -> tuple[Presentation, list[Presentation]]:
    """Apply a script to its starting kernel; returns the final presentation
    and every intermediate one."""
    scripts = scripts or bundled_tietze_scripts()
    p, _ = START[name]()
    trail = [p]
    inv = abelian_invariants(p)
    for m in scripts[name]:
        p = tietze_apply(p, m)
        if check_invariants and abelian_invariants(p) != inv:
            raise AssertionError(f"move {m} changed abelian invariants")
        trail.append(p)
    return p, trail


def kernel_shape(p: Presentation, q: str = "q") -> dict | None:
    """If ``p`` is ``< q, s, x.. | q^s q^-4, [q, x].. >``, describe it."""
    if q not in p.generators:
        return None
    conj, comm = [], []
    for r in p.relators:
        x = is_conjugation_power(r, q, 4)
        if x is not None:
            conj.append(x)
            continue
        x = is_commutator_with(r, q)
        if x is not None:
            comm.append(x)
            continue
        return None
    if len(conj) != 1 or sorted(conj + comm + [q]) != sorted(p.generators):
        return None
    return {"conjugating": conj[0], "commuting": sorted(comm)}


def all_certificates(scripts, name: str):
    """Yield ``(presentation, target, certificate)`` for every certificate in a script."""
    p, _ = START[name]()
    for m in scripts[name]:
        if isinstance(m, AddRelator):
            yield p, m.word, m.certificate
        elif isinstance(m, RemoveRelator):
            yield p, p.relators[m.relator], m.certificate
        p = tietze_apply(p, m)


def commensurability_witness(scripts=None) -> VerificationReport:
    rep = VerificationReport("commensurability witness")
    scripts = scripts or bundled_tietze_scripts()

    # pi_1(K)
    simple_K, _ = auto_simplify(pi1_from_complex(complex_K(), ()))
    bs24 = bs_presentation(2, 4)
    if rename_isomorphic(simple_K, bs24) is None:
        rep.error("pi1(K)", "simplified presentation is not BS(2,4) up to renaming", got=str(simple_K))
    else:
        rep.info("pi1(K)", "simplifies to BS(2,4)", presentation=str(simple_K))
    _expect(rep, "pi1(K)", abelian_invariants(simple_K), (1, [2]))

    # pi_1(L)
    simple_L, log = auto_simplify(pi1_from_complex(complex_L(), ["z"]))
    ref_L = presentation_L_simplified()
    if rename_isomorphic(simple_L, ref_L) is None:
        rep.error("pi1(L)", "simplified presentation does not match reference", got=str(simple_L))
    else:
        rep.info("pi1(L)", "simplifies to the reference 3-generator form",
                 presentation=str(simple_L), moves=len(log))
    _expect(rep, "pi1(L)", abelian_invariants(simple_L), (2, [6]))

    finals = {}
    for name, ambient, hom in (("H", ref_L, HOM_H), ("H~", presentation_BS_4_16(), HOM_H_TILDE)):
        raw, k = START[name]()
        idx = index_check(ambient, hom)
        rep.info(name, "kernel index", index=idx)
        if (len(raw.generators), len(raw.relators)) != (5, 4):
            rep.error(name, "kernel presentation does not have 5 generators and 4 relators",
                      generators=len(raw.generators), relators=len(raw.relators))
        n_certs = 0
        try:
            for p, target, cert in all_certificates(scripts, name):
                n_certs += 1
                if not verify_certificate(p, target, cert):
                    rep.error(name, "certificate fails", target=format_word(target))
        except Exception as exc:  # a broken move stops the replay; report it
            rep.error(name, f"script replay failed: {exc}")
            continue
        try:
            final, _ = run_script(name, scripts)
        except Exception as exc:  # report, do not crash the pipeline
            rep.error(name, f"script failed: {exc}")
            continue
        shape = kernel_shape(final)
        if shape is None:
            rep.error(name, "final presentation does not have the one-conjugation, three-commutator shape",
                      got=str(final))
        else:
            rep.info(name, "reached target shape", presentation=str(final), certificates=n_certs, **shape)
        _expect(rep, name, abelian_invariants(final), (4, [3]))
        finals[name] = final

    expected_index = {"H": 2, "H~": 4}
    for name, ambient, hom in (("H", ref_L, HOM_H), ("H~", presentation_BS_4_16(), HOM_H_TILDE)):
        if index_check(ambient, hom) != expected_index[name]:
            rep.error(name, "unexpected index")

    if len(finals) == 2:
        bij = rename_isomorphic(finals["H"], finals["H~"])
        if bij is None:
            rep.error("H vs H~", "final forms are not isomorphic by renaming")
        else:
            rep.info("H vs H~", "final forms agree up to renaming",
                     bijection={g: f"{h}" if s == 1 else f"{h}^-1" for g, (h, s) in bij.items()})
        for name, ref in (("H", star_form()), ("H~", double_star_form())):
            if rename_isomorphic(finals[name], ref) is None:
                rep.error(name, "final form differs from the reference target", reference=str(ref))

    raw_H, _ = kernel_H_raw()
    kinds = _relator_kinds(raw_H)
    same = rename_isomorphic(raw_H.rename({"c@1": "q"}), displayed_H()) is not None
    rep.info("H", "raw kernel relator types (commutator vs conjugation)", **kinds,
             matches_all_conjugation_display=same)
    return rep


def _relator_kinds(p: Presentation, q: str = "c@1") -> dict:
    comm = sum(1 for r in p.relators if is_commutator_with(r, q))
    conj = sum(1 for r in p.relators if is_conjugation_power(r, q, 4))
    return {"commutators": comm, "conjugations": conj}


def _expect(rep: VerificationReport, where: str, got, want) -> None:
    got = (got[0], list(got[1]))
    if got != (want[0], list(want[1])):
        rep.error(where, "abelian invariants differ", got=list(got), expected=[want[0], list(want[1])])
    else:
        rep.info(where, "abelian invariants", free_rank=got[0], torsion=got[1])
