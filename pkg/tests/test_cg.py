from __future__ import annotations

import json

import pytest
import sympy

from knotcg import cg
from knotcg.cg import (
    INCONCLUSIVE,
    NOT_SLICE,
    Character,
    FamilySpec,
    FamilyTerm,
    cg_disc,
    deficiency_certificate,
    family_expression,
    independence_certificate,
    parity_matrix,
    slice_obstruction,
    tau_symbolic,
)
from knotcg.exact import UnitAngle
from knotcg.knots import CableWord, KnotExpr, alpha_atom, lt_jump
from knotcg.laurent import CanonicalDisc
from knotcg.witt import DiscOnlyAtom, jump_function, psi

TREFOIL = CableWord.torus(2, 3)
MAIN = FamilySpec((FamilyTerm(TREFOIL, 13, 15),))


def roots_of_unity(p: int, skip: set[int] = frozenset()) -> CanonicalDisc:
    return CanonicalDisc({UnitAngle(k, p) for k in range(1, p) if k not in skip})


# -- characters and discriminants -------------------------------------------------

def test_character_folding():
    assert Character(5, 3).a == 2
    assert Character(5, 0).is_trivial()
    assert Character(13, 12) == Character(13, 1)
    with pytest.raises(ValueError):
        Character(9, 1)
    with pytest.raises(ValueError):
        Character(2, 1)


def test_cg_disc_examples():
    assert cg_disc(3, 1).is_trivial()
    assert cg_disc(5, 1) == CanonicalDisc({UnitAngle(2, 5), UnitAngle(3, 5)})
    for c in range(1, 13):
        assert len(cg_disc(13, c, mode="closed_form").roots) == 10


def test_cg_disc_root_set_oracle():
    # all nontrivial p-th roots except +-(c/p); the trivial character keeps all of them
    for p in (3, 5, 7, 11, 13):
        assert cg_disc(p, 0) == roots_of_unity(p)
        for c in range(1, p):
            assert cg_disc(p, c) == roots_of_unity(p, {c, p - c})


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_mode_agreement_and_symmetry(p):
    for d in range(1, p):
        assert cg_disc(p, d, "fox") == cg_disc(p, d, "closed_form")
        assert cg_disc(p, d) == cg_disc(p, p - d)


def test_cg_disc_errors():
    with pytest.raises(ValueError):
        cg_disc(15, 1)
    with pytest.raises(ValueError):
        cg_disc(5, 1, mode="other")


# -- parity matrices ---------------------------------------------------------------

def test_parity_matrix_examples():
    assert parity_matrix(5, 1).rows == ((1, 0), (0, 1))
    assert parity_matrix(5, 2).rows == ((0, 1), (1, 0))
    m = parity_matrix(13, 5)
    assert len(m.rows) == 6 and m.is_permutation and m.det_gf2 == 1


def test_parity_matrix_is_folding_permutation():
    # the 1 in row a sits at column +-(a d) folded into 1..h
    for p in (7, 11, 13, 17):
        h = (p - 1) // 2
        for d in range(1, p):
            rows = parity_matrix(p, d).rows
            for a in range(1, h + 1):
                c = (a * d) % p
                col = min(c, p - c)
                assert rows[a - 1] == tuple(1 if b == col else 0 for b in range(1, h + 1))


def test_parity_matrix_bad_d():
    with pytest.raises(ValueError):
        parity_matrix(5, 0)


# -- deficiency and independence ----------------------------------------------------

def test_trefoil_certificates():
    d = deficiency_certificate(TREFOIL, 13)
    assert d.ok and d.details["gcd_with_p"] == 1 and d.details["direct_check"] == "agrees"
    for p in (7, 13):
        c = independence_certificate(TREFOIL, p)
        assert c.ok and c.details["translated_supports_disjoint"]
    with pytest.raises(ValueError):
        independence_certificate(TREFOIL, 2)
    json.dumps(d.to_dict())


def test_trefoil_at_three():
    # 1/6 - 1/3 = 5/6 is a translate of 5/6 - 2/3 ... the supports collide at p = 3
    assert deficiency_certificate(TREFOIL, 3).ok
    c = independence_certificate(TREFOIL, 3)
    assert not c.ok and c.reason == "translated supports collide"


def test_unknot_certificates():
    u = CableWord(())
    assert deficiency_certificate(u, 7).ok
    c = independence_certificate(u, 7)
    assert not c.ok and "trivial" in c.reason


def test_deficiency_T35_at_five():
    # Delta(T(3,5)) = Phi_15, whose roots are primitive 15th roots: none is a 5th root
    x = sympy.Symbol("x")
    w = CableWord.torus(3, 5)
    delta = sympy.cancel((x**15 - 1) * (x - 1) / ((x**3 - 1) * (x**5 - 1)))
    assert sympy.expand(delta - sympy.cyclotomic_poly(15, x)) == 0
    c = deficiency_certificate(w, 5)
    assert c.ok and c.details["coincidences"] == []
    assert c.details["alexander_root_count"] == 8


def test_deficiency_refutation_on_coincidence(monkeypatch):
    w = CableWord.torus(3, 5)
    fake = {UnitAngle(1, 5): 1, UnitAngle(4, 5): 1}
    monkeypatch.setattr(cg, "_alexander_support", lambda _w: (fake, 15))
    c = deficiency_certificate(w, 5)
    assert not c.ok and c.details["simple_root_coincidences"] == ["1/5", "4/5"]


def test_deficiency_fast_path_matches_direct():
    for q in range(3, 16, 2):
        w = CableWord.torus(2, q)
        for p in (3, 5, 7, 11, 13):
            c = deficiency_certificate(w, p)
            j = lt_jump(w)
            direct = not any(j(UnitAngle(a, p)) for a in range(p))
            assert c.ok == direct


def test_certificates_on_cables():
    w = TREFOIL.cable(2, 13)
    assert deficiency_certificate(w, 17).ok
    assert independence_certificate(w, 17).ok
    # the roots have even order, so no odd prime can hit them
    c = deficiency_certificate(w, 13)
    assert c.ok and c.details["coincidences"] == []


def test_independence_general_torus():
    c = independence_certificate(CableWord.torus(3, 5), 7)
    assert c.ok and c.details["nonvanishing"].startswith("simple")


# -- tau --------------------------------------------------------------------------

def test_tau_zero_data_cancels():
    w = tau_symbolic(MAIN, [0], [0])
    assert w.is_formally_zero()


def test_tau_matching_data():
    w = tau_symbolic(MAIN, [1], [1])
    assert w.disc_part().is_formally_zero()
    expect = (
        alpha_atom(TREFOIL).scale(-2)
        + alpha_atom(TREFOIL, UnitAngle(1, 13))
        + alpha_atom(TREFOIL, UnitAngle(-1, 13))
    )
    assert (w - expect).is_formally_zero()


def test_tau_mismatched_data_has_parity():
    w = tau_symbolic(MAIN, [1], [0])
    assert w.has_disc_only()
    assert psi(w, 13).parity != (0,) * 6


def test_tau_alpha_part_in_kernel_of_psi():
    for a in range(7):
        for b in range(7):
            v = psi(tau_symbolic(MAIN, [a], [b]).matrix_part(), 13)
            assert v.is_zero()


def test_tau_validation():
    with pytest.raises(ValueError):
        tau_symbolic(MAIN, [7], [0])
    with pytest.raises(ValueError):
        tau_symbolic(MAIN, [1, 1], [0, 0])
    with pytest.raises(ValueError):
        tau_symbolic(MAIN.scaled(-1), [1], [0])


def test_tau_torus_atoms_carry_discriminant():
    w = tau_symbolic(MAIN, [2], [0])
    atoms = [a for _, a in w.terms() if isinstance(a, DiscOnlyAtom)]
    assert {a.disc() for a in atoms} == {cg_disc(13, 2), cg_disc(13, 0)}


# -- families and obstruction ---------------------------------------------------------

def test_family_expression():
    e = family_expression(MAIN)
    expect = (
        KnotExpr.of(TREFOIL.cable(2, 13)) + KnotExpr.torus(2, 15)
        - KnotExpr.of(TREFOIL.cable(2, 15)) - KnotExpr.torus(2, 13)
    )
    assert e == expect
    assert str(MAIN) == "K=T(2,3); q=13,15"
    assert str(MAIN.scaled(3)) == "K=T(2,3); q=13,15; n=3"
    with pytest.raises(ValueError):
        FamilySpec(())


def test_main_exhaustive():
    c = slice_obstruction(MAIN, "exhaustive")
    assert c.verdict == NOT_SLICE and c.mode_used == "exhaustive"
    e = c.enumeration
    assert e["count"] == 48 and e["all_witnessed"] and e["parity_matrices_are_permutations"]
    assert all(r["witness"] for r in e["cases"])
    kinds = {r["witness"] for r in e["cases"]}
    assert kinds <= {"odd_jump", "psi_injective", "untranslated_jump"}
    # matching multisets are exactly the 6 diagonal cases a = b != 0
    assert sum(r["witness"] == "untranslated_jump" for r in e["cases"]) == 6


def test_multiples_structural():
    for m in (1, 2, 5, 10):
        assert slice_obstruction(MAIN.scaled(m)).verdict == NOT_SLICE
    assert slice_obstruction(MAIN.scaled(-2)).verdict == NOT_SLICE


def test_unknot_family_inconclusive():
    fam = FamilySpec((FamilyTerm(CableWord(()), 13, 15),))
    c = slice_obstruction(fam, "exhaustive")
    assert c.verdict == INCONCLUSIVE
    hyp = {h["name"]: h["ok"] for h in c.hypotheses}
    assert not hyp["deficient_and_independent"]


def test_failed_hypotheses():
    bad = FamilySpec((FamilyTerm(TREFOIL, 13, 39),))
    c = slice_obstruction(bad)
    assert c.verdict == INCONCLUSIVE
    assert not {h["name"]: h["ok"] for h in c.hypotheses}["coprimality"]
    even = FamilySpec((FamilyTerm(TREFOIL, 13, 14),))
    assert slice_obstruction(even).verdict == INCONCLUSIVE
    composite = FamilySpec((FamilyTerm(TREFOIL, 15, 13),))
    assert slice_obstruction(composite).verdict == INCONCLUSIVE
    zero = FamilySpec((FamilyTerm(TREFOIL, 13, 15, 0),))
    assert slice_obstruction(zero).verdict == INCONCLUSIVE


def test_experimental_composite_never_not_slice():
    for q in (9, 15, 21):
        fam = FamilySpec((FamilyTerm(TREFOIL, q, 13),))
        for mode in ("structural", "exhaustive"):
            assert slice_obstruction(fam, mode, experimental=True).verdict == INCONCLUSIVE


def test_budget_fallback():
    c = slice_obstruction(MAIN, "exhaustive", budget=10)
    assert c.mode_used == "structural" and c.verdict == NOT_SLICE
    assert any("budget" in n for n in c.notes)


def test_two_copies_exhaustive():
    fam = FamilySpec((FamilyTerm(TREFOIL, 5, 7, 2),))
    c = slice_obstruction(fam, "exhaustive")
    assert c.verdict == NOT_SLICE and c.enumeration["count"] == 3**4 - 1
    assert "psi_injective" in {r["witness"] for r in c.enumeration["cases"]}


def test_jobs_determinism():
    a = json.dumps(slice_obstruction(MAIN, "exhaustive").to_dict(), indent=2)
    b = json.dumps(slice_obstruction(MAIN, "exhaustive", jobs=3).to_dict(), indent=2)
    assert a == b


def test_second_term_selection():
    # the first term is not independent at 3, the second one is fine at 13
    fam = FamilySpec((FamilyTerm(TREFOIL, 3, 5), FamilyTerm(TREFOIL, 13, 7)))
    c = slice_obstruction(fam, "exhaustive")
    assert c.verdict == NOT_SLICE and c.enumeration["term"] == 1


def test_untranslated_jump_matches_lt_jump():
    c = slice_obstruction(MAIN, "exhaustive")
    j = lt_jump(TREFOIL)
    for r in c.enumeration["cases"]:
        if r["witness"] == "untranslated_jump":
            elem = tau_symbolic(MAIN, r["a"], r["b"]).matrix_part()
            s = UnitAngle.parse(r["angle"])
            assert j(s) and jump_function(elem)(s) == j(s) * -2


def test_odd_jump_angles_are_disc_roots():
    c = slice_obstruction(MAIN, "exhaustive")
    for r in c.enumeration["cases"]:
        if r["witness"] == "odd_jump":
            for d, ang in r["angles"].items():
                elem = tau_symbolic(MAIN, r["a"], r["b"], int(d))
                assert psi(elem, 13).parity[UnitAngle.parse(ang).num - 1] == 1
