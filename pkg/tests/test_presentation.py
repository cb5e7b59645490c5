import pytest
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from stpro.algebra import MatrixAlgebra
from stpro.checks import PASS
from stpro.coeffring import BaseRing
from stpro.oddform import build_split_oddform
from stpro.presentation import (Overflow, Presentation, certify_steinberg, compare_presentations, eliminate_root,
                                glued_presentation, steinberg_presentation, todd_coxeter)
from stpro.steinberg import LinearRealization, UnitaryRealization


def _pres(ngens, relators):
    return Presentation([("g", i) for i in range(ngens)], list(relators), [("x",)] * len(relators))


def _sympy_order(ngens, relators):
    F, *xs = free_group(",".join(f"x{i}" for i in range(ngens)))

    def w(word):
        out = F.identity
        for a in word:
            out = out * (xs[a - 1] if a > 0 else xs[-a - 1] ** -1)
        return out

    return FpGroup(F, [w(r) for r in relators]).order()


SMALL = {
    "cyclic 5": (1, [(1,) * 5]),
    "S3": (2, [(1, 1), (2, 2, 2), (1, 2, 1, 2)]),
    "D5": (2, [(1, 1), (2,) * 5, (1, 2, 1, 2)]),
    "Q8": (2, [(1, 1, 1, 1), (1, 1, -2, -2), (-2, 1, 2, 1)]),
    "A4": (2, [(1, 1), (2, 2, 2), (1, 2) * 3]),
    "Z2 x Z3": (2, [(1, 1), (2, 2, 2), (1, 2, -1, -2)]),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_orders_match_sympy(name):
    n, rels = SMALL[name]
    assert todd_coxeter(_pres(n, rels)).index == _sympy_order(n, rels)


def test_trivial_and_subgroup_index():
    assert todd_coxeter(_pres(0, [])).index == 1
    assert todd_coxeter(_pres(1, [(1,)])).index == 1
    n, rels = SMALL["S3"]
    T = todd_coxeter(_pres(n, rels), subgroup=[(1,)])
    assert T.index == 3 and T.relators_hold(rels)


def test_overflow():
    # Z x Z never closes
    with pytest.raises(Overflow):
        todd_coxeter(_pres(2, [(1, 2, -1, -2)]), limit=500)


@pytest.fixture(scope="module")
def a2f2():
    R = LinearRealization(MatrixAlgebra.parse("m3:z2"))
    return R, steinberg_presentation(R)


def test_steinberg_a2_presentation(a2f2):
    R, P = a2f2
    s = P.stats()
    assert s["generators"] == 6 and s["families"] == {"add": 6, "comm": 24}
    T = todd_coxeter(P)
    # 168 also comes out of the sympy coset enumerator on the same relators (about a minute, frozen here)
    assert T.index == 168
    rep = certify_steinberg(P, R, T, expected_order=168)
    assert rep.status == PASS and rep.notes["kernel_order"] == 1


def test_steinberg_a2_over_f3():
    R = LinearRealization(MatrixAlgebra.parse("m3:z3"))
    P = steinberg_presentation(R)
    assert P.ngens == 12
    assert todd_coxeter(P).index == 5616  # |SL_3(F_3)|


def test_a3_generator_count():
    P = steinberg_presentation(LinearRealization(MatrixAlgebra.parse("m4:z2")))
    assert P.ngens == 12


def test_eliminate_counts_and_subset():
    P = steinberg_presentation(LinearRealization(MatrixAlgebra.parse("m4:z2")))
    Q = eliminate_root(P, (1, -1, 0, 0))
    assert Q.ngens == 11
    assert set(Q.gens) < set(P.gens)
    assert len(Q.relators) < len(P.relators)
    assert all(r != (1, -1, 0, 0) for r, _ in Q.gens)
    with pytest.raises(ValueError):
        eliminate_root(P, (1, -1, 0))


def test_eliminate_ultrashort_drops_the_double():
    O, F = build_split_oddform(BaseRing.parse("z4"), 3, 1)
    P = steinberg_presentation(UnitaryRealization(O, F))
    Q = eliminate_root(P, (1, 0, 0))
    kept = set(Q.gens)
    gone = [g[0] for g in P.gens if g not in kept]
    assert set(gone) <= {(1, 0, 0), (2, 0, 0)}
    assert (1, 0, 0) in gone
    assert P.ngens - Q.ngens == sum(r in {(1, 0, 0), (2, 0, 0)} for r, _ in P.gens)


def test_compare_with_identity_dictionary(a2f2):
    _, P = a2f2
    ident = {i: (i,) for i in range(1, P.ngens + 1)}
    rep = compare_presentations(P, P, ident, ident)
    assert rep.status == PASS


def test_compare_detects_a_non_homomorphism():
    n, rels = SMALL["S3"]
    P = _pres(n, rels)
    C6 = _pres(1, [(1,) * 6])
    # x -> t^3, y -> t^2 respects the S3 relators only if (t^5)^2 = 1, which fails in Z/6
    rep = compare_presentations(P, C6, {1: (1, 1, 1), 2: (1, 1)}, {1: (1, 2)})
    assert rep.status != PASS


@pytest.mark.parametrize("copies", [1, 2])
def test_glued_copies(a2f2, copies):
    R, P = a2f2
    G = glued_presentation(R, copies)
    assert G.ngens == copies * P.ngens
    assert todd_coxeter(G).index == 168
