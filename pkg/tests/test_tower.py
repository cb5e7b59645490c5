import numpy as np
import pytest

from stpro.algebra import MatrixAlgebra
from stpro.checks import FAIL, PASS
from stpro.coeffring import BaseRing
from stpro.oddform import build_split_oddform
from stpro.steinberg.realization import linear_block
from stpro.tower import (HypothesisFailure, LinearParam, TowerMap, UnitaryParam, check_colocalization_bullets,
                         check_cosheaf, check_iso_witness, check_transitions, colocalization, identity_map,
                         pro_equal, reindex_power)

Z12 = BaseRing.parse("z12")
M1Z12 = MatrixAlgebra.parse("m1:z12")


@pytest.fixture(scope="module")
def C2():
    return colocalization(M1Z12, 2, depth=4)


def test_colocalization_levels(C2):
    assert len(C2.level(1).elements()) == 12
    assert C2.level(3).name == "A^(8)"
    x = np.array([[5]])
    assert int(C2.transition(x, 3, 1)[0, 0]) == 20 % 12
    with pytest.raises(ValueError):
        C2.transition(x, 1, 3)
    assert check_transitions(C2).status == PASS
    assert check_transitions(reindex_power(C2, 2), depth=2).status == PASS


def test_pro_equal_up_to_shift(C2):
    # x at level j+1 pushed down by one step agrees with x read at level j
    f = identity_map(C2)
    g = TowerMap(C2, C2, lambda j: j + 1, lambda j, x: C2.transition(x, j + 1, j))
    ok, witness = pro_equal(f, g)
    assert ok and witness is None


def test_pro_equal_detects_difference(C2):
    f = identity_map(C2)
    g = TowerMap(C2, C2, lambda j: j, lambda j, x: (3 * x) % 12)
    ok, witness = pro_equal(f, g, horizon=5)
    assert not ok and witness["target_level"] == 1


def test_pro_zero_tower():
    # 6^2 = 0 in Z/12, so the identity of A^(oo,6) is pro-equal to zero; for the unit 5 it is not
    for k, expected in [(6, True), (5, False)]:
        T = colocalization(M1Z12, k, depth=3)
        zero = TowerMap(T, T, lambda j: j, lambda j, x: 0 * x)
        ok, witness = pro_equal(identity_map(T), zero)
        assert ok is expected and (witness is None) is expected


def test_iso_witness_identity_and_broken(C2):
    assert check_iso_witness(identity_map(C2), identity_map(C2)).status == PASS
    bad = TowerMap(C2, C2, lambda j: j, lambda j, x: (5 * x) % 12, "times 5")
    rep = check_iso_witness(identity_map(C2), bad)
    assert rep.status == FAIL and rep.failures()[0].witness is not None


def test_colocalization_bullets():
    rep = check_colocalization_bullets(M1Z12, 2, 2, (2, 3), depth=3)
    assert rep.status == PASS, rep.summary()


def test_linear_cosheaf_small():
    A = MatrixAlgebra.full(Z12, 2)
    rep = check_cosheaf(LinearParam(A, linear_block((1, -1))), Z12, 1, (3, 4), depth=2, budget=200)
    assert rep.status == PASS, rep.summary()


def test_cosheaf_perturbed_coefficient_fails():
    A = MatrixAlgebra.full(Z12, 2)
    rep = check_cosheaf(LinearParam(A, linear_block((1, -1))), Z12, 1, (3, 4), depth=2, budget=200,
                        perturb=(1, 0, 1))
    assert rep.status == FAIL
    assert any(r.witness for r in rep.failures())


def test_cosheaf_needs_unit_ideal():
    A = MatrixAlgebra.full(Z12, 2)
    with pytest.raises(HypothesisFailure):
        check_cosheaf(LinearParam(A, linear_block((1, -1))), Z12, 1, (2, 4), depth=1)


def test_unitary_cosheaf_small():
    O, _ = build_split_oddform(Z12, 3, 1)
    rep = check_cosheaf(UnitaryParam(O, 1), Z12, 1, (3, 4), depth=1, budget=100)
    assert rep.status == PASS, rep.summary()
    assert rep.notes["phi corrections nonzero"] == 0  # degenerate over the split form
