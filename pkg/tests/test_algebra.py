import numpy as np
import pytest

from stpro import modmat
from stpro.algebra import (AlgebraError, HomotopeElement, LabelMismatch, MatrixAlgebra, check_crossed_module,
                           check_semidirect, homotope, homotope_transition, ideal, semidirect, twisted,
                           zero_bimodule)
from stpro.checks import FAIL, PASS

Z12 = MatrixAlgebra.parse("m1:z12")
M2Z4 = MatrixAlgebra.parse("m2:z4")


def test_parse():
    A = MatrixAlgebra.parse("m4:z12:2,1,1")
    assert A.n == 4 and A.rank == 2 and A.labels == (1, 1, 2, 3)
    with pytest.raises(AlgebraError):
        MatrixAlgebra.parse("m4:z12:2,1")
    with pytest.raises(AlgebraError):
        MatrixAlgebra.parse("gl4")


def test_homotope_product_and_delta():
    X = homotope(Z12, 3)
    a, b = np.array([[2]]), np.array([[5]])
    assert int(X.mul(a, b)[0, 0]) == 2 * 3 * 5 % 12  # 2^(3) 5^(3) = 6^(3) after the label
    assert int(X.delta(a)[0, 0]) == 6
    X0 = homotope(Z12, 0)
    assert int(X0.mul(a, b)[0, 0]) == 0 and int(X0.delta(a)[0, 0]) == 0


def test_homotope_transitions():
    a = np.array([[5]])
    x = HomotopeElement.of(a, 9, 12)
    y = homotope_transition(3, x, 3, 12)
    assert y == HomotopeElement.of(a * 3, 3, 12)
    assert homotope_transition(1, x, 9, 12) == x
    with pytest.raises(LabelMismatch):
        homotope_transition(2, x, 3, 12)
    # 2: 3 -> 6 then 2: 6 -> 0 equals 4: 3 -> 0, on every a in Z/12
    for v in range(12):
        z = HomotopeElement.of(np.array([[v]]), 0, 12)
        two = homotope_transition(2, homotope_transition(2, z, 6, 12), 3, 12)
        assert two == homotope_transition(4, z, 3, 12)


@pytest.mark.parametrize("s", range(12))
def test_every_homotope_is_a_crossed_module(s):
    rep = check_crossed_module(homotope(Z12, s), 0, 100)
    assert rep.status == PASS
    assert all(r.mode == "exhaustive" for r in rep.results)


def test_ideal_and_zero_bimodule_pass():
    assert check_crossed_module(ideal(M2Z4, 2), 0, 300).status == PASS
    assert check_crossed_module(zero_bimodule(M2Z4), 0, 300).status == PASS


def test_noncentral_twist_fails_with_witness():
    g = np.array([[1, 1], [0, 1]])
    rep = check_crossed_module(twisted(M2Z4, g), 0, 500)
    assert rep.status == FAIL
    assert all(r.witness is not None for r in rep.failures())


def test_semidirect():
    S = semidirect(ideal(M2Z4, 2))
    assert check_semidirect(S, 0, 300).status == PASS
    x = np.array([[2, 0], [2, 2]])
    a = np.array([[1, 3], [0, 1]])
    M = S.embed(x, a)
    assert modmat.equal((S.p2(M) - S.p1(M)) % 4, S.X.delta(x))
    S0 = semidirect(zero_bimodule(M2Z4))
    assert modmat.equal(S0.p1(S0.embed(x, a)), a)
