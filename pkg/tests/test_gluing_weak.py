import numpy as np
import pytest

from stpro import modmat
from stpro.algebra import MatrixAlgebra
from stpro.checks import PASS
from stpro.coeffring import BaseRing
from stpro.steinberg import (CoveringNotFound, HomotopeLevels, check_gauss_decomposition, check_gluing_relations,
                             check_weak_action_identities, covering_factorizations, gauss_decompose,
                             generator_type_elements)
from stpro.steinberg.weak import remultiply
from stpro.tower import HypothesisFailure

Z12 = BaseRing.parse("z12")
M2Z12 = MatrixAlgebra.full(Z12, 2)
M4Z8 = MatrixAlgebra.parse("m4:z8")


def test_gluing_relations_small():
    for ks in [(3, 4), (1, 5)]:
        rep = check_gluing_relations(M2Z12, Z12, 1, ks, depth=2, seed=0, budget=60)
        assert rep.status == PASS, rep.summary()


def test_gluing_needs_a_cover():
    # 2 and 4 do not generate the unit ideal of Z/12
    with pytest.raises(HypothesisFailure):
        check_gluing_relations(M2Z12, Z12, 1, (2, 4), depth=1, seed=0, budget=10)


def test_gluing_act_without_conjugation_fails():
    """Negative control: dropping the ^{d(a)} twist on the right breaks the act relation.

    With ks = (3, 4) the twist dies under can since 3 * 4 = 0, so a unit cover is used.
    """
    H = HomotopeLevels(M2Z12)
    N, km, Li = 12, [1, 5], [1, 5]
    rng = np.random.default_rng(0)
    broken = 0
    for _ in range(50):
        g = H.word(Li[0], H.random_letters(rng))
        h = H.word(Li[1], H.random_letters(rng))
        ci = H.can(g, km[0])
        lhs = (ci @ H.can(h, km[1]) @ modmat.inverse(ci, N)) % N
        da = H.d(H.to_group(H.can(g, Li[0])))
        assert modmat.equal(lhs, H.can((da @ h @ modmat.inverse(da, N)) % N, km[1]))
        broken += not modmat.equal(lhs, H.can(h, km[1]))
    assert broken > 0


def test_gauss_identity_and_root():
    assert gauss_decompose(modmat.identity(4), M4Z8) == []
    t = modmat.identity(4)
    t[0, 1] = 3
    fs = gauss_decompose(t, M4Z8)
    assert len(fs) == 1 and fs[0].kind == "root" and fs[0].root == (1, -1, 0, 0)
    assert modmat.equal(fs[0].matrix, t)


def test_gauss_random_and_singular():
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = M4Z8.random_unit(rng)
        assert modmat.equal(remultiply(gauss_decompose(g, M4Z8), 4, 8), g)
    with pytest.raises(modmat.NotInvertible):
        gauss_decompose(np.diag([2, 1, 1, 1]), M4Z8)
    assert check_gauss_decomposition(M4Z8, 0, 100).status == PASS


def test_gauss_needs_local_ring():
    with pytest.raises(ValueError):
        check_gauss_decomposition(M2Z12, 0, 10)


def test_covering_factorizations():
    g = generator_type_elements(M2Z12)["product"]
    cover = covering_factorizations(g, M2Z12, Z12, 1, (3, 4))
    # inverting 3 in Z/12 leaves Z/4, inverting 4 leaves Z/3
    assert [Np for _, Np, _ in cover] == [4, 3]
    for _, Np, fs in cover:
        assert modmat.equal(remultiply(fs, 2, Np), g % Np)
    with pytest.raises(CoveringNotFound):
        covering_factorizations(g, M2Z12, Z12, 1, (1,))


@pytest.mark.parametrize("kind", ["root", "diagonal", "product"])
def test_weak_action_small(kind):
    g = generator_type_elements(M2Z12)[kind]
    rep = check_weak_action_identities(M2Z12, Z12, 1, (3, 4), g, depth=2, seed=0, budget=30)
    assert rep.status == PASS, rep.summary()
