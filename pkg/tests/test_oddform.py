import itertools

import numpy as np
import pytest

from stpro import modmat
from stpro.checks import FAIL, PASS
from stpro.coeffring import BaseRing
from stpro.oddform import (OddFormError, ParameterOutOfBlock, PatternMismatch, build_split_oddform,
                           check_family_axioms, check_oddform_axioms, is_unitary, random_ultrashort,
                           read_root_coordinate, root_kind, ultrashort_params, unitary_root_element)
from stpro.rootsys import root_system

Z4 = BaseRing.parse("z4")
BC3 = root_system("BC3")


@pytest.mark.parametrize("middle", [0, 1])
def test_split_oddform_axioms(middle):
    O, F = build_split_oddform(Z4, 3, middle)
    rep = check_oddform_axioms(O, F, 0, 300)
    assert rep.status == PASS, rep.summary()


def test_family_constants():
    O, F = build_split_oddform(Z4, 3, 1)
    for i in O.indices:
        assert modmat.equal(O.pi(F.q[i]), F.e[i])
        assert modmat.equal(O.rho(F.q[i]), O.zero_R())


def test_phi_action_formula():
    O, _ = build_split_oddform(Z4, 3, 1)
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = O.random_R(rng), O.random_R(rng)
        lhs = O.act(O.phi(a), b)
        rhs = O.phi(O.mul(O.bar(b), a, b))
        assert modmat.equal(lhs.m, rhs.m) and modmat.equal(lhs.a, rhs.a)
        assert modmat.equal(O.phi(a).a, (a - O.bar(a)) % 4)


def test_transpose_involution_mutation_fails():
    O, F = build_split_oddform(Z4, 3, 1, involution="transpose")
    rep = check_oddform_axioms(O, F, 0, 200)
    assert rep.status == FAIL
    bad = rep.result("family: ē_i = e_-i")
    assert bad.status == FAIL and bad.witness is not None


def test_minimal_parameter_fails_family_only():
    O, F = build_split_oddform(Z4, 3, 1, parameter="minimal")
    rep = check_oddform_axioms(O, F, 0, 200)
    family = [r for r in rep.results if r.name.startswith("family: ")]
    axioms = [r for r in rep.results if not r.name.startswith("family: ")]
    assert all(r.status == PASS for r in axioms)
    assert rep.result("family: pi(q_i) = e_i").status == FAIL
    assert check_family_axioms(O, F).status == FAIL
    assert any(r.witness for r in family)


def test_root_kinds():
    assert root_kind((1, 0, 0)) == ("ultra", 1)
    assert root_kind((0, -2, 0)) == ("double", -2)
    assert root_kind((1, -1, 0))[0] == "pair"
    with pytest.raises(OddFormError):
        root_kind((1, 1, 1))


def test_root_elements_are_unitary_and_read_back():
    O, F = build_split_oddform(Z4, 3, 1)
    rng = np.random.default_rng(0)
    for r in BC3:
        kind = root_kind(r)
        if kind[0] == "pair":
            p, q = O.pos(kind[1]), O.pos(kind[2])
            param = O.unit(p, q, int(rng.integers(1, 4)))
            back = read_root_coordinate(unitary_root_element(O, F, r, param), r, O, F)
            assert modmat.equal(back, param)
        elif kind[0] == "ultra":
            param = random_ultrashort(O, rng, kind[1])
            back = read_root_coordinate(unitary_root_element(O, F, r, param), r, O, F)
            assert modmat.equal(back.m, param.m) and modmat.equal(back.a, param.a)
        else:
            continue
        assert is_unitary(O, unitary_root_element(O, F, r, param))
    assert modmat.is_identity(unitary_root_element(O, F, (1, -1, 0), O.zero_R()))


def test_ultrashort_additivity_matches_dotplus():
    O, F = build_split_oddform(Z4, 3, 1)
    us = ultrashort_params(O, 2)
    assert len(us) > 1
    for u, v in itertools.islice(itertools.product(us, us), 200):
        lhs = O.mul(unitary_root_element(O, F, (0, 1, 0), u), unitary_root_element(O, F, (0, 1, 0), v))
        assert modmat.equal(lhs, unitary_root_element(O, F, (0, 1, 0), O.add(u, v)))


def test_pattern_errors():
    O, F = build_split_oddform(Z4, 3, 1)
    with pytest.raises(ParameterOutOfBlock):
        unitary_root_element(O, F, (1, -1, 0), O.one())
    g = unitary_root_element(O, F, (1, -1, 0), O.unit(*_pair(O, (1, -1, 0))))
    with pytest.raises(PatternMismatch):
        read_root_coordinate(g, (0, 1, -1), O, F)


def _pair(O, r):
    _, i, j = root_kind(r)
    return O.pos(i), O.pos(j)
