import itertools

import numpy as np
import pytest

from stpro import modmat
from stpro.algebra import MatrixAlgebra, ideal, zero_bimodule
from stpro.checks import PASS
from stpro.coeffring import BaseRing
from stpro.oddform import build_split_oddform
from stpro.steinberg import (CrossedSquareModel, LinearRealization, RelativeModel, ResidueNonzero,
                             UnitaryRealization, anti_parallel, check_chevalley_extraction, check_crossed_square,
                             check_product_injectivity, check_relative_presentation, check_steinberg_relations,
                             commutator_terms, extract_chevalley_maps)

M4Z2 = MatrixAlgebra.parse("m4:z2")
M4Z4 = MatrixAlgebra.parse("m4:z4")


@pytest.fixture(scope="module")
def lin4():
    return LinearRealization(M4Z4)


@pytest.fixture(scope="module")
def uni2():
    O, F = build_split_oddform(BaseRing.parse("z2"), 3, 1)
    return UnitaryRealization(O, F)


def test_linear_relations_exhaustive_over_z2():
    real = LinearRealization(M4Z2)
    rep = check_steinberg_relations(real, 0, 100)
    assert rep.status == PASS
    assert all(r.mode == "exhaustive" for r in rep.results)


def test_unitary_relations(uni2):
    assert check_steinberg_relations(uni2, 0, 300).status == PASS


def test_parameter_space_sizes(lin4, uni2):
    assert all(lin4.space(r).size == 4 for r in lin4.roots())
    # ultrashort parameters exist, the doubled ones degenerate to zero over Z/2 with m0 = 1
    assert uni2.space((1, 0, 0)).size > 1
    assert uni2.space((2, 0, 0)).size == 1


def test_adjacent_maps_equal_matrix_product(lin4):
    """[x_a(p), x_b(q)] = x_{a+b}(pq - qp): the matrix product is the oracle, exhaustively over Z/4."""
    rs = lin4.rs
    count = 0
    for a, b in itertools.permutations(rs.roots, 2):
        c = tuple(x + y for x, y in zip(a, b))
        if c not in rs.root_set:
            continue
        for p in lin4.space(a).all:
            for q in lin4.space(b).all:
                terms = extract_chevalley_maps(lin4, a, b, p, q)
                assert list(terms) == [c]
                assert modmat.equal(terms[c], (p @ q - q @ p) % 4)
                count += 1
    assert count == 48 * 16  # each root splits as (e_i - e_k) + (e_k - e_j) in 4 ordered ways


def test_disjoint_blocks_commute(lin4):
    a, b = (1, -1, 0, 0), (0, 0, 1, -1)
    p, q = lin4.space(a).all[1], lin4.space(b).all[3]
    terms = extract_chevalley_maps(lin4, a, b, p, q)
    assert all(modmat.equal(v, lin4.space(c).zero()) for c, v in terms.items())


def test_anti_parallel_rejected(lin4):
    assert anti_parallel((1, -1, 0, 0), (-1, 1, 0, 0))
    with pytest.raises(ValueError):
        extract_chevalley_maps(lin4, (1, -1, 0, 0), (-1, 1, 0, 0), lin4.space((1, -1, 0, 0)).all[1],
                               lin4.space((-1, 1, 0, 0)).all[1])


def test_unitary_extraction_remultiplies(uni2):
    rep = check_chevalley_extraction(uni2, 0, 200)
    assert rep.status == PASS
    terms = commutator_terms(uni2.rs, (1, -1, 0), (0, 1, 0))
    assert [t[2] for t in terms] == [(1, 0, 0), (1, 1, 0), (2, 0, 0)]
    assert commutator_terms(uni2.rs, (1, 0, 0), (0, 1, 0)) == [(1, 1, (1, 1, 0))]


def test_extraction_reports(lin4):
    assert check_chevalley_extraction(lin4, 0, 100).status == PASS


def test_product_injectivity_z2():
    rep = check_product_injectivity(LinearRealization(M4Z2), seed=0, samples=500)
    assert rep.status == PASS


def test_residue_error_exists():
    assert issubclass(ResidueNonzero, ArithmeticError)


# -- relative groups and the crossed square ------------------------------------

def test_relative_presentation_ideal():
    rep = check_relative_presentation(ideal(M4Z4, 2), 0, 100)
    assert rep.status == PASS, rep.summary()


def test_relative_zero_module_generators_in_kernel():
    # X keeps its additive group, only the products vanish
    model = RelativeModel(zero_bimodule(M4Z4))
    r = (1, -1, 0, 0)
    a = model.RX.space(r).all[-1]
    p = model.RA.space((-1, 1, 0, 0)).all[-1]
    z = model.z_root(r, a, p)
    assert model.in_kernel_p1(z) and not modmat.is_identity(z)
    assert check_relative_presentation(zero_bimodule(M4Z4), 0, 60).status == PASS


def test_crossed_square_small_budget():
    rep = check_crossed_square(ideal(M4Z4, 2), 0, 60)
    assert rep.status == PASS
    assert sum(r.name.startswith("identity ") for r in rep.results) == 15


def _square_samples(seed, count=40):
    C = CrossedSquareModel(ideal(M4Z4, 2))
    rng = np.random.default_rng(seed)
    return C, [(C.rand_N(rng), C.rand_N(rng), C.rand_M(rng)) for _ in range(count)]


def test_crossed_square_expansion_without_twist_fails():
    """Negative control: the second factor of the expansion needs the ^a twist."""
    C, cases = _square_samples(5)
    mul, inv, act, pair, conj = C.mul, C.inv, C.act, C.pair, C.conj
    broken = 0
    for a, b, g in cases:
        U, V = pair(g, a), pair(g, b)
        ab = mul(a, b, inv(a), inv(b))
        assert C.eq(pair(g, ab), mul(U, act(a, V), act(conj(a, b), inv(U)), act(ab, inv(V))))
        broken += not C.eq(pair(g, ab), mul(U, V, act(conj(a, b), inv(U)), act(ab, inv(V))))
    assert broken > 0


def test_pairing_right_linearity_needs_twist():
    """Negative control: <g, ab> = <g, a> <g, b> without ^a is not an identity."""
    C, cases = _square_samples(5)
    broken = 0
    for a, b, g in cases:
        ab = C.mul(a, b)
        assert C.eq(C.pair(g, ab), C.mul(C.pair(g, a), C.act(a, C.pair(g, b))))
        broken += not C.eq(C.pair(g, ab), C.mul(C.pair(g, a), C.pair(g, b)))
    assert broken > 0
