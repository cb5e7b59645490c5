"""Relative Steinberg generators z_a(a, p), z_Sigma(g, h) inside Ker(p1).

Everything lives in G(X ⋊ A), realized as invertible 2n x 2n matrices via
the embedding of :class:`~stpro.algebra.SemidirectAlgebra`.  Parameters
over X are elements of the kernel of p1, parameters over A are images of d.
"""

from __future__ import annotations

import itertools

import numpy as np

from .. import modmat
from ..algebra import CrossedModuleAlg, SemidirectAlgebra, SemidirectView
from ..checks import Identity, run_identities
from ..rootsys import all_thick_series, neg, parallel, rank_of, saturated_subsystem
from .realization import LinearRealization


class RelativeModel:
    """Realizations over X ⋊ A, X and A sharing one carrier."""

    def __init__(self, X: CrossedModuleAlg):
        self.X = X
        self.S = SemidirectAlgebra(X)
        self.full = LinearRealization(SemidirectView(self.S, "both"))
        self.RX = LinearRealization(SemidirectView(self.S, "X"))
        self.RA = LinearRealization(SemidirectView(self.S, "A"))
        self.rs = self.full.rs
        self.N = self.S.N
        self.n = self.S.n
        self.tag = f"{X.tag} over {X.ambient.tag}"

    # group helpers
    def mul(self, *gs):
        return self.full.mul(*gs)

    def inv(self, g):
        return modmat.inverse(g, self.N)

    def conj(self, g, x):
        return self.mul(g, x, self.inv(g))

    def comm(self, g, h):
        return self.mul(g, h, self.inv(g), self.inv(h))

    def d(self, u):
        """G(A) -> G(X ⋊ A) on n x n matrices."""
        return self.S.d(u)

    def p1(self, g):
        return self.S.p1(g)

    def p2(self, g):
        return self.S.p2(g)

    def delta_param(self, a):
        """delta: P_a(X) -> P_a(A), both as embedded 2n x 2n matrices."""
        x, _ = self.S.split(a)
        return self.S.embed(np.zeros_like(x), self.X.delta(x))

    def tX(self, r, a):
        return self.RX.t(r, a)

    def tA(self, r, p):
        return self.RA.t(r, p)

    def z_root(self, r, a, p):
        return self.conj(self.tA(neg(r), p), self.tX(r, a))

    def z_series(self, g, h):
        return self.conj(h, g)

    def in_kernel_p1(self, g):
        return modmat.is_identity(self.p1(g) % self.N)


def two_dim_series(rs, a):
    return [s for s in all_thick_series(rs, a) if rank_of(list(s)) == 2]


def one_dim_series(rs, a):
    return [s for s in all_thick_series(rs, a) if rank_of(list(s)) == 1]


def _random_word(R, roots, rng, length=None):
    roots = sorted(roots)
    k = int(rng.integers(1, 4)) if length is None else length
    out = []
    for _ in range(k):
        r = roots[int(rng.integers(0, len(roots)))]
        out.append((r, R.space(r).sample(rng)))
    return out


def check_relative_presentation(X: CrossedModuleAlg, seed=0, budget=1000, exhaustive_cap=20_000):
    """The seven relation families of the z-presentation, as identities in Ker(p1)."""
    M = RelativeModel(X)
    rs, RX, RA = M.rs, M.RX, M.RA
    eq = modmat.equal
    reduced = [r for r in rs.roots if not rs.is_doubled(r)]
    series2 = [(a, s) for a in reduced for s in two_dim_series(rs, a)]
    series1 = [(a, s) for a in reduced for s in one_dim_series(rs, a)]
    # bases (a, b) of two-dimensional indecomposable saturated subsystems
    bases = []
    for a, b in itertools.permutations(rs.roots, 2):
        if parallel(a, b) or rs.is_doubled(a) or rs.is_doubled(b):
            continue
        c = tuple(x + y for x, y in zip(a, b))
        if c in rs.root_set and tuple(x - y for x, y in zip(a, b)) not in rs.root_set:
            sub = saturated_subsystem(rs, [a, b])
            middle = [r for r in sub if r not in (a, b) and _pos_comb(r, a, b)]
            bases.append((a, b, middle))

    def pick(rng, seq):
        return seq[int(rng.integers(0, len(seq)))]

    def s_additive(rng):
        r = pick(rng, reduced)
        return (r, RX.space(r).sample(rng), RX.space(r).sample(rng), RA.space(neg(r)).sample(rng))

    def additive(r, a, b, p):
        return eq(M.z_root(r, RX.space(r).add(a, b), p), M.mul(M.z_root(r, a, p), M.z_root(r, b, p)))

    def s_mult(rng):
        _, s = pick(rng, series2)
        g1, g2 = _random_word(RX, s, rng), _random_word(RX, s, rng)
        h = _random_word(RA, [neg(r) for r in s], rng)
        return (RX.word(g1), RX.word(g2), RA.word(h))

    def multiplicative(g, g2, h):
        return eq(M.z_series(M.mul(g, g2), h), M.mul(M.z_series(g, h), M.z_series(g2, h)))

    def compat_cases():
        for _, s in series2:
            for r in sorted(s):
                if rs.is_doubled(r):
                    continue
                for a in RX.space(r).all:
                    for p in RA.space(neg(r)).all:
                        yield (r, a, p)

    def s_compat(rng):
        _, s = pick(rng, series2)
        r = pick(rng, sorted(x for x in s if not rs.is_doubled(x)))
        return (r, RX.space(r).sample(rng), RA.space(neg(r)).sample(rng))

    def compat(r, a, p):
        return eq(M.z_series(M.tX(r, a), M.tA(neg(r), p)), M.z_root(r, a, p)) and M.in_kernel_p1(M.z_root(r, a, p))

    def s_commute(rng):
        a, s = pick(rng, series1)
        b = min(s)
        return (a, b, RX.space(a).sample(rng), RA.space(neg(a)).sample(rng),
                RX.space(b).sample(rng), RA.space(neg(b)).sample(rng))

    def commute(a, b, x, p, y, q):
        return modmat.is_identity(M.comm(M.z_root(a, x, p), M.z_root(b, y, q)))

    def s_conj(rng):
        a, s = pick(rng, series2)
        g = RX.word(_random_word(RX, s, rng))
        h = RA.word(_random_word(RA, [neg(r) for r in s], rng))
        return (a, RX.space(a).sample(rng), RA.space(neg(a)).sample(rng), g, h)

    def conj_rule(a, x, p, g, h):
        w = M.mul(M.tA(neg(a), p), M.tA(a, M.delta_param(x)), M.RA.t_inv(neg(a), p))
        lhs = M.conj(M.z_root(a, x, p), M.z_series(g, h))
        rhs = M.z_series(M.conj(w, g), M.conj(w, h))
        return eq(lhs, rhs) and M.in_kernel_p1(lhs)

    def s_two_series(rng):
        a, b, middle = pick(rng, bases)
        g = RX.word(_random_word(RX, middle, rng))
        h = RA.word(_random_word(RA, middle, rng))
        return (a, b, g, h, RA.space(a).sample(rng), RA.space(b).sample(rng))

    def two_series(a, b, g, h, p, q):
        ta, tb = M.tA(a, p), M.tA(b, q)
        lhs = M.z_series(M.conj(ta, g), M.conj(ta, M.mul(h, tb)))
        rhs = M.z_series(M.conj(tb, g), M.mul(ta, h))
        return eq(lhs, rhs)

    def s_shift(rng):
        a = pick(rng, reduced)
        return (a, RX.space(a).sample(rng), RA.space(neg(a)).sample(rng), RX.space(neg(a)).sample(rng))

    def shift(a, x, p, y):
        p2 = (p + M.delta_param(y)) % M.N
        lhs = M.z_root(a, x, p2)
        rhs = M.conj(M.z_root(neg(a), y, RA.space(a).zero()), M.z_root(a, x, p))
        return eq(lhs, rhs)

    n_compat = sum(RX.space(r).size * RA.space(neg(r)).size for _, s in series2 for r in s)
    ids = [
        Identity("z_a(a + b, p) = z_a(a, p) z_a(b, p)", additive, None, s_additive),
        Identity("z_S(gg', h) = z_S(g, h) z_S(g', h)", multiplicative, None, s_mult),
        Identity("z_S(x_a(a), x_-a(p)) = z_a(a, p)", compat, compat_cases if n_compat <= exhaustive_cap else None,
                 s_compat),
        Identity("[z_a(a, p), z_b(b, q)] = 1 on one-dimensional series", commute, None, s_commute),
        Identity("conjugation by z_a(a, p)", conj_rule, None, s_conj),
        Identity("two-series exchange", two_series, None, s_two_series),
        Identity("z_a(a, p + delta(b)) = ^{z_-a(b, 0)} z_a(a, p)", shift, None, s_shift),
    ]
    if not bases:
        ids = [i for i in ids if i.name != "two-series exchange"]
    return run_identities(f"relative[{M.tag}]", ids, seed, budget)


def _pos_comb(r, a, b):
    """r = x a + y b with x, y > 0."""
    from ..rootsys import _coeff_on
    y = _coeff_on(r, a, b)
    x = _coeff_on(r, b, a)
    return x > 0 and y > 0
