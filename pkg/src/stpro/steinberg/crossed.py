"""The crossed square L -> M, N -> P and the crossed pairing <g, a>.

Linear model over a crossed module delta: X -> A, all inside GL_2n(K):

    P = G(A) = A*, acting on everything by conjugation with d(u)
    N = E(A), the image of St(A), generated by root elements over A
    M = G(X) = Ker(p1), with mu = p2
    L = the subgroup of Ker(p1) generated by the z_a(a, p), with
        mu-hat the inclusion into M and nu-hat = p2
    h(m, n) = <m, n> = m d(n) m^-1 d(n)^-1

Elements carry their inverses so that conjugations and commutators cost
only products.
"""

from __future__ import annotations

import numpy as np

from .. import modmat
from ..algebra import CrossedModuleAlg
from ..checks import Identity, run_identities
from ..rootsys import neg
from .relative import RelativeModel


class El:
    """A group element together with its inverse."""

    __slots__ = ("m", "i")

    def __init__(self, m, i):
        self.m = m
        self.i = i

    def encode_witness(self):
        return self.m.tolist()


class CrossedSquareModel:
    def __init__(self, X: CrossedModuleAlg):
        self.rel = RelativeModel(X)
        self.X = X
        self.A = X.ambient
        self.N = X.N
        self.n = self.A.n
        self.rs = self.rel.rs
        self.roots = list(self.rs.roots)
        self.one2 = El(modmat.identity(2 * self.n), modmat.identity(2 * self.n))
        self.one1 = El(modmat.identity(self.n), modmat.identity(self.n))

    # arithmetic on El
    def mul(self, *es):
        N = self.N
        m = es[0].m
        for e in es[1:]:
            m = (m @ e.m) % N
        i = es[-1].i
        for e in reversed(es[:-1]):
            i = (i @ e.i) % N
        return El(m, i)

    def inv(self, e):
        return El(e.i, e.m)

    def conj(self, g, x):
        return self.mul(g, x, self.inv(g))

    def comm(self, g, h):
        return self.mul(g, h, self.inv(g), self.inv(h))

    def d(self, u):
        S = self.rel.S
        return El(S.d(u.m), S.d(u.i))

    def act(self, u, x):
        """^u x for u in P (or N) on an element of L or M."""
        return self.conj(self.d(u), x)

    def p2(self, e):
        S = self.rel.S
        return El(S.p2(e.m), S.p2(e.i))

    def pair(self, g, a):
        """<g, a> = g d(a) g^-1 d(a)^-1."""
        return self.comm(g, self.d(a))

    def eq(self, e, f):
        return modmat.equal(e.m, f.m)

    def trivial(self, e):
        return modmat.is_identity(e.m)

    def in_ker_p1(self, e):
        return modmat.is_identity(self.rel.p1(e.m))

    # samplers
    def rand_P(self, rng):
        u = self.A.random_unit(rng)
        return El(u, modmat.inverse(u, self.N))

    def rand_N(self, rng, length=3):
        N, n = self.N, self.n
        m, i = modmat.identity(n), modmat.identity(n)
        for _ in range(int(rng.integers(1, length + 1))):
            r = self.roots[int(rng.integers(0, len(self.roots)))]
            i2, j2 = _block(r)
            p = self.A.random_block(rng, i2, j2)
            m = (m @ (np.eye(n, dtype=np.int64) + p)) % N
            i = ((np.eye(n, dtype=np.int64) - p) @ i) % N
        return El(m, i)

    def rand_M(self, rng):
        """[[1, 0], [x, 1 + delta(x)]] for a random x in X, invertible by retry."""
        S, A = self.rel.S, self.A
        for _ in range(1000):
            x = self.X.random_carrier(rng)
            g = S.embed(x, A.one())
            try:
                return El(g, modmat.inverse(g, self.N))
            except modmat.NotInvertible:
                continue
        raise RuntimeError("no invertible element of G(X) found")

    def z(self, r, a, p):
        rel = self.rel
        t = El(rel.tA(neg(r), p), rel.RA.t_inv(neg(r), p))
        x = El(rel.tX(r, a), rel.RX.t_inv(r, a))
        return self.conj(t, x)

    def rand_L(self, rng, length=2):
        rel = self.rel
        out = self.one2
        for _ in range(int(rng.integers(1, length + 1))):
            r = self.roots[int(rng.integers(0, len(self.roots)))]
            a = rel.RX.space(r).sample(rng)
            p = rel.RA.space(neg(r)).sample(rng)
            out = self.mul(out, self.z(r, a, p))
        # L is normal under P
        return self.act(self.rand_P(rng), out)


def _block(root):
    from .realization import linear_block
    i, j = linear_block(root)
    return i, j


def check_crossed_square(X: CrossedModuleAlg, seed=0, budget=1000):
    """Crossed square axioms, the 15 pairing identities and the commutator expansion."""
    C = CrossedSquareModel(X)
    mul, inv, eq, act, pair, conj = C.mul, C.inv, C.eq, C.act, C.pair, C.conj
    p2 = C.p2

    def sample(rng):
        return (C.rand_P(rng), C.rand_N(rng), C.rand_N(rng), C.rand_M(rng), C.rand_M(rng),
                C.rand_L(rng), C.rand_L(rng))

    def I(name, pred):
        return Identity(name, pred, None, sample, stream="square")

    ids = []

    # (1) L, M, N are crossed modules over P
    def peiffer_L(u, a, b, g, h, x, y):
        return eq(conj(x, y), act(p2(x), y))

    def peiffer_M(u, a, b, g, h, x, y):
        return eq(conj(g, h), act(p2(g), h))

    def equivariant_mu(u, a, b, g, h, x, y):
        return eq(p2(act(u, g)), conj(u, p2(g))) and eq(p2(act(u, x)), conj(u, p2(x)))

    def n_over_p(u, a, b, g, h, x, y):
        return C.trivial(mul(conj(a, b), a, inv(b), inv(a)))

    ids += [
        I("crossed modules: ^{mu(l)} l' = l l' l^-1 on L", peiffer_L),
        I("crossed modules: ^{mu(m)} m' = m m' m^-1 on M", peiffer_M),
        I("crossed modules: mu(^u m) = ^u mu(m)", equivariant_mu),
        I("crossed modules: N -> P normal inclusion", n_over_p),
    ]

    # (2) equivariance of mu-hat, nu-hat and h
    def equi_maps(u, a, b, g, h, x, y):
        return eq(p2(act(u, x)), conj(u, p2(x))) and C.in_ker_p1(act(u, x))

    def equi_h(u, a, b, g, h, x, y):
        return eq(pair(act(u, g), conj(u, a)), act(u, pair(g, a)))

    ids += [
        I("equivariance: mu-hat, nu-hat", equi_maps),
        I("equivariance: h(^u m, ^u n) = ^u h(m, n)", equi_h),
    ]

    # (3) bilinearity
    def h_left(u, a, b, g, h, x, y):
        return eq(pair(mul(g, h), a), mul(act(p2(g), pair(h, a)), pair(g, a)))

    def h_right(u, a, b, g, h, x, y):
        return eq(pair(g, mul(a, b)), mul(pair(g, a), act(a, pair(g, b))))

    ids += [
        I("h(mm', n) = ^{mu(m)} h(m', n) h(m, n)", h_left),
        I("h(m, nn') = h(m, n) ^{nu(n)} h(m, n')", h_right),
    ]

    # (4) boundaries of h
    def mu_hat_h(u, a, b, g, h, x, y):
        return eq(pair(g, a), mul(g, act(a, inv(g)))) and C.in_ker_p1(pair(g, a))

    def nu_hat_h(u, a, b, g, h, x, y):
        return eq(p2(pair(g, a)), mul(conj(p2(g), a), inv(a)))

    ids += [
        I("mu-hat(h(m, n)) = m ^{nu(n)} m^-1", mu_hat_h),
        I("nu-hat(h(m, n)) = ^{mu(m)} n n^-1", nu_hat_h),
    ]

    # (5) h against L
    def h_nu_hat(u, a, b, g, h, x, y):
        return eq(pair(g, p2(x)), mul(act(p2(g), x), inv(x)))

    def h_mu_hat(u, a, b, g, h, x, y):
        return eq(pair(x, a), mul(x, act(a, inv(x))))

    ids += [
        I("h(m, nu-hat(l)) = ^{mu(m)} l l^-1", h_nu_hat),
        I("h(mu-hat(l), n) = l ^{nu(n)} l^-1", h_mu_hat),
    ]

    # degeneracies
    def degenerate(u, a, b, g, h, x, y):
        ok = C.trivial(pair(g, C.one1)) and C.trivial(pair(C.one2, a))
        ok &= eq(pair(inv(g), a), act(inv(p2(g)), inv(pair(g, a))))
        ok &= eq(pair(g, inv(a)), act(inv(a), inv(pair(g, a))))
        return ok

    ids.append(I("degeneracies: h(m, 1) = h(1, n) = 1 and inverses", degenerate))

    # the fifteen identities; st is the inclusion, delta is p2
    fifteen = [
        ("^u(^a x) = ^{^u a}(^u x)", lambda u, a, b, g, h, x, y: eq(act(u, act(a, x)), act(conj(u, a), act(u, x)))),
        ("delta(^g x) = ^{delta g} delta x", lambda u, a, b, g, h, x, y: eq(p2(conj(g, x)), conj(p2(g), p2(x)))),
        ("st(^g x) = ^g st x", lambda u, a, b, g, h, x, y: eq(conj(g, x), act(p2(g), x))),
        ("^u(^g x) = ^{^u g}(^u x)", lambda u, a, b, g, h, x, y: eq(act(u, conj(g, x)), conj(act(u, g), act(u, x)))),
        ("delta(^u x) = ^u delta x", lambda u, a, b, g, h, x, y: eq(p2(act(u, x)), conj(u, p2(x)))),
        ("st(^u x) = ^u st x", lambda u, a, b, g, h, x, y: C.in_ker_p1(act(u, x))),
        ("<g, ab> = <g, a> ^a<g, b>", h_right),
        ("delta<g, a> = ^{delta g} a a^-1", nu_hat_h),
        ("st<g, a> = g ^{st a} g^-1", mu_hat_h),
        ("<gh, a> = ^g<h, a> <g, a>", lambda u, a, b, g, h, x, y: eq(pair(mul(g, h), a), mul(conj(g, pair(h, a)), pair(g, a)))),
        ("<st x, a> = x ^a x^-1", h_mu_hat),
        ("^x y = ^{st x} y", lambda u, a, b, g, h, x, y: eq(conj(x, y), act(p2(x), y))),
        ("^u<g, a> = <^u g, ^u a>", equi_h),
        ("<g, a> ^a(^g x) = ^g(^a x) <g, a>",
         lambda u, a, b, g, h, x, y: eq(mul(pair(g, a), act(a, conj(g, x))), mul(conj(g, act(a, x)), pair(g, a)))),
        ("^a x = ^{st a} x", lambda u, a, b, g, h, x, y: eq(act(a, x), conj(C.d(a), x)) and C.in_ker_p1(act(a, x))),
    ]
    ids += [I(f"identity {k}: {name}", pred) for k, (name, pred) in enumerate(fifteen, 1)]

    def expansion(u, a, b, g, h, x, y):
        U, V = pair(g, a), pair(g, b)
        ab = mul(a, b, inv(a), inv(b))
        rhs = mul(U, act(a, V), act(conj(a, b), inv(U)), act(ab, inv(V)))
        return eq(pair(g, ab), rhs)

    ids.append(I("<g, [a, b]> = u ^a v ^{aba^-1} u^-1 ^{[a, b]} v^-1", expansion))

    def peiffer_exact(u, a, b, g, h, x, y):
        return eq(conj(g, h), act(p2(g), h)) and eq(conj(x, g), act(p2(x), g))

    ids.append(I("Peiffer: ^x y = ^{delta x} y in Ker(p1)", peiffer_exact))
    return run_identities(f"crossed-square[{C.rel.tag}]", ids, seed, budget)
