"""Gluing relations for Steinberg groups over homotopes.

Level m of St(A^(oo, c)) is realized in Ker(p1) of G(A^(c^m) ⋊ A).  The map
can^{cf}_c comes from the algebra map (x, a) -> (x f, a), which on the
2n x 2n embedding multiplies the bottom-left block by f.
"""

from __future__ import annotations

import numpy as np

from .. import freegroup, modmat
from ..algebra import MatrixAlgebra, SemidirectAlgebra, homotope
from ..checks import CheckReport, Identity, run_identities
from ..coeffring import BaseRing, partition_of_unity, unity_power
from ..rootsys import root_system
from ..tower import HypothesisFailure
from .realization import linear_block


class HomotopeLevels:
    """Root elements and can maps over the homotopes A^(L) ⋊ A."""

    def __init__(self, A: MatrixAlgebra):
        self.A = A
        self.N = A.N
        self.n = A.n
        self.rs = root_system(f"A{A.rank}")
        self.roots = list(self.rs.roots)
        self._S = {}

    def S(self, label):
        label %= self.N
        if label not in self._S:
            self._S[label] = SemidirectAlgebra(homotope(self.A, label))
        return self._S[label]

    def t(self, label, root, x):
        """t_a(x^(label)) in Ker(p1), x a block element of A."""
        S = self.S(label)
        return (modmat.identity(2 * self.n) + S.embed(x, self.A.zero())) % self.N

    def word(self, label, letters):
        out = modmat.identity(2 * self.n)
        for r, x in letters:
            out = (out @ self.t(label, r, x)) % self.N
        return out

    def can(self, g, f):
        """can^{Lf}_L on Ker(p1): multiply the bottom-left block by f."""
        n, N = self.n, self.N
        out = g.copy()
        out[n:, :n] = (out[n:, :n] * f) % N
        return out

    def to_group(self, g):
        """can_1 followed by delta: the element of G(A) = p2."""
        n = self.n
        return g[n:, n:].copy()

    def d(self, a):
        n = self.n
        out = np.zeros((2 * n, 2 * n), dtype=np.int64)
        out[:n, :n] = a
        out[n:, n:] = a
        return out

    def random_letters(self, rng, length=3):
        out = []
        for _ in range(int(rng.integers(1, length + 1))):
            r = self.roots[int(rng.integers(0, len(self.roots)))]
            out.append((r, self.A.random_block(rng, *linear_block(r))))
        return out

    def in_ker_p1(self, g):
        return modmat.is_identity(g[: self.n, : self.n])


def check_gluing_relations(A: MatrixAlgebra, K: BaseRing, s, ks, depth=4, seed=0, budget=500):
    """The three gluing relations, the epimorphism witness and the commutator expansion."""
    N = A.N
    s = int(K(s)) % N
    ks = [int(K(k)) % N for k in ks]
    n = len(ks)
    H = HomotopeLevels(A)
    eq = modmat.equal
    inv = lambda g: modmat.inverse(g, N)  # noqa: E731
    report = CheckReport("gluing", {"s": s, "ks": ks, "depth": depth})

    for m in range(1, depth + 1):
        ts = partition_of_unity(K, s, ks, m)
        if ts is None:
            raise HypothesisFailure(f"s^{unity_power(m, n)} is not in the ideal of k_i^{m}")
        ts = [int(t) % N for t in ts]
        mp = unity_power(m, n)
        L = pow(s, m, N)
        Li = [pow(s * k, m, N) for k in ks]
        km = [pow(k, m, N) for k in ks]
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j] or [(0, 0)]

        def pick(rng):
            return pairs[int(rng.integers(0, len(pairs)))]

        def s_hom(rng):
            i = int(rng.integers(0, n))
            return (i, H.word(Li[i], H.random_letters(rng)), H.word(Li[i], H.random_letters(rng)))

        def hom(i, g, h):
            lhs = H.can((g @ h) % N, km[i])
            return eq(lhs, (H.can(g, km[i]) @ H.can(h, km[i])) % N) and H.in_ker_p1(lhs)

        def s_ident(rng):
            i, j = pick(rng)
            return (i, j, H.word(pow(s * ks[i] * ks[j], m, N), H.random_letters(rng)))

        def ident(i, j, g):
            return eq(H.can(H.can(g, km[j]), km[i]), H.can(H.can(g, km[i]), km[j]))

        def s_act(rng):
            i, j = pick(rng)
            return (i, j, H.word(Li[i], H.random_letters(rng)), H.word(Li[j], H.random_letters(rng)))

        def act(i, j, g, h):
            ci = H.can(g, km[i])
            lhs = (ci @ H.can(h, km[j]) @ inv(ci)) % N
            a = H.to_group(H.can(g, Li[i]))  # can^{s k_i}_1(g) in St(A), via delta
            da = H.d(a)
            inner = (da @ h @ inv(da)) % N
            return eq(lhs, H.can(inner, km[j]))

        def s_epi(rng):
            r = H.roots[int(rng.integers(0, len(H.roots)))]
            return (r, A.random_block(rng, *linear_block(r)))

        def epi(r, a):
            # x_a(a^(s^{m+m'})) taken down to level m, against the glued product
            target = H.t(L, r, (a * pow(s, mp, N)) % N)
            parts = [H.can(H.t(Li[i], r, (a * ts[i]) % N), km[i]) for i in range(n)]
            return eq(target, modmat.mul_all(parts, N))

        ids = [
            Identity("can(gh) = can(g) can(h)", hom, None, s_hom),
            Identity("can_i can^{s k_i k_j}_{s k_i} = can_j can^{s k_i k_j}_{s k_j}", ident, None, s_ident),
            Identity("^{can_i(g)} can_j(h) = can_j(^{can_1(g)} h)", act, None, s_act),
            Identity("epimorphism witness: x(a s^m') = prod can_i(x(a t_im))", epi, None, s_epi),
        ]
        sub = run_identities(f"gluing[level {m}]", ids, seed + m, budget)
        report.extend(sub, f"level {m}: ")
        report.notes[f"level {m} partition"] = ts

    bad = freegroup.check_commutator_expansion(3, 3)
    report.add("commutator expansion in the free group (n, m <= 3)", not bad, 9, "exact",
               None if not bad else {"failing": bad})
    return report
