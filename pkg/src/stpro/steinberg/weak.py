"""Gauss decomposition over local rings and the weak action identities.

Over a local ring every invertible matrix reduces to a diagonal one by
row operations with unit pivots: a non-unit diagonal entry becomes a unit
after adding a row with a unit entry in that column.  Row operations
between different blocks are root elements; operations inside one block
and the final diagonal factor lie in some D_alpha (the block-diagonal
subgroup after merging the two idempotents of alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import modmat
from ..algebra import MatrixAlgebra
from ..checks import CheckReport, Identity, run_identities
from ..coeffring import BaseRing, localize, partition_of_unity, unity_power
from ..rootsys import format_root
from ..tower import HypothesisFailure
from .gluing import HomotopeLevels
from .realization import linear_block


class CoveringNotFound(ValueError):
    pass


@dataclass
class Factor:
    kind: str  # "root" or "D"
    root: tuple
    matrix: np.ndarray

    def encode_witness(self):
        return {"kind": self.kind, "root": format_root(self.root), "matrix": self.matrix.tolist()}


def _root(labels, r, c, rank):
    """e_i - e_j for the blocks of rows r, c (merged blocks give a neighbour)."""
    bi, bj = labels[r], labels[c]
    if bi == bj:
        bj = bi + 1 if bi <= rank else bi - 1
    v = [0] * (rank + 1)
    v[bi - 1] += 1
    v[bj - 1] -= 1
    return tuple(v)


def gauss_decompose(g, alg: MatrixAlgebra, N=None):
    """Factors (root elements and D_alpha elements) whose product is g."""
    N = N or alg.N
    labels = alg.labels
    rank = alg.rank
    n = g.shape[0]
    if N == 1:
        return []
    # unit test in Z/N for a local ring N = p^e
    p = _local_prime(N)
    work = np.asarray(g, dtype=np.int64) % N
    ops = []

    def left(E):
        nonlocal work
        work = (E @ work) % N
        ops.append(E)

    def elementary(r, c, x):
        E = modmat.identity(n)
        E[r, c] = x % N
        return E

    for c in range(n):
        if work[c, c] % p == 0:
            rows = [r for r in range(c + 1, n) if work[r, c] % p]
            if not rows:
                raise modmat.NotInvertible("no unit pivot: not invertible over a local ring")
            left(elementary(c, rows[0], 1))
        inv = pow(int(work[c, c]), -1, N)
        for r in range(n):
            if r != c and work[r, c]:
                left(elementary(r, c, -int(work[r, c]) * inv))
    # work is diagonal now: g = E_1^-1 ... E_k^-1 work
    factors = []
    for E in ops:
        r, c = [int(v) for v in np.argwhere(E - modmat.identity(n))[0]]
        Einv = elementary(r, c, -int(E[r, c]))
        kind = "root" if labels[r] != labels[c] else "D"
        factors.append(Factor(kind, _root(labels, r, c, rank), Einv))
    if not modmat.is_identity(work):
        factors.append(Factor("D", _root(labels, 0, 0, rank), work))
    return factors


def _local_prime(N):
    from sympy import factorint
    f = factorint(N)
    if len(f) != 1:
        raise ValueError(f"Z/{N} is not local")
    return next(iter(f))


def remultiply(factors, n, N):
    return modmat.mul_all([f.matrix for f in factors], N, n)


def covering_factorizations(g, A: MatrixAlgebra, K: BaseRing, s, ks):
    """For each k_i, the localization of g at s k_i as a product of D_alpha and root factors."""
    out = []
    for k in ks:
        loc = localize(K, K(s) * K(k))
        Np = loc.target.modulus if loc.target.factors else 1
        if len(loc.target.factors) > 1:
            raise CoveringNotFound(f"localization at {int(K(s) * K(k))} is not local")
        gi = np.asarray(g) % Np
        try:
            fs = gauss_decompose(gi, A, Np)
        except (modmat.NotInvertible, ValueError) as exc:
            raise CoveringNotFound(str(exc)) from exc
        out.append((int(K(k)), Np, fs))
    return out


def check_weak_action_identities(A: MatrixAlgebra, K: BaseRing, s, ks, g, depth=3, seed=0, budget=300):
    """The three compatibility identities for the action of g on the glued pieces."""
    N = A.N
    n = len(ks)
    s_int = int(K(s)) % N
    ks = [int(K(k)) % N for k in ks]
    g = np.asarray(g, dtype=np.int64) % N
    gi = modmat.inverse(g, N)
    H = HomotopeLevels(A)
    eq = modmat.equal
    inv = lambda x: modmat.inverse(x, N)  # noqa: E731
    report = CheckReport("weak-action", {"s": s_int, "ks": ks, "depth": depth})

    cover = covering_factorizations(g, A, K, s_int, ks)
    for k, Np, fs in cover:
        ok = eq(remultiply(fs, A.n, Np), g % Np)
        report.add(f"covering piece k = {k}: g re-multiplies from {len(fs)} factors over Z/{Np}", ok, 1)
    dg, dgi = H.d(g), H.d(gi)

    def act(x):
        return (dg @ x @ dgi) % N

    def act_factors(x, fs, Np):
        for f in reversed(fs):
            d = H.d(f.matrix)
            x = (d @ x @ modmat.inverse(d, Np)) % Np
        return x

    for m in range(1, depth + 1):
        ts = partition_of_unity(K, s_int, ks, m)
        if ts is None:
            raise HypothesisFailure(f"s^{unity_power(m, n)} is not in the ideal of k_i^{m}")
        Li = [pow(s_int * k, m, N) for k in ks]
        km = [pow(k, m, N) for k in ks]
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j] or [(0, 0)]

        def word(label, rng):
            return H.word(label, H.random_letters(rng))

        def s1(rng):
            i = int(rng.integers(0, n))
            return (i, word(Li[i], rng), word(Li[i], rng))

        def first(i, h, h2):
            lhs = H.can(act((h @ h2) % N), km[i])
            return eq(lhs, (H.can(act(h), km[i]) @ H.can(act(h2), km[i])) % N)

        def s2(rng):
            i, j = pairs[int(rng.integers(0, len(pairs)))]
            return (i, j, word(pow(s_int * ks[i] * ks[j], m, N), rng))

        def second(i, j, h):
            lhs = H.can(act(H.can(h, km[j])), km[i])
            return eq(lhs, H.can(act(H.can(h, km[i])), km[j]))

        def s3(rng):
            i, j = pairs[int(rng.integers(0, len(pairs)))]
            return (i, j, word(Li[i], rng), word(Li[j], rng))

        def third(i, j, h, h2):
            a = H.can(act(h), km[i])
            lhs = (a @ H.can(act(h2), km[j]) @ inv(a)) % N
            st_h = H.to_group(H.can(h, Li[i]))  # can^{s k_i}_1(st(h))
            w = (g @ st_h) % N
            dw = H.d(w)
            return eq(lhs, H.can((dw @ h2 @ inv(dw)) % N, km[j]))

        def s4(rng):
            i = int(rng.integers(0, n))
            return (i, word(Li[i], rng))

        def factorwise(i, h):
            # in each covering piece the action is the ordered action of the factors
            x = act(h)
            return all(eq(x % Np, act_factors(h % Np, fs, Np)) for _, Np, fs in cover)

        ids = [
            Identity("can_i(^g(hh')) = can_i(^g h) can_i(^g h')", first, None, s1),
            Identity("can_i(^g can_{s k_i}(h)) = can_j(^g can_{s k_j}(h))", second, None, s2),
            Identity("^{can_i(^g h)} can_j(^g h') = can_j(^{g can_1(st h)} h')", third, None, s3),
            Identity("action agrees with the factor-wise action on each covering piece", factorwise, None, s4),
        ]
        report.extend(run_identities(f"weak-action[level {m}]", ids, seed + m, budget), f"level {m}: ")
    return report


def generator_type_elements(A: MatrixAlgebra, rng=None):
    """Test elements: a root element, a diagonal unit and a product of both."""
    N = A.N
    t = modmat.identity(A.n)
    i, j = linear_block((1, -1) + (0,) * (A.rank - 1))
    t = (t + A.unit(_first(A, i), _first(A, j), 1)) % N
    units = [u for u in range(N) if np.gcd(u, N) == 1]
    dgl = modmat.identity(A.n)
    dgl[0, 0] = units[-1]
    return {"root": t, "diagonal": dgl, "product": (t @ dgl) % N}


def _first(A, label):
    return A.labels.index(label)


def check_gauss_decomposition(A: MatrixAlgebra, seed=0, samples=1000):
    """Random invertible g over a local Z/p^e: the factors re-multiply to g and have the right shape."""
    N = A.N
    _local_prime(N)
    report = CheckReport("gauss", {"algebra": A.tag, "samples": samples})

    def sample(rng):
        return (A.random_unit(rng),)

    def remultiplies(g):
        fs = gauss_decompose(g, A)
        return eq(remultiply(fs, A.n, N), g), {"factors": len(fs)}

    def shapes(g):
        # root factors are elementary matrices between different blocks
        for f in gauss_decompose(g, A):
            if f.kind == "root":
                off = np.argwhere((f.matrix - modmat.identity(A.n)) % N)
                if len(off) != 1 or A.labels[off[0][0]] == A.labels[off[0][1]]:
                    return False
        return True

    eq = modmat.equal
    ids = [Identity("g = product of its Gauss factors", remultiplies, None, sample, stream="g"),
           Identity("root factors are elementary between distinct blocks", shapes, None, sample, stream="g")]
    report.extend(run_identities("gauss", ids, seed, samples))
    return report
