"""Generalized matrix algebras, algebra crossed modules, homotopes.

Algebra elements are dense integer matrices modulo N.  A crossed module
``delta: X -> A`` has its carrier inside the same matrix space, with the
A-actions given by matrix multiplication; the carrier product and
``delta`` depend on the kind of crossed module.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import modmat
from .checks import Identity, run_identities
from .coeffring import BaseRing


class AlgebraError(ValueError):
    pass


class InvalidCrossedModule(AlgebraError):
    pass


class LabelMismatch(AlgebraError):
    pass


@dataclass(frozen=True)
class MatrixAlgebra:
    """Full matrix algebra M_n(K) with a complete family of block idempotents.

    ``labels[p]`` is the block (1..l+1) that row/column ``p`` belongs to.
    """

    base: BaseRing
    labels: tuple

    @classmethod
    def full(cls, base: BaseRing, n: int) -> "MatrixAlgebra":
        return cls(base, tuple(range(1, n + 1)))

    @classmethod
    def from_block_sizes(cls, base, sizes) -> "MatrixAlgebra":
        labels = []
        for i, s in enumerate(sizes, start=1):
            if s < 1:
                raise AlgebraError("blocks must be nonempty")
            labels += [i] * s
        return cls(base, tuple(labels))

    @classmethod
    def parse(cls, spec: str) -> "MatrixAlgebra":
        """'m4:z4' (1x1 blocks) or 'm4:z12:2,1,1' (explicit block sizes)."""
        m = re.fullmatch(r"m(\d+):([a-z0-9]+)(?::([\d,]+))?", spec.strip().lower())
        if not m:
            raise AlgebraError(f"cannot parse algebra {spec!r}")
        n = int(m.group(1))
        base = BaseRing.parse(m.group(2))
        if m.group(3):
            sizes = [int(x) for x in m.group(3).split(",")]
            if sum(sizes) != n:
                raise AlgebraError(f"block sizes {sizes} do not add up to {n}")
            return cls.from_block_sizes(base, sizes)
        return cls.full(base, n)

    @property
    def N(self):
        return self.base.modulus

    @property
    def n(self):
        return len(self.labels)

    @property
    def blocks(self):
        return tuple(sorted(set(self.labels)))

    @property
    def rank(self):
        return len(self.blocks) - 1

    @property
    def tag(self):
        return f"m{self.n}:{self.base.tag}"

    def zero(self):
        return np.zeros((self.n, self.n), dtype=np.int64)

    def one(self):
        return modmat.identity(self.n)

    def idempotent(self, i):
        return np.diag([1 if lab == i else 0 for lab in self.labels]).astype(np.int64)

    def mask(self, i, j):
        r = np.array([lab == i for lab in self.labels])
        c = np.array([lab == j for lab in self.labels])
        return np.outer(r, c)

    def positions(self, i, j):
        return [(p, q) for p in range(self.n) for q in range(self.n) if self.labels[p] == i and self.labels[q] == j]

    def unit(self, p, q, c=1):
        m = self.zero()
        m[p, q] = c % self.N
        return m

    def block_basis(self, i, j):
        return [self.unit(p, q) for p, q in self.positions(i, j)]

    def block_elements(self, i, j):
        pos = self.positions(i, j)
        for vals in itertools.product(range(self.N), repeat=len(pos)):
            m = self.zero()
            for (p, q), v in zip(pos, vals):
                m[p, q] = v
            yield m

    def random(self, rng):
        return rng.integers(0, self.N, size=(self.n, self.n), dtype=np.int64)

    def random_block(self, rng, i, j):
        return self.random(rng) * self.mask(i, j)

    def random_unit(self, rng, tries=1000):
        for _ in range(tries):
            g = self.random(rng)
            if modmat.is_invertible(g, self.N):
                return g
        raise AlgebraError("no invertible sample found")

    def mul(self, a, b):
        return (a @ b) % self.N

    def completeness_witness(self, i):
        """Pairs (u_r, v_r) with sum u_r e_i v_r = 1, showing A = A e_i A."""
        q = self.labels.index(i)
        return [(self.unit(p, q), self.unit(q, p)) for p in range(self.n)]

    def check_idempotents(self):
        es = {i: self.idempotent(i) for i in self.blocks}
        total = sum(es.values()) % self.N
        ok = modmat.equal(total, self.one())
        for i, j in itertools.product(self.blocks, repeat=2):
            prod = self.mul(es[i], es[j])
            ok &= modmat.equal(prod, es[i] if i == j else self.zero())
        for i in self.blocks:
            acc = self.zero()
            for u, v in self.completeness_witness(i):
                acc = (acc + u @ es[i] @ v) % self.N
            ok &= modmat.equal(acc, self.one())
        return ok


@dataclass(frozen=True)
class CrossedModuleAlg:
    """delta: X -> A for the carrier kinds used in the package.

    kind = "ideal"     X = cA, product from A, delta the inclusion
           "homotope"  X = A^(s), x*y = xys, delta(x) = xs
           "zero"      X = A as a bimodule with zero product, delta = 0
           "twisted"   X = A, delta(x) = g x for a fixed g (deliberately
                       not a crossed module unless g is central)
    """

    ambient: MatrixAlgebra
    kind: str
    param: int = 1
    twist: tuple | None = field(default=None, compare=False)

    @property
    def N(self):
        return self.ambient.N

    @property
    def tag(self):
        return f"{self.kind}({self.param})"

    def contains(self, x):
        if self.kind == "ideal":
            return self._in_ideal(x)
        return True

    def _in_ideal(self, x):
        return bool(np.all(np.isin(x % self.N, self._ideal_residues)))

    @cached_property
    def _ideal_residues(self):
        return np.unique([(self.param * v) % self.N for v in range(self.N)])

    def mul(self, x, y):
        N = self.N
        if self.kind == "ideal":
            return (x @ y) % N
        if self.kind == "homotope":
            return (x @ y * self.param) % N
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "twisted":
            return (x @ y) % N
        raise AlgebraError(self.kind)

    def delta(self, x):
        N = self.N
        if self.kind == "ideal":
            return x % N
        if self.kind == "homotope":
            return (x * self.param) % N
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "twisted":
            return (np.array(self.twist, dtype=np.int64) @ x) % N
        raise AlgebraError(self.kind)

    def lact(self, a, x):
        return (a @ x) % self.N

    def ract(self, x, a):
        return (x @ a) % self.N

    def carrier_block_basis(self, i, j):
        c = self.param if self.kind == "ideal" else 1
        return [(b * c) % self.N for b in self.ambient.block_basis(i, j)]

    def carrier_basis(self):
        A = self.ambient
        c = self.param if self.kind == "ideal" else 1
        return [(A.unit(p, q) * c) % self.N for p in range(A.n) for q in range(A.n)]

    def carrier_size(self):
        A = self.ambient
        if self.kind == "ideal":
            return len(self._ideal_residues) ** (A.n * A.n)
        return A.N ** (A.n * A.n)

    def carrier_elements(self):
        A = self.ambient
        vals = self._ideal_residues if self.kind == "ideal" else range(A.N)
        for entries in itertools.product(vals, repeat=A.n * A.n):
            yield np.array(entries, dtype=np.int64).reshape(A.n, A.n)

    def random_carrier(self, rng):
        x = self.ambient.random(rng)
        if self.kind == "ideal":
            x = (x * self.param) % self.N
        return x

    def random_carrier_block(self, rng, i, j):
        return self.random_carrier(rng) * self.ambient.mask(i, j)


def ideal(A: MatrixAlgebra, c: int) -> CrossedModuleAlg:
    return CrossedModuleAlg(A, "ideal", c % A.N)


def homotope(A: MatrixAlgebra, s: int) -> CrossedModuleAlg:
    """The s-homotope A^(s) as a crossed module over A."""
    return CrossedModuleAlg(A, "homotope", s % A.N)


def zero_bimodule(A: MatrixAlgebra) -> CrossedModuleAlg:
    return CrossedModuleAlg(A, "zero", 0)


def twisted(A: MatrixAlgebra, g) -> CrossedModuleAlg:
    return CrossedModuleAlg(A, "twisted", 1, tuple(map(tuple, np.asarray(g) % A.N)))


@dataclass(frozen=True)
class HomotopeElement:
    """a^(s): the element a of A viewed in the homotope with label s."""

    label: int
    payload: tuple

    @classmethod
    def of(cls, a, s, N):
        return cls(s % N, tuple(map(tuple, np.asarray(a) % N)))

    def matrix(self):
        return np.array(self.payload, dtype=np.int64)


def homotope_transition(factor: int, x: HomotopeElement, target_label: int, N: int) -> HomotopeElement:
    """a^(s') -> (a s'')^(s) along s'': s -> s' (requires s' = s s'')."""
    if (target_label * factor - x.label) % N:
        raise LabelMismatch(f"{x.label} != {target_label} * {factor} mod {N}")
    return HomotopeElement.of(x.matrix() * factor, target_label, N)


def check_crossed_module(X: CrossedModuleAlg, seed=0, budget=2000, exhaustive_cap=20_000):
    A = X.ambient
    N = X.N
    eq = modmat.equal

    def triples():
        return itertools.product(list(X.carrier_elements()), list(X.carrier_elements()), list(_ambient_elements(A)))

    size = X.carrier_size() ** 2 * A.N ** (A.n * A.n)
    exhaustive = triples if size <= exhaustive_cap else None

    def sampler(rng):
        return X.random_carrier(rng), X.random_carrier(rng), A.random(rng)

    d, m = X.delta, X.mul
    ids = [
        ("delta additive", lambda x, y, a: eq(d((x + y) % N), (d(x) + d(y)) % N)),
        ("delta(ax) = a delta(x)", lambda x, y, a: eq(d(X.lact(a, x)), (a @ d(x)) % N)),
        ("delta(xa) = delta(x) a", lambda x, y, a: eq(d(X.ract(x, a)), (d(x) @ a) % N)),
        ("xy = delta(x) y", lambda x, y, a: eq(m(x, y), X.lact(d(x), y))),
        ("xy = x delta(y)", lambda x, y, a: eq(m(x, y), X.ract(x, d(y)))),
        ("(ax)y = a(xy)", lambda x, y, a: eq(m(X.lact(a, x), y), X.lact(a, m(x, y)))),
        ("(xa)y = x(ay)", lambda x, y, a: eq(m(X.ract(x, a), y), m(x, X.lact(a, y)))),
        ("(xy)a = x(ya)", lambda x, y, a: eq(X.ract(m(x, y), a), m(x, X.ract(y, a)))),
        ("carrier closed", lambda x, y, a: X.contains(m(x, y)) and X.contains(X.lact(a, x)) and X.contains(X.ract(x, a))),
    ]
    identities = [Identity(name, pred, exhaustive, sampler) for name, pred in ids]
    return run_identities(f"crossed-module[{X.tag} over {A.tag}]", identities, seed, budget)


def _ambient_elements(A):
    for entries in itertools.product(range(A.N), repeat=A.n * A.n):
        yield np.array(entries, dtype=np.int64).reshape(A.n, A.n)


class SemidirectAlgebra:
    """X ⋊ A embedded in M_2n(K) as [[a, 0], [x, a + delta(x)]].

    The embedding is an algebra homomorphism because xy = delta(x) y and
    the actions are matrix products, so the product of X ⋊ A is computed
    by matrix multiplication.  p1 reads the top-left block, p2 the
    bottom-right one, and d(a) = diag(a, a).
    """

    def __init__(self, X: CrossedModuleAlg):
        self.X = X
        self.A = X.ambient
        self.N = X.N
        self.n = 2 * self.A.n
        self.labels = self.A.labels + self.A.labels

    def embed(self, x, a):
        n = self.A.n
        out = np.zeros((self.n, self.n), dtype=np.int64)
        out[:n, :n] = a
        out[n:, :n] = x
        out[n:, n:] = (a + self.X.delta(x)) % self.N
        return out % self.N

    def split(self, M):
        n = self.A.n
        return M[n:, :n].copy(), M[:n, :n].copy()

    def p1(self, M):
        return M[: self.A.n, : self.A.n].copy()

    def p2(self, M):
        n = self.A.n
        return M[n:, n:].copy()

    def d(self, a):
        return self.embed(np.zeros_like(a), a)

    def one(self):
        return modmat.identity(self.n)

    def formula_mul(self, u, v):
        """(x, a)(y, b) = (xy + xb + ay, ab) computed from the definitions."""
        (x, a), (y, b) = u, v
        X, N = self.X, self.N
        return (X.mul(x, y) + X.ract(x, b) + X.lact(a, y)) % N, (a @ b) % N

    def is_member(self, M):
        x, a = self.split(M)
        n = self.A.n
        return bool(np.all(M[:n, n:] == 0)) and self.X.contains(x) and modmat.equal(M, self.embed(x, a))


def semidirect(X: CrossedModuleAlg, check=True, seed=0) -> SemidirectAlgebra:
    if check:
        rep = check_crossed_module(X, seed=seed, budget=200)
        if not rep.ok:
            raise InvalidCrossedModule(rep.summary())
    return SemidirectAlgebra(X)


def check_semidirect(S: SemidirectAlgebra, seed=0, budget=1000):
    X, A, N = S.X, S.A, S.N
    eq = modmat.equal

    def gens():
        xs = X.carrier_basis()
        As = [A.unit(p, q) for p in range(A.n) for q in range(A.n)]
        elems = [(x, A.zero()) for x in xs] + [(np.zeros_like(a), a) for a in As]
        return itertools.product(elems, elems, elems)

    def sampler(rng):
        return tuple((X.random_carrier(rng), A.random(rng)) for _ in range(3))

    def emb(u):
        return S.embed(*u)

    def hom(u, v, w):
        prod = S.formula_mul(u, v)
        return eq(emb(prod), (emb(u) @ emb(v)) % N)

    def assoc(u, v, w):
        l = S.formula_mul(S.formula_mul(u, v), w)
        r = S.formula_mul(u, S.formula_mul(v, w))
        return eq(l[0], r[0]) and eq(l[1], r[1])

    def projections(u, v, w):
        m = emb(u)
        x, a = u
        ok = eq(S.p1(m), a % N) and eq(S.p2(m), (X.delta(x) + a) % N)
        ok &= eq((S.p2(m) - S.p1(m)) % N, X.delta(x))
        da = S.d(a)
        ok &= eq(S.p1(da), a % N) and eq(S.p2(da), a % N)
        return ok

    def p_hom(u, v, w):
        mu, mv = emb(u), emb(v)
        prod = (mu @ mv) % N
        return eq(S.p1(prod), (S.p1(mu) @ S.p1(mv)) % N) and eq(S.p2(prod), (S.p2(mu) @ S.p2(mv)) % N)

    ids = [
        Identity("embedding is multiplicative", hom, gens, sampler),
        Identity("associativity", assoc, gens, sampler),
        Identity("p1 d = p2 d = id, p2 - p1 = delta", projections, gens, sampler),
        Identity("p1, p2 multiplicative", p_hom, gens, sampler),
    ]
    return run_identities(f"semidirect[{X.tag} over {A.tag}]", ids, seed, budget)


class SemidirectView:
    """Block access to X ⋊ A for the linear realization.

    ``part`` selects which parameters are allowed: "both" (all of
    e_i(X ⋊ A)e_j), "X" (the kernel of p1) or "A" (the image of d).
    """

    def __init__(self, S: SemidirectAlgebra, part="both"):
        if part not in ("both", "X", "A"):
            raise AlgebraError(f"unknown part {part!r}")
        self.S = S
        self.part = part
        self.N = S.N
        self.n = S.n
        self.labels = S.labels
        self.rank = S.A.rank

    @property
    def tag(self):
        return f"{self.S.X.tag}⋊{self.S.A.tag}[{self.part}]"

    def mask(self, i, j):
        r = np.array([lab == i for lab in self.labels])
        c = np.array([lab == j for lab in self.labels])
        return np.outer(r, c)

    def _xs(self, i, j):
        A, X = self.S.A, self.S.X
        if self.part == "A":
            return [A.zero()]
        basis = X.carrier_block_basis(i, j)
        out = []
        for entries in itertools.product(range(self.N), repeat=len(basis)):
            out.append(sum((b * e for b, e in zip(basis, entries)), A.zero()) % self.N)
        return _dedupe(out)

    def _as(self, i, j):
        if self.part == "X":
            return [self.S.A.zero()]
        return list(self.S.A.block_elements(i, j))

    def block_elements(self, i, j):
        for x in self._xs(i, j):
            for a in self._as(i, j):
                yield self.S.embed(x, a)

    def random_block(self, rng, i, j):
        A, X = self.S.A, self.S.X
        x = X.random_carrier_block(rng, i, j) if self.part != "A" else A.zero()
        a = A.random_block(rng, i, j) if self.part != "X" else A.zero()
        return self.S.embed(x, a)


def _dedupe(mats):
    seen = {}
    for m in mats:
        seen.setdefault(modmat.key(m), m)
    return list(seen.values())
