"""Odd form algebras with a strong orthogonal hyperbolic family.

The concrete model: R = M_n(K) with n = 2l + m0, rows and columns indexed
-l..-1, then a middle block of size m0, then 1..l.  The involution is the
antidiagonal transpose, and Delta is the maximal odd form parameter
{(m, a) : a + m̄m + ā = 0}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import modmat
from .checks import Identity, run_identities
from .coeffring import BaseRing


class OddFormError(ValueError):
    pass


class ParameterOutOfBlock(OddFormError):
    pass


class PatternMismatch(OddFormError):
    pass


class OddFormPoint:
    """An element (m, a) of Delta."""

    __slots__ = ("m", "a")

    def __init__(self, m, a):
        self.m = m
        self.a = a

    def __eq__(self, other):
        return isinstance(other, OddFormPoint) and np.array_equal(self.m, other.m) and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return modmat.key(self.m) + modmat.key(self.a)

    def encode_witness(self):
        return {"m": self.m.tolist(), "a": self.a.tolist()}

    def __repr__(self):
        return f"OddFormPoint(m={self.m.tolist()}, a={self.a.tolist()})"


class OddFormAlgebra:
    """(R, Delta) over K = Z/N.

    ``involution`` is "antidiagonal" (the real model) or "transpose" (a
    deliberately broken variant).  ``parameter`` is "maximal" or "minimal";
    the minimal one is Delta = phi(R) and has no hyperbolic family.
    """

    def __init__(self, base: BaseRing, rank: int, middle: int, involution="antidiagonal", parameter="maximal"):
        if rank < 1 or middle < 0:
            raise OddFormError("need rank >= 1 and middle >= 0")
        if involution not in ("antidiagonal", "transpose") or parameter not in ("maximal", "minimal"):
            raise OddFormError(f"unknown variant {involution!r}/{parameter!r}")
        self.base = base
        self.N = base.modulus
        self.rank = rank
        self.middle = middle
        self.n = 2 * rank + middle
        self.involution = involution
        self.parameter = parameter

    @property
    def tag(self):
        return f"oddform({self.base.tag}, l={self.rank}, m0={self.middle})"

    # indexing

    def pos(self, i):
        l = self.rank
        if not (1 <= abs(i) <= l):
            raise OddFormError(f"index {i} out of range")
        return l + i if i < 0 else l + self.middle + i - 1

    @property
    def middle_positions(self):
        return list(range(self.rank, self.rank + self.middle))

    @property
    def indices(self):
        return [i for i in range(-self.rank, self.rank + 1) if i]

    # R

    def bar(self, a):
        if self.involution == "transpose":
            return a.T.copy()
        return a[::-1, ::-1].T.copy()

    def zero_R(self):
        return np.zeros((self.n, self.n), dtype=np.int64)

    def one(self):
        return modmat.identity(self.n)

    def mul(self, *mats):
        return modmat.mul_all(mats, self.N, self.n)

    def unit(self, p, q, c=1):
        m = self.zero_R()
        m[p, q] = c % self.N
        return m

    def random_R(self, rng):
        return rng.integers(0, self.N, size=(self.n, self.n), dtype=np.int64)

    # Delta

    def point(self, m, a):
        return OddFormPoint(np.asarray(m, dtype=np.int64) % self.N, np.asarray(a, dtype=np.int64) % self.N)

    def zero(self):
        return self.point(self.zero_R(), self.zero_R())

    def defect(self, u):
        """a + m̄m + ā, zero exactly on the maximal parameter."""
        return (u.a + self.bar(u.m) @ u.m + self.bar(u.a)) % self.N

    def contains(self, u):
        if not np.all(self.defect(u) == 0):
            return False
        if self.parameter == "minimal":
            fixed = u.a[np.arange(self.n), self.n - 1 - np.arange(self.n)]
            return bool(np.all(u.m == 0) and np.all(fixed == 0))
        return True

    def add(self, u, v):
        N = self.N
        return OddFormPoint((u.m + v.m) % N, (u.a - self.bar(u.m) @ v.m + v.a) % N)

    def neg(self, u):
        return OddFormPoint((-u.m) % self.N, self.bar(u.a))

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def sum(self, points):
        acc = self.zero()
        for p in points:
            acc = self.add(acc, p)
        return acc

    def phi(self, a):
        return OddFormPoint(self.zero_R(), (a - self.bar(a)) % self.N)

    def pi(self, u):
        return u.m

    def rho(self, u):
        return u.a

    def act(self, u, b):
        """u·b for b in R ⋊ K, given as a matrix r + k·1."""
        N = self.N
        return OddFormPoint((u.m @ b) % N, (self.bar(b) @ u.a @ b) % N)

    @cached_property
    def _bar_perm(self):
        n = self.n
        return self.bar(np.arange(n * n).reshape(n, n)).ravel()

    def random_point(self, rng):
        """Sample of Delta obtained by solving a + ā = -m̄m for a."""
        n, N = self.n, self.N
        if self.parameter == "minimal":
            return self.phi(self.random_R(rng))
        idx = np.arange(n * n)
        perm = self._bar_perm
        fixed = perm == idx
        m = self.random_R(rng)
        c = (-self.bar(m) @ m) % N
        if N % 2 == 0 and np.any(c.ravel()[fixed] % 2):
            m = (2 * m) % N
            c = (-self.bar(m) @ m) % N
        flat = c.ravel()
        a = np.where(idx < perm, flat, 0)
        if N % 2:
            a = np.where(fixed, flat * pow(2, -1, N), a)
        else:
            a = np.where(fixed, flat // 2 + rng.integers(0, 2, size=n * n) * (N // 2), a)
        a = a.reshape(n, n)
        sk = self.random_R(rng)
        a = (a + sk - self.bar(sk)) % N
        return OddFormPoint(m, a)

    def random_scalar_ext(self, rng):
        """Random element r + k of R ⋊ K as a matrix."""
        k = int(rng.integers(0, self.N))
        return (self.random_R(rng) + k * self.one()) % self.N


def _half(c, N):
    """Some x with 2x = c mod N (c is assumed even when N is)."""
    c = int(c) % N
    if N % 2:
        return c * pow(2, -1, N) % N
    if c % 2:
        raise OddFormError("odd defect at a fixed entry")
    return c // 2


@dataclass
class HyperbolicFamily:
    e: dict
    q: dict


def build_split_oddform(K: BaseRing, rank: int, middle: int, involution="antidiagonal", parameter="maximal"):
    O = OddFormAlgebra(K, rank, middle, involution, parameter)
    e = {i: O.unit(O.pos(i), O.pos(i)) for i in O.indices}
    if parameter == "minimal":
        q = {i: O.zero() for i in O.indices}
    else:
        q = {i: O.point(e[i], O.zero_R()) for i in O.indices}
    return O, HyperbolicFamily(e, q)


def _family_witness(O, F, i, j):
    """Pairs (x, y) with e_i = sum x e_j y, showing e_i ∈ R e_j R."""
    return [(O.unit(O.pos(i), O.pos(j)), O.unit(O.pos(j), O.pos(i)))]


def check_oddform_axioms(O: OddFormAlgebra, F: HyperbolicFamily, seed=0, budget=1000):
    N, bar, n = O.N, O.bar, O.n
    eq = modmat.equal

    def peq(u, v):
        return eq(u.m, v.m) and eq(u.a, v.a)

    units = [O.unit(p, q) for p in range(n) for q in range(n)]

    def fixed():
        one = O.one()
        for a in units:
            u = O.phi(a)
            for b in units:
                yield (u, O.phi(b), a, b, one, 1)
        for i in O.indices:
            if O.contains(F.q[i]):
                for b in units:
                    yield (F.q[i], O.phi(b), b, b, one, 1)

    def sampler(rng):
        return (O.random_point(rng), O.random_point(rng), O.random_R(rng),
                O.random_scalar_ext(rng), O.random_scalar_ext(rng), int(rng.integers(0, N)))

    axioms = {
        "pi(phi(a)) = 0": lambda u, v, a, b, b2, k: eq(O.pi(O.phi(a)), O.zero_R()),
        "phi(a + ā) = 0": lambda u, v, a, b, b2, k: peq(O.phi((a + bar(a)) % N), O.zero()),
        "phi(āak) = 0": lambda u, v, a, b, b2, k: peq(O.phi((bar(a) @ a * k) % N), O.zero()),
        "rho(phi(a)) = a - ā": lambda u, v, a, b, b2, k: eq(O.rho(O.phi(a)), (a - bar(a)) % N),
        "v + u = u + phi(pi(u)‾ pi(v)) + v": lambda u, v, a, b, b2, k: peq(
            O.add(v, u), O.sum([u, O.phi((bar(u.m) @ v.m) % N), v])),
        "phi(a)·b = phi(b̄ab)": lambda u, v, a, b, b2, k: peq(O.act(O.phi(a), b), O.phi(O.mul(bar(b), a, b))),
        "rho(u + v) = rho(u) - pi(u)‾pi(v) + rho(v)": lambda u, v, a, b, b2, k: eq(
            O.rho(O.add(u, v)), (u.a - bar(u.m) @ v.m + v.a) % N),
        "pi(u·b) = pi(u) b": lambda u, v, a, b, b2, k: eq(O.pi(O.act(u, b)), (u.m @ b) % N),
        "0 = rho(u) + pi(u)‾pi(u) + rho(u)‾": lambda u, v, a, b, b2, k: eq(
            (u.a + bar(u.m) @ u.m + bar(u.a)) % N, O.zero_R()),
        "rho(u·b) = b̄ rho(u) b": lambda u, v, a, b, b2, k: eq(O.rho(O.act(u, b)), O.mul(bar(b), u.a, b)),
        "u·(b + b') = u·b + phi(b̄' rho(u) b) + u·b'": lambda u, v, a, b, b2, k: peq(
            O.act(u, (b + b2) % N), O.sum([O.act(u, b), O.phi(O.mul(bar(b2), u.a, b)), O.act(u, b2)])),
        # structural requirements: homomorphisms, action by endomorphisms, closure
        "phi additive": lambda u, v, a, b, b2, k: peq(O.phi((a + b) % N), O.add(O.phi(a), O.phi(b))),
        "pi additive": lambda u, v, a, b, b2, k: eq(O.pi(O.add(u, v)), (u.m + v.m) % N),
        "(u + v)·b = u·b + v·b": lambda u, v, a, b, b2, k: peq(O.act(O.add(u, v), b), O.add(O.act(u, b), O.act(v, b))),
        "u·(bb') = (u·b)·b'": lambda u, v, a, b, b2, k: peq(O.act(u, (b @ b2) % N), O.act(O.act(u, b), b2)),
        "Delta closed": lambda u, v, a, b, b2, k: O.contains(O.add(u, v)) and O.contains(O.neg(u))
        and O.contains(O.act(u, b)) and O.contains(O.phi(a)),
        "bar is an anti-involution": lambda u, v, a, b, b2, k: eq(bar(bar(a)), a) and eq(
            bar((a @ b) % N), (bar(b) @ bar(a)) % N),
    }
    ids = [Identity(name, pred, None, sampler, fixed, stream="axioms") for name, pred in axioms.items()]
    rep = run_identities(f"oddform[{O.tag}]", ids, seed, budget)
    rep.extend(check_family_axioms(O, F), prefix="family: ")
    return rep


def check_family_axioms(O: OddFormAlgebra, F: HyperbolicFamily):
    eq = modmat.equal
    N = O.N
    idx = O.indices

    def pairs():
        return [(i, j) for i in idx for j in idx if i != j]

    def witness_ok(i, j):
        acc = O.zero_R()
        for x, y in _family_witness(O, F, i, j):
            acc = (acc + x @ F.e[j] @ y) % N
        return eq(acc, F.e[i])

    ids = [
        Identity("e_i e_j = 0", lambda i, j: eq(O.mul(F.e[i], F.e[j]), O.zero_R()), pairs),
        Identity("ē_i = e_-i", lambda i: eq(O.bar(F.e[i]), F.e[-i]), lambda: [(i,) for i in idx]),
        Identity("e_i ∈ R e_j R", witness_ok, pairs),
        Identity("pi(q_i) = e_i", lambda i: eq(O.pi(F.q[i]), F.e[i]), lambda: [(i,) for i in idx]),
        Identity("rho(q_i) = 0", lambda i: eq(O.rho(F.q[i]), O.zero_R()), lambda: [(i,) for i in idx]),
        Identity("q_i = q_i·e_i", lambda i: O.act(F.q[i], F.e[i]) == F.q[i] and O.contains(F.q[i]),
                 lambda: [(i,) for i in idx]),
    ]
    return run_identities(f"family[{O.tag}]", ids)


# -- root elements -----------------------------------------------------------

def root_kind(root, rank=None):
    """Classify a BC root: ("pair", i, j) with root = e_j - e_i and i + j > 0,
    ("ultra", j) for e_j, or ("double", j) for 2e_j (negative indices mean -e)."""
    nz = [(c, x) for c, x in enumerate(root) if x]
    if len(nz) == 1:
        c, x = nz[0]
        j = (c + 1) * (1 if x > 0 else -1)
        if abs(x) == 1:
            return ("ultra", j)
        if abs(x) == 2:
            return ("double", j)
    if len(nz) == 2 and all(abs(x) == 1 for _, x in nz):
        (ca, sa), (cb, sb) = nz
        a, b = ca + 1, cb + 1
        j, i = sb * b, -sa * a
        if i + j < 0:
            j, i = sa * a, -sb * b
        return ("pair", i, j)
    raise OddFormError(f"{root} is not a BC root")


def _pair_block(O, i, j):
    return O.pos(i), O.pos(j)


def ultrashort_params(O: OddFormAlgebra, j):
    """All elements of P_{e_j}: m in the middle rows of column j, a at (-j, j)."""
    q = O.pos(j)
    p = O.pos(-j)
    mids = O.middle_positions
    out = []
    for vals in itertools.product(range(O.N), repeat=len(mids)):
        m = O.zero_R()
        for r, v in zip(mids, vals):
            m[r, q] = v
        for x in range(O.N):
            a = O.zero_R()
            a[p, q] = x
            u = OddFormPoint(m.copy(), a)
            if O.contains(u):
                out.append(u)
    return out


def random_ultrashort(O: OddFormAlgebra, rng, j):
    q, p = O.pos(j), O.pos(-j)
    n, N = O.n, O.N
    m = O.zero_R()
    for r in O.middle_positions:
        m[r, q] = rng.integers(0, N)
    if N % 2 == 0 and n % 2 == 1:
        m[n // 2, q] = (2 * m[n // 2, q]) % N
    s = int((O.bar(m) @ m)[p, q])
    a = O.zero_R()
    a[p, q] = _half(-s, N)
    if N % 2 == 0 and rng.integers(0, 2):
        a[p, q] = (a[p, q] + N // 2) % N
    return OddFormPoint(m, a)


def check_ultrashort_param(O, j, u):
    q, p = O.pos(j), O.pos(-j)
    mask_m = O.zero_R()
    for r in O.middle_positions:
        mask_m[r, q] = 1
    mask_a = O.unit(p, q)
    ok = np.all(u.m * (1 - mask_m) == 0) and np.all(u.a * (1 - mask_a) == 0) and O.contains(u)
    if not ok:
        raise ParameterOutOfBlock(f"{u} is not in P_e{j}")


def unitary_root_element(O: OddFormAlgebra, F: HyperbolicFamily, root, param, check=True):
    kind = root_kind(root)
    N = O.N
    if kind[0] == "pair":
        _, i, j = kind
        p, q = _pair_block(O, i, j)
        if check:
            mask = O.unit(p, q)
            if np.any(param * (1 - mask)):
                raise ParameterOutOfBlock(f"parameter outside e_{i} R e_{j}")
        return (O.one() + param - O.bar(param)) % N
    j = kind[1]
    if check:
        if kind[0] == "double" and not np.all(param.m == 0):
            raise ParameterOutOfBlock("2e_j parameters lie in phi(e_-j R e_j)")
        check_ultrashort_param(O, j, param)
    return (O.one() + param.m - O.bar(param.m) + param.a) % N


def read_root_coordinate(g, root, O: OddFormAlgebra, F: HyperbolicFamily | None = None, strict=True):
    kind = root_kind(root)
    d = (g - O.one()) % O.N
    if kind[0] == "pair":
        _, i, j = kind
        p, q = _pair_block(O, i, j)
        out = O.unit(p, q, int(d[p, q]))
    else:
        j = kind[1]
        q, p = O.pos(j), O.pos(-j)
        m = O.zero_R()
        for r in O.middle_positions:
            m[r, q] = d[r, q]
        if kind[0] == "double":
            m[:] = 0
        a = O.unit(p, q, int(d[p, q]))
        out = OddFormPoint(m, a)
    if strict:
        try:
            back = unitary_root_element(O, F, root, out)
        except ParameterOutOfBlock as exc:
            raise PatternMismatch(str(exc)) from exc
        if not modmat.equal(back, g % O.N):
            raise PatternMismatch(f"element does not have the pattern of {root}")
    return out


def is_unitary(O, g):
    return modmat.is_identity(O.mul(O.bar(g), g)) and modmat.is_identity(O.mul(g, O.bar(g)))
