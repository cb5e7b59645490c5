"""Towers of finite objects, level-shifted maps and cosheaf witnesses.

A tower is materialized level by level: ``level(m)`` returns a finite
object and ``transition(x, src, dst)`` maps level ``src`` down to ``dst``.
A tower map carries a monotone shift j -> sigma(j) and components from
source level sigma(j) to target level j.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import modmat
from .algebra import MatrixAlgebra
from .checks import CheckReport, encode
from .coeffring import BaseRing, partition_of_unity, unity_power


class HypothesisFailure(ValueError):
    pass


# -- finite levels -------------------------------------------------------------

class Level:
    """A finite set with a key function; enumerable or sampled."""

    def __init__(self, elements=None, key=None, sampler=None, name=""):
        self._elements = elements
        self.key = key or _default_key
        self.sampler = sampler
        self.name = name

    def elements(self):
        if self._elements is None:
            return None
        return self._elements() if callable(self._elements) else self._elements

    def eq(self, x, y):
        return self.key(x) == self.key(y)


def _default_key(x):
    if isinstance(x, np.ndarray):
        return modmat.key(x)
    if hasattr(x, "key"):
        return x.key()
    return x


class Tower:
    def __init__(self, name, level: Callable[[int], Level], transition: Callable, depth=4):
        self.name = name
        self._level = level
        self._transition = transition
        self.depth = depth
        self._memo = {}

    def level(self, m) -> Level:
        if m not in self._memo:
            self._memo[m] = self._level(m)
        return self._memo[m]

    def transition(self, x, src, dst):
        if src < dst:
            raise ValueError("transitions go down")
        if src == dst:
            return x
        return self._transition(x, src, dst)


@dataclass
class TowerMap:
    source: Tower
    target: Tower
    shift: Callable[[int], int]
    component: Callable  # (j, x) -> element of target level j
    name: str = ""

    def __call__(self, j, x):
        return self.component(j, x)


def identity_map(T: Tower) -> TowerMap:
    return TowerMap(T, T, lambda j: j, lambda j, x: x, "id")


def colocalization(A: MatrixAlgebra, k: int, depth=4) -> Tower:
    """Level n is A^(k^n) (as a set A), transition multiplies by k."""
    N = A.N
    small = N ** (A.n * A.n) <= 4096

    def level(n):
        elems = (lambda: [np.array(e, dtype=np.int64).reshape(A.n, A.n)
                          for e in itertools.product(range(N), repeat=A.n * A.n)]) if small else None
        return Level(elems, sampler=A.random, name=f"A^({pow(k, n, N)})")

    def transition(a, src, dst):
        return (a * pow(k, src - dst, N)) % N

    return Tower(f"{A.tag}^(oo,{k})", level, transition, depth)


def reindex_power(T: Tower, n: int) -> Tower:
    """Level j of the result is level n j of T."""
    return Tower(f"{T.name}[x{n}]", lambda j: T.level(n * j),
                 lambda x, src, dst: T.transition(x, n * src, n * dst), T.depth)


def _cases(level: Level, seed, budget, tag):
    elems = level.elements()
    if elems is not None:
        return list(elems), "exhaustive"
    rng = np.random.default_rng([seed, zlib.crc32(tag.encode())])
    return [level.sampler(rng) for _ in range(budget)], "sampled"


def pro_equal(f: TowerMap, g: TowerMap, horizon=None, seed=0, budget=200):
    """(equal, witness): some common deeper level makes the components agree."""
    X, Y = f.source, f.target
    horizon = horizon or 2 * Y.depth
    for j in range(1, Y.depth + 1):
        lo = max(f.shift(j), g.shift(j))
        found = False
        witness = None
        for i in range(lo, horizon + 1):
            xs, _ = _cases(X.level(i), seed, budget, f"{X.name}/{i}")
            bad = None
            for x in xs:
                a = f(j, X.transition(x, i, f.shift(j)))
                b = g(j, X.transition(x, i, g.shift(j)))
                if not Y.level(j).eq(a, b):
                    bad = x
                    break
            if bad is None:
                found = True
                break
            witness = {"target_level": j, "source_level": i, "element": encode(bad)}
        if not found:
            return False, witness
    return True, None


def check_iso_witness(u: TowerMap, v: TowerMap, depth=None, seed=0, budget=500, name=None):
    """u o v and v o u equal the tower transitions, level by level."""
    X, Y = u.source, u.target
    depth = depth or Y.depth
    report = CheckReport(name or f"iso[{u.name}, {v.name}]", {"depth": depth})
    for j in range(1, depth + 1):
        # u o v at level j: Y_{sv(su(j))} -> X_{su(j)} -> Y_j
        i = v.shift(u.shift(j))
        ys, mode = _cases(Y.level(i), seed, budget, f"{Y.name}/{i}")
        bad = None
        for y in ys:
            lhs = u(j, v(u.shift(j), y))
            if not Y.level(j).eq(lhs, Y.transition(y, i, j)):
                bad = y
                break
        report.add(f"level {j}: u o v = transition {i} -> {j}", bad is None, len(ys), mode,
                   None if bad is None else {"element": encode(bad)})
        # v o u at level j: X_{su(sv(j))} -> Y_{sv(j)} -> X_j
        i = u.shift(v.shift(j))
        xs, mode = _cases(X.level(i), seed, budget, f"{X.name}/{i}")
        bad = None
        for x in xs:
            lhs = v(j, u(v.shift(j), x))
            if not X.level(j).eq(lhs, X.transition(x, i, j)):
                bad = x
                break
        report.add(f"level {j}: v o u = transition {i} -> {j}", bad is None, len(xs), mode,
                   None if bad is None else {"element": encode(bad)})
    return report


# -- finite groups given by tables --------------------------------------------

class TableGroup:
    """A finite (abelian) group on concrete elements, indexed 0..size-1."""

    def __init__(self, elements, add, key, name=""):
        self.elements = list(elements)
        self.keys = [key(e) for e in self.elements]
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")
        self._add = add
        self._key = key
        self.name = name
        n = len(self.elements)
        self.table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                self.table[a, b] = self.index[key(add(self.elements[a], self.elements[b]))]
        self.zero = next(i for i in range(n) if np.all(self.table[i] == np.arange(n)))
        self.neg = np.array([int(np.nonzero(self.table[a] == self.zero)[0][0]) for a in range(n)])

    @property
    def size(self):
        return len(self.elements)

    def of(self, x):
        return self.index[self._key(x)]

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))


class QuotientGroup:
    """(G_1 ⊕ ... ⊕ G_n) / H on tuples of indices, with canonical representatives."""

    def __init__(self, parts, relations, name=""):
        self.parts = parts
        self.name = name
        zero = tuple(p.zero for p in parts)
        H = {zero}
        frontier = [zero]
        gens = [tuple(r) for r in relations]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    s = self.add(h, g)
                    if s not in H:
                        H.add(s)
                        nxt.append(s)
            frontier = nxt
        self.H = sorted(H)
        self.canon = {}
        for x in itertools.product(*(range(p.size) for p in parts)):
            if x not in self.canon:
                coset = [self.add(x, h) for h in self.H]
                rep = min(coset)
                for y in coset:
                    self.canon[y] = rep
        self.reps = sorted(set(self.canon.values()))

    def add(self, x, y):
        return tuple(int(p.table[a, b]) for p, a, b in zip(self.parts, x, y))

    def neg(self, x):
        return tuple(int(p.neg[a]) for p, a in zip(self.parts, x))

    def reduce(self, x):
        return self.canon[tuple(x)]

    @property
    def order(self):
        return len(self.reps)


# -- the cosheaf presentation ----------------------------------------------------

class LinearParam:
    """P_alpha(A^(L)) for the block (i, j): block matrices, x.f = x f."""

    def __init__(self, A: MatrixAlgebra, block, cap=4096):
        self.A = A
        self.N = A.N
        self.block = block
        size = A.N ** int(A.mask(*block).sum())
        if size > cap:
            raise ValueError(f"block of size {size} is too large to enumerate")
        self._elems = [np.asarray(e, dtype=np.int64) for e in A.block_elements(*block)]

    def elements(self, label):
        return self._elems

    def add(self, label):
        N = self.N
        return lambda x, y: (x + y) % N

    def scale(self, x, f):
        return (x * f) % self.N

    def key(self, x):
        return modmat.key(x)

    def generator_preimage(self, y, label):
        return y

    def witness_term(self, u, t, label):
        return (u * t) % self.N

    def corrections(self, u, i, j, coef, label):
        return None


class UnitaryParam:
    """P_{e_j}(Delta^(L)) in the concrete homotope model.

    Points (m, A) with A + L m̄ m + Ā = 0, sum (m, A) + (m', A') =
    (m + m', A - L m̄ m' + A'), scaling (m, A).f = (m f, A f).  The
    generator u^(L) of u = (m, a) is (m, a L).
    """

    def __init__(self, O, j):
        from . import oddform as of
        self.O = O
        self.N = O.N
        self.j = j
        self.of = of
        self.q, self.p = O.pos(j), O.pos(-j)
        self._memo = {}

    def _point(self, m, a):
        return self.of.OddFormPoint(m, a)

    def elements(self, label):
        label %= self.N
        if label not in self._memo:
            O, N = self.O, self.N
            out = []
            mids = O.middle_positions
            for vals in itertools.product(range(N), repeat=len(mids)):
                m = O.zero_R()
                for r, v in zip(mids, vals):
                    m[r, self.q] = v
                for x in range(N):
                    a = O.zero_R()
                    a[self.p, self.q] = x
                    if self._defect(m, a, label) == 0:
                        out.append(self._point(m.copy(), a))
            self._memo[label] = out
        return self._memo[label]

    def _defect(self, m, a, label):
        O = self.O
        d = (a + label * (O.bar(m) @ m) + O.bar(a)) % self.N
        return int(np.abs(d).sum())

    def add(self, label):
        O, N = self.O, self.N

        def add(u, v):
            return self._point((u.m + v.m) % N, (u.a - label * (O.bar(u.m) @ v.m) + v.a) % N)

        return add

    def scale(self, x, f):
        return self._point((x.m * f) % self.N, (x.a * f) % self.N)

    def key(self, x):
        return x.key()

    def generator_preimage(self, y, label):
        """Some u in Delta with u^(label) = y (first in a fixed order)."""
        O, N = self.O, self.N
        for x in range(N):
            a = O.zero_R()
            a[self.p, self.q] = x
            if (x * label - y.a[self.p, self.q]) % N == 0 and self._defect(y.m, a, 1) == 0:
                return self._point(y.m.copy(), a)
        raise HypothesisFailure("no generator u with u^(L) equal to the given point")

    def witness_term(self, u, t, label):
        """(u.t)^(label) = (m t, t^2 a label)."""
        return self._point((u.m * t) % self.N, (u.a * t * t * label) % self.N)

    def corrections(self, u, i, j, coef, label):
        """phi((rho(u) coef)^(label)) = (0, x - x̄) with x = rho(u) coef."""
        O, N = self.O, self.N
        x = (u.a * coef) % N
        return self._point(O.zero_R(), (x - O.bar(x)) % N)


@dataclass
class CosheafLevels:
    """Output of :func:`cosheaf_presentation_levels`."""

    X: Tower  # presented G_m
    Y: Tower  # P_alpha(A^(s^m))
    u: TowerMap
    v: TowerMap
    coefficients: dict  # m -> t_{im}
    notes: dict = field(default_factory=dict)

    def check(self, depth=None, seed=0, budget=500):
        rep = check_iso_witness(self.u, self.v, depth, seed, budget, name="cosheaf witnesses")
        rep.notes.update(self.notes)
        return rep


def cosheaf_presentation_levels(param, K: BaseRing, s, ks, depth=4, perturb=None):
    """The cosheaf presentation at levels 1..depth for a parameter family ``param``.

    ``param`` is a :class:`LinearParam` or :class:`UnitaryParam`.  G_m is the
    quotient of the direct sum of P_alpha(A^((s k_i)^m)) by the identification
    relations; u sends can_i(a) to a k_i^m and v is the inverse formula.
    ``perturb = (m, i, delta)`` shifts one coefficient t_{im} (for negative tests).
    """
    N = K.modulus
    s = int(K(s)) % N
    ks = [int(K(k)) % N for k in ks]
    n = len(ks)
    coeffs = {}
    horizon = depth + unity_power(depth, n) + 1
    for m in range(1, horizon + 1):
        ts = partition_of_unity(K, s, ks, m)
        if ts is None:
            raise HypothesisFailure(f"s^{unity_power(m, n)} is not in the ideal of k_i^{m}")
        coeffs[m] = [int(t) % N for t in ts]
    if perturb is not None:
        pm, pi, pd = perturb
        coeffs[pm][pi] = (coeffs[pm][pi] + pd) % N

    def lab(c, m):
        return pow(c, m, N)

    groups = {}

    def group(label):
        label %= N
        if label not in groups:
            groups[label] = TableGroup(param.elements(label), param.add(label), param.key, name=f"P^({label})")
        return groups[label]

    quotients = {}

    def G(m):
        if m not in quotients:
            parts = [group(lab(s * k, m)) for k in ks]
            rels = []
            for i, j in itertools.permutations(range(n), 2):
                B = group(lab(s * ks[i] * ks[j], m))
                for b in B.elements:
                    r = [p.zero for p in parts]
                    r[i] = parts[i].of(param.scale(b, lab(ks[j], m)))
                    r[j] = parts[j].neg[parts[j].of(param.scale(b, lab(ks[i], m)))]
                    rels.append(r)
            quotients[m] = QuotientGroup(parts, rels, name=f"G_{m}")
        return quotients[m]

    def X_level(m):
        Q = G(m)
        return Level(Q.reps, key=lambda x: x, name=f"G_{m}")

    def X_transition(x, src, dst):
        Qs, Qd = G(src), G(dst)
        out = []
        for i, k in enumerate(ks):
            e = Qs.parts[i].elements[x[i]]
            out.append(Qd.parts[i].of(param.scale(e, lab(s * k, src - dst))))
        return Qd.reduce(out)

    def Y_level(m):
        return Level(group(lab(s, m)).elements, key=param.key, name=f"P^({lab(s, m)})")

    def Y_transition(y, src, dst):
        return param.scale(y, lab(s, src - dst))

    X = Tower("G", X_level, X_transition, depth)
    Y = Tower("P_alpha", Y_level, Y_transition, depth)

    def u_comp(m, x):
        Q = G(m)
        Ym = group(lab(s, m))
        acc = Ym.zero
        for i, k in enumerate(ks):
            e = Q.parts[i].elements[x[i]]
            acc = int(Ym.table[acc, Ym.of(param.scale(e, lab(k, m)))])
        return Ym.elements[acc]

    def v_shift(m):
        return m + unity_power(m, n)

    def v_comp(m, y):
        Q = G(m)
        c = lab(s, v_shift(m))
        u = param.generator_preimage(y, c)
        ts = coeffs[m]
        out = []
        for i, k in enumerate(ks):
            Pi = Q.parts[i]
            L = lab(s * k, m)
            acc = Pi.of(param.witness_term(u, ts[i], L))
            for j in range(i + 1, n):
                corr = param.corrections(u, i, j, lab(s, m) * ts[i] * ts[j] * lab(ks[j], m), L)
                if corr is not None:
                    acc = int(Pi.table[acc, Pi.of(corr)])
            out.append(acc)
        return Q.reduce(out)

    u = TowerMap(X, Y, lambda m: m, u_comp, "u")
    v = TowerMap(Y, X, v_shift, v_comp, "v")
    levels = CosheafLevels(X, Y, u, v, coeffs)
    levels.notes["partition"] = {m: coeffs[m] for m in range(1, depth + 1)}
    levels.G = G
    levels.group = group
    return levels


def check_cosheaf(param, K, s, ks, depth=4, seed=0, budget=500, perturb=None):
    """Cosheaf certificate: relations respected by u, orders, and both composites."""
    lv = cosheaf_presentation_levels(param, K, s, ks, depth, perturb)
    N = K.modulus
    rep = CheckReport("cosheaf", {"s": s, "ks": list(ks), "depth": depth})
    for m in range(1, depth + 1):
        Q = lv.G(m)
        # u kills the identification relations
        Ym = lv.group(pow(s, m, N))
        zero = Ym.elements[Ym.zero]
        ok = all(lv.Y.level(m).eq(lv.u(m, h), zero) for h in Q.H)
        rep.add(f"level {m}: u well defined on G_{m}", ok, len(Q.H))
        images = {lv.Y.level(m).key(lv.u(m, x)) for x in Q.reps}
        rep.add(f"level {m}: |G_{m}| = {Q.order}, |P| = {Ym.size}, u bijective",
                Q.order == Ym.size == len(images), Q.order)
        rep.add(f"level {m}: P_alpha abelian", all(p.is_abelian() for p in Q.parts) and Ym.is_abelian())
    if isinstance(param, UnitaryParam):
        # the commutator relation and the witness corrections both live in phi(e_-j R e_j)
        nonzero = 0
        for m in range(1, depth + 1):
            for y in lv.group(pow(s, m + unity_power(m, len(ks)), N)).elements:
                u = param.generator_preimage(y, pow(s, m + unity_power(m, len(ks)), N))
                c = param.corrections(u, 0, 1, 1, 1)
                nonzero += int(np.any(c.a))
        rep.notes["phi corrections nonzero"] = nonzero
        rep.add("commutator relation: [can_i(u), can_j(v)] = can_i(phi(...)) with abelian parts",
                all(p.is_abelian() for m in range(1, depth + 1) for p in lv.G(m).parts))
    rep.extend(lv.check(depth, seed, budget))
    rep.notes["partition"] = lv.notes["partition"]
    return rep


# -- the colocalization bullets ---------------------------------------------------

def check_transitions(T: Tower, depth=None, seed=0, budget=200):
    """transition(n+1 -> n) o transition(n+2 -> n+1) = transition(n+2 -> n)."""
    depth = depth or T.depth
    rep = CheckReport(f"transitions[{T.name}]", {"depth": depth})
    for n in range(1, depth + 1):
        xs, mode = _cases(T.level(n + 2), seed, budget, f"{T.name}/{n + 2}")
        ok = all(T.level(n).eq(T.transition(T.transition(x, n + 2, n + 1), n + 1, n), T.transition(x, n + 2, n))
                 for x in xs)
        rep.add(f"level {n}: composition", ok, len(xs), mode)
    return rep


def power_tower(A: MatrixAlgebra, c: int, exponent=lambda j: j, depth=4, name=None) -> Tower:
    """Level j is A^(c^e(j)) for a monotone exponent e; transitions multiply by c."""
    N = A.N
    base = colocalization(A, c, depth)

    def transition(a, src, dst):
        return (a * pow(c, exponent(src) - exponent(dst), N)) % N

    return Tower(name or f"{A.tag}^(oo,{c})[e]", lambda j: base.level(exponent(j)), transition, depth)


def check_colocalization_bullets(A: MatrixAlgebra, k: int, n: int = 2, ks=(2, 3), depth=3, seed=0, budget=200):
    """The three isomorphisms between colocalizations, each by explicit witnesses.

    1. A^(oo,{1,k,k^2,...}) reindexed along j -> k^j against A^(oo,k).
    2. A^(oo,k^n) against A^(oo,k): level j of the latter comes from level
       ceil(j/n) of the former, multiplied by k^(n ceil(j/n) - j).
    3. A^(oo,S), S generated by ks, along j -> s^j (s the product of ks),
       against the limit over S of A^(oo,s) along j -> (s, j^2).
    """
    N = A.N
    rep = CheckReport("colocalization bullets", {"k": k, "n": n, "ks": list(ks), "depth": depth})
    C = colocalization(A, k, depth)
    S1 = power_tower(A, k, depth=depth, name=f"{A.tag}^(oo,S(k))")
    u = TowerMap(S1, C, lambda j: j, lambda j, x: x, "reindex")
    v = TowerMap(C, S1, lambda j: j, lambda j, x: x, "reindex^-1")
    rep.extend(check_iso_witness(u, v, depth, seed, budget), "bullet 1: ")

    Cn = colocalization(A, pow(k, n, N), depth)

    def up(j):
        return -(-j // n)

    u = TowerMap(Cn, C, up, lambda j, x: (x * pow(k, n * up(j) - j, N)) % N, "u")
    v = TowerMap(C, Cn, lambda j: n * j, lambda j, x: x, "v")
    rep.extend(check_iso_witness(u, v, depth, seed, budget), "bullet 2: ")

    s = 1
    for x in ks:
        s = s * x % N
    X = power_tower(A, s, depth=depth, name=f"{A.tag}^(oo,S)")
    Y = power_tower(A, s, exponent=lambda j: j * j, depth=depth, name=f"lim {A.tag}^(oo,s)")
    u = TowerMap(X, Y, lambda j: j * j, lambda j, x: x, "u")
    v = TowerMap(Y, X, lambda j: j, lambda j, x: (x * pow(s, j * j - j, N)) % N, "v")
    rep.extend(check_iso_witness(u, v, depth, seed, budget), "bullet 3: ")
    for T in (C, Cn, X, Y):
        rep.extend(check_transitions(T, depth, seed, budget), f"{T.name}: ")
    return rep
