"""Finite commutative rings that are products of Z/p^e.

Elements are residue vectors, one residue per factor.  When the factor
moduli are pairwise coprime the ring is cyclic (Chinese remainder theorem)
and elements can also be addressed by a single integer mod N, which is
what the matrix code uses.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import sympy


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class BaseRing:
    """K = Z/p1^e1 x ... x Z/pr^er.  ``factors`` lists (p, e) pairs."""

    factors: tuple

    @classmethod
    def cyclic(cls, n: int) -> "BaseRing":
        if n < 1:
            raise RingError("modulus must be positive")
        if n == 1:
            return cls(())
        return cls(tuple(sorted(sympy.factorint(n).items())))

    @classmethod
    def parse(cls, tag: str) -> "BaseRing":
        """Ring literals: 'z12', 'f2', 'z4xz9'."""
        parts = tag.strip().lower().split("x")
        factors = []
        for part in parts:
            m = re.fullmatch(r"([zf])(\d+)", part)
            if not m:
                raise RingError(f"unknown ring tag {tag!r}")
            n = int(m.group(2))
            if m.group(1) == "f":
                if not sympy.isprime(n):
                    raise RingError(f"unknown ring tag {tag!r}: f{n} is not a prime field")
            if n > 1:
                factors.extend(sympy.factorint(n).items())
        return cls(tuple(factors))

    @property
    def moduli(self):
        return tuple(p**e for p, e in self.factors)

    @property
    def order(self):
        return math.prod(self.moduli)

    @cached_property
    def is_cyclic(self):
        return all(math.gcd(a, b) == 1 for a, b in itertools.combinations(self.moduli, 2))

    @property
    def modulus(self):
        if not self.is_cyclic:
            raise RingError(f"{self} is not cyclic")
        return self.order

    @property
    def tag(self):
        if not self.factors:
            return "z1"
        if self.is_cyclic:
            return f"z{self.order}"
        return "x".join(f"z{m}" for m in self.moduli)

    def __str__(self):
        return self.tag

    # elements

    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            return value
        if isinstance(value, int):
            return RingElement(self, tuple(value % m for m in self.moduli))
        vals = tuple(value)
        if len(vals) != len(self.moduli):
            raise RingError(f"expected {len(self.moduli)} residues, got {vals}")
        return RingElement(self, tuple(v % m for v, m in zip(vals, self.moduli)))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def elements(self):
        """All elements; cyclic rings enumerate in the order 0, 1, ..., N-1."""
        if self.is_cyclic:
            for v in range(self.order):
                yield self(v)
            return
        for vals in itertools.product(*(range(m) for m in self.moduli)):
            yield RingElement(self, vals)

    def to_int(self, x: "RingElement") -> int:
        """CRT representative in [0, N) (cyclic rings only)."""
        n = self.modulus
        r = 0
        for v, m in zip(x.residues, self.moduli):
            c = n // m
            r += v * c * pow(c, -1, m)
        return r % n

    def is_unit(self, x):
        return all(math.gcd(v, m) == 1 for v, m in zip(x.residues, self.moduli))

    def is_nilpotent(self, x):
        return all(v % p == 0 for v, (p, _e) in zip(x.residues, self.factors))

    def is_local(self):
        return len(self.factors) == 1

    def is_field(self):
        return len(self.factors) == 1 and self.factors[0][1] == 1


@dataclass(frozen=True)
class RingElement:
    ring: BaseRing
    residues: tuple

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingError("elements of different rings")
            return other
        return self.ring(other)

    def __add__(self, other):
        o = self._coerce(other)
        return self.ring(tuple(a + b for a, b in zip(self.residues, o.residues)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self.ring(tuple(a - b for a, b in zip(self.residues, o.residues)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self.ring(tuple(-a for a in self.residues))

    def __mul__(self, other):
        o = self._coerce(other)
        return self.ring(tuple(a * b for a, b in zip(self.residues, o.residues)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return self.ring(tuple(pow(a, n, m) for a, m in zip(self.residues, self.ring.moduli)))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.residues == other.residues

    def __hash__(self):
        return hash((self.ring, self.residues))

    def __int__(self):
        return self.ring.to_int(self)

    def __repr__(self):
        if self.ring.is_cyclic:
            return f"{int(self)}"
        return f"({', '.join(map(str, self.residues))})"


@dataclass(frozen=True)
class Ideal:
    """Ideal of K given componentwise by p-adic valuations (exponent e = zero ideal)."""

    ring: BaseRing
    valuations: tuple

    def __contains__(self, x):
        return all(v % p**k == 0 for v, (p, _e), k in zip(x.residues, self.ring.factors, self.valuations))

    def elements(self):
        return [x for x in self.ring.elements() if x in self]

    def is_prime(self):
        return sum(1 for k in self.valuations if k) == 1 and max(self.valuations) == 1

    def __repr__(self):
        parts = []
        for k, (p, e) in zip(self.valuations, self.ring.factors):
            parts.append("full" if k == 0 else f"({p})" if k == 1 else f"({p}^{k})")
        return "x".join(parts)


def principal_ideal(K: BaseRing, x: RingElement) -> Ideal:
    vals = []
    for v, (p, e) in zip(x.residues, K.factors):
        k = 0
        while k < e and v % p ** (k + 1) == 0:
            k += 1
        vals.append(k)
    return Ideal(K, tuple(vals))


def primes(K: BaseRing) -> list:
    """All prime ideals; for Z/p^e components the unique prime is (p)."""
    out = []
    r = len(K.factors)
    if r == 0:
        return out
    for i in range(r):
        vals = [0] * r
        vals[i] = 1
        out.append(Ideal(K, tuple(vals)))
    return out


@dataclass(frozen=True)
class Localization:
    """K_k realized as eK with e the idempotent power of k."""

    source: BaseRing
    k: RingElement
    idempotent: RingElement
    target: BaseRing
    kept: tuple  # indices of surviving factors

    def __call__(self, x: RingElement) -> RingElement:
        x = self.source(x)
        return self.target(tuple(x.residues[i] for i in self.kept))

    def embed(self, y: RingElement) -> RingElement:
        """Section target -> eK inside K."""
        vals = [0] * len(self.source.factors)
        for v, i in zip(y.residues, self.kept):
            vals[i] = v
        return self.source(tuple(vals))


def idempotent_power(K: BaseRing, k: RingElement) -> RingElement:
    k = K(k)
    m = 1
    while True:
        km = k**m
        if km * km == km:
            return km
        m += 1


def localize(K: BaseRing, k) -> Localization:
    k = K(k)
    e = idempotent_power(K, k)
    kept = tuple(i for i, v in enumerate(e.residues) if v % K.moduli[i] != 0)
    target = BaseRing(tuple(K.factors[i] for i in kept))
    return Localization(K, k, e, target, kept)


@dataclass(frozen=True)
class MultiplicativeSet:
    ring: BaseRing
    generators: tuple

    @cached_property
    def elements(self) -> frozenset:
        K = self.ring
        out = {K.one}
        frontier = [K.one]
        while frontier:
            new = []
            for x in frontier:
                for g in self.generators:
                    y = x * K(g)
                    if y not in out:
                        out.add(y)
                        new.append(y)
            frontier = new
        return frozenset(out)

    def __contains__(self, x):
        return self.ring(x) in self.elements


def multiplicative_set(K: BaseRing, *gens) -> MultiplicativeSet:
    return MultiplicativeSet(K, tuple(K(g) for g in gens))


def meets(S: MultiplicativeSet, I) -> bool:
    members = I.elements() if isinstance(I, Ideal) else I
    return any(x in S for x in members)


def disjoint_primes(S: MultiplicativeSet) -> list:
    return [P for P in primes(S.ring) if not meets(S, P)]


def unity_power(m: int, n: int) -> int:
    """Exponent of s in the partition-of-unity identity at level m with n pieces."""
    return max(0, (m - 1) * n + 1)


def partition_of_unity(K: BaseRing, s, ks, m: int):
    """Coefficients t with s^{m'} = sum k_i^m t_i, or None if none exist.

    The search is lexicographic over K^n, so the returned solution is the
    first one in that order.
    """
    if m < 1:
        raise RingError("m must be at least 1")
    s = K(s)
    ks = [K(k) for k in ks]
    target = s ** unity_power(m, len(ks))
    powers = [k**m for k in ks]
    elems = list(K.elements())
    if len(elems) ** len(ks) > 2_000_000:
        return _partition_crt(K, target, powers)
    for ts in itertools.product(elems, repeat=len(ks)):
        acc = K.zero
        for p, t in zip(powers, ts):
            acc = acc + p * t
        if acc == target:
            return list(ts)
    return None


def _partition_crt(K, target, powers):
    # componentwise: in Z/p^e, target is in the ideal generated by the powers iff
    # some power has valuation <= valuation(target)
    n = len(powers)
    sol = [[0] * len(K.factors) for _ in range(n)]
    for c, (p, e) in enumerate(K.factors):
        mod = p**e
        tv = target.residues[c] % mod
        best = None
        for i, pw in enumerate(powers):
            v = pw.residues[c] % mod
            if v == 0:
                continue
            val = 0
            while v % p ** (val + 1) == 0:
                val += 1
            if best is None or val < best[1]:
                best = (i, val)
        if tv == 0:
            continue
        if best is None:
            return None
        i, val = best
        if tv % p**val:
            return None
        unit = powers[i].residues[c] // p**val
        sol[i][c] = (tv // p**val) * pow(unit, -1, mod) % mod
    return [K(tuple(row)) for row in sol]
