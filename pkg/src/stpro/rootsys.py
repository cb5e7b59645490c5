"""Root systems of the irreducible crystallographic types, including BC.

Roots are stored as integer tuples in a standard coordinate realization.
Types whose usual coordinates involve halves (E6, E7, E8, F4) are stored
doubled, which changes lengths but none of the combinatorics used here
(sums, spans, half-spaces, series).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

Root = tuple


class RootSystemError(ValueError):
    pass


class HalfSpaceViolation(RootSystemError):
    """No open half-space contains the given roots."""


class DependentRoots(RootSystemError):
    pass


def _unit(dim, i, c=1):
    v = [0] * dim
    v[i] = c
    return v


def _pm_pairs(dim, scale=1):
    out = []
    for i, j in itertools.combinations(range(dim), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * dim
            v[i] = si * scale
            v[j] = sj * scale
            out.append(tuple(v))
    return out


def _short(dim, c=1):
    out = []
    for i in range(dim):
        out.append(tuple(_unit(dim, i, c)))
        out.append(tuple(_unit(dim, i, -c)))
    return out


def _e8_doubled():
    roots = _pm_pairs(8, scale=2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(signs))
    return roots


def _build(kind, rank):
    if kind == "A":
        d = rank + 1
        return [tuple(_add(_unit(d, i), _unit(d, j, -1))) for i in range(d) for j in range(d) if i != j]
    if kind == "B":
        return _pm_pairs(rank) + _short(rank)
    if kind == "C":
        return _pm_pairs(rank) + _short(rank, 2)
    if kind == "D":
        return _pm_pairs(rank)
    if kind == "BC":
        return _pm_pairs(rank) + _short(rank) + _short(rank, 2)
    if kind == "G":
        roots = []
        for i, j in itertools.permutations(range(3), 2):
            roots.append(tuple(_add(_unit(3, i), _unit(3, j, -1))))
        for i in range(3):
            v = [-1, -1, -1]
            v[i] = 2
            roots.append(tuple(v))
            roots.append(tuple(-x for x in v))
        return roots
    if kind == "F":
        roots = _pm_pairs(4, scale=2) + _short(4, 2)
        roots += list(itertools.product((1, -1), repeat=4))
        return roots
    if kind == "E":
        e8 = _e8_doubled()
        if rank == 8:
            return e8
        w1 = (1,) * 8
        if rank == 7:
            return [r for r in e8 if _dot(r, w1) == 0]
        w2 = (0, 0, 0, 0, 0, 0, 2, 2)
        return [r for r in e8 if _dot(r, w1) == 0 and _dot(r, w2) == 0]
    raise RootSystemError(f"unknown root system type {kind!r}")


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


_TAG = re.compile(r"^(A|B|C|D|BC|E|F|G)(\d+)$")
_VALID_EXCEPTIONAL = {("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)}
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "BC": 1}


@dataclass(frozen=True)
class RootSystem:
    type_tag: str
    rank: int
    roots: tuple = field(repr=False)

    @classmethod
    def from_tag(cls, tag: str) -> "RootSystem":
        m = _TAG.match(tag.strip().upper())
        if not m:
            raise RootSystemError(f"cannot parse root system tag {tag!r}")
        kind, rank = m.group(1), int(m.group(2))
        if kind in "EFG":
            if (kind, rank) not in _VALID_EXCEPTIONAL:
                raise RootSystemError(f"no root system of type {kind}{rank}")
            type_tag = f"{kind}{rank}"
        else:
            if rank < _MIN_RANK[kind]:
                raise RootSystemError(f"rank {rank} too small for type {kind}")
            type_tag = kind
        return cls(type_tag, rank, tuple(sorted(set(_build(kind, rank)))))

    @property
    def tag(self):
        return self.type_tag if self.type_tag[0] in "EFG" else f"{self.type_tag}{self.rank}"

    @property
    def dim(self):
        return len(self.roots[0])

    @cached_property
    def root_set(self):
        return frozenset(self.roots)

    @cached_property
    def index(self):
        return {r: i for i, r in enumerate(self.roots)}

    def __contains__(self, v):
        return tuple(v) in self.root_set

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def is_ultrashort(self, a):
        return scale(a, 2) in self.root_set

    def is_doubled(self, a):
        """True for roots of the form 2b with b a root."""
        if any(x % 2 for x in a):
            return False
        return tuple(x // 2 for x in a) in self.root_set

    def parse_root(self, text: str) -> Root:
        return parse_root(text, self.dim, self)

    def format_root(self, a) -> str:
        return format_root(a)

    @cached_property
    def _sums(self):
        # for each root i: list of (j, k) with roots[i] + roots[j] == roots[k]
        out = []
        for a in self.roots:
            row = []
            for j, b in enumerate(self.roots):
                k = self.index.get(tuple(x + y for x, y in zip(a, b)))
                if k is not None:
                    row.append((j, k))
            out.append(row)
        return out


def root_system(tag: str) -> RootSystem:
    return RootSystem.from_tag(tag)


def scale(a, c):
    return tuple(c * x for x in a)


def neg(a):
    return tuple(-x for x in a)


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def format_root(a) -> str:
    """Render a root as a signed sum of basis vectors, e.g. 'e1-e2', '2e3'."""
    parts = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}e{i + 1}")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*e(\d+)")


def parse_root(text: str, dim: int, rs: RootSystem | None = None) -> Root:
    text = text.replace(" ", "").replace("−", "-")
    pos = 0
    v = [0] * dim
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise RootSystemError(f"cannot parse root {text!r}")
        pos = m.end()
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            c = -c
        i = int(m.group(3)) - 1
        if not 0 <= i < dim:
            raise RootSystemError(f"coordinate e{i + 1} out of range in {text!r}")
        v[i] += c
    if pos != len(text) or pos == 0:
        raise RootSystemError(f"cannot parse root {text!r}")
    r = tuple(v)
    if rs is not None and r not in rs:
        raise RootSystemError(f"{text!r} is not a root of {rs.tag}")
    return r


# -- linear algebra over Q ---------------------------------------------------

def rank_of(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    return len(_echelon(rows))


def _echelon(rows):
    rows = [r[:] for r in rows if any(r)]
    basis = []
    while rows:
        r = rows.pop()
        for b, p in basis:
            if r[p]:
                f = r[p] / b[p]
                r = [x - f * y for x, y in zip(r, b)]
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is not None:
            basis.append((r, piv))
    return basis


def in_span(v, vectors) -> bool:
    return rank_of(list(vectors) + [v]) == rank_of(vectors)


def independent(a, b) -> bool:
    return rank_of([a, b]) == 2


def parallel(a, b) -> bool:
    return not independent(a, b)


# -- half-spaces -------------------------------------------------------------

def separating_functional(vectors):
    """Return an integer functional strictly positive on all vectors, or None.

    Small integer functionals are tried first; if none is found an LP
    gives a candidate which is then rounded and verified exactly.
    """
    vectors = list(vectors)
    if not vectors:
        return ()
    vecs = np.array([list(v) for v in vectors], dtype=np.int64)
    dim = vecs.shape[1]

    def ok(f):
        return bool(np.all(vecs @ np.asarray(f, dtype=np.int64) > 0))

    s = vecs.sum(axis=0)
    if ok(s):
        return tuple(int(x) for x in s)
    h = int(np.abs(vecs).max())
    for bound in sorted({1, h}):
        if (2 * bound + 1) ** dim > 200_000:
            continue
        for f in itertools.product(range(-bound, bound + 1), repeat=dim):
            if ok(f):
                return f
    return _lp_functional(vecs, ok)


def _lp_functional(vecs, ok):
    from scipy.optimize import linprog

    dim = vecs.shape[1]
    res = linprog(
        c=np.zeros(dim),
        A_ub=-vecs.astype(float),
        b_ub=-np.ones(len(vecs)),
        bounds=[(-1e3, 1e3)] * dim,
        method="highs",
    )
    if res.status != 0:
        return None
    x = res.x
    for denom in (1, 2, 4, 8, 16, 64, 256, 1024):
        f = tuple(int(round(v * denom)) for v in x)
        if ok(f):
            return f
    return None


def in_open_half_space(vectors) -> bool:
    vectors = list(vectors)
    if not vectors:
        return True
    return separating_functional(vectors) is not None


# -- subset combinatorics ----------------------------------------------------

def is_closed(rs: RootSystem, subset) -> bool:
    sub = {tuple(a) for a in subset}
    for a in sub:
        for b in sub:
            c = add(a, b)
            if c in rs.root_set and c not in sub:
                return False
    return True


def is_special_closed(rs: RootSystem, subset) -> bool:
    subset = [tuple(a) for a in subset]
    return in_open_half_space(subset) and is_closed(rs, subset)


def closure(rs: RootSystem, subset) -> frozenset:
    """Smallest special closed subset containing ``subset``."""
    sub = {tuple(a) for a in subset}
    if not in_open_half_space(sub):
        raise HalfSpaceViolation(f"{sorted(format_root(a) for a in sub)} lies in no open half-space")
    frontier = list(sub)
    while frontier:
        new = []
        for a in frontier:
            for b in list(sub):
                for c in (add(a, b), add(b, a)):
                    if c in rs.root_set and c not in sub:
                        sub.add(c)
                        new.append(c)
        frontier = new
    return frozenset(sub)


def thick_series(rs: RootSystem, a, b) -> frozenset:
    """The set of roots in R_{>0} b + R a."""
    a, b = tuple(a), tuple(b)
    if not independent(a, b):
        raise DependentRoots(f"{format_root(a)} and {format_root(b)} are dependent")
    return frozenset(c for c in rs.roots if _coeff_on(c, a, b) > 0)


def _coeff_on(c, a, b):
    """Coefficient of b when c = x a + y b, or 0 if c is outside the plane."""
    # Solve with the 2x2 Gram system; exact over Q.
    aa, ab, bb = _dot(a, a), _dot(a, b), _dot(b, b)
    ca, cb = _dot(c, a), _dot(c, b)
    det = aa * bb - ab * ab
    x = Fraction(ca * bb - cb * ab, det)
    y = Fraction(aa * cb - ab * ca, det)
    if any(x * p + y * q != r for p, q, r in zip(a, b, c)):
        return 0
    return y


def all_thick_series(rs: RootSystem, a) -> list:
    a = tuple(a)
    seen = []
    for b in rs.roots:
        if parallel(a, b):
            continue
        s = thick_series(rs, a, b)
        if s not in seen:
            seen.append(s)
    return seen


def saturated_subsystem(rs: RootSystem, subset) -> frozenset:
    span = [tuple(a) for a in subset]
    if not span:
        return frozenset()
    r = rank_of(span)
    return frozenset(c for c in rs.roots if rank_of(span + [c]) == r)


def root_decompositions(rs: RootSystem, a) -> list:
    """Unordered pairs (b, c) of independent roots with b + c = a."""
    a = tuple(a)
    out = []
    for b in rs.roots:
        c = tuple(x - y for x, y in zip(a, b))
        if c in rs.root_set and b <= c and independent(b, c):
            out.append((b, c))
    return out


def height_order(roots, functional):
    return sorted(roots, key=lambda r: (_dot(r, functional), r))


# -- positive systems and special closed subsets ----------------------------

def reflect(v, a):
    k = 2 * _dot(v, a)
    aa = _dot(a, a)
    if k % aa:
        raise RootSystemError("non-crystallographic reflection")
    return tuple(x - (k // aa) * y for x, y in zip(v, a))


def positive_systems(rs: RootSystem, limit: int = 10_000) -> list:
    """All positive systems, obtained as the Weyl orbit of one of them."""
    f = _generic_functional(rs)
    start = frozenset(r for r in rs.roots if _dot(r, f) > 0)
    seen = {start}
    queue = [start]
    reflecting = [r for r in rs.roots if not rs.is_doubled(r) and r > neg(r)]
    while queue:
        p = queue.pop()
        for a in reflecting:
            q = frozenset(reflect(r, a) for r in p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
                if len(seen) > limit:
                    raise RootSystemError("Weyl group too large to enumerate positive systems")
    return sorted(seen, key=lambda p: sorted(p))


def _generic_functional(rs):
    dim = rs.dim
    f = tuple(3 ** (dim - i) + i for i in range(dim))
    assert all(_dot(r, f) != 0 for r in rs.roots)
    return f


def special_closed_subsets(rs: RootSystem, include_empty: bool = False) -> list:
    """Every special closed subset, as frozensets, in a deterministic order."""
    idx = rs.index
    sums = rs._sums
    masks = set()
    for p in positive_systems(rs):
        members = sorted(idx[r] for r in p)
        for bits in range(1, 1 << len(members)):
            m = 0
            for t, i in enumerate(members):
                if bits >> t & 1:
                    m |= 1 << i
            masks.add(m)
    out = []
    for m in sorted(masks):
        ok = True
        i = 0
        mm = m
        while mm and ok:
            if mm & 1:
                for j, k in sums[i]:
                    if m >> j & 1 and not m >> k & 1:
                        ok = False
                        break
            mm >>= 1
            i += 1
        if ok:
            out.append(frozenset(rs.roots[i] for i in range(len(rs.roots)) if m >> i & 1))
    if include_empty:
        out.insert(0, frozenset())
    return out
