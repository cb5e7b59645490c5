"""Finite presentations of Steinberg groups and Todd-Coxeter enumeration.

Generators are x_alpha(p) for nonzero p in P_alpha.  Words are tuples of
nonzero ints (1-based, negative for inverses), as in :mod:`stpro.freegroup`.
Every relator remembers the relation family it came from, which is what
root elimination needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numba
import numpy as np

from . import freegroup as fg
from . import modmat
from .checks import CheckReport
from .rootsys import _coeff_on, format_root, independent
from .steinberg.relations import anti_parallel, extract_chevalley_maps


class Overflow(RuntimeError):
    """The coset limit was reached; retry with a larger limit."""


@dataclass
class Presentation:
    gens: list  # (root, param key) per generator
    relators: list  # words
    families: list  # per relator: ("add", a) | ("ident", a) | ("comm", a, b)
    params: dict = field(default_factory=dict)  # generator index -> parameter object
    name: str = "presentation"

    @property
    def ngens(self):
        return len(self.gens)

    def index_of(self, root, key):
        return self._lookup[(tuple(root), key)]

    @property
    def _lookup(self):
        return {g: i + 1 for i, g in enumerate(self.gens)}

    def x(self, root, key):
        """Word of x_root(p) (empty for p = 0)."""
        return (self._lookup[(tuple(root), key)],) if (tuple(root), key) in self._lookup else ()

    def stats(self):
        lengths = [len(r) for r in self.relators]
        fams = {}
        for f in self.families:
            fams[f[0]] = fams.get(f[0], 0) + 1
        return {"generators": self.ngens, "relators": len(self.relators),
                "max_relator_length": max(lengths, default=0), "families": fams}


def steinberg_presentation(real, name=None) -> Presentation:
    """Generators x_a(p), p != 0, with additivity, identification and commutator relators."""
    rs = real.rs
    roots = real.roots()
    gens, params = [], {}
    for r in roots:
        sp = real.space(r)
        for p in sp.all:
            if not sp.is_zero(p):
                gens.append((tuple(r), sp.key(p)))
                params[len(gens)] = p
    P = Presentation(gens, [], [], params, name or f"St[{real.tag}]")
    look = P._lookup

    def x(r, p):
        k = (tuple(r), real.space(r).key(p))
        return (look[k],) if k in look else ()

    rels, fams = [], []

    def add_rel(word, fam):
        w = fg.cyclic_reduce(word)
        if w:
            rels.append(w)
            fams.append(fam)

    for r in roots:
        sp = real.space(r)
        nz = [p for p in sp.all if not sp.is_zero(p)]
        for p, q in itertools.product(nz, nz):
            add_rel(fg.mul(x(r, p), x(r, q), fg.inv(x(r, sp.add(p, q)))), ("add", tuple(r)))
        if rs.is_ultrashort(r):
            r2 = tuple(2 * c for c in r)
            for p in real.space(r2).all:
                if not real.space(r2).is_zero(p):
                    add_rel(fg.mul(x(r2, p), fg.inv(x(r, p))), ("ident", tuple(r)))
    for a, b in itertools.product(roots, roots):
        if anti_parallel(a, b) or (a == b and not rs.is_ultrashort(a)):
            continue  # [x_a(p), x_a(q)] = 1 follows from additivity
        sa, sb = real.space(a), real.space(b)
        for p in sa.all:
            if sa.is_zero(p):
                continue
            for q in sb.all:
                if sb.is_zero(q):
                    continue
                terms = extract_chevalley_maps(real, a, b, p, q)
                rhs = fg.mul(*[x(c, v) for c, v in terms.items()])
                add_rel(fg.mul(fg.comm(x(a, p), x(b, q)), fg.inv(rhs)), ("comm", tuple(a), tuple(b)))
    P.relators, P.families = rels, fams
    return P


def _codirectional(b, a):
    """b = c a with c > 0."""
    if independent(a, b):
        return False
    return sum(x * y for x, y in zip(a, b)) > 0


def _in_cone(a, b, c):
    """a in R>=0 b + R>=0 c."""
    if not independent(b, c):
        return _codirectional(a, b) or _codirectional(a, c)
    y = _coeff_on(a, b, c)
    x = _coeff_on(a, c, b)
    if x == 0 and y == 0:
        return False
    # _coeff_on returns 0 both for "outside the plane" and for a zero coefficient
    back = [x * p + y * q for p, q in zip(b, c)]
    return back == list(a) and x >= 0 and y >= 0


def eliminate_root(P: Presentation, alpha) -> Presentation:
    """Drop x_b for b codirectional with alpha and the three relation families of root elimination."""
    alpha = tuple(alpha)
    rank = max(len(r) for r, _ in P.gens) if P.gens else 0
    if P.gens and len(alpha) != rank:
        raise ValueError(f"root {format_root(alpha)} has the wrong dimension")
    dropped = {i + 1 for i, (r, _) in enumerate(P.gens) if _codirectional(r, alpha)}
    keep_rel = []
    for w, fam in zip(P.relators, P.families):
        if fam[0] in ("add", "ident") and _codirectional(fam[1], alpha):
            continue
        if fam[0] == "comm" and _in_cone(alpha, fam[1], fam[2]):
            continue
        keep_rel.append((w, fam))
    renum, gens, params = {}, [], {}
    for i, g in enumerate(P.gens, 1):
        if i not in dropped:
            gens.append(g)
            renum[i] = len(gens)
            params[len(gens)] = P.params.get(i)
    rels, fams = [], []
    for w, fam in keep_rel:
        if any(abs(x) in dropped for x in w):
            raise ValueError(f"relator {fam} still mentions an eliminated generator")
        rels.append(tuple(renum[x] if x > 0 else -renum[-x] for x in w))
        fams.append(fam)
    out = Presentation(gens, rels, fams, params, f"{P.name} without {format_root(alpha)}")
    out.renumbering = renum
    return out


def glued_presentation(real, copies=1, name=None) -> Presentation:
    """Level-1 glued presentation with all k_i = 1: copies identified, cross relations added."""
    base = steinberg_presentation(real)
    g = base.ngens
    gens, rels, fams = [], [], []
    for i in range(copies):
        gens += [(r, (i, k)) for r, k in base.gens]
        shift = i * g
        for w, fam in zip(base.relators, base.families):
            rels.append(tuple(x + shift if x > 0 else x - shift for x in w))
            fams.append(fam)
    for i, j in itertools.permutations(range(copies), 2):
        for a in range(1, g + 1):
            rels.append((a + i * g, -(a + j * g)))
            fams.append(("glue", i, j))
    return Presentation(gens, rels, fams, {}, name or f"glued[{real.tag}, {copies}]")


# -- Todd-Coxeter (HLT with lookahead) ----------------------------------------

@numba.njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        n = p[c]
        p[c] = r
        c = n
    return r


@numba.njit(cache=True)
def _merge(p, queue, qlen, a, b):
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return qlen
    lo, hi = min(a, b), max(a, b)
    p[hi] = lo
    queue[qlen] = hi
    return qlen + 1


@numba.njit(cache=True)
def _coincidence(table, p, queue, a, b, ncols):
    qlen = _merge(p, queue, 0, a, b)
    i = 0
    while i < qlen:
        e = queue[i]
        i += 1
        for x in range(ncols):
            f = table[e, x]
            if f >= 0:
                xi = x ^ 1
                table[f, xi] = -1
                e1 = _rep(p, e)
                f1 = _rep(p, f)
                if table[e1, x] >= 0:
                    qlen = _merge(p, queue, qlen, f1, table[e1, x])
                elif table[f1, xi] >= 0:
                    qlen = _merge(p, queue, qlen, e1, table[f1, xi])
                else:
                    table[e1, x] = f1
                    table[f1, xi] = e1


@numba.njit(cache=True)
def _scan(table, p, queue, c, rel, ncols, define, state):
    """Scan relator rel at coset c; state = [next_free, limit]. Returns 0 ok, 1 out of space."""
    f = c
    i = 0
    b = c
    j = len(rel) - 1
    while True:
        while i <= j and table[f, rel[i]] >= 0:
            f = table[f, rel[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(table, p, queue, f, b, ncols)
            return 0
        while j >= i and table[b, rel[j] ^ 1] >= 0:
            b = table[b, rel[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(table, p, queue, f, b, ncols)
            return 0
        if i == j:
            table[f, rel[i]] = b
            table[b, rel[i] ^ 1] = f
            return 0
        if not define:
            return 0
        if state[0] >= state[1]:
            return 1
        n = state[0]
        state[0] += 1
        p[n] = n
        table[f, rel[i]] = n
        table[n, rel[i] ^ 1] = f


@numba.njit(cache=True)
def _compact(table, p, ncols, state, c):
    """Renumber live cosets in order; returns the number of live cosets before c."""
    n = state[0]
    newid = np.full(n, -1, dtype=np.int64)
    k = 0
    newc = 0
    for i in range(n):
        if p[i] == i:
            newid[i] = k
            k += 1
        if i + 1 == c:
            newc = k
    for i in range(n):
        if p[i] == i:
            for x in range(ncols):
                t = table[i, x]
                table[newid[i], x] = newid[_rep(p, t)] if t >= 0 else -1
    for i in range(k, n):
        for x in range(ncols):
            table[i, x] = -1
    for i in range(n):
        p[i] = i
    state[0] = k
    return newc


@numba.njit(cache=True)
def _lookahead(table, p, queue, rels, offs, ncols, state):
    for d in range(state[0]):
        for r in range(len(offs) - 1):
            if p[d] != d:
                break
            _scan(table, p, queue, d, rels[offs[r]:offs[r + 1]], ncols, False, state)


@numba.njit(cache=True)
def _hlt(table, p, queue, rels, offs, subs, soffs, ncols, state):
    """Returns 0 complete, 1 overflow."""
    for s in range(len(soffs) - 1):
        if _scan(table, p, queue, 0, subs[soffs[s]:soffs[s + 1]], ncols, True, state):
            return 1
    c = 0
    while c < state[0]:
        if p[c] != c:
            c += 1
            continue
        full = False
        for r in range(len(offs) - 1):
            if p[c] != c:
                break
            if _scan(table, p, queue, c, rels[offs[r]:offs[r + 1]], ncols, True, state):
                full = True
                break
        if not full and p[c] == c:
            for x in range(ncols):
                if table[c, x] < 0:
                    if state[0] >= state[1]:
                        full = True
                        break
                    n = state[0]
                    state[0] += 1
                    p[n] = n
                    table[c, x] = n
                    table[n, x ^ 1] = c
        if full:
            before = state[0]
            _lookahead(table, p, queue, rels, offs, ncols, state)
            c = _compact(table, p, ncols, state, c)
            if state[0] >= before:
                return 1
            continue
        c += 1
    return 0


def _encode(words):
    flat, offs = [], [0]
    for w in words:
        flat.extend(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w)
        offs.append(len(flat))
    return np.array(flat, dtype=np.int64), np.array(offs, dtype=np.int64)


@dataclass
class CosetTable:
    table: np.ndarray  # cosets x 2 ngens, column 2i = generator i+1, 2i+1 its inverse
    ngens: int

    @property
    def index(self):
        return len(self.table)

    def act(self, c, word):
        for x in word:
            c = int(self.table[c, 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1])
        return c

    def relators_hold(self, relators):
        return all(self.act(c, w) == c for w in relators for c in range(self.index))


def todd_coxeter(P: Presentation, subgroup=(), limit=1_000_000) -> CosetTable:
    """Coset table of the subgroup generated by the words ``subgroup``; raises Overflow."""
    ncols = 2 * P.ngens
    if ncols == 0:
        return CosetTable(np.zeros((1, 0), dtype=np.int64), 0)
    # involutory generators first, then short relators: a deterministic order that helps HLT
    rels = sorted(set(P.relators), key=lambda w: (len(w), w))
    flat, offs = _encode(rels)
    sflat, soffs = _encode([tuple(w) for w in subgroup])
    table = np.full((limit, ncols), -1, dtype=np.int64)
    p = np.arange(limit, dtype=np.int64)
    queue = np.zeros(limit, dtype=np.int64)
    state = np.array([1, limit], dtype=np.int64)
    if _hlt(table, p, queue, flat, offs, sflat, soffs, ncols, state):
        raise Overflow(f"coset limit {limit} reached")
    _compact(table, p, ncols, state, 0)
    out = CosetTable(table[: state[0]].copy(), P.ngens)
    if np.any(out.table < 0):
        raise Overflow("incomplete table")
    return out


# -- certification -------------------------------------------------------------

def _images(P: Presentation, real):
    mats = [real.t(r, P.params[i + 1]) for i, (r, _) in enumerate(P.gens)]
    invs = [real.t_inv(r, P.params[i + 1]) for i, (r, _) in enumerate(P.gens)]
    return mats, invs


def word_value(word, mats, invs, N, n):
    out = modmat.identity(n)
    for x in word:
        out = (out @ (mats[x - 1] if x > 0 else invs[-x - 1])) % N
    return out


def generated_order(mats, N, n, cap=10**6):
    """Order of the matrix group generated by mats (breadth-first closure)."""
    one = modmat.identity(n)
    seen = {modmat.key(one)}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for m in mats:
                h = (g @ m) % N
                k = modmat.key(h)
                if k not in seen:
                    seen.add(k)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise Overflow("matrix group too large")
        frontier = nxt
    return len(seen)


def certify_steinberg(P: Presentation, real, T: CosetTable, expected_order=None):
    """Hom to the realization, surjectivity, central kernel; the kernel order is reported."""
    N, n = real.N, real.n
    mats, invs = _images(P, real)
    rep = CheckReport(f"enumerate[{P.name}]", {"generators": P.ngens, "relators": len(P.relators)})
    rep.add("coset table satisfies every relator", T.relators_hold(P.relators), len(P.relators))
    hom = all(modmat.is_identity(word_value(w, mats, invs, N, n)) for w in P.relators)
    rep.add("relators vanish in the realization", hom, len(P.relators))
    image = generated_order(mats, N, n)
    if expected_order is not None:
        rep.add(f"image order {image} = {expected_order}", image == expected_order, 1)
    # images of cosets along a spanning tree; words for the kernel transversal
    img = [None] * T.index
    word = [None] * T.index
    img[0], word[0] = modmat.identity(n), ()
    order = [0]
    for c in order:
        for gi in range(P.ngens):
            for e, col in ((1, 2 * gi), (-1, 2 * gi + 1)):
                d = int(T.table[c, col])
                if img[d] is None:
                    img[d] = (img[c] @ (mats[gi] if e > 0 else invs[gi])) % N
                    word[d] = word[c] + (e * (gi + 1),)
                    order.append(d)
    consistent = all(
        modmat.equal(img[int(T.table[c, 2 * gi])], (img[c] @ mats[gi]) % N)
        for c in range(T.index) for gi in range(P.ngens))
    rep.add("coset images define a homomorphism", consistent, T.index)
    kernel = [c for c in range(T.index) if modmat.is_identity(img[c])]
    central = all(T.act(T.act(0, (gi + 1,)), word[k]) == T.act(k, (gi + 1,))
                  for k in kernel for gi in range(P.ngens))
    rep.add(f"kernel of order {len(kernel)} is central", central, len(kernel) * P.ngens)
    rep.notes.update({"order": T.index, "image_order": image, "kernel_order": len(kernel)})
    return rep


def _dictionary_for_elimination(P: Presentation, Q: Presentation, real):
    """Words in Q for every generator of P (dropped ones via a single commutator)."""
    out = {}
    for i, (r, key) in enumerate(P.gens, 1):
        if i in Q.renumbering:
            out[i] = (Q.renumbering[i],)
            continue
        p = P.params[i]
        found = None
        for j, k in itertools.product(range(1, Q.ngens + 1), repeat=2):
            b, c = Q.gens[j - 1][0], Q.gens[k - 1][0]
            if anti_parallel(b, c) or tuple(x + y for x, y in zip(b, c)) != tuple(r):
                continue
            terms = extract_chevalley_maps(real, b, c, Q.params[j], Q.params[k])
            nz = {t: v for t, v in terms.items() if not real.space(t).is_zero(v)}
            if len(nz) == 1 and tuple(r) in nz and real.space(r).key(nz[tuple(r)]) == key:
                found = fg.comm((j,), (k,))
                break
        if found is None:
            return None
        out[i] = found
    return out


def compare_presentations(P1: Presentation, P2: Presentation, via: dict, back: dict, limit=1_000_000):
    """Mutually inverse homomorphisms via generator dictionaries, certified in coset tables."""
    rep = CheckReport(f"compare[{P1.name} | {P2.name}]")
    try:
        T1 = todd_coxeter(P1, limit=limit)
        T2 = todd_coxeter(P2, limit=limit)
    except Overflow as exc:
        rep.add("enumeration", False, status="inconclusive", witness={"overflow": str(exc)})
        return rep

    def image(word, d):
        return fg.mul(*[d[x] if x > 0 else fg.inv(d[-x]) for x in word])

    rep.add("relators of P1 hold in P2", all(T2.act(0, image(w, via)) == 0 for w in P1.relators), len(P1.relators))
    rep.add("relators of P2 hold in P1", all(T1.act(0, image(w, back)) == 0 for w in P2.relators), len(P2.relators))
    rep.add("back o via = id on generators of P1",
            all(T1.act(0, image(image((i,), via), back)) == T1.act(0, (i,)) for i in range(1, P1.ngens + 1)),
            P1.ngens)
    rep.add("via o back = id on generators of P2",
            all(T2.act(0, image(image((i,), back), via)) == T2.act(0, (i,)) for i in range(1, P2.ngens + 1)),
            P2.ngens)
    rep.add(f"equal orders {T1.index} = {T2.index}", T1.index == T2.index, 1)
    rep.notes.update({"order_1": T1.index, "order_2": T2.index})
    return rep


def check_root_elimination(P: Presentation, alpha, real, limit=1_000_000):
    Q = eliminate_root(P, alpha)
    via = _dictionary_for_elimination(P, Q, real)
    if via is None:
        rep = CheckReport(f"eliminate[{format_root(alpha)}]")
        rep.add("dictionary for eliminated generators", False, status="inconclusive")
        return rep, Q
    back = {j: (i,) for i, j in Q.renumbering.items()}
    rep = compare_presentations(P, Q, via, back, limit)
    rep.notes["generators"] = (P.ngens, Q.ngens)
    rep.notes["relators"] = (len(P.relators), len(Q.relators))
    return rep, Q
