"""Chevalley commutator maps, Steinberg relations, product-map injectivity."""

from __future__ import annotations

import itertools
import numpy as np

from .. import modmat
from ..checks import CheckReport, Identity, run_identities
from ..rootsys import format_root, parallel, special_closed_subsets
from .realization import Realization


class ResidueNonzero(ArithmeticError):
    pass


def anti_parallel(a, b):
    if not parallel(a, b):
        return False
    return sum(x * y for x, y in zip(a, b)) < 0


def commutator_terms(rs, a, b):
    """(i, j, root) with i a + j b a root and i, j > 0, ordered by (i + j, i)."""
    a, b = tuple(a), tuple(b)
    out = []
    if parallel(a, b):
        # only 2a can arise, from a = b ultrashort
        if a == b and rs.is_ultrashort(a):
            out.append((1, 1, tuple(2 * x for x in a)))
        return out
    for i in range(1, 4):
        for j in range(1, 4):
            c = tuple(i * x + j * y for x, y in zip(a, b))
            if c in rs.root_set:
                out.append((i, j, c))
    out.sort(key=lambda t: (t[0] + t[1], t[0]))
    return out


def extract_chevalley_maps(real: Realization, a, b, p, q):
    """Peel [t_a(p), t_b(q)] into root factors; returns {root: param} in order."""
    a, b = tuple(a), tuple(b)
    if anti_parallel(a, b):
        raise ValueError(f"{format_root(a)} and {format_root(b)} are anti-parallel")
    g = real.comm(real.t(a, p), real.t(b, q))
    out = {}
    for _i, _j, c in commutator_terms(real.rs, a, b):
        v = real.read(c, g)
        out[c] = v
        g = real.mul(real.t_inv(c, v), g)
    if not modmat.is_identity(g):
        raise ResidueNonzero(f"nonzero remainder after peeling [{format_root(a)}, {format_root(b)}]")
    return out


def remultiply(real, terms):
    return real.word([(c, v) for c, v in terms.items()])


def _pairs(real):
    roots = real.roots()
    return [(a, b) for a in roots for b in roots if not anti_parallel(a, b)]


def check_steinberg_relations(real: Realization, seed=0, budget=1000, exhaustive_cap=50_000):
    """Additivity, P_2a ≤ P_a with t_2a = t_a, and the commutator formula."""
    rs = real.rs
    eq = modmat.equal
    roots = real.roots()
    sizes = {r: real.space(r).size for r in roots}

    def add_cases():
        for r in roots:
            sp = real.space(r)
            for p, q in itertools.product(sp.all, repeat=2):
                yield (r, p, q)

    def add_sampler(rng):
        r = roots[int(rng.integers(0, len(roots)))]
        sp = real.space(r)
        return (r, sp.sample(rng), sp.sample(rng))

    def additive(r, p, q):
        sp = real.space(r)
        return eq(real.mul(real.t(r, p), real.t(r, q)), real.t(r, sp.add(p, q)))

    n_add = sum(s * s for s in sizes.values())
    ultra = [r for r in roots if rs.is_ultrashort(r)]

    def ident_cases():
        for r in ultra:
            r2 = tuple(2 * x for x in r)
            for p in real.space(r2).all:
                yield (r, p)

    def identified(r, p):
        r2 = tuple(2 * x for x in r)
        return real.space(r).contains(p) and eq(real.t(r2, p), real.t(r, p))

    pairs = _pairs(real)

    def comm_cases():
        for a, b in pairs:
            for p in real.space(a).all:
                for q in real.space(b).all:
                    yield (a, b, p, q)

    def comm_sampler(rng):
        a, b = pairs[int(rng.integers(0, len(pairs)))]
        return (a, b, real.space(a).sample(rng), real.space(b).sample(rng))

    def chevalley(a, b, p, q):
        try:
            terms = extract_chevalley_maps(real, a, b, p, q)
        except ResidueNonzero as exc:
            return False, str(exc)
        for c, v in terms.items():
            if not real.space(c).contains(v):
                return False, f"f value outside P_{format_root(c)}"
        return eq(remultiply(real, terms), real.comm(real.t(a, p), real.t(b, q)))

    def zero_is_one(r):
        return modmat.is_identity(real.t(r, real.space(r).zero()))

    n_comm = sum(sizes[a] * sizes[b] for a, b in pairs)
    ids = [
        Identity("t(0) = 1", zero_is_one, lambda: [(r,) for r in roots]),
        Identity("x(p)x(q) = x(p + q)", additive, add_cases if n_add <= exhaustive_cap else None, add_sampler),
        Identity("P_2a ≤ P_a and x_2a(p) = x_a(p)", identified, ident_cases),
        Identity("commutator formula", chevalley, comm_cases if n_comm <= exhaustive_cap else None, comm_sampler),
    ]
    return run_identities(f"steinberg[{real.tag}]", ids, seed, budget)


def check_chevalley_extraction(real: Realization, seed=0, budget=1000, exhaustive_cap=50_000):
    """Zero residue for every non-anti-parallel pair; linear case also against p q - q p."""
    pairs = _pairs(real)
    linear = hasattr(real, "alg")
    N = real.N

    def cases():
        for a, b in pairs:
            for p in real.space(a).all:
                for q in real.space(b).all:
                    yield (a, b, p, q)

    def sampler(rng):
        a, b = pairs[int(rng.integers(0, len(pairs)))]
        return (a, b, real.space(a).sample(rng), real.space(b).sample(rng))

    def residue(a, b, p, q):
        try:
            extract_chevalley_maps(real, a, b, p, q)
        except ResidueNonzero as exc:
            return False, str(exc)
        return True

    def oracle(a, b, p, q):
        terms = extract_chevalley_maps(real, a, b, p, q)
        c = tuple(x + y for x, y in zip(a, b))
        # for orthogonal blocks one of pq, qp vanishes; the commutator is 1 + pq - qp
        expected = (p @ q - q @ p) % N
        if c in real.rs.root_set:
            return modmat.equal(terms[c], expected)
        return not terms and not expected.any()

    adjacent = [(a, b) for a, b in pairs if tuple(x + y for x, y in zip(a, b)) in real.rs.root_set]

    def bi_cases():
        for a, b in adjacent:
            P, Q = real.space(a).all, real.space(b).all
            for p, p2, q in itertools.product(P, P, Q):
                yield (a, b, p, p2, q)

    def bi_sampler(rng):
        a, b = adjacent[int(rng.integers(0, len(adjacent)))]
        sa, sb = real.space(a), real.space(b)
        return (a, b, sa.sample(rng), sa.sample(rng), sb.sample(rng))

    def biadditive(a, b, p, p2, q):
        c = tuple(x + y for x, y in zip(a, b))

        def f(x, y):
            return extract_chevalley_maps(real, a, b, x, y)[c]

        return modmat.equal(f((p + p2) % N, q), (f(p, q) + f(p2, q)) % N) and modmat.equal(
            f(p, (q + q) % N), (2 * f(p, q)) % N)

    total = sum(real.space(a).size * real.space(b).size for a, b in pairs)
    ex = cases if total <= exhaustive_cap else None
    ids = [Identity("zero residue after peeling", residue, ex, sampler)]
    if linear:
        ids.append(Identity("f(p, q) = pq matches the matrix oracle", oracle, ex, sampler))
        n_bi = sum(real.space(a).size ** 2 * real.space(b).size for a, b in adjacent)
        ids.append(Identity("f bi-additive", biadditive, bi_cases if n_bi <= exhaustive_cap else None, bi_sampler))
    return run_identities(f"chevalley[{real.tag}]", ids, seed, budget)


# -- product-map injectivity --------------------------------------------------

def _product_roots(rs, sigma):
    s = set(sigma)
    return sorted(r for r in s if not (rs.is_doubled(r) and tuple(x // 2 for x in r) in s))


def _all_products(real, roots):
    N, n = real.N, real.n
    prods = modmat.identity(n)[None]
    for r in roots:
        ts = np.stack([real.t(r, p) for p in real.space(r).all])
        prods = (prods[:, None] @ ts[None]) % N
        prods = prods.reshape(-1, n, n)
    return prods


def check_product_injectivity(real: Realization, subsets=None, seed=0, samples=10_000, exhaustive_cap=4096):
    """For each special closed Sigma: the product of P_a over Sigma minus 2Sigma is injective."""
    rs = real.rs
    if subsets is None:
        subsets = special_closed_subsets(rs)
    report = CheckReport(f"injectivity[{real.tag}]", {"subsets": len(subsets)})
    n_ex = n_samp = 0
    witness = None
    for sigma in subsets:
        roots = _product_roots(rs, sigma)
        total = 1
        for r in roots:
            total *= real.space(r).size
        if total <= exhaustive_cap:
            n_ex += 1
            prods = _all_products(real, roots)
            flat = prods.reshape(len(prods), -1)
            if len(np.unique(flat, axis=0)) != len(flat):
                witness = {"subset": [format_root(r) for r in roots], "mode": "exhaustive"}
                break
        else:
            n_samp += 1
            rng = np.random.default_rng([seed, len(roots), n_samp])
            seen = {}
            for _ in range(samples):
                ps = [real.space(r).sample(rng) for r in roots]
                tkey = b"".join(real.space(r).key(p) for r, p in zip(roots, ps))
                g = real.word(list(zip(roots, ps)))
                k = modmat.key(g)
                if seen.setdefault(k, tkey) != tkey:
                    witness = {"subset": [format_root(r) for r in roots], "mode": "sampled"}
                    break
            if witness:
                break
    report.add("product map injective", witness is None, cases=n_ex + n_samp,
               mode=f"{n_ex} exhaustive, {n_samp} sampled", witness=witness)
    return report
