"""Words in free groups: letters are nonzero ints, -g is the inverse of g."""

from __future__ import annotations


def reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inv(word):
    return tuple(-x for x in reversed(word))


def mul(*words):
    out = []
    for w in words:
        out.extend(w)
    return reduce(out)


def conj(g, h):
    """^g h = g h g^-1."""
    return mul(g, h, inv(g))


def comm(g, h):
    """[g, h] = g h g^-1 h^-1."""
    return mul(g, h, inv(g), inv(h))


def power(g, e):
    if e < 0:
        return power(inv(g), -e)
    return mul(*([g] * e)) if e else ()


def cyclic_reduce(word):
    w = list(reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def evaluate(word, images, inverse_images, one, mul_fn):
    """Value of a word under a generator assignment (1-based letters)."""
    out = one
    for x in word:
        out = mul_fn(out, images[x - 1] if x > 0 else inverse_images[-x - 1])
    return out


def commutator_expansion(gs, hs):
    """The product expansion of [g_1 ... g_n, h_1 ... h_m] from the gluing proof.

    Factor k (from n down to 1) is ^{g_1 ... g_{k-1}}([g_k, h_1] ^{h_1}[g_k, h_2] ...).
    """
    out = ()
    for k in range(len(gs), 0, -1):
        inner = ()
        prefix = ()
        for h in hs:
            inner = mul(inner, conj(prefix, comm(gs[k - 1], h)))
            prefix = mul(prefix, h)
        out = mul(out, conj(mul(*gs[: k - 1]), inner))
    return out


def check_commutator_expansion(max_n=3, max_m=3):
    """[prod g_i, prod h_j] equals the expansion, by free reduction; returns failures."""
    bad = []
    for n in range(1, max_n + 1):
        for m in range(1, max_m + 1):
            gs = [(i,) for i in range(1, n + 1)]
            hs = [(n + j,) for j in range(1, m + 1)]
            if comm(mul(*gs), mul(*hs)) != commutator_expansion(gs, hs):
                bad.append((n, m))
    return bad
