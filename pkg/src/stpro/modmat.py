"""Dense integer matrices modulo N."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy


class NotInvertible(ArithmeticError):
    pass


def identity(n):
    return np.eye(n, dtype=np.int64)


def reduce(m, N):
    return np.mod(m, N)


def mul(a, b, N):
    return (a @ b) % N


def mul_all(mats, N, n=None):
    out = None
    for m in mats:
        out = m if out is None else (out @ m) % N
    if out is None:
        return identity(n)
    return out


def key(m) -> bytes:
    return np.ascontiguousarray(m, dtype=np.int64).tobytes()


def equal(a, b):
    return bool(np.array_equal(a, b))


def is_identity(m):
    return bool(np.array_equal(m, np.eye(m.shape[0], dtype=np.int64)))


def _inv_prime_power(m, p, e):
    q = p**e
    n = m.shape[0]
    a = [[int(x) % q for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] % p), None)
        if piv is None:
            raise NotInvertible("matrix is not invertible")
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], -1, q)
        a[c] = [x * inv % q for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[c])]
    return np.array([row[n:] for row in a], dtype=np.int64)


@lru_cache(maxsize=None)
def _factor(N):
    return tuple(sympy.factorint(N).items())


def inverse(m, N):
    """Inverse modulo N, computed per prime power and glued by CRT."""
    m = np.asarray(m, dtype=np.int64)
    if N == 1:
        return np.zeros_like(m)
    out = np.zeros_like(m)
    for p, e in _factor(N):
        q = p**e
        c = N // q
        w = c * pow(c, -1, q) % N
        out = (out + w * _inv_prime_power(m, p, e)) % N
    return out


def is_invertible(m, N):
    try:
        inverse(m, N)
    except NotInvertible:
        return False
    return True


def det(m, N):
    return int(sympy.Matrix(m.tolist()).det()) % N


def commutator(a, b, N, ainv=None, binv=None):
    ainv = inverse(a, N) if ainv is None else ainv
    binv = inverse(b, N) if binv is None else binv
    return mul_all([a, b, ainv, binv], N)


def conj(g, x, N, ginv=None):
    """g x g^-1."""
    ginv = inverse(g, N) if ginv is None else ginv
    return mul_all([g, x, ginv], N)


def gl_order(n, q_prime, e=1):
    """|GL_n(Z/p^e)| from the standard formula (independent of any enumeration)."""
    p = q_prime
    base = 1
    for i in range(n):
        base *= p**n - p**i
    return base * p ** ((e - 1) * n * n)
