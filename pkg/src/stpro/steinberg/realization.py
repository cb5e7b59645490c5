"""Groups with commutator relations realized by matrices.

A realization supplies, for every root, a finite parameter group P_alpha
(a :class:`ParamSpace`) and a root homomorphism t_alpha into a matrix group
over Z/N, together with a coordinate reader that inverts t_alpha on
unipotent elements.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .. import modmat
from .. import oddform as of
from ..rootsys import RootSystem, root_system


class RealizationError(ValueError):
    pass


class ParamSpace:
    """A finite group of parameters with operation ∔."""

    def elements(self):
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def add(self, p, q):
        raise NotImplementedError

    def neg(self, p):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def key(self, p) -> bytes:
        raise NotImplementedError

    def contains(self, p) -> bool:
        raise NotImplementedError

    @cached_property
    def size(self):
        return len(self.all)

    @cached_property
    def all(self):
        return list(self.elements())

    def is_zero(self, p):
        return self.key(p) == self.key(self.zero())

    def sum(self, ps):
        acc = self.zero()
        for p in ps:
            acc = self.add(acc, p)
        return acc


class BlockSpace(ParamSpace):
    """Parameters that are matrices supported on a block, added entrywise."""

    def __init__(self, N, shape, mask, elements_fn, sampler_fn):
        self.N = N
        self.shape = shape
        self.mask = mask
        self._elements = elements_fn
        self._sampler = sampler_fn

    def elements(self):
        return self._elements()

    def sample(self, rng):
        return self._sampler(rng)

    def add(self, p, q):
        return (p + q) % self.N

    def neg(self, p):
        return (-p) % self.N

    def zero(self):
        return np.zeros(self.shape, dtype=np.int64)

    def key(self, p):
        return modmat.key(p)

    def contains(self, p):
        return not np.any(p * ~self.mask) and self.key(p) in self._keys

    @cached_property
    def _keys(self):
        return {self.key(p) for p in self.all}


class DeltaSpace(ParamSpace):
    """P_{e_j} (ultrashort) or P_{2e_j} inside the odd form parameter."""

    def __init__(self, O, j, double=False):
        self.O = O
        self.j = j
        self.double = double

    def elements(self):
        if self.double:
            O = self.O
            p, q = O.pos(-self.j), O.pos(self.j)
            seen = {}
            for c in range(O.N):
                u = O.phi(O.unit(p, q, c))
                seen.setdefault(u.key(), u)
            return list(seen.values())
        return of.ultrashort_params(self.O, self.j)

    def sample(self, rng):
        if self.double:
            return self.all[int(rng.integers(0, len(self.all)))]
        return of.random_ultrashort(self.O, rng, self.j)

    def add(self, p, q):
        return self.O.add(p, q)

    def neg(self, p):
        return self.O.neg(p)

    def zero(self):
        return self.O.zero()

    def key(self, p):
        return p.key()

    def contains(self, p):
        return self.key(p) in self._keys

    @cached_property
    def _keys(self):
        return {self.key(p) for p in self.all}


class Realization:
    """Common interface: rs, N, n, space(root), t(root, p), read(root, g)."""

    rs: RootSystem
    N: int
    n: int
    tag: str = "realization"

    def space(self, root) -> ParamSpace:
        raise NotImplementedError

    def t(self, root, p):
        raise NotImplementedError

    def read(self, root, g):
        raise NotImplementedError

    def inverse(self, g):
        return modmat.inverse(g, self.N)

    def one(self):
        return modmat.identity(self.n)

    def mul(self, *gs):
        return modmat.mul_all(gs, self.N, self.n)

    def conj(self, g, x):
        return self.mul(g, x, self.inverse(g))

    def comm(self, g, h):
        return self.mul(g, h, self.inverse(g), self.inverse(h))

    def t_inv(self, root, p):
        return self.t(root, self.space(root).neg(p))

    def word(self, letters):
        """Value of a list of (root, param) or (root, param, ±1) letters."""
        out = self.one()
        for letter in letters:
            root, p = letter[0], letter[1]
            e = letter[2] if len(letter) > 2 else 1
            out = (out @ (self.t(root, p) if e > 0 else self.t_inv(root, p))) % self.N
        return out

    def roots(self):
        return list(self.rs.roots)

    def reduced_roots(self):
        """Roots that are not doubles of other roots (Phi minus 2Phi)."""
        return [r for r in self.rs.roots if not self.rs.is_doubled(r)]


def linear_block(root):
    """Root e_i - e_j of A_l to the block pair (i, j), 1-based."""
    plus = [c for c, x in enumerate(root) if x == 1]
    minus = [c for c, x in enumerate(root) if x == -1]
    if len(plus) != 1 or len(minus) != 1 or sum(abs(x) for x in root) != 2:
        raise RealizationError(f"{root} is not a root of type A")
    return plus[0] + 1, minus[0] + 1


class LinearRealization(Realization):
    """G(A_l, A) = A* with t_ij(p) = 1 + p for p ∈ e_i A e_j.

    ``alg`` is anything exposing N, n, rank, mask(i, j), block_elements(i, j)
    and random_block(rng, i, j): a MatrixAlgebra or a SemidirectView.
    """

    def __init__(self, alg, rs: RootSystem | None = None):
        self.alg = alg
        self.N = alg.N
        self.n = alg.n
        self.rs = rs or root_system(f"A{alg.rank}")
        if self.rs.type_tag != "A" or self.rs.rank != alg.rank:
            raise RealizationError("the root system must be A_l with l + 1 blocks")
        self._spaces = {}
        self.tag = f"linear[{alg.tag}]"

    def space(self, root):
        root = tuple(root)
        sp = self._spaces.get(root)
        if sp is None:
            i, j = linear_block(root)
            alg = self.alg
            sp = BlockSpace(self.N, (self.n, self.n), alg.mask(i, j),
                            lambda: list(alg.block_elements(i, j)),
                            lambda rng: alg.random_block(rng, i, j))
            self._spaces[root] = sp
        return sp

    def t(self, root, p):
        return (modmat.identity(self.n) + p) % self.N

    def t_inv(self, root, p):
        return (modmat.identity(self.n) - p) % self.N

    def read(self, root, g):
        return ((g - modmat.identity(self.n)) % self.N) * self.space(root).mask


class UnitaryRealization(Realization):
    """Root elements of the odd unitary group over a split odd form algebra."""

    def __init__(self, O: of.OddFormAlgebra, F: of.HyperbolicFamily):
        self.O = O
        self.F = F
        self.N = O.N
        self.n = O.n
        self.rs = root_system(f"BC{O.rank}")
        self._spaces = {}
        self.tag = f"unitary[{O.tag}]"

    def space(self, root):
        root = tuple(root)
        sp = self._spaces.get(root)
        if sp is None:
            O = self.O
            kind = of.root_kind(root)
            if kind[0] == "pair":
                p, q = O.pos(kind[1]), O.pos(kind[2])
                mask = np.zeros((O.n, O.n), dtype=bool)
                mask[p, q] = True
                sp = BlockSpace(self.N, (O.n, O.n), mask,
                                lambda: [O.unit(p, q, c) for c in range(O.N)],
                                lambda rng: O.unit(p, q, int(rng.integers(0, O.N))))
            else:
                sp = DeltaSpace(O, kind[1], double=kind[0] == "double")
            self._spaces[root] = sp
        return sp

    def t(self, root, p):
        return of.unitary_root_element(self.O, self.F, root, p, check=False)

    def read(self, root, g):
        return of.read_root_coordinate(g, root, self.O, self.F, strict=False)

    def inverse(self, g):
        return self.O.bar(g)
