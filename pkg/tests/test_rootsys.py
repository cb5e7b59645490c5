import itertools

import pytest

from stpro.rootsys import (DependentRoots, HalfSpaceViolation, RootSystemError, closure, format_root,
                           is_closed, is_special_closed, parse_root, root_decompositions, root_system,
                           saturated_subsystem, special_closed_subsets, thick_series)

A3 = root_system("A3")
BC3 = root_system("BC3")


def R(text, rs=A3):
    return rs.parse_root(text)


def S(texts, rs=A3):
    return frozenset(R(t, rs) for t in texts)


@pytest.mark.parametrize("tag, count", [("A1", 2), ("A3", 12), ("B3", 18), ("C3", 18), ("BC3", 24),
                                        ("D4", 24), ("G2", 12), ("F4", 48), ("E6", 72), ("E7", 126), ("E8", 240)])
def test_root_counts(tag, count):
    rs = root_system(tag)
    assert len(rs) == count
    assert all(tuple(-x for x in r) in rs for r in rs)


def test_bad_tags():
    with pytest.raises(RootSystemError):
        root_system("E5")
    with pytest.raises(RootSystemError):
        root_system("Q3")


def test_parse_format_roundtrip():
    for r in BC3:
        assert parse_root(format_root(r), 3, BC3) == r
    assert R("e1-e2") == (1, -1, 0, 0)
    assert BC3.parse_root("2e1") == (2, 0, 0)


def test_special_closed_examples():
    assert is_special_closed(A3, S(["e1-e2", "e2-e3", "e1-e3"]))
    assert not is_special_closed(A3, S(["e1-e2", "e2-e1"]))
    assert is_special_closed(BC3, S(["e1", "2e1", "e1+e2"], BC3))


def test_closure_examples():
    assert closure(A3, S(["e1-e2", "e2-e3"])) == S(["e1-e2", "e2-e3", "e1-e3"])
    assert closure(A3, S(["e1-e2"])) == S(["e1-e2"])
    assert closure(BC3, S(["e1"], BC3)) == S(["e1", "2e1"], BC3)
    with pytest.raises(HalfSpaceViolation):
        closure(A3, S(["e1-e2", "e2-e1"]))


def test_thick_series_examples():
    assert thick_series(A3, R("e1-e2"), R("e2-e3")) == S(["e2-e3", "e1-e3"])
    assert thick_series(A3, R("e1-e2"), R("e3-e4")) == S(["e3-e4"])
    assert thick_series(BC3, R("e1-e2", BC3), R("e2", BC3)) == S(["e2", "2e2", "e1", "2e1", "e1+e2"], BC3)
    with pytest.raises(DependentRoots):
        thick_series(A3, R("e1-e2"), R("e2-e1"))


def test_thick_series_are_special_closed():
    for rs in (A3, BC3):
        for a, b in itertools.permutations(rs.roots, 2):
            try:
                T = thick_series(rs, a, b)
            except DependentRoots:
                continue
            assert is_special_closed(rs, T)


def test_saturated_subsystems():
    assert saturated_subsystem(A3, S(["e1-e2"])) == S(["e1-e2", "e2-e1"])
    assert len(saturated_subsystem(A3, S(["e1-e2", "e2-e3"]))) == 6
    bc2 = saturated_subsystem(BC3, S(["e1", "e2"], BC3))
    assert bc2 == frozenset(r for r in BC3 if r[2] == 0) and len(bc2) == 12


def test_root_decompositions():
    pairs = {frozenset(p) for p in root_decompositions(A3, R("e1-e3"))}
    assert pairs == {frozenset([R("e1-e2"), R("e2-e3")]), frozenset([R("e1-e4"), R("e4-e3")])}
    pairs = {frozenset(p) for p in root_decompositions(A3, R("e1-e2"))}
    assert pairs == {frozenset([R("e1-e3"), R("e3-e2")]), frozenset([R("e1-e4"), R("e4-e2")])}
    pairs = {frozenset(p) for p in root_decompositions(BC3, R("2e1", BC3))}
    assert frozenset([R("e1-e2", BC3), R("e1+e2", BC3)]) in pairs
    assert all(len(p) == 2 for p in pairs)  # (e1, e1) is excluded by independence


def _oracle_special_closed(rs, h=3):
    """Brute force: closed under sums, no opposite pair, strictly positive for some small functional."""
    roots = list(rs.roots)
    funcs = [f for f in itertools.product(range(-h, h + 1), repeat=rs.dim) if any(f)]
    out = 0
    for bits in range(1, 1 << len(roots)):
        sub = [r for i, r in enumerate(roots) if bits >> i & 1]
        ss = set(sub)
        if any(tuple(x + y for x, y in zip(a, b)) in rs.root_set and tuple(x + y for x, y in zip(a, b)) not in ss
               for a in sub for b in sub):
            continue
        if any(all(sum(x * y for x, y in zip(f, r)) > 0 for r in sub) for f in funcs):
            out += 1
    return out


def test_special_closed_count_matches_bruteforce_a2():
    A2 = root_system("A2")
    assert len(special_closed_subsets(A2)) == _oracle_special_closed(A2) == 18


def test_special_closed_subsets_are_closed():
    for sub in special_closed_subsets(A3):
        assert is_closed(A3, sub) and is_special_closed(A3, sub)
