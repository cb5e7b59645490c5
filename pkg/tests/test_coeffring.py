import itertools

import pytest

from stpro.coeffring import (BaseRing, RingError, disjoint_primes, idempotent_power, localize, meets,
                             multiplicative_set, partition_of_unity, primes, principal_ideal, unity_power)

Z12 = BaseRing.parse("z12")


def test_parse_and_order():
    assert Z12.order == 12 and Z12.is_cyclic
    assert BaseRing.parse("f2").order == 2
    assert BaseRing.parse("z4xz9").order == 36
    with pytest.raises(RingError):
        BaseRing.parse("f4")
    with pytest.raises(RingError):
        BaseRing.parse("q7")


def test_ring_arithmetic_matches_integers():
    for a, b in itertools.product(range(12), repeat=2):
        assert int(Z12(a) * Z12(b)) == a * b % 12
        assert int(Z12(a) + Z12(b)) == (a + b) % 12


def test_primes():
    assert [str(p) for p in primes(Z12)] == ["(2)xfull", "fullx(3)"]
    assert len(primes(BaseRing.parse("f2"))) == 1
    assert len(primes(BaseRing.parse("z4xz9"))) == 2
    assert all(p.is_prime() for p in primes(Z12))


@pytest.mark.parametrize("k, e, size", [(2, 4, 3), (3, 9, 4), (1, 1, 12)])
def test_localize(k, e, size):
    L = localize(Z12, k)
    assert int(idempotent_power(Z12, Z12(k))) == e
    assert int(Z12(e) * Z12(e)) == e  # idempotent oracle
    assert L.target.order == size
    # the image of k is a unit in the localization
    assert any(int(L(Z12(k)) * y) == 1 % size for y in L.target.elements())


def test_localize_composes():
    # localizing at 2 then at the image of 3 kills everything, as does localizing at 6
    L2 = localize(Z12, 2)
    L23 = localize(L2.target, L2(Z12(3)))
    assert L23.target.order == localize(Z12, 6).target.order


def test_meets():
    assert meets(multiplicative_set(Z12, 2), principal_ideal(Z12, Z12(2)))
    assert not meets(multiplicative_set(Z12, 1), principal_ideal(Z12, Z12(3)))
    assert not meets(multiplicative_set(Z12, 5), principal_ideal(Z12, Z12(3)))
    S = multiplicative_set(Z12, 2)
    assert [str(p) for p in disjoint_primes(S)] == ["fullx(3)"]


def _partition_oracle(N, s, ks, m):
    mp = unity_power(m, len(ks))
    for ts in itertools.product(range(N), repeat=len(ks)):
        if sum(pow(k, m, N) * t for k, t in zip(ks, ts)) % N == pow(s, mp, N):
            return list(ts)
    return None


def test_unity_power():
    assert [unity_power(m, 2) for m in (1, 2, 3, 4)] == [1, 3, 5, 7]
    assert unity_power(1, 1) == 1


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_partition_of_unity_matches_bruteforce(m):
    got = partition_of_unity(Z12, 1, [3, 4], m)
    assert [int(t) for t in got] == _partition_oracle(12, 1, [3, 4], m)


def test_partition_of_unity_values():
    assert [int(t) for t in partition_of_unity(Z12, 1, [3, 4], 1)] == [3, 1]
    assert [int(t) for t in partition_of_unity(Z12, 1, [3, 4], 2)] == [1, 1]
    assert partition_of_unity(Z12, 1, [2], 1) is None
    with pytest.raises(RingError):
        partition_of_unity(Z12, 1, [3, 4], 0)
