import json

import pytest

from app.services.enumeration_svc import (
    count,
    count_by_even_part_parity,
    count_fe,
    count_fo,
    count_table,
    corollary_fo,
    distinct_counts,
    enumerate_partitions,
    partitions_of,
    supports_dp,
)
from app.services.errors import InvalidParameterError
from app.services.partition_svc import (
    FamilyId,
    FAMILIES,
    Partition,
    avoid16_even_spec,
    b_spec,
    c_spec,
    distinct_odd_spec,
    distinct_spec,
    f_spec,
    r_spec,
    satisfies,
    self_conjugate_spec,
    symmetric_spec,
    unrestricted_spec,
)

# p(n) para n = 0..15
PARTITION_NUMBERS = (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176)

FAMILY_PARAMS = {
    "b": {"p": 3, "k": 2},
    "c": {"k": 2, "p": 3},
    "r": {"k": 3},
    "f": {"p": 3, "t": 2},
    "symmetric": {"mu": 3, "gamma": 1},
    "symmetric-even": {"mu": 2, "gamma": 0},
    "symmetric-odd": {"mu": 2, "gamma": 1},
    "distinct-residue": {"mu": 3, "gamma": 2},
    "avoid-mod9": {"i": 2},
}


def test_enumerate_symmetric_example():
    result = [lam.parts for lam in enumerate_partitions(10, symmetric_spec(2, 1))]
    assert result == [(5, 1, 1, 1, 1, 1), (4, 2, 2, 1, 1), (3, 3, 2, 2)]


def test_enumerate_avoid16_even_example():
    result = [lam.parts for lam in enumerate_partitions(6, avoid16_even_spec())]
    assert result == [(4, 2), (3, 3), (2, 2, 2)]


@pytest.mark.parametrize('name', sorted(set(FAMILIES) - {"symmetric-odd"}))
def test_enumerate_zero_is_empty_partition(name):
    spec = FamilyId.of(name, FAMILY_PARAMS.get(name, {})).spec()
    assert list(enumerate_partitions(0, spec)) == [Partition()]
    assert count(0, spec) == 1


def test_odd_order_family_is_empty_at_zero():
    # () tiene orden 0, que es par
    spec = FamilyId.of("symmetric-odd", FAMILY_PARAMS["symmetric-odd"]).spec()
    assert list(enumerate_partitions(0, spec)) == []
    assert count(0, spec, "dp") == 0
    assert count(0, spec, "enumerate") == 0


def test_enumerate_is_decreasing_and_unique():
    lams = list(enumerate_partitions(12, unrestricted_spec()))
    assert len(lams) == PARTITION_NUMBERS[12]
    assert len(set(lams)) == len(lams)
    assert [lam.parts for lam in lams] == sorted((lam.parts for lam in lams), reverse=True)


@pytest.mark.parametrize('name', sorted(FAMILIES))
def test_enumeration_matches_membership_filter(name):
    spec = FamilyId.of(name, FAMILY_PARAMS.get(name, {})).spec()
    for n in range(13):
        expected = [lam for lam in enumerate_partitions(n, unrestricted_spec()) if satisfies(lam, spec)]
        assert list(enumerate_partitions(n, spec)) == expected


def test_enumerate_rejects_negative_weight():
    with pytest.raises(InvalidParameterError):
        list(enumerate_partitions(-1, unrestricted_spec()))


@pytest.mark.parametrize('n', range(16))
def test_unrestricted_count(n):
    assert count(n, unrestricted_spec(), "dp") == PARTITION_NUMBERS[n]
    assert count(n, unrestricted_spec(), "enumerate") == PARTITION_NUMBERS[n]


def test_count_examples():
    assert count(6, b_spec(3, 2)) == 2
    assert count(6, c_spec(2, 3)) == 2
    assert count(12, self_conjugate_spec()) == 3
    assert count(12, distinct_odd_spec()) == 3
    assert count(10, symmetric_spec(2, 1)) == 3
    assert count(6, avoid16_even_spec()) == 3


@pytest.mark.parametrize('name', sorted(FAMILIES))
def test_dp_matches_enumeration(name):
    spec = FamilyId.of(name, FAMILY_PARAMS.get(name, {})).spec()
    assert supports_dp(spec)
    for n in range(26):
        assert count(n, spec, "dp") == count(n, spec, "enumerate")


def test_count_rejects_unknown_method():
    with pytest.raises(InvalidParameterError, match="Método"):
        count(5, unrestricted_spec(), "magic")


def test_f_equals_r():
    # f(n,p,t) = r(n,p)
    for p, t in ((2, 1), (3, 2), (2, 3)):
        for n in range(30):
            assert count(n, f_spec(p, t)) == count(n, r_spec(p))


def test_count_fo_small():
    assert count_fo(2, 1) == 1
    assert count_fe(2, 1) == 0
    assert count_fo(0, 1) == 0
    assert count_fe(0, 1) == 1


def test_even_part_parity_split_sums_to_count():
    spec = f_spec(2, 2)
    for n in range(30):
        even, odd = count_by_even_part_parity(n, spec, "dp")
        assert even + odd == count(n, spec)
        assert (even, odd) == count_by_even_part_parity(n, spec, "enumerate")


@pytest.mark.parametrize('t', (1, 2, 3))
def test_corollary_fo_matches_count(t):
    for n in range(60):
        assert corollary_fo(n, t) == count_fo(n, t)


def test_corollary_fo_edge_cases():
    assert corollary_fo(2, 1) == 1
    assert corollary_fo(3, 2) == 0
    with pytest.raises(InvalidParameterError):
        corollary_fo(5, 0)


def test_distinct_counts():
    assert distinct_counts(10) == (1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10)
    assert distinct_counts(7) == tuple(count(n, distinct_spec()) for n in range(8))


def test_partitions_of_is_cached_tuple():
    first = partitions_of(8, b_spec(3, 2))
    assert isinstance(first, tuple)
    assert partitions_of(8, b_spec(3, 2)) is first


def test_count_table_outputs():
    table = count_table(FamilyId.of("distinct"), 5)
    assert table.values == {0: 1, 1: 1, 2: 1, 3: 2, 4: 2, 5: 3}
    assert table.to_csv().splitlines() == ["n,count", "0,1", "1,1", "2,1", "3,2", "4,2", "5,3"]
    assert json.loads(table.to_json()) == {"family": "distinct", "params": {}, "counts": [1, 1, 1, 2, 2, 3]}
