from hypothesis import given
import pytest

from app.services.errors import InvalidParameterError, InvalidPartitionError
from app.services.partition_svc import (
    FamilyId,
    MultiplicityView,
    Partition,
    avoid_mod9_spec,
    b_spec,
    canonicalize,
    conjugate,
    distinct_even_part_count,
    f_spec,
    format_partition,
    order,
    parse_partition,
    satisfies,
    self_conjugate_spec,
    symmetric_spec,
)

from tests.strategies import partitions


@pytest.mark.parametrize(
    'raw, expected',
    (
        ([1, 5, 1], (5, 1, 1)),
        ([], ()),
        ([2, 2, 4], (4, 2, 2)),
    ),
)
def test_canonicalize(raw, expected):
    assert canonicalize(raw).parts == expected


@pytest.mark.parametrize('raw', ([0], [3, -1], [2, 1.5]))
def test_canonicalize_rejects_non_positive(raw):
    with pytest.raises(InvalidPartitionError):
        canonicalize(raw)


def test_partition_rejects_increasing_parts():
    with pytest.raises(InvalidPartitionError):
        Partition((1, 2))


def test_partition_weight_and_multiplicities():
    lam = Partition((4, 2, 2, 1, 1))
    assert lam.weight == 10
    assert lam.multiplicities.entries == ((4, 1), (2, 2), (1, 2))
    assert lam.counts() == {4: 1, 2: 2, 1: 2}
    assert Partition.from_counts({1: 2, 4: 1, 2: 2}) == lam


def test_multiplicity_view_requires_decreasing_sizes():
    with pytest.raises(InvalidPartitionError):
        MultiplicityView(((1, 2), (3, 1)))
    view = MultiplicityView.from_counts({2: 2, 1: 0})
    assert view.entries == ((2, 2),)
    assert view.multiplicity(1) == 0
    assert view.weight == 4


@pytest.mark.parametrize(
    'parts, expected',
    (
        ((3, 1), (2, 1, 1)),
        ((), ()),
        ((4, 4, 2, 2), (4, 4, 2, 2)),
        ((5, 3, 2, 1, 1), (5, 3, 2, 1, 1)),
    ),
)
def test_conjugate(parts, expected):
    assert conjugate(Partition(parts)).parts == expected


@given(partitions())
def test_conjugate_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).weight == lam.weight


@given(partitions())
def test_order_is_invariant_under_conjugation(lam):
    assert order(conjugate(lam)) == order(lam)


@pytest.mark.parametrize(
    'parts, expected',
    (
        ((5, 1, 1, 1, 1, 1), 1),
        ((3, 3, 2, 2), 2),
        ((), 0),
    ),
)
def test_order(parts, expected):
    assert order(Partition(parts)) == expected


@pytest.mark.parametrize(
    'parts, expected',
    (
        ((6, 2, 2, 1), 2),
        ((5, 3, 1), 0),
        ((4, 4, 4), 1),
    ),
)
def test_distinct_even_part_count(parts, expected):
    assert distinct_even_part_count(Partition(parts)) == expected


def test_satisfies():
    assert satisfies(Partition((5, 1)), b_spec(2, 2))
    assert not satisfies(Partition((6, 2, 1, 1, 1, 1)), f_spec(2, 1))
    assert satisfies(Partition((4, 4, 2, 2)), self_conjugate_spec())
    assert not satisfies(Partition((4, 2, 2, 1, 1)), self_conjugate_spec())
    assert satisfies(Partition((4, 2, 2, 1, 1)), symmetric_spec(2, 1))
    assert not satisfies(Partition((4, 2, 2, 1, 1)), symmetric_spec(2, 1, parity=1))


def test_f_spec_requires_exact_multiples_of_t():
    spec = f_spec(3, 2)
    assert spec.allowed_multiplicities(3, 10) == (0, 2, 4)
    assert spec.allowed_multiplicities(1, 10) == tuple(range(6))
    assert not satisfies(Partition((3, 3, 3)), spec)
    assert satisfies(Partition((3, 3, 3, 3)), spec)


def test_avoid_mod9_residues_are_closed_under_negation():
    _, residues = avoid_mod9_spec(4).forbidden_residues
    assert residues == frozenset({0, 4, 5})


@pytest.mark.parametrize(
    'builder, args',
    (
        (b_spec, (1, 2)),
        (b_spec, (3, 1)),
        (f_spec, (2, 0)),
        (symmetric_spec, (1, 0)),
        (symmetric_spec, (2, -1)),
        (avoid_mod9_spec, (9,)),
    ),
)
def test_family_builders_reject_invalid_parameters(builder, args):
    with pytest.raises(InvalidParameterError):
        builder(*args)


def test_family_id():
    family = FamilyId.of("b", {"p": 3, "k": 2, "mu": None})
    assert family.params == (("p", 3), ("k", 2))
    assert str(family) == "b(p=3,k=2)"
    assert family.spec() == b_spec(3, 2)
    with pytest.raises(InvalidParameterError, match="requiere"):
        FamilyId.of("symmetric", {"mu": 2})
    with pytest.raises(InvalidParameterError, match="desconocida"):
        FamilyId.of("nope")


@pytest.mark.parametrize(
    'text, parts',
    (
        ("4,2^2,1^2", (4, 2, 2, 1, 1)),
        ("(5,1)", (5, 1)),
        ("", ()),
        ("()", ()),
        ("3,3,1^4", (3, 3, 1, 1, 1, 1)),
    ),
)
def test_parse_partition(text, parts):
    assert parse_partition(text).parts == parts


@pytest.mark.parametrize('text', ("1,2", "a", "3^0", "0", "2,,1"))
def test_parse_partition_rejects_bad_tokens(text):
    with pytest.raises(InvalidPartitionError):
        parse_partition(text)


@given(partitions())
def test_format_then_parse(lam):
    assert parse_partition(format_partition(lam, shorthand=True)) == lam


def test_format_partition():
    lam = Partition((5, 1, 1, 1, 1, 1))
    assert format_partition(lam) == "5,1,1,1,1,1"
    assert format_partition(lam, shorthand=True) == "5,1^5"
    assert format_partition(Partition()) == "()"
