import json

from hypothesis import given, settings, strategies as st
import pytest

from app.services.enumeration_svc import enumerate_partitions
from app.services.errors import ConstraintViolationError, InvalidParameterError
from app.services.glaisher_svc import (
    BijectionTrace,
    f_to_r,
    glaisher_merge,
    glaisher_split,
    phi,
    phi_inverse,
    r_to_f,
)
from app.services.partition_svc import Partition, b_spec, c_spec, f_spec, r_spec, satisfies

from tests.strategies import partitions


@pytest.mark.parametrize(
    'parts, k, expected',
    (
        ((1, 1, 1), 3, (3,)),
        ((5, 1), 2, (5, 1)),
        ((3, 3, 1, 1, 1, 1), 2, (6, 4)),
    ),
)
def test_glaisher_merge(parts, k, expected):
    assert glaisher_merge(Partition(parts), k).parts == expected


@pytest.mark.parametrize(
    'parts, k, expected',
    (
        ((3,), 3, (1, 1, 1)),
        ((6, 4), 2, (3, 3, 1, 1, 1, 1)),
        ((5, 1), 2, (5, 1)),
    ),
)
def test_glaisher_split(parts, k, expected):
    assert glaisher_split(Partition(parts), k).parts == expected


@given(partitions(), st.integers(min_value=2, max_value=5))
def test_merge_reaches_bounded_multiplicity(lam, k):
    image = glaisher_merge(lam, k)
    assert image.weight == lam.weight
    assert satisfies(image, r_spec(k))


@given(partitions(), st.integers(min_value=2, max_value=5))
def test_split_reaches_k_regular(lam, k):
    image = glaisher_split(lam, k)
    assert image.weight == lam.weight
    assert all(part % k for part in image)


@given(partitions(), st.integers(min_value=2, max_value=4))
def test_merge_and_split_are_inverse_on_their_families(lam, k):
    regular = glaisher_split(lam, k)
    bounded = glaisher_merge(lam, k)
    assert glaisher_split(glaisher_merge(regular, k), k) == regular
    assert glaisher_merge(glaisher_split(bounded, k), k) == bounded


def test_glaisher_rejects_small_modulus():
    with pytest.raises(InvalidParameterError):
        glaisher_merge(Partition((1, 1)), 1)


def test_trace_records_each_rewrite():
    trace = BijectionTrace()
    glaisher_merge(Partition((3, 3, 1, 1, 1, 1)), 2, trace)
    assert [step.rule for step in trace.steps] == ["merge2"] * 4
    assert trace.steps[0].after.parts == (6, 1, 1, 1, 1)
    assert trace.steps[-1].after.parts == (6, 4)
    assert trace.is_consistent()
    lines = [json.loads(line) for line in trace.to_jsonl().splitlines()]
    assert lines[0] == {"rule": "merge2", "before": "3,3,1,1,1,1", "after": "6,1,1,1,1"}


def test_phi_small_example():
    image = phi(Partition((5, 1)), 3, 2)
    assert satisfies(image, c_spec(2, 3))
    images = {phi(lam, 3, 2) for lam in enumerate_partitions(6, b_spec(3, 2))}
    assert images == {Partition((5, 1)), Partition((3, 3))}


@pytest.mark.parametrize('p, k', ((3, 2), (2, 3), (2, 4), (4, 2), (4, 6), (2, 2)))
def test_phi_is_bijective(p, k):
    for n in range(16):
        source = list(enumerate_partitions(n, b_spec(p, k)))
        images = [phi(lam, p, k) for lam in source]
        assert len(set(images)) == len(images)
        assert set(images) == set(enumerate_partitions(n, c_spec(k, p)))
        assert [phi_inverse(mu, p, k) for mu in images] == source


def test_phi_non_coprime_same_family_is_rank_identity():
    for lam in enumerate_partitions(12, b_spec(2, 2)):
        assert phi(lam, 2, 2) == lam


def test_phi_trace_marks_rank_fallback():
    trace = BijectionTrace()
    phi(Partition((3, 1)), 4, 6, trace)
    assert [step.rule for step in trace.steps] == ["rank"]


def test_phi_rejects_non_members():
    with pytest.raises(ConstraintViolationError):
        phi(Partition((3, 1)), 3, 2)
    with pytest.raises(ConstraintViolationError):
        phi_inverse(Partition((2,)), 3, 2)


def test_f_to_r_example():
    assert f_to_r(Partition((2, 2, 1)), 2, 2).parts == (4, 1)
    assert f_to_r(Partition(), 2, 2) == Partition()
    assert r_to_f(Partition(), 2, 2) == Partition()


@pytest.mark.parametrize('p, t', ((2, 1), (2, 2), (3, 2), (3, 1), (2, 3)))
def test_f_to_r_round_trip(p, t):
    for n in range(14):
        source = list(enumerate_partitions(n, f_spec(p, t)))
        images = [f_to_r(lam, p, t) for lam in source]
        assert all(satisfies(mu, r_spec(p)) and mu.weight == n for mu in images)
        assert len(set(images)) == len(images)
        assert [r_to_f(mu, p, t) for mu in images] == source


@settings(max_examples=50)
@given(partitions(max_part=6, max_len=6))
def test_r_to_f_lands_in_f(lam):
    mu = glaisher_merge(lam, 2)
    assert satisfies(r_to_f(mu, 2, 2), f_spec(2, 2))


def test_f_to_r_rejects_non_members():
    with pytest.raises(ConstraintViolationError):
        f_to_r(Partition((6, 2, 1, 1, 1, 1)), 2, 1)
    with pytest.raises(ConstraintViolationError):
        r_to_f(Partition((1, 1)), 2, 1)
