import json

from hypothesis import given, settings, strategies as st
import pytest

from app.services.enumeration_svc import count
from app.services.errors import InvalidParameterError, SeriesSpecError
from app.services.partition_svc import FAMILIES, FamilyId
from app.services.qseries_svc import (
    Factor,
    ProductSpec,
    TruncatedSeries,
    b32_display_terms,
    b32_residue_products,
    dissect,
    euler_product,
    euler_q1_check,
    euler_sum,
    f_parity_signed_product,
    gauss_product,
    gf,
    jacobi_product,
    jacobi_triple,
    pochhammer,
    product,
    qpoch,
    series_add,
    series_mul,
    series_neg,
    slater_even_product,
    slater_even_sum,
    slater_odd_product,
    slater_odd_sum,
    symmetric_product,
    symmetric_sum,
    theta_gauss,
    theta_pentagonal,
)

from tests.test_enumeration_svc import FAMILY_PARAMS

ORDER = 12
coefficient_lists = st.lists(st.integers(min_value=-20, max_value=20), min_size=ORDER + 1, max_size=ORDER + 1)


def naive_mul(a, b):
    result = [0] * len(a)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < len(a):
                result[i + j] += x * y
    return result


def test_basic_arithmetic():
    one_plus_q = TruncatedSeries.from_polynomial({0: 1, 1: 1}, 5)
    one_minus_q = TruncatedSeries.from_polynomial({0: 1, 1: -1}, 5)
    assert series_mul(one_plus_q, one_minus_q).coefficients() == [1, 0, -1, 0, 0, 0]
    assert series_add(one_plus_q, series_neg(one_plus_q)) == TruncatedSeries.zero(5)
    assert (one_plus_q + 2).coefficients() == [3, 1, 0, 0, 0, 0]
    assert (3 * one_plus_q).coefficient(1) == 3


def test_mixed_orders_truncate_to_smaller():
    a = TruncatedSeries.one(10)
    b = TruncatedSeries.monomial(2, 4)
    assert (a * b).order == 4
    assert (a + b).coefficients() == [1, 0, 1, 0, 0]


@given(coefficient_lists, coefficient_lists)
def test_multiplication_matches_naive_convolution(a, b):
    product_ = TruncatedSeries(a) * TruncatedSeries(b)
    assert product_.coefficients() == naive_mul(a, b)


@settings(max_examples=50)
@given(coefficient_lists, coefficient_lists, coefficient_lists)
def test_ring_laws(a, b, c):
    x, y, z = TruncatedSeries(a), TruncatedSeries(b), TruncatedSeries(c)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == TruncatedSeries.zero(ORDER)


def test_series_are_immutable_and_unhashable():
    x = TruncatedSeries.one(3)
    with pytest.raises(ValueError):
        x.coeffs[0, 0] = 5
    with pytest.raises(TypeError):
        hash(x)


def test_series_text_and_json():
    x = TruncatedSeries.from_polynomial({0: 1, 1: -1, 2: -1, 5: 1}, 6)
    assert json.loads(x.to_json()) == {"order": 6, "coeffs": ["1", "-1", "-1", "0", "0", "1", "0"]}
    text = x.display()
    assert text.startswith("1 - q - q^2 + q^5")
    assert "O(q^7)" in text


def test_big_coefficients_are_exact():
    p = gf(FamilyId.of("unrestricted"), 300)
    assert p.coefficient(300) == 9253082936723602
    assert p.coefficient(200) == 3972999029388


def test_pochhammer_pentagonal():
    euler = product(qpoch(1, 1), N=10)
    assert euler.coefficients() == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0]
    assert pochhammer(ProductSpec(), 4) == TruncatedSeries.one(4)


def test_inverse_factor():
    x = product(qpoch(1, 1, exponent=-1), qpoch(1, 1), N=30)
    assert x == TruncatedSeries.one(30)


def test_finite_factor_count():
    # (q;q)_2 = (1-q)(1-q^2)
    assert product(qpoch(1, 1, count=2), N=5).coefficients() == [1, -1, -1, 1, 0, 0]


@pytest.mark.parametrize(
    'kwargs',
    (
        {"sign": 2, "t_power": 0, "offset": 1, "step": 1},
        {"sign": 1, "t_power": 0, "offset": 1, "step": 0},
        {"sign": 1, "t_power": 0, "offset": 1, "step": 1, "exponent": 2},
        {"sign": -1, "t_power": 0, "offset": 0, "step": 1, "exponent": -1},
    ),
)
def test_factor_validation(kwargs):
    with pytest.raises(SeriesSpecError):
        Factor(**kwargs)


def test_t_factors_require_t_order():
    with pytest.raises(SeriesSpecError):
        pochhammer(ProductSpec((Factor(1, 1, 0, 1),)), 5)


def test_theta_identities():
    N = 300
    assert theta_pentagonal(N) == product(qpoch(1, 1), N=N)
    assert theta_gauss(N) == gauss_product(N)


@pytest.mark.parametrize('m', range(6))
@pytest.mark.parametrize('sign', (1, -1))
def test_jacobi_triple_product(m, sign):
    assert jacobi_triple(m, sign, 150) == jacobi_product(m, sign, 150)


def test_jacobi_rejects_bad_arguments():
    with pytest.raises(SeriesSpecError):
        jacobi_triple(-1, 1, 10)
    with pytest.raises(SeriesSpecError):
        jacobi_triple(0, 2, 10)


def test_euler_bivariate():
    lhs, rhs = euler_sum(20), euler_product(20)
    assert lhs == rhs
    # una sola parte: coeficiente de t q^n es 1
    assert all(rhs.coefficient(n, 1) == 1 for n in range(21))
    report = euler_q1_check(30)
    assert report.passed
    assert report.identity_id == "q1"


def test_symmetric_sum_equals_product():
    for mu in range(2, 5):
        for gamma in range(3):
            assert symmetric_sum(mu, gamma, 120) == symmetric_product(mu, gamma, 120)


def test_symmetric_sum_parity_split():
    total = symmetric_sum(2, 1, 80)
    assert symmetric_sum(2, 1, 80, parity=0) + symmetric_sum(2, 1, 80, parity=1) == total
    assert total.coefficient(10) == 3


def test_slater_identities():
    assert slater_even_sum(200) == slater_even_product(200)
    assert slater_odd_sum(200) == slater_odd_product(200)


@pytest.mark.parametrize('name', sorted(FAMILIES))
def test_gf_matches_enumeration(name):
    family = FamilyId.of(name, FAMILY_PARAMS.get(name, {}))
    series = gf(family, 30)
    spec = family.spec()
    assert series.coefficients() == [count(n, spec, "enumerate") for n in range(31)]


def test_gf_examples():
    assert gf(FamilyId.of("b", {"p": 3, "k": 2}), 20).coefficient(6) == 2
    assert gf(FamilyId.of("symmetric", {"mu": 2, "gamma": 1}), 20).coefficient(10) == 3


def test_gf_rejects_invalid_parameters():
    with pytest.raises(InvalidParameterError):
        gf(FamilyId("b", (("p", 1), ("k", 2))), 10)


def test_dissect_examples():
    one = TruncatedSeries.one(30)
    assert dissect(one, 3, 0) == TruncatedSeries.one(10)
    assert dissect(one, 3, 1) == TruncatedSeries.zero(9)
    x = gf(FamilyId.of("unrestricted"), 20)
    assert dissect(x, 1, 0) == x
    assert dissect(x, 4, 3).coefficients() == [x.coefficient(n) for n in (3, 7, 11, 15, 19)]


@pytest.mark.parametrize('d, r', ((0, 0), (3, 3), (3, -1)))
def test_dissect_rejects_bad_residues(d, r):
    with pytest.raises(SeriesSpecError):
        dissect(TruncatedSeries.one(10), d, r)


def test_dissections_reassemble():
    x = gf(FamilyId.of("b", {"p": 3, "k": 2}), 60)
    total = TruncatedSeries.zero(60)
    for r in range(3):
        part = dissect(x, 3, r)
        padded = TruncatedSeries(part.dilate(3).coeffs, 60)
        total = total + padded.shift(r)
    assert total == x


def test_b32_residue_products_match_dissection():
    x = gf(FamilyId.of("b", {"p": 3, "k": 2}), 3 * 60 + 2)
    for r, expected in enumerate(b32_residue_products(60)):
        assert dissect(x, 3, r).truncate(60) == expected


def test_b32_display_terms_sum_to_gf():
    x = gf(FamilyId.of("b", {"p": 3, "k": 2}), 90)
    term0, term1, term2 = b32_display_terms(90)
    assert term0 + term1 + term2 == x


def test_signed_parity_product():
    from app.services.enumeration_svc import count_fe, count_fo

    for t in (1, 2):
        signed = f_parity_signed_product(t, 60)
        assert signed.coefficients() == [count_fe(n, t) - count_fo(n, t) for n in range(61)]
