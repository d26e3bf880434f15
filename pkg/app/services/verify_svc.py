"""
Servicio de verificación.
Un suite por identidad: compara el oráculo de enumeración y el motor de
series (y las biyecciones cuando existen) y devuelve VerificationReport.
Las discrepancias nunca lanzan excepciones; quedan en el reporte.
"""
import os
import logging
from typing import Callable, Dict, List, Optional, Sequence

from .enumeration_svc import (
    DEFAULT_ENUM_CAP,
    count,
    count_fe,
    count_fo,
    corollary_fo,
    partitions_of,
)
from .errors import InvalidParameterError
from .glaisher_svc import f_to_r, phi, phi_inverse, r_to_f
from .partition_svc import (
    FamilyId,
    avoid16_even_spec,
    avoid16_odd_spec,
    avoid_mod9_spec,
    b_spec,
    c_spec,
    conjugate,
    distinct_residue_spec,
    distinct_spec,
    f_spec,
    r_spec,
    symmetric_spec,
    unrestricted_spec,
)
from .qseries_svc import (
    SERIES_ORDER,
    TruncatedSeries,
    b32_display_terms,
    b32_residue_products,
    dissect,
    euler_q1_check,
    f_parity_signed_product,
    gauss_product,
    gf,
    jacobi_product,
    jacobi_triple,
    product,
    qpoch,
    slater_even_product,
    slater_even_sum,
    slater_odd_product,
    slater_odd_sum,
    symmetric_product,
    symmetric_sum,
    theta_gauss,
    theta_pentagonal,
)
from .report_svc import ReportBuilder, VerificationReport, all_passed
from .symmetric_svc import (
    SymmetricProfile,
    classical_sylvester,
    generate_symmetric,
    generate_symmetric_by_filter,
    split_by_order_parity,
    sylvester_general,
    sylvester_general_inverse,
)

logger = logging.getLogger(__name__)

DEFAULT_BIJECTION_CAP = int(os.getenv("PARTICIONES_BIJECTION_CAP", "25"))

THEOMAIN_GRID = ((3, 2), (2, 3), (2, 4), (4, 2), (3, 4), (4, 6))
PROP1_GRID = tuple((p, t) for p in (2, 3, 4, 5) for t in (1, 2, 3))
RR1_GRID = tuple((p, ell) for p in (2, 3) for ell in (1, 2, 3, 4, 5))
COROLLARY_GRID = (1, 2, 3)
SEM1_GRID = tuple((mu, gamma) for mu in (2, 3, 4, 5, 6) for gamma in (0, 1, 2, 3, 4))
ALPHA_GRID = (2, 4, 6)
JACOBI_GRID = tuple((m, sign) for m in range(6) for sign in (1, -1))

# rangos de series por suite en verify_all
SEM1_ORDER = 200
RR1_ORDER = 200
COROLLARY_ORDER = 200
ALPHA_ORDER = 150
SEM1_ENUM_CAP = 30
Q1_ORDER = 60


def _counts(spec, n_max: int, method: str) -> List[int]:
    return [count(n, spec, method) for n in range(n_max + 1)]


def _compare_series(builder: ReportBuilder, check: str, lhs: TruncatedSeries, rhs: TruncatedSeries, start: int = 0):
    builder.compare_sequences(check, lhs.coefficients(), rhs.coefficients(), start)


def _compare_families(builder: ReportBuilder, left: FamilyId, right: FamilyId, N: int, enum_cap: int):
    """Enumeración (n <= cap), DP y series (n <= N) para dos familias equinumerosas."""
    left_spec, right_spec = left.spec(), right.spec()
    limit = min(N, enum_cap)
    builder.compare_sequences("enumeration", _counts(left_spec, limit, "enumerate"), _counts(right_spec, limit, "enumerate"))
    builder.compare_sequences("dp", _counts(left_spec, N, "dp"), _counts(right_spec, N, "dp"))
    builder.compare_sequences("series", gf(left, N).coefficients(), gf(right, N).coefficients())
    # ambos caminos deben coincidir en el solapamiento
    builder.compare_sequences("series-vs-enumeration", gf(left, N).coefficients()[:limit + 1], _counts(left_spec, limit, "enumerate"))


def verify_classical(N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP) -> List[VerificationReport]:
    """Autoprueba del motor: pentagonal, Gauss, Jacobi (m = 0..5, ambos signos) y Euler en (t, q)."""
    reports = []
    builder = ReportBuilder("pentagonal", {"N": N})
    _compare_series(builder, "sum-vs-product", theta_pentagonal(N), product(qpoch(1, 1), N=N))
    reports.append(builder.finish())

    builder = ReportBuilder("gauss", {"N": N})
    _compare_series(builder, "sum-vs-product", theta_gauss(N), gauss_product(N))
    reports.append(builder.finish())

    for m, sign in JACOBI_GRID:
        builder = ReportBuilder("jacobi", {"N": N, "m": m, "sign": sign})
        _compare_series(builder, "sum-vs-product", jacobi_triple(m, sign, N), jacobi_product(m, sign, N))
        reports.append(builder.finish())

    reports.append(euler_q1_check(min(N, Q1_ORDER)))

    builder = ReportBuilder("distinct-product", {"N": N, "enum_cap": enum_cap})
    limit = min(N, enum_cap)
    builder.compare_sequences(
        "series-vs-enumeration",
        product(qpoch(1, 1, sign=1), N=limit).coefficients(),
        _counts(distinct_spec(), limit, "enumerate"),
    )
    reports.append(builder.finish())
    return reports


def verify_theorem_main(N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """Partes distintas no divisibles por 3 contra impares repetidas a lo sumo dos veces."""
    builder = ReportBuilder("theorem-main", {"N": N})
    _compare_families(builder, FamilyId.of("b", {"p": 3, "k": 2}), FamilyId.of("c", {"k": 2, "p": 3}), N, enum_cap)
    return builder.finish()


def _check_phi(builder: ReportBuilder, p: int, k: int, bijection_cap: int):
    for n in range(bijection_cap + 1):
        source = partitions_of(n, b_spec(p, k))
        target = set(partitions_of(n, c_spec(k, p)))
        images = [phi(lam, p, k) for lam in source]
        builder.compare("phi-image", n, set(images), target)
        builder.compare("phi-injective", n, len(set(images)), len(source))
        builder.compare("phi-round-trip", n, [phi_inverse(mu, p, k) for mu in images], list(source))


def verify_theomain(N: int = SERIES_ORDER, p: int = 3, k: int = 2, enum_cap: int = DEFAULT_ENUM_CAP,
                    bijection_cap: int = DEFAULT_BIJECTION_CAP) -> VerificationReport:
    """b(n,p,k) = c(n,k,p), más la biyección phi exhaustiva para n <= bijection_cap."""
    builder = ReportBuilder("theomain", {"N": N, "p": p, "k": k})
    _compare_families(builder, FamilyId.of("b", {"p": p, "k": k}), FamilyId.of("c", {"k": k, "p": p}), N, enum_cap)
    _check_phi(builder, p, k, min(bijection_cap, N))
    return builder.finish()


def verify_prop1(N: int = SERIES_ORDER, p: int = 3, t: int = 2, enum_cap: int = DEFAULT_ENUM_CAP,
                 bijection_cap: int = DEFAULT_BIJECTION_CAP) -> VerificationReport:
    """f(n,p,t) = r(n,p) y la biyección F -> R con ida y vuelta exhaustiva."""
    builder = ReportBuilder("prop1", {"N": N, "p": p, "t": t})
    _compare_families(builder, FamilyId.of("f", {"p": p, "t": t}), FamilyId.of("r", {"k": p}), N, enum_cap)
    for n in range(min(bijection_cap, N) + 1):
        source = partitions_of(n, f_spec(p, t))
        target = partitions_of(n, r_spec(p))
        images = [f_to_r(lam, p, t) for lam in source]
        builder.compare("f-to-r-image", n, set(images), set(target))
        builder.compare("f-to-r-round-trip", n, [r_to_f(mu, p, t) for mu in images], list(source))
        builder.compare("r-to-f-round-trip", n, [f_to_r(r_to_f(mu, p, t), p, t) for mu in target], list(target))
    return builder.finish()


def verify_rr1(N: int = SERIES_ORDER, p: int = 3, ell: int = 4, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """Σ_{t=1}^{ℓ} f(n,p,t) = ℓ·r(n,p) y la divisibilidad por ℓ por un camino independiente."""
    if ell < 1:
        raise InvalidParameterError(f"ell debe ser >= 1 (ell={ell})")
    builder = ReportBuilder("rr1", {"N": N, "p": p, "ell": ell})
    total = TruncatedSeries.zero(N)
    for t in range(1, ell + 1):
        total = total + gf(FamilyId.of("f", {"p": p, "t": t}), N)
    _compare_series(builder, "series", total, gf(FamilyId.of("r", {"k": p}), N) * ell)
    remainders = [sum(count(n, f_spec(p, t), "dp") for t in range(1, ell + 1)) % ell for n in range(N + 1)]
    builder.compare_sequences("divisibility", remainders, [0] * (N + 1))
    limit = min(N, enum_cap)
    enumerated = [sum(count(n, f_spec(p, t), "enumerate") for t in range(1, ell + 1)) for n in range(limit + 1)]
    builder.compare_sequences("enumeration", enumerated, [ell * v for v in _counts(r_spec(p), limit, "enumerate")])
    return builder.finish()


def verify_corollary_fo(N: int = SERIES_ORDER, t: int = 1, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """f_o(n,t) = Σ (-1)^{j+1} d(n - 2tj²), más la serie con signo de f_e - f_o."""
    if t < 1:
        raise InvalidParameterError(f"t debe ser >= 1 (t={t})")
    builder = ReportBuilder("corollary-fo", {"N": N, "t": t})
    closed = [corollary_fo(n, t) for n in range(N + 1)]
    builder.compare_sequences("dp", [count_fo(n, t, "dp") for n in range(N + 1)], closed)
    limit = min(N, enum_cap)
    builder.compare_sequences("enumeration", [count_fo(n, t, "enumerate") for n in range(limit + 1)], closed[:limit + 1])
    signed = f_parity_signed_product(t, N)
    theta = theta_gauss(N // (2 * t)).dilate(2 * t, N)
    _compare_series(builder, "signed-product", signed, theta * gf(FamilyId.of("distinct"), N))
    builder.compare_sequences(
        "signed-counts",
        signed.coefficients(),
        [count_fe(n, t, "dp") - count_fo(n, t, "dp") for n in range(N + 1)],
    )
    return builder.finish()


def verify_rela(N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """
    3-disección de la función generadora de B(n,3,2) y las congruencias
    b(3n,3,2) ≡ c(n,4), b(3n+2,3,2) ≡ c(n,1) (mod 2).
    """
    builder = ReportBuilder("rela", {"N": N})
    full_order = 3 * N + 2
    series = gf(FamilyId.of("b", {"p": 3, "k": 2}), full_order)
    terms = b32_display_terms(full_order)
    residues = b32_residue_products(N)
    _compare_series(builder, "display-sum", terms[0] + terms[1] + terms[2], series)
    for r in range(3):
        for other in range(3):
            if other != r:
                support = dissect(terms[r], 3, other)
                _compare_series(builder, f"display-support-{r}", support, TruncatedSeries.zero(support.order))
        _compare_series(builder, f"residue-{r}", dissect(series, 3, r), residues[r])
        _compare_series(builder, f"display-{r}", dissect(terms[r], 3, r), residues[r])

    b_coeffs = series.coefficients()
    c4 = gf(FamilyId.of("avoid-mod9", {"i": 4}), N).coefficients()
    c1 = gf(FamilyId.of("avoid-mod9", {"i": 1}), N).coefficients()
    builder.compare_sequences("parity-0-series", [b_coeffs[3 * n] % 2 for n in range(N + 1)], [v % 2 for v in c4])
    builder.compare_sequences("parity-2-series", [b_coeffs[3 * n + 2] % 2 for n in range(N + 1)], [v % 2 for v in c1])

    b32 = b_spec(3, 2)
    top0 = min(N, enum_cap // 3)
    top2 = min(N, (enum_cap - 2) // 3)
    builder.compare_sequences(
        "parity-0-enumeration",
        [count(3 * n, b32, "enumerate") % 2 for n in range(top0 + 1)],
        [count(n, avoid_mod9_spec(4), "enumerate") % 2 for n in range(top0 + 1)],
    )
    builder.compare_sequences(
        "parity-2-enumeration",
        [count(3 * n + 2, b32, "enumerate") % 2 for n in range(top2 + 1)],
        [count(n, avoid_mod9_spec(1), "enumerate") % 2 for n in range(top2 + 1)],
    )
    return builder.finish()


def verify_sem1(N: int = SERIES_ORDER, mu: int = 2, gamma: int = 1, enum_cap: int = SEM1_ENUM_CAP,
                bijection_cap: int = DEFAULT_BIJECTION_CAP, roundtrip_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """g(n,μ,γ) = partes distintas ≡ 1+γ (mod μ) con parte mínima >= γ+1."""
    profile = SymmetricProfile(mu, gamma)
    builder = ReportBuilder("sem1", {"N": N, "mu": mu, "gamma": gamma})
    sym, target = symmetric_spec(mu, gamma), distinct_residue_spec(mu, gamma)
    _compare_series(builder, "sum-vs-product", symmetric_sum(mu, gamma, N), symmetric_product(mu, gamma, N))
    builder.compare_sequences("dp", _counts(sym, N, "dp"), _counts(target, N, "dp"))
    for parity in (0, 1):
        builder.compare_sequences(
            f"order-parity-{parity}",
            symmetric_sum(mu, gamma, N, parity).coefficients(),
            _counts(symmetric_spec(mu, gamma, parity), N, "dp"),
        )

    limit = min(N, enum_cap)
    for n in range(limit + 1):
        mapped = list(generate_symmetric(n, profile))
        filtered = list(generate_symmetric_by_filter(n, profile, cap=limit))
        builder.compare("generators", n, sorted(mapped, key=lambda lam: lam.parts), sorted(filtered, key=lambda lam: lam.parts))
        builder.compare("enumeration", n, len(filtered), count(n, target, "enumerate"))
        builder.compare(
            "sylvester-inverse-round-trip", n,
            [sylvester_general_inverse(sylvester_general(lam, profile), profile) for lam in filtered],
            filtered,
        )
        even, odd = split_by_order_parity(n, profile)
        builder.compare("order-parity-split", n, (even, odd), (count(n, symmetric_spec(mu, gamma, 0)), count(n, symmetric_spec(mu, gamma, 1))))

    for n in range(min(N, roundtrip_cap) + 1):
        betas = partitions_of(n, target)
        images = [sylvester_general(lam, profile) for lam in generate_symmetric(n, profile)]
        builder.compare("sylvester-round-trip", n, images, list(betas))

    if (mu, gamma) == (2, 0):
        for n in range(min(N, bijection_cap) + 1):
            selfconj = [lam for lam in partitions_of(n, unrestricted_spec()) if conjugate(lam) == lam]
            builder.compare("self-conjugate", n, list(partitions_of(n, sym)), selfconj)
            builder.compare(
                "classical-sylvester", n,
                [classical_sylvester(lam) for lam in selfconj],
                [sylvester_general(lam, profile) for lam in selfconj],
            )
    return builder.finish()


def _require_alpha(alpha: int):
    if alpha < 2 or alpha % 2:
        raise InvalidParameterError(f"alpha debe ser par y >= 2 (alpha={alpha})")


def _verify_alpha(identity: str, N: int, alpha: int, parity: int, avoid_spec, avoid_family: str,
                  enum_cap: int) -> VerificationReport:
    _require_alpha(alpha)
    mu, gamma = alpha, alpha // 2 - 1
    residue = 0 if parity == 0 else alpha // 2
    profile = SymmetricProfile(mu, gamma)
    builder = ReportBuilder(identity, {"N": N, "alpha": alpha})
    sym = symmetric_spec(mu, gamma, parity)
    series = symmetric_sum(mu, gamma, alpha * N + residue, parity)
    _compare_series(builder, "series", dissect(series, alpha, residue), gf(FamilyId.of(avoid_family), N))
    builder.compare_sequences(
        "dp",
        [count(alpha * n + residue, sym, "dp") for n in range(N + 1)],
        _counts(avoid_spec, N, "dp"),
    )
    limit = min(N, (enum_cap - residue) // alpha)
    builder.compare_sequences(
        "enumeration",
        [split_by_order_parity(alpha * n + residue, profile)[parity] for n in range(limit + 1)],
        _counts(avoid_spec, limit, "enumerate"),
    )
    return builder.finish()


def verify_s2(N: int = SERIES_ORDER, alpha: int = 2, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """g_e(αn, α, α/2-1) = partes que evitan 0, ±1, ±6, ±7, 8 (mod 16)."""
    return _verify_alpha("s2", N, alpha, 0, avoid16_even_spec(), "avoid16-even", enum_cap)


def verify_s3(N: int = SERIES_ORDER, alpha: int = 2, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """g_o(αn + α/2, α, α/2-1) = partes que evitan 0, ±2, ±3, ±5, 8 (mod 16)."""
    return _verify_alpha("s3", N, alpha, 1, avoid16_odd_spec(), "avoid16-odd", enum_cap)


def verify_slater(N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """Ambas identidades de Slater módulo 16, sus productos contra la evitación de residuos y la enumeración."""
    builder = ReportBuilder("slater", {"N": N})
    even_product, odd_product = slater_even_product(N), slater_odd_product(N)
    _compare_series(builder, "even-sum-vs-product", slater_even_sum(N), even_product)
    _compare_series(builder, "odd-sum-vs-product", slater_odd_sum(N), odd_product)
    _compare_series(builder, "even-product-vs-residues", even_product, gf(FamilyId.of("avoid16-even"), N))
    _compare_series(builder, "odd-product-vs-residues", odd_product, gf(FamilyId.of("avoid16-odd"), N))
    limit = min(N, enum_cap)
    builder.compare_sequences("even-enumeration", even_product.coefficients()[:limit + 1], _counts(avoid16_even_spec(), limit, "enumerate"))
    builder.compare_sequences("odd-enumeration", odd_product.coefficients()[:limit + 1], _counts(avoid16_odd_spec(), limit, "enumerate"))
    return builder.finish()


SUITES = ("classical", "theorem-main", "theomain", "prop1", "rr1", "corollary-fo", "rela", "sem1", "s2", "s3", "slater")


def run_suite(name: str, N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP,
              bijection_cap: int = DEFAULT_BIJECTION_CAP, params: Optional[Dict[str, int]] = None) -> List[VerificationReport]:
    """
    Ejecuta un suite por nombre.

    Sin params recorre la grilla por defecto del suite; con params ejecuta
    un único punto (p, k, t, ell, mu, gamma, alpha según el suite).

    Raises:
        InvalidParameterError: suite desconocido o parámetros inválidos
    """
    params = {key: value for key, value in (params or {}).items() if value is not None}
    logger.info(f"[VERIFY] Suite {name} (N={N}, enum_cap={enum_cap}, params={params})")
    if name == "all":
        return verify_all(N, enum_cap, bijection_cap)
    if name not in SUITES:
        raise InvalidParameterError(f"Suite desconocido '{name}'. Suites válidos: {['all', *SUITES]}")

    def grid(keys: Sequence[str], default: Sequence[tuple]) -> List[tuple]:
        missing = [key for key in keys if key not in params]
        if len(missing) == len(keys):
            return list(default)
        if missing:
            raise InvalidParameterError(
                f"El suite '{name}' requiere {list(keys)} juntos; faltan: {missing}"
            )
        return [tuple(params[key] for key in keys)]

    if name == "classical":
        return verify_classical(N, enum_cap)
    if name == "theorem-main":
        return [verify_theorem_main(N, enum_cap)]
    if name == "theomain":
        return [verify_theomain(N, p, k, enum_cap, bijection_cap) for p, k in grid(("p", "k"), THEOMAIN_GRID)]
    if name == "prop1":
        return [verify_prop1(N, p, t, enum_cap, bijection_cap) for p, t in grid(("p", "t"), PROP1_GRID)]
    if name == "rr1":
        return [verify_rr1(min(N, RR1_ORDER), p, ell, enum_cap) for p, ell in grid(("p", "ell"), RR1_GRID)]
    if name == "corollary-fo":
        return [verify_corollary_fo(min(N, COROLLARY_ORDER), t, enum_cap) for (t,) in grid(("t",), [(t,) for t in COROLLARY_GRID])]
    if name == "rela":
        return [verify_rela(N, enum_cap)]
    if name == "sem1":
        cap = min(enum_cap, SEM1_ENUM_CAP)
        return [verify_sem1(min(N, SEM1_ORDER), mu, gamma, cap, bijection_cap) for mu, gamma in grid(("mu", "gamma"), SEM1_GRID)]
    if name in ("s2", "s3"):
        runner: Callable[..., VerificationReport] = verify_s2 if name == "s2" else verify_s3
        return [runner(min(N, ALPHA_ORDER), alpha, enum_cap) for (alpha,) in grid(("alpha",), [(a,) for a in ALPHA_GRID])]
    return [verify_slater(N, enum_cap)]


def verify_all(N: int = SERIES_ORDER, enum_cap: int = DEFAULT_ENUM_CAP,
               bijection_cap: int = DEFAULT_BIJECTION_CAP) -> List[VerificationReport]:
    """Todos los suites en su grilla por defecto; la corrida pasa si todos pasan."""
    reports: List[VerificationReport] = []
    for name in SUITES:
        reports.extend(run_suite(name, N, enum_cap, bijection_cap))
    logger.info(f"[VERIFY] verify_all N={N}: {'pass' if all_passed(reports) else 'fail'} ({len(reports)} reportes)")
    return reports
