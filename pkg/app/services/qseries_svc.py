"""
Servicio de q-series truncadas.
Aritmética exacta de series de potencias en q (coeficientes: polinomios enteros
en una variable auxiliar t), productos de Pochhammer, sumas theta, funciones
generadoras de cada familia y extracción de disecciones.

Los coeficientes viven en arreglos numpy de dtype=object para conservar
enteros de precisión arbitraria. Filas = exponente de q, columnas = exponente de t.
"""
import os
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import SeriesSpecError
from .partition_svc import FamilyId
from .report_svc import ReportBuilder, VerificationReport

logger = logging.getLogger(__name__)

SERIES_ORDER = int(os.getenv("PARTICIONES_SERIES_ORDER", "300"))


def _fit(array: np.ndarray, rows: int, cols: int) -> np.ndarray:
    fitted = np.zeros((rows, cols), dtype=object)
    r = min(rows, array.shape[0])
    c = min(cols, array.shape[1])
    fitted[:r, :c] = array[:r, :c]
    return fitted


def _combine_t(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _width(t_order: Optional[int]) -> int:
    return 1 if t_order is None else t_order + 1


class TruncatedSeries:
    """
    Serie Σ c_n q^n conocida exactamente hasta q^order.

    Con t_order=None la serie no depende de t. Con t_order=T cada
    coeficiente es un polinomio en t conocido hasta t^T. Las operaciones
    entre series con truncamientos distintos trabajan al menor de ellos.
    """
    __slots__ = ("order", "t_order", "coeffs")

    def __init__(self, coeffs, order: Optional[int] = None, t_order: Optional[int] = None):
        array = np.array(coeffs, dtype=object)
        if array.ndim == 0:
            array = array.reshape(1, 1)
        elif array.ndim == 1:
            array = array.reshape(-1, 1)
        if order is None:
            order = array.shape[0] - 1
        if order < 0:
            raise SeriesSpecError(f"El orden de truncamiento debe ser >= 0 (order={order})")
        if t_order is not None and t_order < 0:
            raise SeriesSpecError(f"El orden en t debe ser >= 0 (t_order={t_order})")
        self.order = order
        self.t_order = t_order
        self.coeffs = _fit(array, order + 1, _width(t_order))
        self.coeffs.flags.writeable = False

    @classmethod
    def zero(cls, order: int, t_order: Optional[int] = None) -> "TruncatedSeries":
        return cls(np.zeros((order + 1, _width(t_order)), dtype=object), order, t_order)

    @classmethod
    def one(cls, order: int, t_order: Optional[int] = None) -> "TruncatedSeries":
        return cls.monomial(0, order, t_order=t_order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coefficient: int = 1, t_power: int = 0,
                 t_order: Optional[int] = None) -> "TruncatedSeries":
        array = np.zeros((order + 1, _width(t_order)), dtype=object)
        if exponent <= order and t_power < array.shape[1]:
            array[exponent, t_power] = coefficient
        return cls(array, order, t_order)

    @classmethod
    def from_polynomial(cls, terms: dict, order: int) -> "TruncatedSeries":
        """Polinomio en q dado como {exponente: coeficiente}."""
        array = np.zeros((order + 1, 1), dtype=object)
        for exponent, coefficient in terms.items():
            if exponent < 0:
                raise SeriesSpecError(f"Exponente negativo en q: {exponent}")
            if exponent <= order:
                array[exponent, 0] += coefficient
        return cls(array, order)

    @property
    def is_bivariate(self) -> bool:
        return self.t_order is not None

    def coefficient(self, n: int, t_power: Optional[int] = None):
        """Coeficiente de q^n (o de t^j q^n); en series bivariadas sin t_power devuelve la tupla en t."""
        if n < 0 or n > self.order:
            raise SeriesSpecError(f"q^{n} fuera del truncamiento (order={self.order})")
        if t_power is not None:
            if t_power >= self.coeffs.shape[1]:
                raise SeriesSpecError(f"t^{t_power} fuera del truncamiento (t_order={self.t_order})")
            return int(self.coeffs[n, t_power])
        if self.is_bivariate:
            return tuple(int(v) for v in self.coeffs[n])
        return int(self.coeffs[n, 0])

    def coefficients(self) -> List:
        return [self.coefficient(n) for n in range(self.order + 1)]

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order), self.t_order)

    def _align(self, other: "TruncatedSeries") -> Tuple[np.ndarray, np.ndarray, int, Optional[int]]:
        order = min(self.order, other.order)
        t_order = _combine_t(self.t_order, other.t_order)
        rows, cols = order + 1, _width(t_order)
        return _fit(self.coeffs, rows, cols), _fit(other.coeffs, rows, cols), order, t_order

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.monomial(0, self.order, other, t_order=self.t_order)
        a, b, order, t_order = self._align(other)
        return TruncatedSeries(a + b, order, t_order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.order, self.t_order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(self.coeffs * other, self.order, self.t_order)
        a, b, order, t_order = self._align(other)
        return TruncatedSeries(_convolve(a, b), order, t_order)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.order == other.order
            and self.t_order == other.t_order
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def first_mismatch(self, other: "TruncatedSeries") -> Optional[int]:
        """Menor n <= min(order) donde los coeficientes difieren, o None."""
        a, b, order, _ = self._align(other)
        for n in range(order + 1):
            if not np.array_equal(a[n], b[n]):
                return n
        return None

    def mul_factor(self, sign: int, q_power: int, t_power: int = 0, exponent: int = 1) -> "TruncatedSeries":
        """Multiplica por (1 + sign·t^t_power·q^q_power)^exponent."""
        return TruncatedSeries(_apply_factor(self.coeffs, sign, q_power, t_power, exponent), self.order, self.t_order)

    def shift(self, q_power: int, t_power: int = 0) -> "TruncatedSeries":
        """Multiplica por t^t_power·q^q_power."""
        if q_power < 0 or t_power < 0:
            raise SeriesSpecError(f"Desplazamiento negativo (q^{q_power}, t^{t_power})")
        rows, cols = self.coeffs.shape
        array = np.zeros((rows, cols), dtype=object)
        if q_power < rows and t_power < cols:
            array[q_power:, t_power:] = self.coeffs[:rows - q_power, :cols - t_power]
        return TruncatedSeries(array, self.order, self.t_order)

    def dilate(self, d: int, order: Optional[int] = None) -> "TruncatedSeries":
        """Sustituye q por q^d; por defecto el resultado es exacto hasta d·order."""
        if d < 1:
            raise SeriesSpecError(f"El factor de dilatación debe ser >= 1 (d={d})")
        order = d * self.order if order is None else order
        if order // d > self.order:
            raise SeriesSpecError(f"La serie no alcanza q^{order // d} para dilatar hasta q^{order}")
        array = np.zeros((order + 1, self.coeffs.shape[1]), dtype=object)
        array[::d] = self.coeffs[:order // d + 1]
        return TruncatedSeries(array, order, self.t_order)

    def to_json(self) -> str:
        if self.is_bivariate:
            coeffs = [[str(v) for v in row] for row in self.coeffs]
            return json.dumps({"order": self.order, "t_order": self.t_order, "coeffs": coeffs})
        return json.dumps({"order": self.order, "coeffs": [str(v) for v in self.coeffs[:, 0]]})

    def display(self, terms: Optional[int] = None) -> str:
        """Texto "1 - q - q^2 + q^5 + ... + O(q^N+1)" hasta q^terms."""
        limit = self.order if terms is None else min(self.order, terms)
        pieces = []
        for n in range(limit + 1):
            row = self.coeffs[n]
            if not any(row):
                continue
            monomial = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if self.is_bivariate:
                poly = _t_polynomial(row)
                pieces.append(("+", f"({poly})·{monomial}" if monomial else f"({poly})"))
                continue
            value = int(row[0])
            sign = "-" if value < 0 else "+"
            magnitude = abs(value)
            if not monomial:
                text = str(magnitude)
            elif magnitude == 1:
                text = monomial
            else:
                text = f"{magnitude}·{monomial}"
            pieces.append((sign, text))
        tail = f"O(q^{limit + 1})"
        if not pieces:
            return tail
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return f"{out} + {tail}"

    def __str__(self) -> str:
        return self.display(10)

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, t_order={self.t_order}, coeffs={self.coefficients()[:5]}...)"


def _t_polynomial(row) -> str:
    terms = []
    for j, value in enumerate(row):
        value = int(value)
        if value == 0:
            continue
        monomial = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
        if not monomial:
            terms.append(str(value))
        elif value == 1:
            terms.append(monomial)
        elif value == -1:
            terms.append(f"-{monomial}")
        else:
            terms.append(f"{value}·{monomial}")
    return " + ".join(terms).replace("+ -", "- ")


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows, cols = a.shape
    result = np.zeros((rows, cols), dtype=object)
    # recorre los no nulos del operando más disperso
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    for i, j in zip(*np.nonzero(a)):
        result[i:, j:] += a[i, j] * b[:rows - i, :cols - j]
    return result


def _apply_factor(coeffs: np.ndarray, sign: int, q_power: int, t_power: int, exponent: int) -> np.ndarray:
    rows, cols = coeffs.shape
    out = coeffs.copy()
    if exponent == -1 and q_power == 0 and t_power == 0:
        raise SeriesSpecError("No se puede invertir un factor sin término en q ni en t (1 ± q^0)")
    if q_power >= rows or t_power >= cols:
        return out
    if exponent == 1:
        out[q_power:, t_power:] += sign * coeffs[:rows - q_power, :cols - t_power]
        return out
    # serie geométrica: r_n = x_n - sign·r_{n-a}, por bloques ya resueltos
    if q_power > 0:
        for start in range(q_power, rows, q_power):
            stop = min(start + q_power, rows)
            out[start:stop, t_power:] -= sign * out[start - q_power:stop - q_power, :cols - t_power]
    else:
        for start in range(t_power, cols, t_power):
            stop = min(start + t_power, cols)
            out[:, start:stop] -= sign * out[:, start - t_power:stop - t_power]
    return out


def series_add(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    return x + y


def series_mul(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    return x * y


def series_neg(x: TruncatedSeries) -> TruncatedSeries:
    return -x


@dataclass(frozen=True)
class Factor:
    """
    ∏_{n} (1 + sign·t^t_power·q^{offset + step·n})^exponent, n = 0..count-1
    (count=None: producto infinito).
    """
    sign: int
    t_power: int
    offset: int
    step: int
    exponent: int = 1
    count: Optional[int] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SeriesSpecError(f"El signo debe ser ±1 (sign={self.sign})")
        if self.exponent not in (1, -1):
            raise SeriesSpecError(f"El exponente debe ser ±1 (exponent={self.exponent})")
        if self.t_power < 0 or self.offset < 0:
            raise SeriesSpecError(f"Exponentes negativos (t^{self.t_power}, q^{self.offset})")
        if self.step < 1:
            raise SeriesSpecError(f"El paso debe ser >= 1 (step={self.step})")
        if self.count is not None and self.count < 0:
            raise SeriesSpecError(f"count debe ser >= 0 (count={self.count})")
        if self.exponent == -1 and self.t_power == 0 and self.offset == 0 and self.count != 0:
            raise SeriesSpecError("Factor invertido sin término en q: (1 ± q^0)^-1")


def qpoch(offset: int, step: int, sign: int = -1, exponent: int = 1, count: Optional[int] = None) -> Factor:
    """(∓q^offset; q^step)_count elevado a exponent. sign=-1 da (q^a;q^b), sign=+1 da (-q^a;q^b)."""
    return Factor(sign=sign, t_power=0, offset=offset, step=step, exponent=exponent, count=count)


@dataclass(frozen=True)
class ProductSpec:
    factors: Tuple[Factor, ...] = ()
    scale: int = 1


def pochhammer(spec: ProductSpec, N: int, t_order: Optional[int] = None) -> TruncatedSeries:
    """
    Expande un producto de factores de Pochhammer hasta q^N.

    Los factores cuyo menor exponente de q supera N se omiten.

    Raises:
        SeriesSpecError: factores con potencia de t sobre una serie sin t
    """
    if t_order is None and any(factor.t_power for factor in spec.factors):
        raise SeriesSpecError("Factores con t requieren t_order")
    coeffs = TruncatedSeries.monomial(0, N, spec.scale, t_order=t_order).coeffs
    for factor in spec.factors:
        n = 0
        while factor.count is None or n < factor.count:
            q_power = factor.offset + factor.step * n
            if q_power > N:
                break
            coeffs = _apply_factor(coeffs, factor.sign, q_power, factor.t_power, factor.exponent)
            n += 1
    return TruncatedSeries(coeffs, N, t_order)


def product(*factors: Factor, N: int, scale: int = 1) -> TruncatedSeries:
    return pochhammer(ProductSpec(tuple(factors), scale), N)


def _require_order(N: int):
    if N < 0:
        raise SeriesSpecError(f"N debe ser >= 0 (N={N})")


def theta_pentagonal(N: int) -> TruncatedSeries:
    """1 + Σ_{n>=1} (-1)^n (q^{n(3n-1)/2} + q^{n(3n+1)/2})."""
    _require_order(N)
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    n = 1
    while n * (3 * n - 1) // 2 <= N:
        sign = -1 if n % 2 else 1
        for exponent in (n * (3 * n - 1) // 2, n * (3 * n + 1) // 2):
            if exponent <= N:
                coeffs[exponent] += sign
        n += 1
    return TruncatedSeries(coeffs, N)


def theta_gauss(N: int) -> TruncatedSeries:
    """Σ_{n ∈ Z} (-1)^n q^{n²}."""
    _require_order(N)
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    n = 1
    while n * n <= N:
        coeffs[n * n] += 2 * (-1 if n % 2 else 1)
        n += 1
    return TruncatedSeries(coeffs, N)


def gauss_product(N: int) -> TruncatedSeries:
    """∏ (1-q^n)/(1+q^n)."""
    return product(qpoch(1, 1), qpoch(1, 1, sign=1, exponent=-1), N=N)


def _check_jacobi(m: int, sign: int):
    if m < 0:
        raise SeriesSpecError(f"w = ±q^m con m < 0 produce exponentes negativos (m={m})")
    if sign not in (1, -1):
        raise SeriesSpecError(f"El signo debe ser ±1 (sign={sign})")


def jacobi_triple(m: int, sign: int, N: int) -> TruncatedSeries:
    """
    Suma bilateral Σ_{n ∈ Z} w^n q^{n(n+1)/2} con w = sign·q^m, multiplicada por
    q^{m(m+1)/2} (su menor exponente). Queda Σ_j sign^{j-m} q^{j(j+1)/2}.
    """
    _require_order(N)
    _check_jacobi(m, sign)
    coeffs = [0] * (N + 1)
    j = 0
    while j * (j + 1) // 2 <= N:
        exponent = j * (j + 1) // 2
        # j y -j-1 dan el mismo exponente
        coeffs[exponent] += sign ** ((j - m) % 2) + sign ** ((j + 1 + m) % 2)
        j += 1
    return TruncatedSeries(coeffs, N)


def jacobi_product(m: int, sign: int, N: int) -> TruncatedSeries:
    """sign^m ∏_{i=1}^{m}(1+sign·q^i) · (q;q)∞ (-sign·q^{m+1};q)∞ (-sign;q)∞, normalizado como jacobi_triple."""
    _require_order(N)
    _check_jacobi(m, sign)
    return product(
        qpoch(1, 1, sign=sign, count=m),
        qpoch(1, 1),
        qpoch(m + 1, 1, sign=sign),
        qpoch(0, 1, sign=sign),
        N=N,
        scale=sign ** m,
    )


def euler_sum(max_order: int) -> TruncatedSeries:
    """Σ_n t^n q^{n(n-1)/2} / (q;q)_n, truncada en q y en t a max_order."""
    _require_order(max_order)
    inverse = TruncatedSeries.one(max_order, max_order)
    total = TruncatedSeries.zero(max_order, max_order)
    n = 0
    while n * (n - 1) // 2 <= max_order and n <= max_order:
        if n:
            inverse = inverse.mul_factor(-1, n, exponent=-1)
        total = total + inverse.shift(n * (n - 1) // 2, n)
        n += 1
    return total


def euler_product(max_order: int) -> TruncatedSeries:
    """∏_{n>=0} (1 + t q^n)."""
    _require_order(max_order)
    spec = ProductSpec((Factor(sign=1, t_power=1, offset=0, step=1),))
    return pochhammer(spec, max_order, t_order=max_order)


def euler_q1_check(max_order: int) -> VerificationReport:
    """Compara coeficiente a coeficiente ambos lados de la identidad de Euler en (t, q)."""
    builder = ReportBuilder("q1", {"max_order": max_order})
    lhs, rhs = euler_sum(max_order), euler_product(max_order)
    builder.compare_sequences("bivariate", lhs.coefficients(), rhs.coefficients())
    return builder.finish()


def symmetric_sum(mu: int, gamma: int, N: int, parity: Optional[int] = None) -> TruncatedSeries:
    """
    Σ_n q^{μn(n-1)/2 + n(γ+1)} / (q^μ;q^μ)_n, opcionalmente solo con n de la paridad dada.

    El término n cuenta las simétricas de orden n.
    """
    _require_order(N)
    inverse = TruncatedSeries.one(N)
    total = TruncatedSeries.zero(N)
    n = 0
    while mu * n * (n - 1) // 2 + n * (gamma + 1) <= N:
        if n:
            inverse = inverse.mul_factor(-1, mu * n, exponent=-1)
        if parity is None or n % 2 == parity:
            total = total + inverse.shift(mu * n * (n - 1) // 2 + n * (gamma + 1))
        n += 1
    return total


def symmetric_product(mu: int, gamma: int, N: int) -> TruncatedSeries:
    """∏_{n>=0} (1 + q^{μn + γ + 1})."""
    return product(qpoch(gamma + 1, mu, sign=1), N=N)


def self_conjugate_sum(N: int) -> TruncatedSeries:
    """Σ_s q^{s²} / (q²;q²)_s (cuadrado de Durfee)."""
    _require_order(N)
    inverse = TruncatedSeries.one(N)
    total = TruncatedSeries.zero(N)
    s = 0
    while s * s <= N:
        if s:
            inverse = inverse.mul_factor(-1, 2 * s, exponent=-1)
        total = total + inverse.shift(s * s)
        s += 1
    return total


def slater_even_sum(N: int) -> TruncatedSeries:
    """Σ_n q^{2n²} / (q;q)_{2n}."""
    _require_order(N)
    inverse = TruncatedSeries.one(N)
    total = TruncatedSeries.zero(N)
    n = 0
    while 2 * n * n <= N:
        if n:
            inverse = inverse.mul_factor(-1, 2 * n - 1, exponent=-1).mul_factor(-1, 2 * n, exponent=-1)
        total = total + inverse.shift(2 * n * n)
        n += 1
    return total


def slater_odd_sum(N: int) -> TruncatedSeries:
    """Σ_n q^{2n(n+1)} / (q;q)_{2n+1}."""
    _require_order(N)
    inverse = TruncatedSeries.one(N).mul_factor(-1, 1, exponent=-1)
    total = TruncatedSeries.zero(N)
    n = 0
    while 2 * n * (n + 1) <= N:
        if n:
            inverse = inverse.mul_factor(-1, 2 * n, exponent=-1).mul_factor(-1, 2 * n + 1, exponent=-1)
        total = total + inverse.shift(2 * n * (n + 1))
        n += 1
    return total


def slater_even_product(N: int) -> TruncatedSeries:
    """(q^7;q^8)(q;q^8)(q^6;q^16)(q^10;q^16)(q^8;q^8) / (q;q)."""
    return product(
        qpoch(7, 8), qpoch(1, 8), qpoch(6, 16), qpoch(10, 16), qpoch(8, 8), qpoch(1, 1, exponent=-1), N=N,
    )


def slater_odd_product(N: int) -> TruncatedSeries:
    """(q^5;q^8)(q^3;q^8)(q^2;q^16)(q^14;q^16)(q^8;q^8) / (q;q)."""
    return product(
        qpoch(5, 8), qpoch(3, 8), qpoch(2, 16), qpoch(14, 16), qpoch(8, 8), qpoch(1, 1, exponent=-1), N=N,
    )


def f_parity_signed_product(t: int, N: int) -> TruncatedSeries:
    """
    ∏(1 - q^{2tn}) ∏(1 + q^{2n-1} + ... + q^{(2t-1)(2n-1)}), es decir
    (q^{2t};q^{2t})(q^{2t};q^{4t}) / (q;q²): función generadora de f_e - f_o.
    """
    if t < 1:
        raise SeriesSpecError(f"t debe ser >= 1 (t={t})")
    return product(qpoch(2 * t, 2 * t), qpoch(2 * t, 4 * t), qpoch(1, 2, exponent=-1), N=N)


def b32_display_terms(N: int) -> Tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """
    Los tres términos de la 3-disección de ∏(1+q^{3n-1})(1+q^{3n-2}), tal como se
    imprimen, en la variable q:

        (q^27;q^27)(-q^15;q^27)(-q^12;q^27)/(q^3;q^3)
        q(1+q^6)(q^27;q^27)(-q^21;q^27)(-q^33;q^27)/(q^3;q^3)
        q^2(q^27;q^27)(-q^3;q^27)(-q^24;q^27)/(q^3;q^3)
    """
    base = (qpoch(27, 27), qpoch(3, 3, exponent=-1))
    term0 = product(*base, qpoch(15, 27, sign=1), qpoch(12, 27, sign=1), N=N)
    term1 = product(*base, qpoch(21, 27, sign=1), qpoch(33, 27, sign=1), N=N)
    term1 = (term1 * TruncatedSeries.from_polynomial({0: 1, 6: 1}, N)).shift(1)
    term2 = product(*base, qpoch(3, 27, sign=1), qpoch(24, 27, sign=1), N=N).shift(2)
    return term0, term1, term2


def b32_residue_products(N: int) -> Tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """Los tres términos tras extraer q^r y reindexar q^3 -> q."""
    base = (qpoch(9, 9), qpoch(1, 1, exponent=-1))
    residue0 = product(*base, qpoch(5, 9, sign=1), qpoch(4, 9, sign=1), N=N)
    residue1 = product(*base, qpoch(7, 9, sign=1), qpoch(11, 9, sign=1), N=N)
    residue1 = residue1 * TruncatedSeries.from_polynomial({0: 1, 2: 1}, N)
    residue2 = product(*base, qpoch(1, 9, sign=1), qpoch(8, 9, sign=1), N=N)
    return residue0, residue1, residue2


def dissect(x: TruncatedSeries, d: int, r: int) -> TruncatedSeries:
    """
    Subserie Σ_n coeff(x, dn+r) q^n, truncada en ⌊(N-r)/d⌋.

    Raises:
        SeriesSpecError: d < 1, r fuera de 0..d-1 o r > N
    """
    if d < 1:
        raise SeriesSpecError(f"d debe ser >= 1 (d={d})")
    if not 0 <= r < d:
        raise SeriesSpecError(f"El residuo debe cumplir 0 <= r < d (r={r}, d={d})")
    if r > x.order:
        raise SeriesSpecError(f"El residuo supera el truncamiento (r={r}, N={x.order})")
    return TruncatedSeries(x.coeffs[r::d], (x.order - r) // d, x.t_order)


def _avoiding(modulus: int, forbidden: Sequence[int], N: int) -> TruncatedSeries:
    allowed = [r for r in range(1, modulus + 1) if r % modulus not in forbidden]
    return product(*(qpoch(r, modulus, exponent=-1) for r in allowed), N=N)


def _regular_bounded(p: int, k: int, N: int) -> TruncatedSeries:
    # ∏_{p∤n} (1-q^{kn})/(1-q^n), agrupado por residuo r mod p
    factors = []
    for r in range(1, p):
        factors.append(qpoch(k * r, k * p))
        factors.append(qpoch(r, p, exponent=-1))
    return product(*factors, N=N)


@lru_cache(maxsize=256)
def gf(family: FamilyId, N: int = SERIES_ORDER) -> TruncatedSeries:
    """
    Función generadora de una familia hasta q^N, por su forma de producto o de suma.

    Raises:
        InvalidParameterError: parámetros de familia inválidos
    """
    _require_order(N)
    spec = family.spec()  # valida parámetros
    params = family.as_dict()
    name = family.name
    logger.debug(f"[QSERIES] gf {family} hasta q^{N}")
    if name == "unrestricted":
        return product(qpoch(1, 1, exponent=-1), N=N)
    if name == "b":
        return _regular_bounded(params["p"], params["k"], N)
    if name == "c":
        return _regular_bounded(params["k"], params["p"], N)
    if name == "r":
        k = params["k"]
        return product(qpoch(k, k), qpoch(1, 1, exponent=-1), N=N)
    if name == "f":
        p, t = params["p"], params["t"]
        # partes a = pn: multiplicidades 0, t, ..., (p-1)t
        return _regular_bounded(p, p * t, N) * product(
            qpoch(p * p * t, p * p * t), qpoch(p * t, p * t, exponent=-1), N=N,
        )
    if name == "distinct":
        return product(qpoch(1, 1, sign=1), N=N)
    if name == "distinct-odd":
        return product(qpoch(1, 2, sign=1), N=N)
    if name == "self-conjugate":
        return self_conjugate_sum(N)
    if name in ("symmetric", "symmetric-even", "symmetric-odd"):
        return symmetric_sum(params["mu"], params["gamma"], N, spec.order_parity)
    if name == "distinct-residue":
        return symmetric_product(params["mu"], params["gamma"], N)
    # familias de residuos prohibidos
    modulus, forbidden = spec.forbidden_residues
    return _avoiding(modulus, sorted(forbidden), N)
