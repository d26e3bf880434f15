"""
Servicio de enumeración y conteo de particiones.
Genera todas las particiones de n que cumplen un ConstraintSpec (oráculo de
fuerza bruta) y cuenta por programación dinámica acotada (camino rápido).
"""
import io
import os
import csv
import json
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .errors import InvalidParameterError
from .partition_svc import (
    ConstraintSpec,
    FamilyId,
    Partition,
    distinct_even_part_count,
    distinct_spec,
    f_spec,
    satisfies,
)

logger = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = int(os.getenv("PARTICIONES_ENUM_CAP", "40"))

COUNT_METHODS = ("auto", "enumerate", "dp")

# Las tablas de DP se calculan en bloques de este tamaño y se reutilizan
_TABLE_BLOCK = 100


def _table_size(n: int) -> int:
    return max(_TABLE_BLOCK, -(-n // _TABLE_BLOCK) * _TABLE_BLOCK)


def _local_part(spec: ConstraintSpec) -> ConstraintSpec:
    return replace(spec, self_conjugate=False, symmetric=None, order_parity=None)


@lru_cache(maxsize=256)
def _reachability(n: int, spec: ConstraintSpec) -> Tuple[Tuple[bool, ...], ...]:
    """reach[a][r]: r se puede formar con partes <= a bajo las cláusulas locales."""
    rows = [tuple(r == 0 for r in range(n + 1))]
    for part in range(1, n + 1):
        previous = rows[-1]
        row = list(previous)
        for mult in spec.allowed_multiplicities(part, n // part)[1:]:
            shift = part * mult
            for r in range(shift, n + 1):
                if previous[r - shift]:
                    row[r] = True
        rows.append(tuple(row))
    return tuple(rows)


def _generate(remaining: int, max_part: int, spec: ConstraintSpec, reach, prefix: List[int]) -> Iterator[Tuple[int, ...]]:
    if remaining == 0:
        yield tuple(prefix)
        return
    for part in range(min(remaining, max_part), 0, -1):
        if not reach[part][remaining]:
            return
        mults = spec.allowed_multiplicities(part, remaining // part)
        for mult in reversed(mults):
            if mult == 0:
                continue
            rest = remaining - part * mult
            if not reach[part - 1][rest]:
                continue
            prefix.extend([part] * mult)
            yield from _generate(rest, part - 1, spec, reach, prefix)
            del prefix[-mult:]


def enumerate_partitions(n: int, spec: ConstraintSpec) -> Iterator[Partition]:
    """
    Genera cada partición de n que cumple spec exactamente una vez.

    El orden es lexicográfico decreciente sobre la lista de partes. Las
    cláusulas locales podan la búsqueda; las globales filtran al final.

    Args:
        n: peso (>= 0)
        spec: familia

    Returns:
        Iterador finito de Partition
    """
    if n < 0:
        raise InvalidParameterError(f"n debe ser >= 0 (n={n})")
    logger.debug(f"[ENUM] Enumerando n={n} en {spec.describe()}")
    local = _local_part(spec)
    stream = (Partition(parts) for parts in _generate(n, n, local, _reachability(n, local), []))
    if spec.is_local:
        return stream
    return (lam for lam in stream if satisfies(lam, spec))


def _enumerated_count(n: int, spec: ConstraintSpec) -> int:
    if not spec.is_local:
        return sum(1 for _ in enumerate_partitions(n, spec))
    # las familias locales se cuentan sin construir Partition
    return sum(1 for _ in _generate(n, n, spec, _reachability(n, spec), []))


@lru_cache(maxsize=512)
def partitions_of(n: int, spec: ConstraintSpec) -> Tuple[Partition, ...]:
    """Lista materializada (y cacheada) de enumerate_partitions, usada por las biyecciones por rango."""
    return tuple(enumerate_partitions(n, spec))


@lru_cache(maxsize=256)
def _local_count_table(spec: ConstraintSpec, size: int) -> Tuple[int, ...]:
    """Coeficientes de ∏_a Σ_{m permitido} q^{am} hasta q^size (DP sobre tamaños de parte)."""
    table = np.zeros(size + 1, dtype=object)
    table[0] = 1
    for part in range(1, size + 1):
        mults = spec.allowed_multiplicities(part, size // part)
        if len(mults) == 1:
            continue
        updated = table.copy()
        for mult in mults[1:]:
            shift = part * mult
            updated[shift:] += table[:size + 1 - shift]
        table = updated
    return tuple(int(value) for value in table)


@lru_cache(maxsize=256)
def _bounded_part_table(max_part: int, size: int) -> Tuple[int, ...]:
    """Número de particiones de m con partes <= max_part, para m <= size."""
    table = np.zeros(size + 1, dtype=object)
    table[0] = 1
    for part in range(1, max_part + 1):
        # 1/(1-q^part): recorrido ascendente por bloques
        for start in range(part, size + 1, part):
            stop = min(start + part, size + 1)
            table[start:stop] += table[start - part:stop - part]
    return tuple(int(value) for value in table)


def _bounded(max_part: int, m: int) -> int:
    if m < 0:
        return 0
    return _bounded_part_table(max_part, _table_size(m))[m]


def _self_conjugate_dp(n: int) -> int:
    # cuadrado de Durfee s×s más un brazo con a lo sumo s filas, reflejado
    total = 0
    s = 0
    while s * s <= n:
        rest = n - s * s
        if rest % 2 == 0:
            total += _bounded(s, rest // 2)
        s += 1
    return total


def _symmetric_dp(n: int, mu: int, gamma: int, parity) -> int:
    # |λ| = μΣλ_i − (μ−1)s² + sγ + (μ−2)s(s−1)/2 con cabeza λ_1 >= ... >= λ_s >= s
    total = 0
    s = 0
    while s * s <= n:
        if parity is None or s % 2 == parity:
            numerator = n + (mu - 1) * s * s - s * gamma - (mu - 2) * s * (s - 1) // 2
            if numerator % mu == 0:
                total += _bounded(s, numerator // mu - s * s)
        s += 1
    return total


def supports_dp(spec: ConstraintSpec) -> bool:
    """Indica si existe un camino de DP para la familia."""
    if spec.is_local:
        return True
    bare = ConstraintSpec()
    if spec.self_conjugate and replace(spec, self_conjugate=False) == bare:
        return True
    if spec.symmetric is not None and replace(spec, symmetric=None, order_parity=None) == bare:
        return True
    return False


@lru_cache(maxsize=8192)
def count(n: int, spec: ConstraintSpec, method: str = "auto") -> int:
    """
    Número de particiones de n en la familia.

    Args:
        n: peso (>= 0)
        spec: familia
        method: "enumerate" (oráculo), "dp" (recurrencia acotada) o "auto"

    Returns:
        Conteo exacto (entero de precisión arbitraria)
    """
    if n < 0:
        raise InvalidParameterError(f"n debe ser >= 0 (n={n})")
    if method not in COUNT_METHODS:
        raise InvalidParameterError(f"Método inválido '{method}'. Métodos válidos: {list(COUNT_METHODS)}")
    if method == "auto":
        method = "dp" if supports_dp(spec) else "enumerate"
    if method == "enumerate":
        return _enumerated_count(n, spec)
    if spec.is_local:
        return _local_count_table(spec, _table_size(n))[n]
    if spec.self_conjugate and supports_dp(spec):
        return _self_conjugate_dp(n)
    if spec.symmetric is not None and supports_dp(spec):
        mu, gamma = spec.symmetric
        return _symmetric_dp(n, mu, gamma, spec.order_parity)
    raise InvalidParameterError(f"No hay camino de DP para la familia {spec.describe()}")


@lru_cache(maxsize=64)
def _even_part_parity_table(spec: ConstraintSpec, size: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """DP de dos estados: particiones con número par / impar de tamaños pares distintos."""
    even = np.zeros(size + 1, dtype=object)
    odd = np.zeros(size + 1, dtype=object)
    even[0] = 1
    for part in range(1, size + 1):
        mults = spec.allowed_multiplicities(part, size // part)
        if len(mults) == 1:
            continue
        new_even, new_odd = even.copy(), odd.copy()
        for mult in mults[1:]:
            shift = part * mult
            if part % 2 == 0:
                new_even[shift:] += odd[:size + 1 - shift]
                new_odd[shift:] += even[:size + 1 - shift]
            else:
                new_even[shift:] += even[:size + 1 - shift]
                new_odd[shift:] += odd[:size + 1 - shift]
        even, odd = new_even, new_odd
    return tuple(int(v) for v in even), tuple(int(v) for v in odd)


def count_by_even_part_parity(n: int, spec: ConstraintSpec, method: str = "auto") -> Tuple[int, int]:
    """
    Divide las particiones de n en la familia según la paridad de
    distinct_even_part_count.

    Returns:
        (cantidad con número par, cantidad con número impar)
    """
    if method == "enumerate" or (method == "auto" and not spec.is_local):
        even = odd = 0
        for lam in enumerate_partitions(n, spec):
            if distinct_even_part_count(lam) % 2:
                odd += 1
            else:
                even += 1
        return even, odd
    if not spec.is_local:
        raise InvalidParameterError(f"No hay camino de DP para la familia {spec.describe()}")
    even, odd = _even_part_parity_table(spec, _table_size(n))
    return even[n], odd[n]


def count_fe(n: int, t: int, method: str = "auto") -> int:
    """f_e(n,t): partitions de F(n,2,t) con número par de partes pares distintas."""
    return count_by_even_part_parity(n, f_spec(2, t), method)[0]


def count_fo(n: int, t: int, method: str = "auto") -> int:
    """f_o(n,t): partitions de F(n,2,t) con número impar de partes pares distintas."""
    return count_by_even_part_parity(n, f_spec(2, t), method)[1]


def distinct_counts(n_max: int) -> Tuple[int, ...]:
    """Tabla d(0..n_max) de particiones en partes distintas."""
    return _local_count_table(distinct_spec(), _table_size(n_max))[:n_max + 1]


def corollary_fo(n: int, t: int) -> int:
    """
    Evalúa Σ_{j>=1, 2tj² <= n} (−1)^{j+1} d(n − 2tj²), con d(0) = 1.

    Es la fórmula cerrada de f_o(n,t); la verificación la compara con count_fo.
    """
    if n < 0 or t < 1:
        raise InvalidParameterError(f"Se requiere n >= 0 y t >= 1 (n={n}, t={t})")
    d = distinct_counts(n)
    total = 0
    j = 1
    while 2 * t * j * j <= n:
        sign = 1 if j % 2 else -1
        total += sign * d[n - 2 * t * j * j]
        j += 1
    return total


@dataclass
class CountTable:
    """Conteos exactos de una familia para n = 0..n_max."""
    family: FamilyId
    values: Dict[int, int] = field(default_factory=dict)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n", "count"])
        for n in sorted(self.values):
            writer.writerow([n, self.values[n]])
        return buffer.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "family": self.family.name,
            "params": self.family.as_dict(),
            "counts": [self.values[n] for n in sorted(self.values)],
        })


def count_table(family: FamilyId, n_max: int, method: str = "auto") -> CountTable:
    """
    Construye la tabla de conteos de una familia.

    Args:
        family: identificador de familia con parámetros
        n_max: último n incluido
        method: ver count()
    """
    spec = family.spec()
    logger.info(f"[COUNT] Tabla de {family} hasta n={n_max} (método: {method})")
    return CountTable(family, {n: count(n, spec, method) for n in range(n_max + 1)})
