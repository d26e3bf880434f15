"""
Servicio de biyecciones de Glaisher.
Fusión/división de partes iguales, el mapa compuesto phi entre B(n,p,k) y
C(n,k,p), y la biyección entre F(n,p,t) y R(n,p) con su inversa.
"""
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional

from .enumeration_svc import partitions_of
from .errors import ConstraintViolationError, InvalidParameterError, RewriteBudgetExceeded
from .partition_svc import (
    ConstraintSpec,
    Partition,
    b_spec,
    c_spec,
    f_spec,
    r_spec,
    satisfies,
)

logger = logging.getLogger(__name__)

STEPS_PER_UNIT = 64


@dataclass(frozen=True)
class TraceStep:
    rule: str
    before: Partition
    after: Partition


@dataclass
class BijectionTrace:
    """Registro de pasos de reescritura (regla, antes, después)."""
    steps: List[TraceStep] = field(default_factory=list)

    def record(self, rule: str, before: Partition, after: Partition):
        self.steps.append(TraceStep(rule, before, after))

    def is_consistent(self) -> bool:
        """Cada paso conserva el peso y encadena con el siguiente."""
        for i, step in enumerate(self.steps):
            if step.before.weight != step.after.weight:
                return False
            if i and self.steps[i - 1].after != step.before:
                return False
        return True

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"rule": step.rule, "before": str(step.before), "after": str(step.after)})
            for step in self.steps
        ]
        return "\n".join(lines)


def _require_modulus(value: int, name: str):
    if value < 2:
        raise InvalidParameterError(f"{name} debe ser >= 2 ({name}={value})")


def _budget(weight: int) -> int:
    return STEPS_PER_UNIT * max(weight, 1)


def _merge_counts(counts: Dict[int, int], k: int, weight: int, rule: str, trace: Optional[BijectionTrace]) -> Dict[int, int]:
    steps = 0
    budget = _budget(weight)
    while True:
        eligible = [size for size, mult in counts.items() if mult >= k]
        if not eligible:
            return counts
        size = max(eligible)
        before = Partition.from_counts(counts) if trace is not None else None
        counts[size] -= k
        if counts[size] == 0:
            del counts[size]
        counts[size * k] = counts.get(size * k, 0) + 1
        steps += 1
        if trace is not None:
            trace.record(rule, before, Partition.from_counts(counts))
        if steps > budget:
            raise RewriteBudgetExceeded(f"[GLAISHER] {rule} superó {budget} pasos (n={weight})")


def _split_counts(counts: Dict[int, int], k: int, weight: int, rule: str, trace: Optional[BijectionTrace]) -> Dict[int, int]:
    steps = 0
    budget = _budget(weight)
    while True:
        eligible = [size for size in counts if size % k == 0]
        if not eligible:
            return counts
        size = max(eligible)
        before = Partition.from_counts(counts) if trace is not None else None
        counts[size] -= 1
        if counts[size] == 0:
            del counts[size]
        counts[size // k] = counts.get(size // k, 0) + k
        steps += 1
        if trace is not None:
            trace.record(rule, before, Partition.from_counts(counts))
        if steps > budget:
            raise RewriteBudgetExceeded(f"[GLAISHER] {rule} superó {budget} pasos (n={weight})")


def glaisher_merge(lam: Partition, k: int, trace: Optional[BijectionTrace] = None) -> Partition:
    """
    Fusiona k partes iguales a en una parte k·a hasta que toda multiplicidad sea < k.

    Siempre actúa primero sobre el mayor tamaño elegible.

    Args:
        lam: partición de entrada
        k: módulo (>= 2)
        trace: registro opcional de pasos

    Returns:
        Partición con todas las multiplicidades <= k-1 y el mismo peso
    """
    _require_modulus(k, "k")
    result = Partition.from_counts(_merge_counts(lam.counts(), k, lam.weight, f"merge{k}", trace))
    assert result.weight == lam.weight
    return result


def glaisher_split(lam: Partition, k: int, trace: Optional[BijectionTrace] = None) -> Partition:
    """
    Divide cada parte k·a en k partes a hasta que ninguna parte sea divisible por k.

    Args:
        lam: partición de entrada
        k: módulo (>= 2)
        trace: registro opcional de pasos

    Returns:
        Partición k-regular con el mismo peso
    """
    _require_modulus(k, "k")
    result = Partition.from_counts(_split_counts(lam.counts(), k, lam.weight, f"split{k}", trace))
    assert result.weight == lam.weight
    return result


@lru_cache(maxsize=256)
def _rank_index(n: int, spec: ConstraintSpec) -> Dict[Partition, int]:
    logger.debug(f"[GLAISHER] Tabla de rangos para {spec.describe()} en n={n}")
    return {lam: i for i, lam in enumerate(partitions_of(n, spec))}


def _rank_map(lam: Partition, source: ConstraintSpec, target: ConstraintSpec) -> Partition:
    n = lam.weight
    index = _rank_index(n, source)[lam]
    image = partitions_of(n, target)
    if len(image) != len(_rank_index(n, source)):
        raise ConstraintViolationError(
            f"Las familias {source.describe()} y {target.describe()} no son equinumerosas en n={n}"
        )
    return image[index]


def phi(lam: Partition, p: int, k: int, trace: Optional[BijectionTrace] = None) -> Partition:
    """
    Biyección de B(n,p,k) en C(n,k,p).

    Con gcd(p,k)=1: divide por k hasta cerrar y luego fusiona de a p partes.
    Con gcd(p,k)>1: el i-ésimo elemento de B(n,p,k) en orden de enumeración
    va al i-ésimo de C(n,k,p).

    Raises:
        ConstraintViolationError: si λ no está en B(|λ|,p,k)
    """
    source, target = b_spec(p, k), c_spec(k, p)
    if not satisfies(lam, source):
        raise ConstraintViolationError(f"{lam} no pertenece a {source.describe()}")
    if gcd(p, k) == 1:
        counts = _split_counts(lam.counts(), k, lam.weight, f"split{k}", trace)
        result = Partition.from_counts(_merge_counts(counts, p, lam.weight, f"merge{p}", trace))
    else:
        result = _rank_map(lam, source, target)
        if trace is not None:
            trace.record("rank", lam, result)
    assert result.weight == lam.weight
    return result


def phi_inverse(mu: Partition, p: int, k: int, trace: Optional[BijectionTrace] = None) -> Partition:
    """
    Inversa de phi: de C(n,k,p) en B(n,p,k).

    Raises:
        ConstraintViolationError: si μ no está en C(|μ|,k,p)
    """
    source, target = c_spec(k, p), b_spec(p, k)
    if not satisfies(mu, source):
        raise ConstraintViolationError(f"{mu} no pertenece a {source.describe()}")
    if gcd(p, k) == 1:
        counts = _split_counts(mu.counts(), p, mu.weight, f"split{p}", trace)
        result = Partition.from_counts(_merge_counts(counts, k, mu.weight, f"merge{k}", trace))
    else:
        result = _rank_map(mu, source, target)
        if trace is not None:
            trace.record("rank", mu, result)
    assert result.weight == mu.weight
    return result


def f_to_r(lam: Partition, p: int, t: int) -> Partition:
    """
    Biyección de F(n,p,t) en R(n,p).

    λ se separa en λ_p (partes ≡ 0 mod p, multiplicidad j·t) y λ_r (resto);
    la imagen es phi(λ_r, p, p·t) unida a las partes t·a con multiplicidad j.

    Raises:
        ConstraintViolationError: si λ no está en F(|λ|,p,t)
    """
    spec = f_spec(p, t)
    if not satisfies(lam, spec):
        raise ConstraintViolationError(f"{lam} no pertenece a {spec.describe()}")
    rest: Dict[int, int] = {}
    result: Dict[int, int] = {}
    for size, mult in lam.multiplicities.entries:
        if size % p == 0:
            result[t * size] = mult // t
        else:
            rest[size] = mult
    for size, mult in phi(Partition.from_counts(rest), p, p * t).multiplicities.entries:
        result[size] = mult
    image = Partition.from_counts(result)
    assert image.weight == lam.weight
    return image


def r_to_f(mu: Partition, p: int, t: int) -> Partition:
    """
    Inversa de f_to_r: de R(n,p) en F(n,p,t).

    Raises:
        ConstraintViolationError: si μ no está en R(|μ|,p)
    """
    if t < 1:
        raise InvalidParameterError(f"t debe ser >= 1 (t={t})")
    spec = r_spec(p)
    if not satisfies(mu, spec):
        raise ConstraintViolationError(f"{mu} no pertenece a {spec.describe()}")
    rest: Dict[int, int] = {}
    result: Dict[int, int] = {}
    for size, mult in mu.multiplicities.entries:
        if size % (p * t) == 0:
            result[size // t] = mult * t
        else:
            rest[size] = mult
    for size, mult in phi_inverse(Partition.from_counts(rest), p, p * t).multiplicities.entries:
        result[size] = mult
    image = Partition.from_counts(result)
    assert image.weight == mu.weight
    return image
