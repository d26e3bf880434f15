"""
Servicio de particiones (mu,gamma)-simétricas.
Cola prescrita, prueba de pertenencia, biyección de Sylvester generalizada,
generación y separación por paridad del orden.
"""
import io
import csv
import json
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

from .enumeration_svc import DEFAULT_ENUM_CAP, enumerate_partitions
from .errors import ConstraintViolationError, InvalidParameterError
from .partition_svc import (
    MultiplicityView,
    Partition,
    conjugate,
    distinct_residue_spec,
    format_partition,
    order,
    symmetric_spec,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetricProfile:
    mu: int
    gamma: int

    def __post_init__(self):
        if self.mu < 2:
            raise InvalidParameterError(f"mu debe ser >= 2 (mu={self.mu})")
        if self.gamma < 0:
            raise InvalidParameterError(f"gamma debe ser >= 0 (gamma={self.gamma})")

    def __str__(self) -> str:
        return f"({self.mu},{self.gamma})"


@dataclass(frozen=True)
class HeadTail:
    """Cabeza λ_1..λ_s (s = orden) y cola como multiplicidades."""
    head: Tuple[int, ...]
    tail: MultiplicityView = field(default_factory=MultiplicityView)

    @property
    def order(self) -> int:
        return len(self.head)

    def partition(self) -> Partition:
        return Partition(self.head + self.tail.expand().parts)


def split_head_tail(lam: Partition) -> HeadTail:
    s = order(lam)
    return HeadTail(lam.parts[:s], Partition(lam.parts[s:]).multiplicities)


def prescribed_tail(head: Sequence[int], profile: SymmetricProfile) -> MultiplicityView:
    """
    Cola que exige la definición para una cabeza dada.

    s aparece (mu-1)(λ_s - s) + gamma veces y cada j < s aparece
    (mu-1)(λ_j - λ_{j+1} + 1) - 1 veces. Multiplicidad 0 significa ausencia.

    Args:
        head: λ_1 >= ... >= λ_s con λ_s >= s >= 1
        profile: perfil (mu, gamma)

    Raises:
        InvalidParameterError: cabeza vacía, no decreciente o con λ_s < s
    """
    head = tuple(head)
    s = len(head)
    if s == 0:
        raise InvalidParameterError("La cabeza debe tener al menos una parte")
    if any(head[i] < head[i + 1] for i in range(s - 1)):
        raise InvalidParameterError(f"Cabeza no decreciente: {head}")
    if head[-1] < s:
        raise InvalidParameterError(f"La cabeza requiere λ_s >= s (λ_s={head[-1]}, s={s})")
    mu, gamma = profile.mu, profile.gamma
    counts = {s: (mu - 1) * (head[-1] - s) + gamma}
    for j in range(1, s):
        counts[j] = (mu - 1) * (head[j - 1] - head[j] + 1) - 1
    return MultiplicityView.from_counts(counts)


def is_symmetric(lam: Partition, profile: SymmetricProfile) -> bool:
    """Verdadero si λ es vacía o su cola tras el orden coincide con la prescrita."""
    if not lam.parts:
        return True
    split = split_head_tail(lam)
    return split.tail == prescribed_tail(split.head, profile)


def sylvester_general(lam: Partition, profile: SymmetricProfile) -> Partition:
    """
    Lleva una partición simétrica a partes distintas β_i = mu(λ_i - i) + 1 + gamma.

    Raises:
        ConstraintViolationError: si λ no es (mu,gamma)-simétrica
    """
    if not is_symmetric(lam, profile):
        raise ConstraintViolationError(f"{lam} no es {profile}-simétrica")
    head = split_head_tail(lam).head
    beta = Partition(tuple(profile.mu * (part - i) + 1 + profile.gamma for i, part in enumerate(head, start=1)))
    assert beta.weight == lam.weight
    return beta


def sylvester_general_inverse(beta: Partition, profile: SymmetricProfile) -> Partition:
    """
    Reconstruye la cabeza λ_i = i + (β_i - 1 - gamma)/mu y le agrega la cola prescrita.

    Raises:
        ConstraintViolationError: partes repetidas, residuo distinto de 1+gamma o parte < gamma+1
    """
    if not beta.parts:
        return Partition()
    mu, gamma = profile.mu, profile.gamma
    for size, mult in beta.multiplicities.entries:
        if mult > 1:
            raise ConstraintViolationError(f"{beta} repite la parte {size}")
        if size < gamma + 1:
            raise ConstraintViolationError(f"La parte {size} es menor que gamma+1={gamma + 1}")
        if (size - 1 - gamma) % mu:
            raise ConstraintViolationError(f"La parte {size} no es ≡ {1 + gamma} (mod {mu})")
    head = tuple(i + (part - 1 - gamma) // mu for i, part in enumerate(beta.parts, start=1))
    lam = HeadTail(head, prescribed_tail(head, profile)).partition()
    assert lam.weight == beta.weight
    return lam


def classical_sylvester(lam: Partition) -> Partition:
    """
    Mapa clásico de autoconjugadas a impares distintas: (2λ_1-1, 2λ_2-3, ..., 2λ_s-2s+1).

    Raises:
        ConstraintViolationError: si λ no es autoconjugada
    """
    if conjugate(lam) != lam:
        raise ConstraintViolationError(f"{lam} no es autoconjugada")
    s = order(lam)
    return Partition(tuple(2 * lam[i - 1] - 2 * i + 1 for i in range(1, s + 1)))


def generate_symmetric(n: int, profile: SymmetricProfile) -> Iterator[Partition]:
    """
    Genera las particiones (mu,gamma)-simétricas de n recorriendo el lado de
    partes distintas ≡ 1+gamma (mod mu) y aplicando la inversa de Sylvester.
    """
    for beta in enumerate_partitions(n, distinct_residue_spec(profile.mu, profile.gamma)):
        yield sylvester_general_inverse(beta, profile)


def generate_symmetric_by_filter(n: int, profile: SymmetricProfile, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Partition]:
    """Oráculo: filtra todas las particiones de n con is_symmetric (solo n <= cap)."""
    if n > cap:
        raise InvalidParameterError(f"El filtro exhaustivo está limitado a n <= {cap} (n={n})")
    return enumerate_partitions(n, symmetric_spec(profile.mu, profile.gamma))


def split_by_order_parity(n: int, profile: SymmetricProfile) -> Tuple[int, int]:
    """
    Cuenta las simétricas de n según la paridad del orden.

    Returns:
        (orden par, orden impar); la vacía tiene orden 0
    """
    even = odd = 0
    for lam in generate_symmetric(n, profile):
        if order(lam) % 2:
            odd += 1
        else:
            even += 1
    return even, odd


@dataclass
class CorrespondenceTable:
    """Pares (partes distintas, simétrica) para un n y un perfil."""
    n: int
    profile: SymmetricProfile
    pairs: List[Tuple[Partition, Partition]] = field(default_factory=list)

    def rows(self, shorthand: bool = True) -> List[Tuple[str, str]]:
        return [(format_partition(beta, shorthand), format_partition(lam, shorthand)) for beta, lam in self.pairs]

    def to_csv(self, shorthand: bool = True) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["distinct", "symmetric"])
        writer.writerows(self.rows(shorthand))
        return buffer.getvalue()

    def to_json(self, shorthand: bool = True) -> str:
        return json.dumps([list(row) for row in self.rows(shorthand)])


def correspondence_table(n: int, profile: SymmetricProfile) -> CorrespondenceTable:
    table = CorrespondenceTable(n, profile)
    for beta in enumerate_partitions(n, distinct_residue_spec(profile.mu, profile.gamma)):
        table.pairs.append((beta, sylvester_general_inverse(beta, profile)))
    logger.info(f"[SYMMETRIC] Tabla de correspondencia n={n} perfil {profile}: {len(table.pairs)} pares")
    return table
