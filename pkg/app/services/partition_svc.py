"""
Servicio núcleo de particiones.
Tipo Partition, vista de multiplicidades, especificaciones de familias
(ConstraintSpec) y las estadísticas por partición que usan los demás servicios.
"""
import re
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterator, Mapping, Optional, Tuple

from .errors import InvalidParameterError, InvalidPartitionError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class Partition:
    """
    Partición como lista de partes en orden débilmente decreciente.

    La partición vacía () es la única partición de 0. La igualdad y el hash
    dependen solo de las partes; weight se calcula una vez al construir.
    """
    parts: Tuple[int, ...] = ()
    weight: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        previous = None
        for part in parts:
            if not isinstance(part, int) or isinstance(part, bool) or part < 1:
                raise InvalidPartitionError(f"Parte inválida: {part!r} (debe ser entero >= 1)")
            if previous is not None and part > previous:
                raise InvalidPartitionError(
                    f"Partes no decrecientes: {part} aparece después de {previous}"
                )
            previous = part
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "weight", sum(parts))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Partition":
        """Construye la partición desde un mapa tamaño -> multiplicidad (ignora ceros)."""
        parts = []
        for size in sorted(counts, reverse=True):
            parts.extend([size] * counts[size])
        return cls(tuple(parts))

    @cached_property
    def multiplicities(self) -> "MultiplicityView":
        """Proyección (tamaño, multiplicidad) con tamaños estrictamente decrecientes."""
        entries = []
        for part in self.parts:
            if entries and entries[-1][0] == part:
                entries[-1][1] += 1
            else:
                entries.append([part, 1])
        return MultiplicityView(tuple((size, mult) for size, mult in entries))

    def counts(self) -> Dict[int, int]:
        return dict(self.multiplicities.entries)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, index):
        return self.parts[index]

    def __str__(self) -> str:
        return format_partition(self)


@dataclass(frozen=True)
class MultiplicityView:
    """Vista a^m de una partición: pares (tamaño, multiplicidad > 0)."""
    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple((int(size), int(mult)) for size, mult in self.entries)
        for i, (size, mult) in enumerate(entries):
            if size < 1 or mult < 1:
                raise InvalidPartitionError(f"Entrada inválida en vista de multiplicidades: {size}^{mult}")
            if i and entries[i - 1][0] <= size:
                raise InvalidPartitionError("Los tamaños de la vista deben ser estrictamente decrecientes")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "MultiplicityView":
        return cls(tuple((size, counts[size]) for size in sorted(counts, reverse=True) if counts[size] > 0))

    def multiplicity(self, size: int) -> int:
        for entry_size, mult in self.entries:
            if entry_size == size:
                return mult
        return 0

    def expand(self) -> Partition:
        parts = []
        for size, mult in self.entries:
            parts.extend([size] * mult)
        return Partition(tuple(parts))

    @property
    def weight(self) -> int:
        return sum(size * mult for size, mult in self.entries)


@dataclass(frozen=True)
class ConstraintSpec:
    """
    Descripción declarativa de una familia de particiones.

    Las cláusulas se combinan en conjunción. Las cláusulas locales (todas salvo
    self_conjugate, symmetric y order_parity) deciden cada tamaño de parte por
    separado; las globales necesitan la partición completa.

    Args:
        regular_modulus: excluye partes ≡ 0 (mod regular_modulus)
        max_multiplicity: multiplicidad máxima de cualquier parte
        forbidden_residues: (d, residuos) prohibidos mod d
        distinct: partes distintas
        odd_only: solo partes impares
        f_rule: (p, t) de F(n,p,t): partes ≡ 0 mod p con multiplicidad jt,
            1 <= j <= p-1; el resto a lo sumo pt-1 veces
        min_part: parte mínima permitida
        self_conjugate: la partición coincide con su conjugada
        symmetric: (mu, gamma) de las particiones (mu,gamma)-simétricas
        order_parity: 0 (orden par) o 1 (orden impar)
    """
    regular_modulus: Optional[int] = None
    max_multiplicity: Optional[int] = None
    forbidden_residues: Optional[Tuple[int, frozenset]] = None
    distinct: bool = False
    odd_only: bool = False
    f_rule: Optional[Tuple[int, int]] = None
    min_part: Optional[int] = None
    self_conjugate: bool = False
    symmetric: Optional[Tuple[int, int]] = None
    order_parity: Optional[int] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.regular_modulus is not None and self.regular_modulus < 2:
            raise InvalidParameterError(f"regular_modulus debe ser >= 2 (recibido {self.regular_modulus})")
        if self.max_multiplicity is not None and self.max_multiplicity < 1:
            raise InvalidParameterError(f"max_multiplicity debe ser >= 1 (recibido {self.max_multiplicity})")
        if self.forbidden_residues is not None:
            modulus, residues = self.forbidden_residues
            if modulus < 1 or any(not 0 <= r < modulus for r in residues):
                raise InvalidParameterError(f"Residuos prohibidos fuera de [0, {modulus}): {sorted(residues)}")
            object.__setattr__(self, "forbidden_residues", (modulus, frozenset(residues)))
        if self.f_rule is not None and (self.f_rule[0] < 2 or self.f_rule[1] < 1):
            raise InvalidParameterError(f"f_rule requiere p >= 2 y t >= 1 (recibido {self.f_rule})")
        if self.min_part is not None and self.min_part < 1:
            raise InvalidParameterError(f"min_part debe ser >= 1 (recibido {self.min_part})")
        if self.symmetric is not None and (self.symmetric[0] < 2 or self.symmetric[1] < 0):
            raise InvalidParameterError(f"symmetric requiere mu >= 2 y gamma >= 0 (recibido {self.symmetric})")
        if self.order_parity not in (None, 0, 1):
            raise InvalidParameterError(f"order_parity debe ser 0 o 1 (recibido {self.order_parity})")

    @property
    def is_local(self) -> bool:
        return not self.self_conjugate and self.symmetric is None and self.order_parity is None

    def admits_part(self, part: int) -> bool:
        """Indica si el tamaño de parte puede aparecer (multiplicidad > 0)."""
        if self.min_part is not None and part < self.min_part:
            return False
        if self.odd_only and part % 2 == 0:
            return False
        if self.regular_modulus is not None and part % self.regular_modulus == 0:
            return False
        if self.forbidden_residues is not None:
            modulus, residues = self.forbidden_residues
            if part % modulus in residues:
                return False
        return True

    def allowed_multiplicities(self, part: int, limit: int) -> Tuple[int, ...]:
        """
        Multiplicidades permitidas para un tamaño de parte, en orden creciente.

        Args:
            part: tamaño de parte
            limit: cota superior externa (normalmente peso restante // part)

        Returns:
            Tupla que siempre empieza en 0 (parte ausente)
        """
        if limit <= 0 or not self.admits_part(part):
            return (0,)
        top = limit
        if self.distinct:
            top = min(top, 1)
        if self.max_multiplicity is not None:
            top = min(top, self.max_multiplicity)
        if self.f_rule is not None:
            p, t = self.f_rule
            if part % p == 0:
                return (0,) + tuple(j * t for j in range(1, p) if j * t <= top)
            top = min(top, p * t - 1)
        return tuple(range(top + 1))

    def describe(self) -> str:
        return self.name or repr(self)


def symmetric_residues(modulus: int, *representatives: int) -> frozenset:
    """Cierra un conjunto de residuos bajo ±: {0, ±i} mod d."""
    closed = set()
    for r in representatives:
        closed.add(r % modulus)
        closed.add((-r) % modulus)
    return frozenset(closed)


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidParameterError(message)


def unrestricted_spec() -> ConstraintSpec:
    return ConstraintSpec(name="unrestricted")


def b_spec(p: int, k: int) -> ConstraintSpec:
    """B(n,p,k): partes no divisibles por p que aparecen a lo sumo k-1 veces."""
    _require(p >= 2, f"p debe ser >= 2 (p={p})")
    _require(k >= 2, f"k debe ser >= 2 (k={k})")
    return ConstraintSpec(regular_modulus=p, max_multiplicity=k - 1, name=f"B(p={p},k={k})")


def c_spec(k: int, p: int) -> ConstraintSpec:
    """C(n,k,p): partes no divisibles por k que aparecen a lo sumo p-1 veces."""
    _require(p >= 2, f"p debe ser >= 2 (p={p})")
    _require(k >= 2, f"k debe ser >= 2 (k={k})")
    return ConstraintSpec(regular_modulus=k, max_multiplicity=p - 1, name=f"C(k={k},p={p})")


def r_spec(k: int) -> ConstraintSpec:
    """R(n,k): toda multiplicidad a lo sumo k-1."""
    _require(k >= 2, f"k debe ser >= 2 (k={k})")
    return ConstraintSpec(max_multiplicity=k - 1, name=f"R(k={k})")


def f_spec(p: int, t: int) -> ConstraintSpec:
    """F(n,p,t): partes ≡ 0 mod p con multiplicidad jt (1 <= j <= p-1), el resto <= pt-1 veces."""
    _require(p >= 2, f"p debe ser >= 2 (p={p})")
    _require(t >= 1, f"t debe ser >= 1 (t={t})")
    return ConstraintSpec(f_rule=(p, t), name=f"F(p={p},t={t})")


def distinct_spec() -> ConstraintSpec:
    return ConstraintSpec(distinct=True, name="distinct")


def distinct_odd_spec() -> ConstraintSpec:
    return ConstraintSpec(distinct=True, odd_only=True, name="distinct-odd")


def self_conjugate_spec() -> ConstraintSpec:
    return ConstraintSpec(self_conjugate=True, name="self-conjugate")


def symmetric_spec(mu: int, gamma: int, parity: Optional[int] = None) -> ConstraintSpec:
    """Particiones (mu,gamma)-simétricas, opcionalmente filtradas por paridad del orden."""
    _require(mu >= 2, f"mu debe ser >= 2 (mu={mu})")
    _require(gamma >= 0, f"gamma debe ser >= 0 (gamma={gamma})")
    suffix = {None: "", 0: "-even", 1: "-odd"}[parity]
    return ConstraintSpec(symmetric=(mu, gamma), order_parity=parity, name=f"symmetric{suffix}(mu={mu},gamma={gamma})")


def distinct_residue_spec(mu: int, gamma: int) -> ConstraintSpec:
    """Partes distintas ≡ 1+gamma (mod mu) con parte mínima >= gamma+1."""
    _require(mu >= 2, f"mu debe ser >= 2 (mu={mu})")
    _require(gamma >= 0, f"gamma debe ser >= 0 (gamma={gamma})")
    keep = (1 + gamma) % mu
    forbidden = frozenset(r for r in range(mu) if r != keep)
    return ConstraintSpec(
        distinct=True,
        forbidden_residues=(mu, forbidden) if forbidden else None,
        min_part=gamma + 1,
        name=f"distinct-residue(mu={mu},gamma={gamma})",
    )


def avoid_mod9_spec(i: int) -> ConstraintSpec:
    """c(n,i): partes no congruentes con 0, ±i (mod 9)."""
    _require(1 <= i <= 8, f"i debe estar en 1..8 (i={i})")
    return ConstraintSpec(forbidden_residues=(9, symmetric_residues(9, 0, i)), name=f"avoid-mod9(i={i})")


def avoid16_even_spec() -> ConstraintSpec:
    """Partes no congruentes con 0, ±1, ±6, ±7, 8 (mod 16)."""
    return ConstraintSpec(forbidden_residues=(16, symmetric_residues(16, 0, 1, 6, 7, 8)), name="avoid16-even")


def avoid16_odd_spec() -> ConstraintSpec:
    """Partes no congruentes con 0, ±2, ±3, ±5, 8 (mod 16)."""
    return ConstraintSpec(forbidden_residues=(16, symmetric_residues(16, 0, 2, 3, 5, 8)), name="avoid16-odd")


# nombre -> (parámetros requeridos, constructor)
FAMILIES: Dict[str, Tuple[Tuple[str, ...], Callable[..., ConstraintSpec]]] = {
    "unrestricted": ((), unrestricted_spec),
    "b": (("p", "k"), b_spec),
    "c": (("k", "p"), c_spec),
    "r": (("k",), r_spec),
    "f": (("p", "t"), f_spec),
    "distinct": ((), distinct_spec),
    "distinct-odd": ((), distinct_odd_spec),
    "self-conjugate": ((), self_conjugate_spec),
    "symmetric": (("mu", "gamma"), symmetric_spec),
    "symmetric-even": (("mu", "gamma"), lambda mu, gamma: symmetric_spec(mu, gamma, parity=0)),
    "symmetric-odd": (("mu", "gamma"), lambda mu, gamma: symmetric_spec(mu, gamma, parity=1)),
    "distinct-residue": (("mu", "gamma"), distinct_residue_spec),
    "avoid-mod9": (("i",), avoid_mod9_spec),
    "avoid16-even": ((), avoid16_even_spec),
    "avoid16-odd": ((), avoid16_odd_spec),
}


@dataclass(frozen=True)
class FamilyId:
    """Nombre de familia más tupla ordenada de parámetros."""
    name: str
    params: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, name: str, params: Optional[Mapping[str, Optional[int]]] = None) -> "FamilyId":
        """
        Selecciona del mapa los parámetros que la familia necesita.

        Raises:
            InvalidParameterError: familia desconocida o parámetro faltante
        """
        if name not in FAMILIES:
            raise InvalidParameterError(f"Familia desconocida '{name}'. Familias válidas: {sorted(FAMILIES)}")
        params = params or {}
        required, _ = FAMILIES[name]
        selected = []
        for key in required:
            value = params.get(key)
            if value is None:
                raise InvalidParameterError(f"La familia '{name}' requiere el parámetro '{key}'")
            selected.append((key, int(value)))
        return cls(name, tuple(selected))

    def spec(self) -> ConstraintSpec:
        _, builder = FAMILIES[self.name]
        return builder(**dict(self.params))

    def as_dict(self) -> Dict[str, int]:
        return dict(self.params)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{key}={value}" for key, value in self.params)
        return f"{self.name}({inner})"


def canonicalize(raw_parts) -> Partition:
    """
    Ordena una lista de partes positivas en forma débilmente decreciente.

    Raises:
        InvalidPartitionError: si alguna entrada es < 1
    """
    raw = list(raw_parts)
    for part in raw:
        if not isinstance(part, int) or isinstance(part, bool) or part < 1:
            raise InvalidPartitionError(f"Parte inválida: {part!r} (debe ser entero >= 1)")
    return Partition(tuple(sorted(raw, reverse=True)))


def conjugate(lam: Partition) -> Partition:
    """Transpuesta del diagrama de Young: λ'_j = #{i : λ_i >= j}."""
    parts = lam.parts
    if not parts:
        return Partition()
    result = []
    rows = len(parts)
    for column in range(1, parts[0] + 1):
        while rows > 0 and parts[rows - 1] < column:
            rows -= 1
        result.append(rows)
    return Partition(tuple(result))


def order(lam: Partition) -> int:
    """Orden de la partición: max{i : λ_i >= i}, 0 para la vacía (lado del cuadrado de Durfee)."""
    s = 0
    for i, part in enumerate(lam.parts, start=1):
        if part < i:
            break
        s = i
    return s


def distinct_even_part_count(lam: Partition) -> int:
    """Número de tamaños de parte pares distintos."""
    return sum(1 for size, _ in lam.multiplicities.entries if size % 2 == 0)


def satisfies(lam: Partition, spec: ConstraintSpec) -> bool:
    """Verdadero si todas las cláusulas de spec se cumplen para λ."""
    for size, mult in lam.multiplicities.entries:
        if mult not in spec.allowed_multiplicities(size, mult):
            return False
    if spec.self_conjugate and conjugate(lam) != lam:
        return False
    if spec.order_parity is not None and order(lam) % 2 != spec.order_parity:
        return False
    if spec.symmetric is not None:
        from .symmetric_svc import SymmetricProfile, is_symmetric
        if not is_symmetric(lam, SymmetricProfile(*spec.symmetric)):
            return False
    return True


def parse_partition(text: str) -> Partition:
    """
    Interpreta el formato de texto "4,2^2,1^2" (partes decrecientes, a^m opcional).

    Returns:
        Partition; "" y "()" representan la partición vacía

    Raises:
        InvalidPartitionError: citando el token problemático
    """
    stripped = text.strip()
    if stripped in ("", "()"):
        return Partition()
    if stripped.startswith("(") and stripped.endswith(")"):
        stripped = stripped[1:-1]
    parts = []
    for raw_token in stripped.split(","):
        token = raw_token.strip()
        match = _TOKEN_RE.match(token)
        if not match:
            raise InvalidPartitionError(f"Token inválido '{token}': se espera parte o parte^multiplicidad")
        part = int(match.group(1))
        mult = int(match.group(2)) if match.group(2) is not None else 1
        if part < 1 or mult < 1:
            raise InvalidPartitionError(f"Token inválido '{token}': parte y multiplicidad deben ser >= 1")
        if parts and part > parts[-1]:
            raise InvalidPartitionError(f"Token '{token}' rompe el orden decreciente (anterior: {parts[-1]})")
        parts.extend([part] * mult)
    return Partition(tuple(parts))


def format_partition(lam: Partition, shorthand: bool = False) -> str:
    """Texto de la partición: "4,2,2,1,1", o "4,2^2,1^2" con shorthand."""
    if not lam.parts:
        return "()"
    if not shorthand:
        return ",".join(str(part) for part in lam.parts)
    tokens = []
    for size, mult in lam.multiplicities.entries:
        tokens.append(str(size) if mult == 1 else f"{size}^{mult}")
    return ",".join(tokens)
