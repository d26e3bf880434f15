"""
Excepciones del motor de particiones.
Los routers y la CLI traducen PartitionError a respuestas 400 / exit 1.
"""


class PartitionError(ValueError):
    """Error base del dominio."""


class InvalidPartitionError(PartitionError):
    """Partes inválidas o texto de partición mal formado."""


class ConstraintViolationError(PartitionError):
    """La partición no cumple la precondición de la operación."""


class InvalidParameterError(PartitionError):
    """Parámetros de familia, perfil o serie fuera de rango."""


class SeriesSpecError(PartitionError):
    """ProductSpec mal formado o exponentes negativos en q."""


class RewriteBudgetExceeded(RuntimeError):
    """La reescritura de Glaisher superó el presupuesto de pasos."""
