"""
Servicio de reportes de verificación.
Tipo VerificationReport, armado de comparaciones con contraejemplo mínimo,
salida JSON / tabla y persistencia en el directorio de resultados.
"""
import os
import json
import time
import logging
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import Any, Dict, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

RESULTS_DIR = os.getenv("PARTICIONES_RESULTS_DIR", "/disk/results")

STATUS_PASS = "pass"
STATUS_FAIL = "fail"


@dataclass(frozen=True)
class Failure:
    """Primer contraejemplo: n, valor izquierdo, valor derecho y subcomprobación."""
    n: int
    lhs: Any
    rhs: Any
    check: str = ""


@dataclass
class VerificationReport:
    identity_id: str
    params: Dict[str, Any]
    range: Tuple[int, int]
    status: str
    first_failure: Optional[Failure] = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["range"] = list(self.range)
        if self.first_failure is not None:
            # enteros grandes como texto decimal
            data["first_failure"]["lhs"] = str(self.first_failure.lhs)
            data["first_failure"]["rhs"] = str(self.first_failure.rhs)
        data["elapsed"] = round(self.elapsed, 4)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class ReportBuilder:
    """
    Acumula comparaciones de un suite y conserva el contraejemplo con menor n.

    Uso:
        builder = ReportBuilder("prop1", {"p": 3, "t": 2})
        builder.compare_sequences("enumeracion", lhs, rhs)
        report = builder.finish()
    """

    def __init__(self, identity_id: str, params: Dict[str, Any]):
        self.identity_id = identity_id
        self.params = dict(params)
        self.low: Optional[int] = None
        self.high: Optional[int] = None
        self.failure: Optional[Failure] = None
        self.started = time.perf_counter()

    def _cover(self, low: int, high: int):
        self.low = low if self.low is None else min(self.low, low)
        self.high = high if self.high is None else max(self.high, high)

    def _fail(self, failure: Failure):
        if self.failure is None or failure.n < self.failure.n:
            self.failure = failure

    def compare(self, check: str, n: int, lhs, rhs) -> bool:
        self._cover(n, n)
        if lhs != rhs:
            self._fail(Failure(n, lhs, rhs, check))
            return False
        return True

    def compare_sequences(self, check: str, lhs: Sequence, rhs: Sequence, start: int = 0) -> bool:
        """
        Compara dos sucesiones índice a índice; el índice i corresponde a n = start + i.

        Las longitudes distintas se comparan hasta la menor.
        """
        length = min(len(lhs), len(rhs))
        if length == 0:
            return True
        self._cover(start, start + length - 1)
        for i in range(length):
            if lhs[i] != rhs[i]:
                self._fail(Failure(start + i, lhs[i], rhs[i], check))
                return False
        return True

    def finish(self) -> VerificationReport:
        status = STATUS_PASS if self.failure is None else STATUS_FAIL
        report = VerificationReport(
            identity_id=self.identity_id,
            params=self.params,
            range=(self.low or 0, self.high or 0),
            status=status,
            first_failure=self.failure,
            elapsed=time.perf_counter() - self.started,
        )
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(level, f"[VERIFY] {self.identity_id} {self.params} -> {status} ({report.elapsed:.2f}s)")
        return report


def all_passed(reports: Sequence[VerificationReport]) -> bool:
    return all(report.passed for report in reports)


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([report.to_dict() for report in reports])


def format_table(reports: Sequence[VerificationReport]) -> str:
    """Tabla legible: identidad, parámetros, rango, estado, contraejemplo, tiempo."""
    header = ("identity", "params", "range", "status", "first_failure", "elapsed")
    rows = [header]
    for report in reports:
        params = ",".join(f"{key}={value}" for key, value in report.params.items())
        failure = ""
        if report.first_failure is not None:
            f = report.first_failure
            failure = f"{f.check} n={f.n}: {f.lhs} != {f.rhs}"
        rows.append((
            report.identity_id,
            params,
            f"{report.range[0]}..{report.range[1]}",
            report.status,
            failure,
            f"{report.elapsed:.2f}s",
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    passed = sum(1 for report in reports if report.passed)
    lines.append(f"{passed}/{len(reports)} suites pass")
    return "\n".join(lines)


def save_reports(reports: Sequence[VerificationReport], name: str, results_dir: Optional[str] = None) -> str:
    """
    Escribe los reportes como JSON en el directorio de resultados.

    Returns:
        Ruta del archivo escrito
    """
    results_dir = results_dir or RESULTS_DIR
    os.makedirs(results_dir, exist_ok=True)
    path = os.path.join(results_dir, f"{name}.json")
    payload = {
        "created_at": datetime.utcnow().isoformat(),
        "passed": all_passed(reports),
        "reports": [report.to_dict() for report in reports],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)
    logger.info(f"[VERIFY] {len(reports)} reportes guardados en {path}")
    return path
