"""
Interfaz de línea de comandos del motor de particiones.

Uso:
    python -m app count --family symmetric --mu 2 --gamma 1 --n 10
    python -m app enumerate --family b --p 3 --k 2 --n 6
    python -m app map --bijection sylvester --mu 2 --gamma 1 --partition "10"
    python -m app series --family distinct --order 20
    python -m app dissect --family b --p 3 --k 2 --modulus 3 --residue 0 --order 30
    python -m app verify --suite all --order 300 --format json
"""
import io
import os
import csv
import json
import logging
from dataclasses import dataclass, field
from functools import wraps
from typing import Any, Dict, Optional, Sequence

import click

from .services.enumeration_svc import COUNT_METHODS, DEFAULT_ENUM_CAP, count, count_table, enumerate_partitions
from .services.errors import InvalidParameterError, PartitionError, RewriteBudgetExceeded
from .services.glaisher_svc import (
    BijectionTrace,
    f_to_r,
    glaisher_merge,
    glaisher_split,
    phi,
    phi_inverse,
    r_to_f,
)
from .services.partition_svc import FAMILIES, FamilyId, conjugate, format_partition, parse_partition
from .services.qseries_svc import (
    SERIES_ORDER,
    dissect,
    gauss_product,
    gf,
    jacobi_product,
    jacobi_triple,
    slater_even_product,
    slater_even_sum,
    slater_odd_product,
    slater_odd_sum,
    theta_gauss,
    theta_pentagonal,
)
from .services.report_svc import all_passed, format_table, save_reports
from .services.symmetric_svc import (
    SymmetricProfile,
    classical_sylvester,
    correspondence_table,
    sylvester_general,
    sylvester_general_inverse,
)
from .services.verify_svc import DEFAULT_BIJECTION_CAP, SUITES, run_suite

logger = logging.getLogger(__name__)

DEFAULT_FORMAT = os.getenv("PARTICIONES_FORMAT", "plain")

FORMATS = ("plain", "json", "csv")
VERBS = ("count", "enumerate", "map", "series", "dissect", "verify")
BIJECTIONS = ("glaisher-merge", "glaisher-split", "phi", "f-to-r", "sylvester", "classical-sylvester", "conjugate")
NAMED_SERIES = {
    "pentagonal": lambda N, m, sign: theta_pentagonal(N),
    "gauss": lambda N, m, sign: theta_gauss(N),
    "gauss-product": lambda N, m, sign: gauss_product(N),
    "jacobi": lambda N, m, sign: jacobi_triple(m, sign, N),
    "jacobi-product": lambda N, m, sign: jacobi_product(m, sign, N),
    "slater-even": lambda N, m, sign: slater_even_sum(N),
    "slater-even-product": lambda N, m, sign: slater_even_product(N),
    "slater-odd": lambda N, m, sign: slater_odd_sum(N),
    "slater-odd-product": lambda N, m, sign: slater_odd_product(N),
}

# parámetros que cada biyección necesita
BIJECTION_PARAMS = {
    "glaisher-merge": ("k",),
    "glaisher-split": ("k",),
    "phi": ("p", "k"),
    "f-to-r": ("p", "t"),
    "sylvester": ("mu", "gamma"),
    "classical-sylvester": (),
    "conjugate": (),
}


@dataclass
class Command:
    """Verbo, selector (familia / biyección / suite), parámetros y formato de salida."""
    verb: str
    selector: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    fmt: str = DEFAULT_FORMAT

    def validate(self) -> "Command":
        """
        Valida el conjunto de parámetros antes de calcular.

        Raises:
            InvalidParameterError: nombrando la restricción violada
        """
        if self.verb not in VERBS:
            raise InvalidParameterError(f"Verbo desconocido '{self.verb}'")
        if self.fmt not in FORMATS:
            raise InvalidParameterError(f"Formato inválido '{self.fmt}'. Formatos válidos: {list(FORMATS)}")
        for key in ("n", "order", "cap"):
            value = self.params.get(key)
            if value is not None and value < 0:
                raise InvalidParameterError(f"--{key} debe ser >= 0 ({key}={value})")
        if self.verb in ("count", "enumerate", "dissect") or (self.verb == "series" and self.selector in FAMILIES):
            self.family().spec()
        if self.verb == "map":
            if self.selector not in BIJECTIONS:
                raise InvalidParameterError(f"Biyección desconocida '{self.selector}'. Válidas: {list(BIJECTIONS)}")
            for key in BIJECTION_PARAMS[self.selector]:
                if self.params.get(key) is None:
                    raise InvalidParameterError(f"La biyección '{self.selector}' requiere --{key}")
            if self.selector == "sylvester":
                SymmetricProfile(self.params["mu"], self.params["gamma"])
        if self.verb == "series" and self.selector not in FAMILIES and self.selector not in NAMED_SERIES:
            raise InvalidParameterError(
                f"Serie desconocida '{self.selector}'. Válidas: {sorted(FAMILIES) + sorted(NAMED_SERIES)}"
            )
        if self.verb == "dissect":
            modulus, residue = self.params.get("modulus"), self.params.get("residue")
            if modulus is None or modulus < 1:
                raise InvalidParameterError("--modulus debe ser >= 1")
            if residue is None or not 0 <= residue < modulus:
                raise InvalidParameterError(f"--residue debe cumplir 0 <= r < {modulus}")
        if self.verb == "verify":
            if self.selector not in ("all", *SUITES):
                raise InvalidParameterError(f"Suite desconocido '{self.selector}'. Suites válidos: {['all', *SUITES]}")
            alpha = self.params.get("alpha")
            if alpha is not None and (alpha < 2 or alpha % 2):
                raise InvalidParameterError(f"alpha debe ser par y >= 2 (alpha={alpha})")
        return self

    def family(self) -> FamilyId:
        return FamilyId.of(self.selector, self.params)


def _domain_errors(func):
    """Traduce errores del dominio a click.ClickException (exit 1, "Error: ...")."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (PartitionError, RewriteBudgetExceeded) as e:
            logger.debug(f"[CLI] Error de dominio: {e}")
            raise click.ClickException(str(e))
    return wrapper


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue().rstrip("\n")


def family_options(func):
    """Opciones comunes de familia: --family y sus parámetros."""
    options = [
        click.option("--family", required=True, type=click.Choice(sorted(FAMILIES)), help="Familia de particiones"),
        click.option("--p", type=int, default=None, help="Módulo p (familias b, c, f)"),
        click.option("--k", type=int, default=None, help="Módulo k (familias b, c, r)"),
        click.option("--t", type=int, default=None, help="Parámetro t (familia f)"),
        click.option("--mu", type=int, default=None, help="mu del perfil simétrico"),
        click.option("--gamma", type=int, default=None, help="gamma del perfil simétrico"),
        click.option("--i", "i", type=int, default=None, help="Residuo i (familia avoid-mod9)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def format_option(func):
    return click.option(
        "--format", "fmt", type=click.Choice(FORMATS), default=DEFAULT_FORMAT, show_default=True,
        help="Formato de salida (por defecto PARTICIONES_FORMAT)",
    )(func)


def _family_params(p, k, t, mu, gamma, i) -> Dict[str, Optional[int]]:
    return {"p": p, "k": k, "t": t, "mu": mu, "gamma": gamma, "i": i}


@click.group()
@click.option("--verbose", is_flag=True, help="Logs de depuración en stderr")
def cli(verbose: bool):
    """
    Motor de particiones: conteo, enumeración, biyecciones, q-series y verificación.

    Las particiones se escriben con partes decrecientes y exponentes opcionales:
    "4,2^2,1^2".
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
    )


@cli.command("count")
@family_options
@click.option("--n", "n", type=int, required=True, help="Peso n (o último n con --table)")
@click.option("--method", type=click.Choice(COUNT_METHODS), default="auto", show_default=True)
@click.option("--table", is_flag=True, help="Tabla n = 0..N. CSV: columnas n,count")
@format_option
@_domain_errors
def count_cmd(family, p, k, t, mu, gamma, i, n, method, table, fmt):
    """Cuenta las particiones de n en la familia."""
    command = Command("count", family, {**_family_params(p, k, t, mu, gamma, i), "n": n}, fmt).validate()
    family_id = command.family()
    logger.info(f"[CLI] count {family_id} n={n} ({method})")
    if table:
        result = count_table(family_id, n, method)
        if fmt == "json":
            click.echo(result.to_json())
        elif fmt == "csv":
            click.echo(result.to_csv().rstrip("\n"))
        else:
            for key in sorted(result.values):
                click.echo(f"{key} {result.values[key]}")
        return
    value = count(n, family_id.spec(), method)
    if fmt == "json":
        click.echo(json.dumps({"family": family_id.name, "params": family_id.as_dict(), "n": n, "count": value}))
    elif fmt == "csv":
        click.echo(_csv([("n", "count"), (n, value)]))
    else:
        click.echo(str(value))


@cli.command("enumerate")
@family_options
@click.option("--n", "n", type=int, required=True, help="Peso n")
@click.option("--cap", type=int, default=DEFAULT_ENUM_CAP, show_default=True, help="n máximo permitido")
@click.option("--shorthand/--no-shorthand", default=True, help="Exponentes a^m en la salida")
@format_option
@_domain_errors
def enumerate_cmd(family, p, k, t, mu, gamma, i, n, cap, shorthand, fmt):
    """Lista las particiones de n en la familia, una por línea. CSV: columna partition."""
    command = Command("enumerate", family, {**_family_params(p, k, t, mu, gamma, i), "n": n, "cap": cap}, fmt).validate()
    if n > cap:
        raise InvalidParameterError(f"n supera el límite de enumeración (n={n}, cap={cap})")
    family_id = command.family()
    texts = [format_partition(lam, shorthand) for lam in enumerate_partitions(n, family_id.spec())]
    if fmt == "json":
        click.echo(json.dumps({"family": family_id.name, "params": family_id.as_dict(), "n": n, "partitions": texts}))
    elif fmt == "csv":
        click.echo(_csv([("partition",)] + [(text,) for text in texts]))
    else:
        for text in texts:
            click.echo(text)


def apply_bijection(name: str, partition: str, params: Dict[str, Any], inverse: bool,
                     trace: Optional[BijectionTrace]):
    lam = parse_partition(partition)
    if name == "glaisher-merge":
        return (glaisher_split if inverse else glaisher_merge)(lam, params["k"], trace)
    if name == "glaisher-split":
        return (glaisher_merge if inverse else glaisher_split)(lam, params["k"], trace)
    if name == "phi":
        return (phi_inverse if inverse else phi)(lam, params["p"], params["k"], trace)
    if name == "f-to-r":
        return (r_to_f if inverse else f_to_r)(lam, params["p"], params["t"])
    if name == "sylvester":
        profile = SymmetricProfile(params["mu"], params["gamma"])
        # dirección de la tabla: partes distintas -> simétrica
        return (sylvester_general if inverse else sylvester_general_inverse)(lam, profile)
    if name == "classical-sylvester":
        return classical_sylvester(lam)
    return conjugate(lam)


@cli.command("map")
@click.option("--bijection", required=True, type=click.Choice(BIJECTIONS))
@click.option("--partition", default=None, help='Partición de entrada, p. ej. "4,2^2,1^2"')
@click.option("--inverse", is_flag=True, help="Aplica la dirección inversa")
@click.option("--p", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--mu", type=int, default=None)
@click.option("--gamma", type=int, default=None)
@click.option("--n", "n", type=int, default=None, help="Con sylvester: tabla de correspondencia de n")
@click.option("--trace", "with_trace", is_flag=True, help="Incluye los pasos de reescritura")
@click.option("--shorthand/--no-shorthand", default=True, help="Exponentes a^m en la salida")
@format_option
@_domain_errors
def map_cmd(bijection, partition, inverse, p, k, t, mu, gamma, n, with_trace, shorthand, fmt):
    """Aplica una biyección. CSV: columnas input,output (distinct,symmetric para la tabla)."""
    params = {"p": p, "k": k, "t": t, "mu": mu, "gamma": gamma, "n": n}
    Command("map", bijection, params, fmt).validate()
    if bijection == "sylvester" and n is not None:
        table = correspondence_table(n, SymmetricProfile(mu, gamma))
        if fmt == "json":
            click.echo(table.to_json(shorthand))
        elif fmt == "csv":
            click.echo(table.to_csv(shorthand).rstrip("\n"))
        else:
            for beta, lam in table.rows(shorthand):
                click.echo(f"{beta} <-> {lam}")
        return
    if partition is None:
        raise click.UsageError("Se requiere --partition (o --n con sylvester)")
    trace = BijectionTrace() if with_trace else None
    image = apply_bijection(bijection, partition, params, inverse, trace)
    source = format_partition(parse_partition(partition), shorthand)
    target = format_partition(image, shorthand)
    if fmt == "json":
        payload = {"bijection": bijection, "inverse": inverse, "input": source, "output": target}
        if trace is not None:
            payload["trace"] = [json.loads(line) for line in trace.to_jsonl().splitlines()]
        click.echo(json.dumps(payload))
    elif fmt == "csv":
        click.echo(_csv([("input", "output"), (source, target)]))
    else:
        if trace is not None and trace.steps:
            click.echo(trace.to_jsonl())
        click.echo(target)


def _emit_series(series, fmt: str, terms: Optional[int]):
    if fmt == "json":
        click.echo(series.to_json())
    elif fmt == "csv":
        click.echo(_csv([("n", "coefficient")] + [(n, c) for n, c in enumerate(series.coefficients())]))
    else:
        click.echo(series.display(terms))


@cli.command("series")
@click.option("--family", "name", required=True,
              type=click.Choice(sorted(FAMILIES) + sorted(NAMED_SERIES)), help="Familia o serie con nombre")
@click.option("--p", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--mu", type=int, default=None)
@click.option("--gamma", type=int, default=None)
@click.option("--i", "i", type=int, default=None)
@click.option("--m", "m", type=int, default=0, show_default=True, help="w = sign·q^m (jacobi)")
@click.option("--sign", type=click.Choice(["1", "-1"]), default="1", show_default=True)
@click.option("--order", type=int, default=SERIES_ORDER, show_default=True, help="Truncamiento N")
@click.option("--terms", type=int, default=None, help="Términos a mostrar en formato plain")
@format_option
@_domain_errors
def series_cmd(name, p, k, t, mu, gamma, i, m, sign, order, terms, fmt):
    """Expande una función generadora hasta q^N. CSV: columnas n,coefficient."""
    command = Command("series", name, {**_family_params(p, k, t, mu, gamma, i), "order": order}, fmt).validate()
    if name in NAMED_SERIES:
        series = NAMED_SERIES[name](order, m, int(sign))
    else:
        series = gf(command.family(), order)
    _emit_series(series, fmt, terms)


@cli.command("dissect")
@family_options
@click.option("--modulus", type=int, required=True, help="d de la disección")
@click.option("--residue", type=int, required=True, help="r, 0 <= r < d")
@click.option("--order", type=int, default=SERIES_ORDER, show_default=True, help="Truncamiento de la subserie")
@click.option("--terms", type=int, default=None)
@format_option
@_domain_errors
def dissect_cmd(family, p, k, t, mu, gamma, i, modulus, residue, order, terms, fmt):
    """Extrae Σ coeff(dn+r) q^n de la función generadora. CSV: columnas n,coefficient."""
    params = {**_family_params(p, k, t, mu, gamma, i), "modulus": modulus, "residue": residue, "order": order}
    command = Command("dissect", family, params, fmt).validate()
    series = gf(command.family(), modulus * order + residue)
    _emit_series(dissect(series, modulus, residue), fmt, terms)


@cli.command("verify")
@click.option("--suite", default="all", show_default=True, type=click.Choice(["all", *SUITES]))
@click.option("--order", type=int, default=SERIES_ORDER, show_default=True, help="Orden de series N")
@click.option("--enum-cap", type=int, default=DEFAULT_ENUM_CAP, show_default=True)
@click.option("--bijection-cap", type=int, default=DEFAULT_BIJECTION_CAP, show_default=True)
@click.option("--p", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--ell", type=int, default=None)
@click.option("--mu", type=int, default=None)
@click.option("--gamma", type=int, default=None)
@click.option("--alpha", type=int, default=None)
@click.option("--save", "save_name", default=None, help="Guarda los reportes en PARTICIONES_RESULTS_DIR/<nombre>.json")
@format_option
@click.pass_context
@_domain_errors
def verify_cmd(ctx, suite, order, enum_cap, bijection_cap, p, k, t, ell, mu, gamma, alpha, save_name, fmt):
    """
    Ejecuta suites de verificación. Exit 1 si algún reporte falla.

    CSV: columnas identity,status,range,first_failure_n.
    """
    params = {"p": p, "k": k, "t": t, "ell": ell, "mu": mu, "gamma": gamma, "alpha": alpha, "order": order}
    Command("verify", suite, params, fmt).validate()
    suite_params = {key: value for key, value in params.items() if key != "order"}
    reports = run_suite(suite, order, enum_cap, bijection_cap, suite_params)
    if save_name:
        save_reports(reports, save_name)
    if fmt == "json":
        click.echo(json.dumps([report.to_dict() for report in reports]))
    elif fmt == "csv":
        rows = [("identity", "status", "range", "first_failure_n")]
        for report in reports:
            failure_n = report.first_failure.n if report.first_failure else ""
            rows.append((report.identity_id, report.status, f"{report.range[0]}..{report.range[1]}", failure_n))
        click.echo(_csv(rows))
    else:
        click.echo(format_table(reports))
    if not all_passed(reports):
        ctx.exit(1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Punto de entrada programático: interpreta argv, despacha y devuelve el código de salida.

    0 éxito, 1 error de dominio o verificación fallida, 2 error de uso.
    """
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="particiones",
                          standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0
