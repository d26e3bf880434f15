"""
Router para conteo, enumeración y biyecciones de particiones.
Cálculos síncronos y acotados; las verificaciones largas van por /jobs.
"""
from typing import Optional

from fastapi import APIRouter, HTTPException, Form
from fastapi.responses import JSONResponse
import logging

from ..cli import BIJECTIONS, Command, apply_bijection
from ..services.enumeration_svc import COUNT_METHODS, DEFAULT_ENUM_CAP, count, count_table, enumerate_partitions
from ..services.errors import PartitionError, RewriteBudgetExceeded
from ..services.glaisher_svc import BijectionTrace
from ..services.partition_svc import format_partition, parse_partition
from ..services.symmetric_svc import SymmetricProfile, correspondence_table

router = APIRouter(prefix="/particiones", tags=["Particiones"])
logger = logging.getLogger(__name__)

# n máximo aceptado por /contar con método dp
MAX_COUNT_N = 2000


def _family_params(p, k, t, mu, gamma, i) -> dict:
    return {"p": p, "k": k, "t": t, "mu": mu, "gamma": gamma, "i": i}


@router.post("/contar")
async def contar(
    familia: str = Form(..., description="Familia: b, c, r, f, distinct, symmetric, ..."),
    n: int = Form(..., description="Peso n (o último n con tabla=true)"),
    metodo: str = Form("auto", description=f"Método de conteo: {', '.join(COUNT_METHODS)}"),
    tabla: bool = Form(False, description="Devuelve los conteos para 0..n"),
    p: Optional[int] = Form(None),
    k: Optional[int] = Form(None),
    t: Optional[int] = Form(None),
    mu: Optional[int] = Form(None),
    gamma: Optional[int] = Form(None),
    i: Optional[int] = Form(None),
):
    """
    Cuenta las particiones de n en una familia.

    Returns:
        JSON con familia, parámetros y conteo (o lista de conteos)
    """
    logger.info(f"[ENDPOINT] POST /particiones/contar - familia: {familia}, n: {n}, método: {metodo}")
    if n > MAX_COUNT_N:
        raise HTTPException(status_code=400, detail=f"n supera el máximo permitido ({MAX_COUNT_N})")
    try:
        family = Command("count", familia, {**_family_params(p, k, t, mu, gamma, i), "n": n}).validate().family()
        if tabla:
            result = count_table(family, n, metodo)
            return {"family": family.name, "params": family.as_dict(),
                    "counts": [str(result.values[m]) for m in sorted(result.values)]}
        value = count(n, family.spec(), metodo)
    except PartitionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    # conteos grandes como texto: JSON no garantiza enteros arbitrarios
    return {"family": family.name, "params": family.as_dict(), "n": n, "count": str(value)}


@router.post("/enumerar")
async def enumerar(
    familia: str = Form(...),
    n: int = Form(..., description="Peso n"),
    abreviado: bool = Form(True, description="Exponentes a^m en la salida"),
    p: Optional[int] = Form(None),
    k: Optional[int] = Form(None),
    t: Optional[int] = Form(None),
    mu: Optional[int] = Form(None),
    gamma: Optional[int] = Form(None),
    i: Optional[int] = Form(None),
):
    """
    Lista las particiones de n en la familia (n <= PARTICIONES_ENUM_CAP).

    Returns:
        JSON con la lista de particiones en orden lexicográfico decreciente
    """
    logger.info(f"[ENDPOINT] POST /particiones/enumerar - familia: {familia}, n: {n}")
    if n > DEFAULT_ENUM_CAP:
        raise HTTPException(
            status_code=400,
            detail=f"n supera el límite de enumeración (n={n}, cap={DEFAULT_ENUM_CAP})"
        )
    try:
        family = Command("enumerate", familia, {**_family_params(p, k, t, mu, gamma, i), "n": n}).validate().family()
        partitions = [format_partition(lam, abreviado) for lam in enumerate_partitions(n, family.spec())]
    except PartitionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    logger.info(f"[ENDPOINT] {len(partitions)} particiones generadas")
    return {"family": family.name, "params": family.as_dict(), "n": n, "partitions": partitions}


@router.post("/mapear")
async def mapear(
    biyeccion: str = Form(..., description=f"Biyección: {', '.join(BIJECTIONS)}"),
    particion: Optional[str] = Form(None, description='Partición de entrada, p. ej. "4,2^2,1^2"'),
    inversa: bool = Form(False),
    traza: bool = Form(False, description="Incluye los pasos de reescritura"),
    n: Optional[int] = Form(None, description="Con sylvester: tabla de correspondencia de n"),
    p: Optional[int] = Form(None),
    k: Optional[int] = Form(None),
    t: Optional[int] = Form(None),
    mu: Optional[int] = Form(None),
    gamma: Optional[int] = Form(None),
):
    """
    Aplica una biyección a una partición, o construye la tabla de
    correspondencia de sylvester para n.
    """
    logger.info(f"[ENDPOINT] POST /particiones/mapear - biyección: {biyeccion}, partición: {particion}, n: {n}")
    params = {"p": p, "k": k, "t": t, "mu": mu, "gamma": gamma, "n": n}
    try:
        Command("map", biyeccion, params).validate()
        if biyeccion == "sylvester" and n is not None:
            if n > DEFAULT_ENUM_CAP:
                raise HTTPException(status_code=400, detail=f"n supera el límite de enumeración ({DEFAULT_ENUM_CAP})")
            table = correspondence_table(n, SymmetricProfile(mu, gamma))
            return {"n": n, "profile": str(table.profile),
                    "pairs": [{"distinct": beta, "symmetric": lam} for beta, lam in table.rows()]}
        if particion is None:
            raise HTTPException(status_code=400, detail="Se requiere particion (o n con sylvester)")
        trace = BijectionTrace() if traza else None
        image = apply_bijection(biyeccion, particion, params, inversa, trace)
        source = parse_partition(particion)
    except (PartitionError, RewriteBudgetExceeded) as e:
        raise HTTPException(status_code=400, detail=str(e))

    payload = {
        "bijection": biyeccion,
        "inverse": inversa,
        "input": format_partition(source),
        "output": format_partition(image),
    }
    if trace is not None:
        payload["trace"] = [
            {"rule": step.rule, "before": format_partition(step.before), "after": format_partition(step.after)}
            for step in trace.steps
        ]
    return JSONResponse(payload)
