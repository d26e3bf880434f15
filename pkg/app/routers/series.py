"""
Router para expansión y disección de q-series truncadas.
"""
from typing import Optional

from fastapi import APIRouter, HTTPException, Form
import json
import logging

from ..cli import NAMED_SERIES, Command
from ..services.errors import PartitionError
from ..services.qseries_svc import SERIES_ORDER, dissect, gf

router = APIRouter(prefix="/series", tags=["Series"])
logger = logging.getLogger(__name__)

# orden máximo aceptado por request
MAX_ORDER = 1000


def _check_order(order: int):
    if order > MAX_ORDER:
        raise HTTPException(status_code=400, detail=f"orden supera el máximo permitido ({MAX_ORDER})")


def _family_params(p, k, t, mu, gamma, i) -> dict:
    return {"p": p, "k": k, "t": t, "mu": mu, "gamma": gamma, "i": i}


@router.post("/expandir")
async def expandir(
    serie: str = Form(..., description="Familia (b, symmetric, ...) o serie con nombre (jacobi, slater-even, ...)"),
    orden: int = Form(SERIES_ORDER, description="Truncamiento N"),
    terminos: int = Form(20, description="Términos en el campo display"),
    m: int = Form(0, description="w = signo·q^m (jacobi)"),
    signo: int = Form(1, description="1 o -1 (jacobi)"),
    p: Optional[int] = Form(None),
    k: Optional[int] = Form(None),
    t: Optional[int] = Form(None),
    mu: Optional[int] = Form(None),
    gamma: Optional[int] = Form(None),
    i: Optional[int] = Form(None),
):
    """
    Expande una función generadora hasta q^N.

    Returns:
        JSON con order, coeficientes (como texto) y display
    """
    logger.info(f"[ENDPOINT] POST /series/expandir - serie: {serie}, orden: {orden}")
    _check_order(orden)
    if signo not in (1, -1):
        raise HTTPException(status_code=400, detail="signo debe ser 1 o -1")
    try:
        command = Command("series", serie, {**_family_params(p, k, t, mu, gamma, i), "order": orden}).validate()
        if serie in NAMED_SERIES:
            series = NAMED_SERIES[serie](orden, m, signo)
        else:
            series = gf(command.family(), orden)
    except PartitionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"series": serie, **json.loads(series.to_json()), "display": series.display(terminos)}


@router.post("/disectar")
async def disectar(
    familia: str = Form(...),
    modulo: int = Form(..., description="d de la disección"),
    residuo: int = Form(..., description="r, 0 <= r < d"),
    orden: int = Form(100, description="Truncamiento de la subserie"),
    terminos: int = Form(20),
    p: Optional[int] = Form(None),
    k: Optional[int] = Form(None),
    t: Optional[int] = Form(None),
    mu: Optional[int] = Form(None),
    gamma: Optional[int] = Form(None),
    i: Optional[int] = Form(None),
):
    """Extrae Σ coeff(dn+r) q^n de la función generadora de una familia."""
    logger.info(f"[ENDPOINT] POST /series/disectar - familia: {familia}, d: {modulo}, r: {residuo}, orden: {orden}")
    params = {**_family_params(p, k, t, mu, gamma, i), "modulus": modulo, "residue": residuo, "order": orden}
    try:
        command = Command("dissect", familia, params).validate()
        _check_order(modulo * orden + residuo)
        sub = dissect(gf(command.family(), modulo * orden + residuo), modulo, residuo)
    except PartitionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"family": familia, "modulus": modulo, "residue": residuo, **json.loads(sub.to_json()),
            "display": sub.display(terminos)}
