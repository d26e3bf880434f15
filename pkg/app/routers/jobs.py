"""
Router para gestión de jobs de verificación (cola de procesamiento).
"""
from fastapi import APIRouter, Depends, HTTPException, Form
from fastapi.responses import FileResponse, JSONResponse
import os
import json
import logging

from ..services.enumeration_svc import DEFAULT_ENUM_CAP
from ..services.qseries_svc import SERIES_ORDER
from ..services.queue_svc import QueueService, get_queue_service
from ..services.verify_svc import DEFAULT_BIJECTION_CAP, SUITES

router = APIRouter(prefix="/jobs", tags=["Jobs"])
logger = logging.getLogger(__name__)

SUITE_PARAMS = ("p", "k", "t", "ell", "mu", "gamma", "alpha")

PRIORITY_NAMES = {
    QueueService.PRIORITY_HIGH: "high",
    QueueService.PRIORITY_NORMAL: "normal",
    QueueService.PRIORITY_LOW: "low",
}


@router.post("/create")
async def create_verification_job(
    suite: str = Form("all", description="Suite de verificación o 'all'"),
    orden: int = Form(SERIES_ORDER, description="Orden de series N"),
    enum_cap: int = Form(DEFAULT_ENUM_CAP),
    bijection_cap: int = Form(DEFAULT_BIJECTION_CAP),
    parameters: str = Form("{}", description="Parámetros del suite en JSON, p. ej. {\"p\": 3, \"k\": 2}"),
    queue: QueueService = Depends(get_queue_service),
):
    """
    Encola un suite de verificación.

    Retorna INSTANTÁNEAMENTE con job_id; el worker escribe el reporte JSON.
    """
    logger.info(f"[ENDPOINT] POST /jobs/create - suite: {suite}, orden: {orden}")
    if suite not in ("all", *SUITES):
        raise HTTPException(status_code=400, detail=f"Suite inválido. Suites válidos: {['all', *SUITES]}")
    if orden < 0 or enum_cap < 0 or bijection_cap < 0:
        raise HTTPException(status_code=400, detail="orden, enum_cap y bijection_cap deben ser >= 0")
    try:
        params = json.loads(parameters)
    except json.JSONDecodeError:
        raise HTTPException(status_code=400, detail="Parámetros inválidos (debe ser JSON válido)")
    if not isinstance(params, dict):
        raise HTTPException(status_code=400, detail="Parámetros inválidos (debe ser un objeto JSON)")
    unknown = sorted(set(params) - set(SUITE_PARAMS))
    if unknown:
        raise HTTPException(status_code=400, detail=f"Parámetros desconocidos: {unknown}")
    if not all(isinstance(value, int) for value in params.values()):
        raise HTTPException(status_code=400, detail="Los parámetros del suite deben ser enteros")

    job_id = queue.create_job(
        suite,
        {"order": orden, "enum_cap": enum_cap, "bijection_cap": bijection_cap, **params},
    )
    priority = queue.get_job_status(job_id)["priority"]
    logger.info(f"[ENDPOINT] Job creado: {job_id} (prioridad: {PRIORITY_NAMES[priority]})")

    return JSONResponse({
        "job_id": job_id,
        "suite": suite,
        "status": "pending",
        "priority": PRIORITY_NAMES[priority],
        "message": f"Job creado con prioridad {PRIORITY_NAMES[priority].upper()}",
        "status_url": f"/jobs/status/{job_id}",
        "download_url": f"/jobs/download/{job_id}",
    })


@router.get("/status/{job_id}")
async def get_job_status(job_id: str, queue: QueueService = Depends(get_queue_service)):
    logger.info(f"[ENDPOINT] GET /jobs/status/{job_id}")
    job_data = queue.get_job_status(job_id)
    if not job_data:
        raise HTTPException(status_code=404, detail="Job no encontrado")
    return job_data


@router.get("/queue")
async def get_queue_info(queue: QueueService = Depends(get_queue_service)):
    """Estadísticas y jobs pendientes ordenados por prioridad."""
    logger.info("[ENDPOINT] GET /jobs/queue")
    pending_jobs = queue.get_queue_jobs(limit=50)
    return {
        "stats": queue.get_queue_stats(),
        "pending_jobs": pending_jobs,
        "total_pending": len(pending_jobs),
    }


@router.get("/download/{job_id}")
async def download_report(job_id: str, queue: QueueService = Depends(get_queue_service)):
    """
    Descarga el reporte JSON de un job completado.

    Args:
        job_id: ID del job

    Returns:
        Archivo JSON con los reportes de verificación
    """
    logger.info(f"[ENDPOINT] GET /jobs/download/{job_id}")
    job_data = queue.get_job_status(job_id)
    if not job_data:
        raise HTTPException(status_code=404, detail="Job no encontrado")

    if job_data["status"] != "completed":
        raise HTTPException(
            status_code=400,
            detail=f"Job no completado. Estado actual: {job_data['status']}",
        )

    output_file = job_data["output_file"]
    if not output_file or not os.path.exists(output_file):
        raise HTTPException(status_code=404, detail="Reporte no encontrado o ya expiró")

    logger.info(f"[ENDPOINT] Enviando reporte: {output_file}")
    return FileResponse(output_file, media_type="application/json", filename=f"verificacion_{job_data['suite']}.json")


@router.delete("/{job_id}")
async def cancel_job(job_id: str, queue: QueueService = Depends(get_queue_service)):
    """Cancela un job pendiente en la cola."""
    logger.info(f"[ENDPOINT] DELETE /jobs/{job_id}")
    job_data = queue.get_job_status(job_id)
    if not job_data:
        raise HTTPException(status_code=404, detail="Job no encontrado")

    if job_data["status"] == "processing":
        raise HTTPException(status_code=400, detail="No se puede cancelar un job que está en procesamiento")

    if job_data["status"] in ["completed", "failed"]:
        return JSONResponse({"message": f"Job ya está {job_data['status']}", "status": job_data["status"]})

    if queue.cancel_job(job_id):
        logger.info(f"[ENDPOINT] Job cancelado exitosamente: {job_id}")
        return {"message": "Job cancelado exitosamente", "job_id": job_id}
    raise HTTPException(status_code=500, detail="No se pudo cancelar el job")


@router.get("/stats")
async def get_stats(queue: QueueService = Depends(get_queue_service)):
    logger.info("[ENDPOINT] GET /jobs/stats")
    stats = queue.get_queue_stats()
    return {
        "queue": {"pending": stats["pending"], "processing": stats["processing"]},
        "completed": stats["completed"],
        "failed": stats["failed"],
        "total_active": stats["pending"] + stats["processing"],
    }
