"""
API REST del motor de particiones.
Conteo, enumeración y biyecciones síncronos; verificaciones largas en cola.
"""
from fastapi import Depends, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from datetime import datetime
import logging

from .routers import jobs, partitions, series
from .services import report_svc
from .services.cleanup_svc import cleanup_old_reports, get_directory_stats
from .services.queue_svc import REPORT_TTL_HOURS, QueueService, get_queue_service

# Configurar logging para que se vea en Docker
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)

logger = logging.getLogger(__name__)

VERSION = "1.0.0"

logger.info("=" * 60)
logger.info("Iniciando API del motor de particiones")
logger.info(f"Directorio de reportes: {report_svc.RESULTS_DIR}")
logger.info("Sistema de cola: Valkey + Worker de verificación")
logger.info("=" * 60)

app = FastAPI(
    title="API de Particiones",
    description="Conteo, enumeración, biyecciones y q-series de particiones restringidas, con verificación en cola",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(partitions.router)
app.include_router(series.router)
app.include_router(jobs.router)


@app.get("/")
async def root():
    """Endpoint raíz con información de la API."""
    logger.info("Solicitud recibida en endpoint raiz /")
    return {
        "message": "API de Particiones",
        "version": VERSION,
        "status": "online",
        "features": {
            "queue_system": "Valkey + Worker de verificación",
            "priority_queue": "Habilitado (high/normal/low)",
            "auto_cleanup": f"Reportes eliminados automáticamente (TTL: {REPORT_TTL_HOURS} horas)",
            "cleanup_frequency": "Cada 1 hora",
        },
        "workflow": {
            "1_create_job": "POST /jobs/create → {job_id} (respuesta instantánea)",
            "2_check_status": "GET /jobs/status/{job_id} → polling",
            "3_download": "GET /jobs/download/{job_id} → reporte JSON",
        },
        "endpoints": {
            "particiones": {
                "/particiones/contar": "[POST] Conteo exacto (dp o enumeración)",
                "/particiones/enumerar": "[POST] Lista de particiones de n",
                "/particiones/mapear": "[POST] Biyecciones (glaisher, phi, f-to-r, sylvester, ...)",
            },
            "series": {
                "/series/expandir": "[POST] Función generadora truncada",
                "/series/disectar": "[POST] Disección Σ coeff(dn+r) q^n",
            },
            "jobs": {
                "/jobs/create": "[POST] Encolar suite de verificación",
                "/jobs/status/{job_id}": "Consultar estado de un job",
                "/jobs/queue": "Ver cola de jobs pendientes",
                "/jobs/download/{job_id}": "Descargar reporte de job completado",
                "/jobs/{job_id}": "Cancelar job pendiente (DELETE)",
                "/jobs/stats": "Estadísticas de la cola",
            },
            "utilidades": {
                "/reset": "Eliminar todos los reportes (DELETE)",
                "/health": "Estado de salud de la API",
            },
        },
        "docs": "/docs",
        "redoc": "/redoc"
    }


@app.get("/health")
async def health_check():
    logger.debug("Health check solicitado")
    return {"status": "healthy", "reports": get_directory_stats(report_svc.RESULTS_DIR)}


@app.delete("/reset")
async def reset_reports(queue: QueueService = Depends(get_queue_service)):
    """
    Elimina TODOS los reportes inmediatamente, ignorando el TTL.

    Returns:
        JSON con estadísticas de limpieza
    """
    stats = cleanup_old_reports(ttl_hours=0, results_dir=report_svc.RESULTS_DIR, queue=queue)
    return {
        "status": "success",
        "message": "Limpieza forzada completada",
        "timestamp": datetime.utcnow().isoformat(),
        "summary": {
            "total_files_deleted": stats["files_deleted"],
            "total_space_freed_mb": stats["space_freed_mb"],
        },
    }
