"""
Servicio de limpieza de reportes de verificación.
Elimina los JSON del directorio de resultados más antiguos que el TTL.
"""
import os
import logging
from datetime import datetime, timedelta
from typing import Optional

from .queue_svc import REPORT_TTL_HOURS, QueueService
from .report_svc import RESULTS_DIR

logger = logging.getLogger(__name__)


def cleanup_old_reports(ttl_hours: float = REPORT_TTL_HOURS, results_dir: str = RESULTS_DIR,
                        queue: Optional[QueueService] = None) -> dict:
    """
    Elimina reportes con más de ttl_hours de antigüedad.

    Args:
        ttl_hours: tiempo de vida en horas (0 elimina todo)
        results_dir: directorio de reportes
        queue: si se pasa, también se olvidan los jobs cuyo reporte se borró
            y se marcan como failed los jobs en processing más viejos que el TTL

    Returns:
        Diccionario con estadísticas de limpieza
    """
    if not os.path.exists(results_dir):
        logger.warning(f"[CLEANUP] Directorio no existe: {results_dir}")
        stale_jobs = queue.expire_stale_processing(ttl_hours) if queue is not None and ttl_hours > 0 else []
        return {"files_deleted": 0, "space_freed_mb": 0, "errors": 0, "stale_jobs": len(stale_jobs)}

    now = datetime.now()
    cutoff_time = now - timedelta(hours=ttl_hours)
    cutoff_timestamp = cutoff_time.timestamp()

    files_deleted = 0
    space_freed = 0
    errors = 0
    forgotten = []

    logger.info("=" * 80)
    logger.info("[CLEANUP] Iniciando limpieza de reportes antiguos")
    logger.info(f"[CLEANUP] Directorio: {results_dir}")
    logger.info(f"[CLEANUP] TTL: {ttl_hours} horas")
    logger.info(f"[CLEANUP] Eliminando archivos anteriores a: {cutoff_time.strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info("=" * 80)

    try:
        for filename in os.listdir(results_dir):
            filepath = os.path.join(results_dir, filename)
            if not os.path.isfile(filepath) or not filename.endswith(".json"):
                continue
            try:
                file_mtime = os.path.getmtime(filepath)
                if ttl_hours > 0 and file_mtime >= cutoff_timestamp:
                    logger.debug(f"[CLEANUP] Conservando: {filename}")
                    continue
                file_size = os.path.getsize(filepath)
                logger.info(
                    f"[CLEANUP] Eliminando: {filename} "
                    f"(antigüedad: {(now.timestamp() - file_mtime) / 3600:.1f}h)"
                )
                os.remove(filepath)
                files_deleted += 1
                space_freed += file_size
                forgotten.append(filename[:-len(".json")])
            except Exception as e:
                errors += 1
                logger.error(f"[CLEANUP] Error procesando {filename}: {str(e)}")
    except Exception as e:
        logger.error(f"[CLEANUP] Error al listar directorio {results_dir}: {str(e)}")
        errors += 1

    if queue is not None and forgotten:
        queue.forget_finished(forgotten)

    stale_jobs = []
    if queue is not None and ttl_hours > 0:
        stale_jobs = queue.expire_stale_processing(ttl_hours)

    space_freed_mb = space_freed / (1024 * 1024)
    logger.info("=" * 80)
    logger.info("[CLEANUP] Limpieza completada")
    logger.info(f"[CLEANUP] Archivos eliminados: {files_deleted}")
    logger.info(f"[CLEANUP] Espacio liberado: {space_freed_mb:.2f} MB")
    logger.info(f"[CLEANUP] Errores: {errors}")
    logger.info(f"[CLEANUP] Jobs expirados en processing: {len(stale_jobs)}")
    logger.info("=" * 80)

    return {
        "files_deleted": files_deleted,
        "space_freed_mb": round(space_freed_mb, 2),
        "errors": errors,
        "stale_jobs": len(stale_jobs),
        "cleanup_time": now.isoformat(),
    }


def get_directory_stats(results_dir: str = RESULTS_DIR) -> dict:
    """Cantidad y tamaño de los reportes guardados."""
    if not os.path.exists(results_dir):
        return {"exists": False, "total_files": 0, "total_size_mb": 0, "ttl_hours": REPORT_TTL_HOURS}

    total_files = 0
    total_size = 0
    try:
        for filename in os.listdir(results_dir):
            filepath = os.path.join(results_dir, filename)
            if os.path.isfile(filepath):
                total_files += 1
                total_size += os.path.getsize(filepath)
    except Exception as e:
        logger.error(f"[CLEANUP] Error obteniendo estadísticas: {str(e)}")

    return {
        "exists": True,
        "total_files": total_files,
        "total_size_mb": round(total_size / (1024 * 1024), 2),
        "ttl_hours": REPORT_TTL_HOURS,
    }
