"""
Servicio de gestión de cola usando Valkey.
Encola suites de verificación como jobs con prioridad y guarda su estado.
"""
import os
import json
import uuid
import logging
from datetime import datetime, timedelta
from functools import lru_cache
from typing import Any, Dict, List, Optional

import valkey

logger = logging.getLogger(__name__)

REPORT_TTL_HOURS = int(os.getenv("PARTICIONES_REPORT_TTL_HOURS", "6"))
FAILED_TTL_SECONDS = 7 * 24 * 3600


class QueueService:
    """Cola de suites de verificación sobre Valkey (ZSET por prioridad + registros JSON)."""

    # menor número = mayor prioridad
    PRIORITY_HIGH = 10    # suites rápidos (classical, theorem-main, slater)
    PRIORITY_NORMAL = 50  # un suite con su grilla
    PRIORITY_LOW = 100    # verify_all

    def __init__(self, host: str = None, port: int = None, db: int = 0, client=None):
        """
        Inicializa la conexión con Valkey.

        Args:
            host: host de Valkey (default: VALKEY_HOST o 'valkey')
            port: puerto (default: VALKEY_PORT o 6379)
            db: base de datos
            client: cliente ya construido (p. ej. fakeredis en tests)
        """
        if client is not None:
            self.redis = client
            logger.info("[QUEUE] Usando cliente inyectado")
            return
        if host is None:
            host = os.getenv("VALKEY_HOST", "valkey")
        if port is None:
            port = int(os.getenv("VALKEY_PORT", "6379"))
        self.redis = valkey.Redis(host=host, port=port, db=db, decode_responses=True)
        logger.info(f"[QUEUE] Conectado a Valkey en {host}:{port}")

    @staticmethod
    def priority_for(suite: str) -> int:
        if suite == "all":
            return QueueService.PRIORITY_LOW
        if suite in ("classical", "theorem-main", "slater"):
            return QueueService.PRIORITY_HIGH
        return QueueService.PRIORITY_NORMAL

    def create_job(self, suite: str, parameters: Dict[str, Any], priority: Optional[int] = None) -> str:
        """
        Crea un job de verificación y lo agrega a la cola.

        Args:
            suite: nombre del suite ("all", "rela", ...)
            parameters: order, enum_cap, bijection_cap y parámetros del suite
            priority: prioridad explícita (default según el suite)

        Returns:
            ID del job creado
        """
        job_id = str(uuid.uuid4())
        if priority is None:
            priority = self.priority_for(suite)
        now = datetime.utcnow()
        job_data = {
            "id": job_id,
            "status": "pending",
            "suite": suite,
            "priority": priority,
            "created_at": now.isoformat(),
            "started_at": None,
            "completed_at": None,
            "progress": 0,
            "output_file": None,
            "result_url": None,
            "passed": None,
            "error": None,
            "parameters": parameters,
        }
        self.redis.set(f"job:{job_id}", json.dumps(job_data))
        self.redis.zadd("pending_jobs", {job_id: now.timestamp()})
        # score = prioridad * 1e6 + timestamp: FIFO dentro de cada prioridad
        self.redis.zadd("job_queue", {job_id: priority * 1000000 + now.timestamp()})
        logger.info(f"[QUEUE] Job creado: {job_id} - {suite} (prioridad: {priority})")
        return job_id

    def get_next_job(self) -> Optional[str]:
        """ID del siguiente job por prioridad, o None si la cola está vacía."""
        result = self.redis.zpopmin("job_queue", count=1)
        if result:
            job_id, _ = result[0]
            logger.info(f"[QUEUE] Job obtenido de la cola: {job_id}")
            return job_id
        return None

    def get_job_status(self, job_id: str) -> Optional[Dict[str, Any]]:
        job_data = self.redis.get(f"job:{job_id}")
        if not job_data:
            return None
        return json.loads(job_data)

    def update_job_status(
        self,
        job_id: str,
        status: str,
        progress: Optional[int] = None,
        output_file: Optional[str] = None,
        error: Optional[str] = None,
        passed: Optional[bool] = None,
    ):
        """
        Actualiza el estado de un job.

        Args:
            job_id: ID del job
            status: pending, processing, completed o failed
            progress: progreso 0-100
            output_file: ruta del reporte JSON (si completó)
            error: mensaje de error (si falló)
            passed: resultado global de la verificación (si completó)
        """
        job_data = self.get_job_status(job_id)
        if not job_data:
            logger.warning(f"[QUEUE] Job no encontrado para actualizar: {job_id}")
            return

        job_data["status"] = status
        if progress is not None:
            job_data["progress"] = progress

        if status == "processing" and not job_data["started_at"]:
            job_data["started_at"] = datetime.utcnow().isoformat()
            self.redis.zrem("pending_jobs", job_id)
            self.redis.sadd("processing_jobs", job_id)
            logger.info(f"[QUEUE] Job iniciado: {job_id}")

        if status in ("completed", "failed"):
            job_data["completed_at"] = datetime.utcnow().isoformat()
            self.redis.srem("processing_jobs", job_id)
            if status == "completed":
                job_data["progress"] = 100
                job_data["output_file"] = output_file
                job_data["passed"] = passed
                job_data["result_url"] = f"/jobs/download/{job_id}"
                self.redis.zadd("completed_jobs", {job_id: datetime.utcnow().timestamp()})
                self.redis.set(f"job:{job_id}", json.dumps(job_data), ex=REPORT_TTL_HOURS * 3600)
                logger.info(f"[QUEUE] Job completado: {job_id} (verificación: {'pass' if passed else 'fail'})")
                return
            job_data["error"] = error
            self.redis.zadd("failed_jobs", {job_id: datetime.utcnow().timestamp()})
            self.redis.set(f"job:{job_id}", json.dumps(job_data), ex=FAILED_TTL_SECONDS)
            logger.error(f"[QUEUE] Job fallido: {job_id} - {error}")
            return

        self.redis.set(f"job:{job_id}", json.dumps(job_data))

    def get_queue_stats(self) -> Dict[str, Any]:
        return {
            "pending": self.redis.zcard("job_queue"),
            "processing": self.redis.scard("processing_jobs"),
            "completed": self.redis.zcard("completed_jobs"),
            "failed": self.redis.zcard("failed_jobs"),
        }

    def get_queue_jobs(self, limit: int = 50) -> List[Dict[str, Any]]:
        """Jobs pendientes ordenados por prioridad, con su posición en la cola."""
        jobs = []
        for job_id, _ in self.redis.zrange("job_queue", 0, limit - 1, withscores=True):
            job_data = self.get_job_status(job_id)
            if job_data:
                job_data["queue_position"] = len(jobs) + 1
                jobs.append(job_data)
        return jobs

    def cancel_job(self, job_id: str) -> bool:
        """
        Cancela un job pendiente.

        Returns:
            True si se canceló, False si no existe o ya no está pendiente
        """
        job_data = self.get_job_status(job_id)
        if not job_data or job_data["status"] != "pending":
            if job_data and job_data["status"] == "processing":
                logger.warning(f"[QUEUE] No se puede cancelar job en procesamiento: {job_id}")
            return False
        self.redis.zrem("job_queue", job_id)
        self.redis.zrem("pending_jobs", job_id)
        self.update_job_status(job_id, "failed", error="Cancelado por usuario")
        logger.info(f"[QUEUE] Job cancelado: {job_id}")
        return True

    def expire_stale_processing(self, max_age_hours: float) -> List[str]:
        """
        Marca como failed los jobs en processing iniciados hace más de max_age_hours
        (el worker murió a mitad del suite).

        Returns:
            IDs de los jobs expirados
        """
        cutoff = datetime.utcnow() - timedelta(hours=max_age_hours)
        expired = []
        for job_id in self.redis.smembers("processing_jobs"):
            job_data = self.get_job_status(job_id)
            if not job_data:
                self.redis.srem("processing_jobs", job_id)
                continue
            started_at = job_data.get("started_at")
            if started_at and datetime.fromisoformat(started_at) < cutoff:
                self.update_job_status(job_id, "failed", error=f"Expirado en procesamiento (> {max_age_hours} horas)")
                expired.append(job_id)
        if expired:
            logger.warning(f"[QUEUE] {len(expired)} jobs expirados en processing: {expired}")
        return expired

    def forget_finished(self, job_ids: List[str]):
        """Quita de los índices completed/failed los jobs cuyo reporte se eliminó."""
        for job_id in job_ids:
            self.redis.zrem("completed_jobs", job_id)
            self.redis.zrem("failed_jobs", job_id)


@lru_cache(maxsize=1)
def get_queue_service() -> QueueService:
    """Instancia compartida; los tests la reemplazan con dependency_overrides."""
    return QueueService()
