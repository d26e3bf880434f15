import fakeredis
from fastapi.testclient import TestClient
import pytest

from app.services.queue_svc import QueueService, get_queue_service


@pytest.fixture
def queue():
    return QueueService(client=fakeredis.FakeStrictRedis(decode_responses=True))


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    monkeypatch.setattr("app.services.report_svc.RESULTS_DIR", str(tmp_path))
    return tmp_path


@pytest.fixture
def client(queue, results_dir):
    from app.main import app

    app.dependency_overrides[get_queue_service] = lambda: queue
    with TestClient(app) as test_client:
        yield test_client
    app.dependency_overrides.clear()
