from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from lexmerge.defmatch import run_definition_match
from lexmerge.service import create_app
from lexmerge.verify import Workbench, items_from_matches


@pytest.fixture(scope="module")
def payloads(defmatch_pair):
    left, right = defmatch_pair
    matches = run_definition_match(left, right, floor=0.4)
    return items_from_matches(matches, left, right)


@pytest.fixture()
def client(tmp_path):
    bench = Workbench(tmp_path / "state")
    app = create_app(workbench=bench)
    with TestClient(app) as client:
        yield client


@pytest.fixture()
def loaded(client, payloads):
    response = client.post("/api/queues",
                           json={"queue_id": "review", "items": payloads})
    assert response.status_code == 201
    return client


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"
    assert body["schema_version"] == 1


def test_root_without_ui(client):
    body = client.get("/").json()
    assert body["api"] == "/api/queues"


def test_root_redirects_to_ui_when_built(tmp_path):
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>v</title>",
                                   encoding="utf-8")
    app = create_app(state_dir=tmp_path / "state", ui_dir=ui)
    with TestClient(app) as client:
        assert client.get("/", follow_redirects=False).status_code == 307
        page = client.get("/ui/")
        assert page.status_code == 200
        assert "<title>v</title>" in page.text


def test_create_queue_and_list(loaded):
    queues = loaded.get("/api/queues").json()
    assert [q["queue_id"] for q in queues] == ["review"]
    assert queues[0]["total"] == 2
    assert queues[0]["pending"] == 2


def test_create_queue_conflict(loaded, payloads):
    response = loaded.post("/api/queues",
                           json={"queue_id": "review", "items": payloads})
    assert response.status_code == 409


def test_create_queue_validation(client):
    response = client.post("/api/queues",
                           json={"queue_id": "bad", "items": []})
    assert response.status_code == 422
    response = client.post("/api/queues",
                           json={"queue_id": "Bad Name", "items": [{"x": 1}]})
    assert response.status_code == 422


def test_queue_stats_routes(loaded):
    direct = loaded.get("/api/queues/review").json()
    alias = loaded.get("/api/queues/review/stats").json()
    assert direct == alias
    assert direct["total"] == 2
    assert direct["pct_correct"] is None


def test_unknown_queue_404(client):
    assert client.get("/api/queues/nope").status_code == 404
    assert client.get("/api/queues/nope/next").status_code == 404


def test_next_item_and_payload_order(loaded, payloads):
    item = loaded.get("/api/queues/review/next").json()
    assert item["item_id"] == "review:00000"
    assert item["status"] == "pending"
    # The payload served over HTTP is exactly what was enqueued, ranked
    # alternatives in the same order.
    assert item["payload"] == payloads[0]


def test_verifier_header_drives_leases(loaded):
    first = loaded.get("/api/queues/review/next",
                       headers={"X-Verifier-Id": "alice"}).json()
    second = loaded.get("/api/queues/review/next",
                        headers={"X-Verifier-Id": "bob"}).json()
    assert first["item_id"] == "review:00000"
    assert second["item_id"] == "review:00001"


def test_get_item(loaded, payloads):
    item = loaded.get("/api/items/review:00001").json()
    assert item["payload"]["left"] == payloads[1]["left"]
    assert loaded.get("/api/items/review:00042").status_code == 404


def test_accept_verdict_updates_stats(loaded):
    response = loaded.post("/api/items/review:00000/verdict",
                           json={"verdict": "accept"},
                           headers={"X-Verifier-Id": "alice"})
    assert response.status_code == 200
    body = response.json()
    assert body["verdict"] == "accept"
    assert body["verifier"] == "alice"
    assert body["replayed"] is False
    stats = loaded.get("/api/queues/review").json()
    assert stats["accepted"] == 1
    assert stats["pct_correct"] == 100.0


def test_correction_flow(loaded):
    item = loaded.get("/api/items/review:00000").json()
    other = item["payload"]["alternatives"][1]["id"]
    response = loaded.post("/api/items/review:00000/verdict",
                           json={"verdict": "correct", "corrected": other})
    assert response.status_code == 200
    assert response.json()["corrected"] == other
    assert loaded.get("/api/items/review:00000").json()["status"] == "corrected"


def test_invalid_verdict_422(loaded):
    response = loaded.post("/api/items/review:00000/verdict",
                           json={"verdict": "maybe"})
    assert response.status_code == 422
    response = loaded.post("/api/items/review:00000/verdict",
                           json={"verdict": "correct", "corrected": "bogus"})
    assert response.status_code == 422


def test_verdict_unknown_item_404(loaded):
    response = loaded.post("/api/items/review:00042/verdict",
                           json={"verdict": "accept"})
    assert response.status_code == 404


def test_idempotency_key_over_http(loaded):
    body = {"verdict": "accept", "idempotency_key": "k-1"}
    first = loaded.post("/api/items/review:00000/verdict", json=body).json()
    again = loaded.post("/api/items/review:00000/verdict", json=body).json()
    assert first["replayed"] is False
    assert again["replayed"] is True


def test_queue_drains_to_204(loaded):
    for index in range(2):
        loaded.post(f"/api/items/review:0000{index}/verdict",
                    json={"verdict": "accept"})
    assert loaded.get("/api/queues/review/next").status_code == 204


def test_export_seeds_ndjson(loaded, payloads):
    loaded.post("/api/items/review:00000/verdict", json={"verdict": "accept"})
    loaded.post("/api/items/review:00001/verdict", json={"verdict": "reject"})
    response = loaded.get("/api/queues/review/export-seeds")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("application/x-ndjson")
    lines = [json.loads(l) for l in response.text.splitlines()]
    assert lines == [{
        "left": payloads[0]["left"],
        "right": payloads[0]["right"],
        "confidence": 1.0,
        "phase": "seed",
        "status": "accepted",
    }]
