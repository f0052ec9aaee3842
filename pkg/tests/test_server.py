import time

import pytest
from fastapi.testclient import TestClient

from fnet import UnmatchedPolicy, partition_kb, sim_entities
from fnet.server import create_app

QUERY_BODY = {
    "kind": "objects",
    "label": "sample-query",
    "description": {
        "attributes": [
            {"name": "objects", "kind": "simple", "possible": {"the-signs": 0.9, "the-letters": 0.6}}
        ]
    },
}


@pytest.fixture(scope="module")
def app(sample_kb):
    return create_app(sample_kb, partition_kb(sample_kb, "objects"))


@pytest.fixture()
def client(app):
    with TestClient(app) as c:
        yield c


def open_session(client, body=None):
    response = client.post("/v1/sessions", json=body or QUERY_BODY)
    assert response.status_code == 201
    return response.json()


def test_kb_summary(client, sample_kb):
    response = client.get("/v1/kb")
    assert response.status_code == 200
    body = response.json()
    assert body["name"] == "word-processing"
    assert body["fingerprint"] == sample_kb.fingerprint
    assert body["counts"] == {"objects": 2, "goals": 4, "instances": 0}


def test_every_response_carries_the_fingerprint_header(client, sample_kb):
    for path in ("/v1/kb", "/v1/kb/objects", "/v1/kb/missing"):
        response = client.get(path)
        assert response.headers["X-KB-Fingerprint"] == sample_kb.fingerprint


def test_entity_listings_and_lookup(client):
    objects = client.get("/v1/kb/objects").json()
    assert [o["name"] for o in objects] == ["the-substantive", "the-signs"]
    goals = client.get("/v1/kb/goals").json()
    assert len(goals) == 4
    assert client.get("/v1/kb/instances").json() == []
    single = client.get("/v1/kb/objects/the-signs")
    assert single.status_code == 200
    assert single.json()["name"] == "the-signs"
    goal = client.get("/v1/kb/goals/erase-the-letters")
    assert goal.status_code == 200


def test_unknown_entity_is_404(client):
    response = client.get("/v1/kb/objects/nobody")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown-entity"


def test_similarity_matches_the_library(client, sample_kb):
    response = client.get(
        "/v1/similarity",
        params={"kind": "objects", "left": "the-substantive", "right": "the-signs"},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["policy"] == "zero"
    expected = sim_entities(
        sample_kb.entity("objects", "the-substantive"),
        sample_kb.entity("objects", "the-signs"),
        UnmatchedPolicy.ZERO,
    )
    assert body["score"] == pytest.approx(expected, abs=1e-9)


def test_similarity_rejects_unknown_policy(client):
    response = client.get(
        "/v1/similarity",
        params={"kind": "objects", "left": "the-signs", "right": "the-signs", "policy": "maybe"},
    )
    assert response.status_code == 400
    assert response.json()["code"] == "malformed-body"


def test_partition_endpoint_serves_the_loaded_partition(client, sample_kb):
    response = client.get("/v1/partition")
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "objects"
    assert body["kb_fingerprint"] == sample_kb.fingerprint
    assert body["assignment"] == {"the-signs": 4, "the-substantive": 4}


def test_partition_for_another_kind_is_404(client):
    response = client.get("/v1/partition", params={"kind": "goals"})
    assert response.status_code == 404
    assert response.json()["code"] == "partition-not-found"


def test_session_walk_over_http(client):
    opened = open_session(client)
    sid = opened["session_id"]
    assert opened["evaluations"] == 6
    assert opened["candidate"] == {"name": "the-signs", "score": 0.9, "level": 4}

    state = client.get(f"/v1/sessions/{sid}").json()
    assert state["state"] == "active"
    assert state["route"] == [4, 3, 2, 1]
    assert state["candidate"]["name"] == "the-signs"

    step = client.post(f"/v1/sessions/{sid}/reject").json()
    assert step["candidate"] == {"name": "the-substantive", "score": 0.7, "level": 4}
    assert step["evaluations"] == 6

    record = client.post(f"/v1/sessions/{sid}/accept").json()
    assert record == {
        "query_label": "sample-query",
        "entity": "the-substantive",
        "score": 0.7,
        "rejections": 1,
        "evaluations": 6,
    }
    assert client.get(f"/v1/sessions/{sid}").json()["state"] == "accepted"


def test_rejecting_to_exhaustion(client):
    sid = open_session(client)["session_id"]
    client.post(f"/v1/sessions/{sid}/reject")
    step = client.post(f"/v1/sessions/{sid}/reject").json()
    assert step == {"exhausted": True, "evaluations": 6}
    follow_up = client.post(f"/v1/sessions/{sid}/reject")
    assert follow_up.status_code == 409
    assert follow_up.json()["code"] == "session-not-active"


def test_accept_on_a_terminal_session_is_409(client):
    sid = open_session(client)["session_id"]
    client.post(f"/v1/sessions/{sid}/accept")
    response = client.post(f"/v1/sessions/{sid}/accept")
    assert response.status_code == 409
    assert response.json()["code"] == "session-not-active"


def test_unknown_session_is_404(client):
    response = client.get("/v1/sessions/not-a-session")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown-session"


def test_deleted_sessions_answer_gone(client):
    sid = open_session(client)["session_id"]
    assert client.delete(f"/v1/sessions/{sid}").status_code == 204
    response = client.get(f"/v1/sessions/{sid}")
    assert response.status_code == 404
    assert response.json()["code"] == "session-gone"


def test_exhaustive_mode_over_http(client):
    opened = open_session(client, {**QUERY_BODY, "mode": "exhaustive"})
    assert opened["evaluations"] == 2
    assert opened["candidate"]["name"] == "the-signs"
    state = client.get(f"/v1/sessions/{opened['session_id']}").json()
    assert state["mode"] == "exhaustive"
    assert state["route"] == []


def test_malformed_session_body_is_400(client):
    response = client.post("/v1/sessions", json={"kind": "objects"})
    assert response.status_code == 400
    assert response.json()["code"] == "malformed-body"
    response = client.post(
        "/v1/sessions", content=b"not json", headers={"content-type": "application/json"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "malformed-body"


def test_bad_mode_is_400(client):
    response = client.post("/v1/sessions", json={**QUERY_BODY, "mode": "psychic"})
    assert response.status_code == 400


def test_busy_sessions_answer_409(app, client):
    sid = open_session(client)["session_id"]
    _, lock = app.state.registry.peek(sid)
    assert lock.acquire(blocking=False)
    try:
        response = client.post(f"/v1/sessions/{sid}/reject")
        assert response.status_code == 409
        assert response.json()["code"] == "session-busy"
    finally:
        lock.release()
    # reads still work while the session is claimed elsewhere
    assert client.get(f"/v1/sessions/{sid}").status_code == 200


def test_idle_sessions_are_evicted(sample_kb):
    app = create_app(sample_kb, partition_kb(sample_kb, "objects"), session_timeout=0.05)
    with TestClient(app) as client:
        sid = open_session(client)["session_id"]
        time.sleep(0.12)
        response = client.get(f"/v1/sessions/{sid}")
        assert response.status_code == 404
        assert response.json()["code"] == "session-gone"


def test_cors_headers_when_enabled(sample_kb):
    app = create_app(
        sample_kb, partition_kb(sample_kb, "objects"), cors_origin="http://localhost:5173"
    )
    with TestClient(app) as client:
        response = client.get("/v1/kb", headers={"Origin": "http://localhost:5173"})
        assert response.headers.get("access-control-allow-origin") == "http://localhost:5173"
