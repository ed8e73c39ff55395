import json

import pytest
from fastapi.testclient import TestClient

from casegraph.service import ServiceConfig, create_app, start_service
from casegraph.store import CaseStore
from conftest import make_dataset

U1 = {"X-User-Id": "u1"}
U2 = {"X-User-Id": "u2"}


@pytest.fixture
def client():
    return TestClient(create_app(CaseStore()))


@pytest.fixture
def client_with_doc(client):
    client.post("/v1/datasets", json=make_dataset(), headers=U1)
    doc = client.post("/v1/documents",
                      json={"name": "inv", "datasetIds": ["ds1"]}, headers=U1).json()
    return client, doc


def open_and_commit(client, doc_id, branch_id, user, edit=None, message="work"):
    draft = client.post(f"/v1/documents/{doc_id}/drafts",
                        json={"branchId": branch_id}, headers={"X-User-Id": user}).json()
    if edit:
        edit(draft["draftId"])
    r = client.post(f"/v1/documents/{doc_id}/commit",
                    json={"branchId": branch_id, "draftId": draft["draftId"],
                          "message": message},
                    headers={"X-User-Id": user})
    assert r.status_code == 201, r.text
    return r.json()["stateId"]


class TestBasics:
    def test_health_empty(self, client):
        body = client.get("/v1/health").json()
        assert body["status"] == "ok"
        assert body["documents"] == 0

    def test_missing_user_header_400(self, client):
        r = client.post("/v1/documents", json={"name": "x", "datasetIds": []})
        assert r.status_code == 400
        assert r.json()["code"] == "SchemaViolation"

    def test_unknown_ids_404(self, client):
        assert client.get("/v1/documents/ghost").status_code == 404
        r = client.get("/v1/reports/ghost")
        assert r.status_code == 404
        assert r.json()["code"] == "UnknownReport"

    def test_document_lifecycle(self, client_with_doc):
        client, doc = client_with_doc
        assert doc["rootStateId"]
        listed = client.get("/v1/documents").json()
        assert [d["id"] for d in listed] == [doc["id"]]
        ds = client.get("/v1/datasets").json()
        assert ds[0]["objects"] == 6


class TestDraftCommit:
    def test_full_edit_cycle(self, client_with_doc):
        client, doc = client_with_doc
        did = doc["id"]
        draft = client.post(f"/v1/documents/{did}/drafts",
                            json={"branchId": "branch-1"}, headers=U1).json()
        draft_id = draft["draftId"]
        obj = client.post(f"/v1/drafts/{draft_id}/objects",
                          json={"kind": "person", "credibility": 3}, headers=U1).json()
        rel = client.post(f"/v1/drafts/{draft_id}/relationships",
                          json={"sourceId": obj["objectId"], "targetId": "ds1-o0",
                                "kind": "meets"}, headers=U1)
        assert rel.status_code == 201
        grp = client.post(f"/v1/drafts/{draft_id}/groups",
                          json={"nodeIds": ["ds1-o1", "ds1-o2"], "name": "pair"},
                          headers=U1)
        assert grp.status_code == 201
        r = client.post(f"/v1/documents/{did}/commit",
                        json={"branchId": "branch-1", "draftId": draft_id},
                        headers=U1)
        assert r.status_code == 201
        state = client.get(f"/v1/documents/{did}/states/{r.json()['stateId']}",
                           headers=U1).json()
        assert state["editable"] is True
        assert obj["objectId"] in state["graph"]["objects"]

    def test_commit_by_non_owner_403(self, client_with_doc):
        client, doc = client_with_doc
        draft = client.post(f"/v1/documents/{doc['id']}/drafts",
                            json={"branchId": "branch-1"}, headers=U2)
        assert draft.status_code == 403
        assert draft.json()["code"] == "NotBranchOwner"

    def test_idempotent_commit_replay(self, client_with_doc):
        client, doc = client_with_doc
        did = doc["id"]
        draft = client.post(f"/v1/documents/{did}/drafts",
                            json={"branchId": "branch-1"}, headers=U1).json()
        headers = {**U1, "Idempotency-Key": "k-1"}
        body = {"branchId": "branch-1", "draftId": draft["draftId"]}
        first = client.post(f"/v1/documents/{did}/commit", json=body, headers=headers)
        retry = client.post(f"/v1/documents/{did}/commit", json=body, headers=headers)
        assert first.json()["stateId"] == retry.json()["stateId"]
        assert retry.json()["replayed"] is True

    def test_evidence_creation_through_api_rejected(self, client_with_doc):
        client, doc = client_with_doc
        draft = client.post(f"/v1/documents/{doc['id']}/drafts",
                            json={"branchId": "branch-1"}, headers=U1).json()
        r = client.post(f"/v1/drafts/{draft['draftId']}/objects",
                        json={"kind": "person", "credibility": 1}, headers=U1)
        assert r.status_code == 400
        assert r.json()["code"] == "CredibilityViolation"


class TestDiffMergeApi:
    def test_self_diff_empty_unique(self, client_with_doc):
        client, doc = client_with_doc
        root = doc["rootStateId"]
        r = client.get(f"/v1/documents/{doc['id']}/diff",
                       params={"a": root, "b": root}, headers=U1)
        assert r.status_code == 200
        body = r.json()
        assert body["onlyA"] == body["onlyB"] == body["conflicts"] == []
        assert len(body["equal"]) == 11

    def test_merge_with_unresolved_conflict_409(self, client_with_doc):
        client, doc = client_with_doc
        did = doc["id"]
        def set_alias(value):
            def edit(draft_id):
                client.post(f"/v1/drafts/{draft_id}/attributes",
                            json={"objectId": "ds1-o0", "key": "alias",
                                  "value": value, "credibility": 2}, headers=U1)
            return edit
        a = open_and_commit(client, did, "branch-1", "u1", set_alias("X"))
        client.post(f"/v1/documents/{did}/branches",
                    json={"name": "side", "fromStateId": doc["rootStateId"]},
                    headers=U1)
        b = open_and_commit(client, did, "branch-2", "u1", set_alias("Y"))
        r = client.post(f"/v1/documents/{did}/merge",
                        json={"targetBranch": "branch-1", "stateA": a, "stateB": b,
                              "selection": {}}, headers=U1)
        assert r.status_code == 409
        assert r.json()["code"] == "UnresolvedConflict"
        r = client.post(f"/v1/documents/{did}/merge",
                        json={"targetBranch": "branch-1", "stateA": a, "stateB": b,
                              "selection": {"conflictResolutions": {"ds1-o0": "B"}}},
                        headers=U1)
        assert r.status_code == 201
        merged = client.get(f"/v1/documents/{did}/states/{r.json()['stateId']}",
                            headers=U1).json()
        assert sorted(merged["parents"]) == sorted([a, b])


class TestEventsAndFlags:
    def test_promote_demote_and_pending(self, client_with_doc):
        client, doc = client_with_doc
        did = doc["id"]
        oid = {}
        def add_obj(draft_id):
            oid["v"] = client.post(f"/v1/drafts/{draft_id}/objects",
                                   json={"kind": "person"}, headers=U1).json()["objectId"]
        open_and_commit(client, did, "branch-1", "u1", add_obj)
        # u2 becomes a collaborator by checking out
        client.get(f"/v1/documents/{did}/states/{doc['rootStateId']}", headers=U2)
        ev = client.post(f"/v1/documents/{did}/promote",
                         json={"objectId": oid["v"]}, headers=U1).json()
        assert (ev["from"], ev["to"]) == (3, 2)
        pending = client.get(f"/v1/documents/{did}/events/pending", headers=U2).json()
        assert [e["objectId"] for e in pending] == [oid["v"]]
        r = client.post(f"/v1/documents/{did}/demote",
                        json={"objectId": oid["v"]}, headers=U2)
        assert r.status_code == 403

    def test_update_then_acknowledge(self, client_with_doc):
        client, doc = client_with_doc
        did = doc["id"]
        r = client.post("/v1/updates", json={
            "id": "upd-1", "datasetId": "ds1", "baseVersion": 1,
            "modifiedObjects": [{"id": "ds1-o0", "kind": "person",
                                 "attributes": {}, "eval": "A1"}]}, headers=U1)
        assert r.status_code == 200
        assert doc["rootStateId"] in r.json()["affectedStates"][did]
        replay = client.post("/v1/updates", json={
            "id": "upd-2", "datasetId": "ds1", "baseVersion": 1}, headers=U1)
        assert replay.status_code == 409
        ack = client.post(
            f"/v1/documents/{did}/states/{doc['rootStateId']}/acknowledge",
            json={"updateId": "upd-1"}, headers=U1)
        assert ack.status_code == 200
        snap = client.get(f"/v1/documents/{did}/states/{doc['rootStateId']}",
                          headers=U1).json()
        assert snap["stale"] is False

    def test_report_flow(self, client_with_doc):
        client, doc = client_with_doc
        did, root = doc["id"], doc["rootStateId"]
        client.post(f"/v1/documents/{did}/report-flag",
                    json={"stateId": root, "flag": True}, headers=U1)
        rep = client.post("/v1/reports", json={
            "documentId": did, "title": "Final",
            "sections": [{"stateId": root, "description": "overview"}]},
            headers=U1)
        assert rep.status_code == 201
        rep_id = rep.json()["id"]
        html = client.get(f"/v1/reports/{rep_id}/export", params={"format": "html"})
        assert html.status_code == 200
        assert html.text.startswith("<!DOCTYPE html>")
        bad = client.get(f"/v1/reports/{rep_id}/export", params={"format": "pdf"})
        assert bad.status_code == 400


class TestPersistenceOverRestart:
    def test_write_restart_read(self, tmp_path):
        config = ServiceConfig(data_root=str(tmp_path))
        handle = start_service(config)
        client = TestClient(handle.app)
        client.post("/v1/datasets", json=make_dataset(), headers=U1)
        docs = []
        for i in range(3):
            doc = client.post("/v1/documents",
                              json={"name": f"inv-{i}", "datasetIds": ["ds1"]},
                              headers=U1).json()
            open_and_commit(client, doc["id"], "branch-1", "u1")
            docs.append(client.get(f"/v1/documents/{doc['id']}").json())

        handle2 = start_service(config)
        client2 = TestClient(handle2.app)
        assert client2.get("/v1/health").json()["documents"] == 3
        for doc in docs:
            again = client2.get(f"/v1/documents/{doc['id']}").json()
            assert [s["id"] for s in again["states"]] == [s["id"] for s in doc["states"]]
            assert [s["payloadHash"] for s in again["states"]] == \
                [s["payloadHash"] for s in doc["states"]]
            assert again["branches"] == doc["branches"]

    def test_corrupt_file_reported_in_health(self, tmp_path):
        config = ServiceConfig(data_root=str(tmp_path))
        client = TestClient(start_service(config).app)
        client.post("/v1/datasets", json=make_dataset(), headers=U1)
        doc = client.post("/v1/documents",
                          json={"name": "inv", "datasetIds": ["ds1"]}, headers=U1).json()
        sid = open_and_commit(client, doc["id"], "branch-1", "u1")
        state_file = tmp_path / "documents" / doc["id"] / "states" / f"{sid}.json"
        state_file.write_text("{truncated")

        client2 = TestClient(start_service(config).app)
        health = client2.get("/v1/health").json()
        assert any(str(state_file) in w for w in health["warnings"])
        again = client2.get(f"/v1/documents/{doc['id']}").json()
        assert doc["rootStateId"] in [s["id"] for s in again["states"]]
        assert sid not in [s["id"] for s in again["states"]]

    def test_env_var_overrides_data_root(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CASEGRAPH_DATA_ROOT", str(tmp_path / "env-root"))
        config = ServiceConfig(data_root=str(tmp_path / "cfg-root"))
        start_service(config)
        assert (tmp_path / "env-root").is_dir()
        assert not (tmp_path / "cfg-root").exists()
