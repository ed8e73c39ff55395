import pytest

from casegraph import CaseStore, load_dataset, apply_update, payload_hash
from casegraph.errors import (
    DuplicateId,
    InvalidEvaluationCode,
    NotAuthor,
    NotStale,
    SchemaViolation,
    UnknownDataset,
    VersionMismatch,
)
from casegraph.ingest import JobStatus, UpdateDelta, payload_references, touched_ids
from conftest import make_dataset


class TestLoadDataset:
    def test_valid_file(self, tmp_path):
        store = CaseStore()
        data = make_dataset(n_objects=3, n_links=2)
        path = tmp_path / "ds.json"
        import json
        path.write_text(json.dumps(data))
        dsid = load_dataset(store, path)
        ds = store.datasets[dsid]
        assert len(ds.objects) == 3
        assert ds.version == 1
        assert all(str(o.evaluation) == "B2" for o in ds.objects.values())

    def test_bad_evaluation_code(self):
        store = CaseStore()
        data = make_dataset(n_objects=1, n_links=0)
        data["objects"][0]["eval"] = "E5"
        with pytest.raises(InvalidEvaluationCode):
            load_dataset(store, data)

    def test_duplicate_id_named(self):
        store = CaseStore()
        data = make_dataset(n_objects=2, n_links=0)
        data["objects"][1]["id"] = data["objects"][0]["id"]
        with pytest.raises(DuplicateId) as exc:
            load_dataset(store, data)
        assert data["objects"][0]["id"] in str(exc.value)

    def test_schema_violation_with_path(self):
        store = CaseStore()
        data = make_dataset(n_objects=1, n_links=0)
        del data["objects"][0]["kind"]
        with pytest.raises(SchemaViolation) as exc:
            load_dataset(store, data)
        assert "$.objects[0]" in str(exc.value)

    def test_dangling_relationship_endpoint(self):
        store = CaseStore()
        data = make_dataset(n_objects=2, n_links=1)
        data["relationships"][0]["targetId"] = "ghost"
        with pytest.raises(SchemaViolation):
            load_dataset(store, data)


def delta(dataset_id="ds1", base_version=1, **kwargs):
    d = {"id": kwargs.pop("update_id", "upd-1"), "datasetId": dataset_id,
         "baseVersion": base_version}
    d.update(kwargs)
    return d


class TestApplyUpdate:
    def _three_states(self, document):
        """S1 and S3 keep object ds1-o0; S2 drops it."""
        s1 = document.root_state_id
        draft = document.open_draft("branch-1", "u1")
        draft.remove_object("ds1-o0")
        s2 = document.commit_state("branch-1", draft, "without o0", "u1")
        bid = document.create_branch("keep", "", s1, "u1")
        draft = document.open_draft(bid, "u1")
        draft.set_attribute("ds1-o1", "note", "x", 2, "u1")
        s3 = document.commit_state(bid, draft, "keeps o0", "u1")
        return s1, s2, s3

    def test_flags_exactly_referencing_states(self, store, document):
        s1, s2, s3 = self._three_states(document)
        report = apply_update(store, delta(modifiedObjects=[
            {"id": "ds1-o0", "kind": "person", "attributes": {"name": "updated"},
             "eval": "A1"}]))
        assert report.affected_states == {document.id: {s1, s3}}
        assert document.states[s1].stale and document.states[s3].stale
        assert not document.states[s2].stale
        # oracle: brute-force reference scan over every payload
        ids = touched_ids(UpdateDelta.from_dict(delta(modifiedObjects=[{"id": "ds1-o0"}])))
        expected = {sid for sid, st in document.states.items()
                    if payload_references(st.payload) & ids}
        assert report.affected_states[document.id] == expected

    def test_committed_hashes_never_change(self, store, document):
        self._three_states(document)
        before = {sid: payload_hash(s.payload) for sid, s in document.states.items()}
        apply_update(store, delta(removedObjectIds=["ds1-o5"]))
        after = {sid: payload_hash(document.states[sid].payload) for sid in before}
        assert after == before

    def test_untouched_delta_affects_nothing(self, store, document):
        report = apply_update(store, delta(addedObjects=[
            {"id": "new-1", "kind": "person", "attributes": {}, "eval": "C3"}]))
        assert report.affected_states == {}

    def test_added_relationship_touches_endpoints(self, store, document):
        report = apply_update(store, delta(addedRelationships=[
            {"id": "new-r", "sourceId": "ds1-o0", "targetId": "ds1-o1",
             "kind": "linked", "eval": "B2"}]))
        assert document.root_state_id in report.affected_states[document.id]

    def test_version_mismatch_on_replay(self, store, document):
        apply_update(store, delta(removedObjectIds=["ds1-o5"]))
        assert store.datasets["ds1"].version == 2
        with pytest.raises(VersionMismatch):
            apply_update(store, delta(update_id="upd-2", removedObjectIds=["ds1-o4"]))

    def test_unknown_dataset(self, store):
        with pytest.raises(UnknownDataset):
            apply_update(store, delta(dataset_id="ghost"))

    def test_versions_increase_by_one(self, store, document):
        for i in range(3):
            apply_update(store, delta(base_version=1 + i, update_id=f"u{i}",
                                      removedObjectIds=[f"ds1-o{5 - i}"]))
        assert store.datasets["ds1"].version == 4


class TestAcknowledge:
    def _stale_state(self, store, document, n_updates=1):
        sid = document.root_state_id
        for i in range(n_updates):
            apply_update(store, delta(base_version=1 + i, update_id=f"upd-{i}",
                                      modifiedObjects=[
                {"id": "ds1-o0", "kind": "person", "attributes": {}, "eval": "A1"}]))
        return sid

    def test_acknowledge_last_reason_clears_stale(self, store, document):
        sid = self._stale_state(store, document)
        document.acknowledge_update(sid, "upd-0", "u1")
        assert not document.states[sid].stale

    def test_partial_acknowledge_keeps_stale(self, store, document):
        sid = self._stale_state(store, document, n_updates=2)
        document.acknowledge_update(sid, "upd-0", "u1")
        assert document.states[sid].stale
        assert document.states[sid].stale_reasons == ["upd-1"]

    def test_collaborator_cannot_acknowledge(self, store, document):
        sid = self._stale_state(store, document)
        with pytest.raises(NotAuthor):
            document.acknowledge_update(sid, "upd-0", "u2")

    def test_not_stale(self, document):
        with pytest.raises(NotStale):
            document.acknowledge_update(document.root_state_id, "ghost", "u1")


class TestJobs:
    def test_no_jobs(self):
        assert CaseStore().list_jobs() == []

    def test_fixture_sorted_by_id(self):
        store = CaseStore()
        store.load_jobs([
            {"id": "job-b", "kind": "community-search", "state": "running", "progress": 0.4},
            {"id": "job-a", "kind": "photo-extraction", "state": "done", "progress": 1},
        ])
        assert [j.id for j in store.list_jobs()] == ["job-a", "job-b"]

    def test_progress_one_iff_done(self):
        with pytest.raises(ValueError):
            JobStatus("j", "x", "running", 1)
        with pytest.raises(ValueError):
            JobStatus("j", "x", "done", 0.5)
        assert JobStatus("j", "x", "done", 1).progress == 1
