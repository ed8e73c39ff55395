"""Central-database dataset loading, evidence updates and staleness flagging.

Datasets are the only source of Evidence-level elements. Updates arrive as
deltas against a specific dataset version; applying one flags every
committed analysis state that references a touched id, without ever
mutating a committed payload.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from .errors import (
    DuplicateId,
    InvalidEvaluationCode,
    SchemaViolation,
    UnknownDataset,
    VersionMismatch,
)
from .model import (
    AttributeValue,
    CredibilityLevel,
    EntityObject,
    EvaluationCode,
    Relationship,
    StatePayload,
)


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _parse_evidence_object(raw: dict, dataset_id: str, path: str) -> EntityObject:
    for key in ("id", "kind", "eval"):
        if key not in raw:
            raise SchemaViolation(f"{path}: missing field {key!r}")
    attrs = {
        k: AttributeValue(v, CredibilityLevel.EVIDENCE)
        for k, v in raw.get("attributes", {}).items()
    }
    return EntityObject(
        id=raw["id"],
        kind=raw["kind"],
        attributes=attrs,
        credibility=CredibilityLevel.EVIDENCE,
        evaluation=EvaluationCode.parse(raw["eval"]),
        source_dataset=dataset_id,
    )


def _parse_evidence_relationship(raw: dict, dataset_id: str, path: str,
                                 known_objects: set[str]) -> Relationship:
    for key in ("id", "sourceId", "targetId", "kind", "eval"):
        if key not in raw:
            raise SchemaViolation(f"{path}: missing field {key!r}")
    for endpoint in (raw["sourceId"], raw["targetId"]):
        if endpoint not in known_objects:
            raise SchemaViolation(f"{path}: unknown endpoint {endpoint!r}")
    attrs = {
        k: AttributeValue(v, CredibilityLevel.EVIDENCE)
        for k, v in raw.get("attributes", {}).items()
    }
    return Relationship(
        id=raw["id"],
        source_id=raw["sourceId"],
        target_id=raw["targetId"],
        kind=raw["kind"],
        directed=raw.get("directed", True),
        attributes=attrs,
        credibility=CredibilityLevel.EVIDENCE,
        evaluation=EvaluationCode.parse(raw["eval"]),
        source_dataset=dataset_id,
    )


@dataclass
class Dataset:
    id: str
    name: str
    objects: dict[str, EntityObject] = field(default_factory=dict)
    relationships: dict[str, Relationship] = field(default_factory=dict)
    version: int = 1
    loaded_at: str = field(default_factory=_now_iso)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "version": self.version,
            "loadedAt": self.loaded_at,
            "objects": [o.to_dict() for o in self.objects.values()],
            "relationships": [r.to_dict() for r in self.relationships.values()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Dataset":
        ds = cls(d["id"], d["name"], version=d.get("version", 1),
                 loaded_at=d.get("loadedAt", _now_iso()))
        for o in d.get("objects", []):
            ds.objects[o["id"]] = EntityObject.from_dict(o)
        for r in d.get("relationships", []):
            ds.relationships[r["id"]] = Relationship.from_dict(r)
        return ds


@dataclass
class UpdateDelta:
    id: str
    dataset_id: str
    base_version: int
    added_objects: list[dict] = field(default_factory=list)
    modified_objects: list[dict] = field(default_factory=list)
    removed_object_ids: list[str] = field(default_factory=list)
    added_relationships: list[dict] = field(default_factory=list)
    removed_relationship_ids: list[str] = field(default_factory=list)
    received_at: str = field(default_factory=_now_iso)

    @classmethod
    def from_dict(cls, d: dict) -> "UpdateDelta":
        for key in ("id", "datasetId", "baseVersion"):
            if key not in d:
                raise SchemaViolation(f"update delta: missing field {key!r}")
        return cls(
            id=d["id"],
            dataset_id=d["datasetId"],
            base_version=d["baseVersion"],
            added_objects=d.get("addedObjects", []),
            modified_objects=d.get("modifiedObjects", []),
            removed_object_ids=d.get("removedObjectIds", []),
            added_relationships=d.get("addedRelationships", []),
            removed_relationship_ids=d.get("removedRelationshipIds", []),
        )


@dataclass
class JobStatus:
    id: str
    kind: str
    state: str
    progress: float

    def __post_init__(self):
        if self.state not in ("queued", "running", "done", "failed"):
            raise ValueError(f"invalid job state {self.state!r}")
        if (self.progress == 1) != (self.state == "done"):
            raise ValueError("progress=1 exactly when state=done")

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "state": self.state,
                "progress": self.progress}

    @classmethod
    def from_dict(cls, d: dict) -> "JobStatus":
        return cls(d["id"], d["kind"], d["state"], d["progress"])


@dataclass
class UpdateReport:
    update_id: str
    dataset_id: str
    new_version: int
    affected_states: dict[str, set[str]]  # documentId -> state ids

    def to_dict(self) -> dict:
        return {
            "updateId": self.update_id,
            "datasetId": self.dataset_id,
            "newVersion": self.new_version,
            "affectedStates": {d: sorted(s) for d, s in self.affected_states.items()},
        }


def parse_dataset(data: dict) -> Dataset:
    """Validate and build a dataset from its JSON form; all elements Evidence."""
    if not isinstance(data, dict):
        raise SchemaViolation("$: dataset file must be a JSON object")
    for key in ("id", "name"):
        if key not in data:
            raise SchemaViolation(f"$: missing field {key!r}")
    ds = Dataset(data["id"], data["name"])
    for i, raw in enumerate(data.get("objects", [])):
        obj = _parse_evidence_object(raw, ds.id, f"$.objects[{i}]")
        if obj.id in ds.objects:
            raise DuplicateId(f"duplicate object id {obj.id!r}")
        ds.objects[obj.id] = obj
    for i, raw in enumerate(data.get("relationships", [])):
        rel = _parse_evidence_relationship(raw, ds.id, f"$.relationships[{i}]",
                                           set(ds.objects))
        if rel.id in ds.relationships or rel.id in ds.objects:
            raise DuplicateId(f"duplicate relationship id {rel.id!r}")
        ds.relationships[rel.id] = rel
    return ds


def load_dataset(store, source: Union[str, Path, dict]) -> str:
    """Register a dataset file with the case store; returns the dataset id."""
    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{source}: {exc}") from exc
    else:
        data = source
    ds = parse_dataset(data)
    if ds.id in store.datasets:
        raise DuplicateId(f"dataset {ds.id!r} already loaded")
    store.datasets[ds.id] = ds
    store.persist_dataset(ds)
    return ds.id


def dataset_payload(datasets: list[Dataset]) -> StatePayload:
    """Root-state payload: the Evidence image of the selected datasets."""
    payload = StatePayload()
    for ds in datasets:
        for oid, obj in ds.objects.items():
            if oid in payload.objects:
                raise DuplicateId(f"object id {oid!r} appears in multiple datasets")
            payload.objects[oid] = obj
        for rid, rel in ds.relationships.items():
            if rid in payload.relationships:
                raise DuplicateId(f"relationship id {rid!r} appears in multiple datasets")
            payload.relationships[rid] = rel
    from .model import NodeVisual
    payload.node_visuals = {oid: NodeVisual(oid) for oid in payload.objects}
    return StatePayload.from_dict(payload.to_dict())  # defensive deep copy


def touched_ids(delta: UpdateDelta) -> set[str]:
    """Ids whose presence in a state payload marks that state as affected.

    Added relationships touch their endpoint objects (their neighborhood
    changed); added objects touch nothing existing.
    """
    ids: set[str] = set()
    ids.update(o["id"] for o in delta.modified_objects if "id" in o)
    ids.update(delta.removed_object_ids)
    ids.update(delta.removed_relationship_ids)
    for rel in delta.added_relationships:
        ids.add(rel.get("sourceId"))
        ids.add(rel.get("targetId"))
    ids.discard(None)
    return ids


def payload_references(payload: StatePayload) -> set[str]:
    return set(payload.objects) | set(payload.relationships)


def apply_update(store, delta: Union[dict, UpdateDelta]) -> UpdateReport:
    """Apply a delta to its dataset and flag every affected committed state."""
    if isinstance(delta, dict):
        delta = UpdateDelta.from_dict(delta)
    ds = store.datasets.get(delta.dataset_id)
    if ds is None:
        raise UnknownDataset(f"unknown dataset {delta.dataset_id}")
    if ds.version != delta.base_version:
        raise VersionMismatch(
            f"dataset {ds.id} is at version {ds.version}, delta targets {delta.base_version}"
        )
    for raw in delta.modified_objects:
        if raw.get("id") not in ds.objects:
            raise SchemaViolation(f"modified object {raw.get('id')!r} not in dataset")
    for oid in delta.removed_object_ids:
        if oid not in ds.objects:
            raise SchemaViolation(f"removed object {oid!r} not in dataset")
    for rid in delta.removed_relationship_ids:
        if rid not in ds.relationships:
            raise SchemaViolation(f"removed relationship {rid!r} not in dataset")

    # mutate the dataset image
    for raw in delta.added_objects:
        obj = _parse_evidence_object(raw, ds.id, "$.addedObjects[]")
        if obj.id in ds.objects:
            raise DuplicateId(f"duplicate object id {obj.id!r}")
        ds.objects[obj.id] = obj
    for raw in delta.modified_objects:
        ds.objects[raw["id"]] = _parse_evidence_object(raw, ds.id, "$.modifiedObjects[]")
    for oid in delta.removed_object_ids:
        del ds.objects[oid]
    for raw in delta.added_relationships:
        rel = _parse_evidence_relationship(raw, ds.id, "$.addedRelationships[]",
                                           set(ds.objects))
        if rel.id in ds.relationships:
            raise DuplicateId(f"duplicate relationship id {rel.id!r}")
        ds.relationships[rel.id] = rel
    for rid in delta.removed_relationship_ids:
        del ds.relationships[rid]
    ds.version += 1
    store.persist_dataset(ds)

    # flag affected states; committed payloads are never touched
    ids = touched_ids(delta)
    affected: dict[str, set[str]] = {}
    for doc in store.documents.values():
        with doc.lock:
            hit = set()
            for state in doc.states.values():
                if payload_references(state.payload) & ids:
                    if delta.id not in state.stale_reasons:
                        state.stale_reasons.append(delta.id)
                    hit.add(state.id)
            if hit:
                affected[doc.id] = hit
                doc._changed()
    return UpdateReport(delta.id, ds.id, ds.version, affected)
