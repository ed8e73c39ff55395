"""Documents, branches, immutable analysis states and the commit DAG.

A visualization document is the unit of investigation: the initial
dataset selection plus a branching DAG of immutable analysis states.
States are content-addressed (SHA-256 over a canonical serialization);
branches are single-owner; collaborators read everything and merge-from
anything but never mutate each other's work.

On disk a document is an append-only directory: ``states/<id>.json`` is
written once per commit and never rewritten; ``branches.json``,
``events.json`` and ``document.json`` hold the mutable metadata.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import layout as layout_mod
from .errors import (
    CorruptStore,
    DraftClosed,
    DuplicateBranchName,
    NotAuthor,
    NotBranchOwner,
    NotStale,
    StaleDraft,
    UnknownBranch,
    UnknownDataset,
    UnknownDocument,
    UnknownState,
    WrongLevel,
)
from .model import CredibilityLevel, StateDraft, StatePayload, VisibleGraph, visible_graph


def canonical_json(obj) -> bytes:
    """UTF-8, sorted keys, no insignificant whitespace; bit-exact for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def payload_hash(payload: StatePayload) -> str:
    return sha256_hex(canonical_json(payload.to_dict()))


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class AnalysisState:
    id: str
    parents: list[str]
    branch_id: str
    author: str
    seq: int
    timestamp: str
    message: str
    payload: StatePayload
    payload_hash: str
    # mutable side flags, excluded from the content hash
    report_flag: bool = False
    stale_reasons: list[str] = field(default_factory=list)

    @property
    def stale(self) -> bool:
        return bool(self.stale_reasons)

    def meta_dict(self) -> dict:
        return {
            "payloadHash": self.payload_hash,
            "parents": self.parents,
            "branchId": self.branch_id,
            "author": self.author,
            "seq": self.seq,
            "timestamp": self.timestamp,
            "message": self.message,
        }

    def to_dict(self) -> dict:
        d = self.meta_dict()
        d["id"] = self.id
        d["payload"] = self.payload.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisState":
        return cls(
            id=d["id"],
            parents=list(d["parents"]),
            branch_id=d["branchId"],
            author=d["author"],
            seq=d["seq"],
            timestamp=d["timestamp"],
            message=d["message"],
            payload=StatePayload.from_dict(d["payload"]),
            payload_hash=d["payloadHash"],
        )


def state_id_for(meta: dict) -> str:
    """State id = hash over payload hash + commit metadata, so identical
    payloads committed twice are still distinct states."""
    return sha256_hex(canonical_json(meta))


@dataclass
class Branch:
    id: str
    name: str
    hypothesis: str
    created_from: str
    owner: str
    entries: list[dict] = field(default_factory=list)  # {"type","id","seq"}
    active: bool = True

    def state_entries(self) -> list[str]:
        return [e["id"] for e in self.entries if e["type"] == "state"]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "hypothesis": self.hypothesis,
            "createdFrom": self.created_from,
            "owner": self.owner,
            "entries": self.entries,
            "active": self.active,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Branch":
        return cls(d["id"], d["name"], d.get("hypothesis", ""), d["createdFrom"],
                   d["owner"], list(d.get("entries", [])), d.get("active", True))


@dataclass
class LogComment:
    id: str
    branch_id: str
    author: str
    seq: int
    timestamp: str
    text: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "branchId": self.branch_id,
            "author": self.author,
            "seq": self.seq,
            "timestamp": self.timestamp,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogComment":
        return cls(d["id"], d["branchId"], d["author"], d["seq"], d["timestamp"], d["text"])


@dataclass
class KnowledgeEvent:
    seq: int
    object_id: str
    from_level: int
    to_level: int
    author: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "objectId": self.object_id,
            "from": self.from_level,
            "to": self.to_level,
            "author": self.author,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KnowledgeEvent":
        return cls(d["seq"], d["objectId"], d["from"], d["to"], d["author"], d["timestamp"])


@dataclass
class Snapshot:
    """Read-only view of one committed state for one viewer."""

    state_id: str
    parents: list[str]
    branch_id: str
    author: str
    message: str
    seq: int
    timestamp: str
    editable: bool
    graph: VisibleGraph
    report_flag: bool
    stale: bool
    stale_reasons: list[str]

    def to_dict(self) -> dict:
        return {
            "stateId": self.state_id,
            "parents": self.parents,
            "branchId": self.branch_id,
            "author": self.author,
            "message": self.message,
            "seq": self.seq,
            "timestamp": self.timestamp,
            "editable": self.editable,
            "graph": self.graph.to_dict(),
            "reportFlag": self.report_flag,
            "stale": self.stale,
            "staleReasons": self.stale_reasons,
        }


class Document:
    """One investigation: dataset selection + branch DAG of analysis states.

    All mutations are serialized through ``self.lock`` (single writer per
    document); committed states are immutable and freely readable.
    """

    def __init__(self, doc_id: str, name: str, case_id: str, dataset_ids: list[str],
                 created_by: str):
        self.id = doc_id
        self.name = name
        self.case_id = case_id
        self.dataset_ids = list(dataset_ids)
        self.created_by = created_by
        self.created_at = _now_iso()
        self.root_state_id: Optional[str] = None
        self.states: dict[str, AnalysisState] = {}
        self.branches: dict[str, Branch] = {}
        self.comments: dict[str, LogComment] = {}
        self.knowledge_events: list[KnowledgeEvent] = []
        self.collaborators: set[str] = {created_by}
        self.pending_events: dict[str, list[KnowledgeEvent]] = {}
        self._seq = 0
        self._counters: dict[str, int] = {}
        self.lock = threading.RLock()
        self._on_commit = None  # persistence hook set by CaseStore
        self._on_change = None

    # --- id / clock plumbing ---

    def next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def alloc_id(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0) + 1
        self._counters[prefix] = n
        return f"{prefix}-{n}"

    def add_collaborator(self, user: str) -> None:
        self.collaborators.add(user)

    def _changed(self):
        if self._on_change:
            self._on_change(self)

    # --- branches ---

    def create_branch(self, name: str, hypothesis: str, from_state_id: str, owner: str) -> str:
        with self.lock:
            if from_state_id not in self.states:
                raise UnknownState(f"unknown state {from_state_id}")
            if any(b.name == name for b in self.branches.values()):
                raise DuplicateBranchName(f"branch {name!r} already exists")
            bid = self.alloc_id("branch")
            self.branches[bid] = Branch(bid, name, hypothesis, from_state_id, owner)
            self.collaborators.add(owner)
            self._changed()
            return bid

    def _branch(self, branch_id: str) -> Branch:
        branch = self.branches.get(branch_id)
        if branch is None:
            raise UnknownBranch(f"unknown branch {branch_id}")
        return branch

    def branch_tip(self, branch_id: str) -> str:
        """Last state on the branch, or its anchor when still empty."""
        branch = self._branch(branch_id)
        states = branch.state_entries()
        return states[-1] if states else branch.created_from

    # --- drafts and commits ---

    def open_draft(self, branch_id: str, author: str) -> StateDraft:
        with self.lock:
            branch = self._branch(branch_id)
            if branch.owner != author:
                raise NotBranchOwner(f"branch {branch_id} is owned by {branch.owner}")
            base_id = self.branch_tip(branch_id)
            base = self.states.get(base_id)
            if base is None:
                raise UnknownState(f"unknown state {base_id}")
            return StateDraft(base.payload, author, base_state_id=base_id,
                              branch_id=branch_id, id_alloc=self.alloc_id)

    def _add_state(self, payload: StatePayload, parents: list[str], branch_id: str,
                   author: str, message: str) -> AnalysisState:
        seq = self.next_seq()
        phash = payload_hash(payload)
        meta = {
            "payloadHash": phash,
            "parents": parents,
            "branchId": branch_id,
            "author": author,
            "seq": seq,
            "timestamp": _now_iso(),
            "message": message,
        }
        state = AnalysisState(
            id=state_id_for(meta), parents=parents, branch_id=branch_id, author=author,
            seq=seq, timestamp=meta["timestamp"], message=message,
            payload=payload.clone(), payload_hash=phash,
        )
        self.states[state.id] = state
        if branch_id in self.branches:
            self.branches[branch_id].entries.append({"type": "state", "id": state.id, "seq": seq})
        if self._on_commit:
            self._on_commit(self, state)
        self._changed()
        return state

    def commit_state(self, branch_id: str, draft: StateDraft, message: str, author: str) -> str:
        with self.lock:
            branch = self._branch(branch_id)
            if branch.owner != author:
                raise NotBranchOwner(f"only {branch.owner} commits to branch {branch_id}")
            if draft.closed:
                raise DraftClosed("draft already committed")
            expected = self.branch_tip(branch_id)
            if draft.base_state_id != expected:
                raise StaleDraft(
                    f"branch tip moved to {expected} since draft opened at {draft.base_state_id}"
                )
            # place any nodes added in the draft; existing positions stay frozen
            missing = [oid for oid in draft.payload.objects
                       if oid not in draft.payload.positions]
            if missing:
                edges = [(r.source_id, r.target_id)
                         for r in draft.payload.relationships.values()]
                draft.payload.positions.update(layout_mod.incremental_place(
                    draft.payload.positions, missing, edges))
            state = self._add_state(draft.payload, [expected], branch_id, author, message)
            draft.close()
            self.collaborators.add(author)
            return state.id

    def _state(self, state_id: str) -> AnalysisState:
        state = self.states.get(state_id)
        if state is None:
            raise UnknownState(f"unknown state {state_id}")
        return state

    def ancestry(self, state_id: str) -> set[str]:
        """Transitive closure over parents, including the state itself."""
        self._state(state_id)
        seen: set[str] = set()
        stack = [state_id]
        while stack:
            sid = stack.pop()
            if sid in seen:
                continue
            seen.add(sid)
            stack.extend(self.states[sid].parents)
        return seen

    # --- credibility events ---

    def _latest_record(self, object_ref: str):
        """Current record of an object: from the latest state carrying it."""
        best = None
        for state in self.states.values():
            elem = state.payload.objects.get(object_ref) \
                or state.payload.relationships.get(object_ref)
            if elem is not None and (best is None or state.seq > best[0]):
                best = (state.seq, elem)
        return best[1] if best else None

    def effective_level(self, elem_id: str, recorded: CredibilityLevel,
                        as_of_seq: Optional[int] = None) -> CredibilityLevel:
        """Recorded level overlaid with promote/demote events up to a point in time."""
        lvl = int(recorded)
        for ev in self.knowledge_events:
            if ev.object_id != elem_id:
                continue
            if as_of_seq is not None and ev.seq > as_of_seq:
                continue
            if ev.from_level == lvl:
                lvl = ev.to_level
        return CredibilityLevel(lvl)

    def _record_event(self, object_ref: str, from_level: int, to_level: int, author: str) -> KnowledgeEvent:
        event = KnowledgeEvent(self.next_seq(), object_ref, from_level, to_level,
                               author, _now_iso())
        self.knowledge_events.append(event)
        for user in self.collaborators:
            if user != author:
                self.pending_events.setdefault(user, []).append(event)
        self._changed()
        return event

    def promote_credibility(self, object_ref: str, author: str) -> KnowledgeEvent:
        """Assumption -> Knowledge. Advertised to collaborators, never injected
        into committed states."""
        with self.lock:
            record = self._latest_record(object_ref)
            if record is None:
                raise UnknownState(f"no state carries object {object_ref}")
            if record.credibility == CredibilityLevel.EVIDENCE:
                raise WrongLevel("Evidence level is managed by the central database")
            if record.author != author:
                raise NotAuthor(f"object {object_ref} was authored by {record.author}")
            if self.effective_level(object_ref, record.credibility) != CredibilityLevel.ASSUMPTION:
                raise WrongLevel(f"object {object_ref} is not an Assumption")
            return self._record_event(object_ref, 3, 2, author)

    def demote_credibility(self, object_ref: str, author: str) -> KnowledgeEvent:
        """Knowledge -> Assumption; author-only visibility in states committed after."""
        with self.lock:
            record = self._latest_record(object_ref)
            if record is None:
                raise UnknownState(f"no state carries object {object_ref}")
            if record.credibility == CredibilityLevel.EVIDENCE:
                raise WrongLevel("Evidence level is managed by the central database")
            if record.author != author:
                raise NotAuthor(f"object {object_ref} was authored by {record.author}")
            if self.effective_level(object_ref, record.credibility) != CredibilityLevel.KNOWLEDGE:
                raise WrongLevel(f"object {object_ref} is not Knowledge")
            return self._record_event(object_ref, 2, 3, author)

    def pending_for(self, user: str) -> list[KnowledgeEvent]:
        return list(self.pending_events.get(user, []))

    # --- views ---

    def resolve_view(self, state_id: str, viewer: str) -> VisibleGraph:
        state = self._state(state_id)
        return visible_graph(
            state.payload, viewer,
            effective_level=lambda eid, rec: self.effective_level(eid, rec, as_of_seq=state.seq),
        )

    def checkout(self, state_id: str, viewer: str) -> Snapshot:
        state = self._state(state_id)
        self.collaborators.add(viewer)
        return Snapshot(
            state_id=state.id, parents=list(state.parents), branch_id=state.branch_id,
            author=state.author, message=state.message, seq=state.seq,
            timestamp=state.timestamp, editable=(viewer == state.author),
            graph=self.resolve_view(state_id, viewer),
            report_flag=state.report_flag, stale=state.stale,
            stale_reasons=list(state.stale_reasons),
        )

    # --- comments / flags ---

    def add_log_comment(self, branch_id: str, text: str, author: str) -> str:
        with self.lock:
            branch = self._branch(branch_id)
            if branch.owner != author:
                raise NotBranchOwner(f"branch {branch_id} is owned by {branch.owner}")
            seq = self.next_seq()
            cid = self.alloc_id("comment")
            self.comments[cid] = LogComment(cid, branch_id, author, seq, _now_iso(), text)
            branch.entries.append({"type": "comment", "id": cid, "seq": seq})
            self._changed()
            return cid

    def mark_for_report(self, state_id: str, flag: bool, author: str) -> None:
        with self.lock:
            state = self._state(state_id)
            self.collaborators.add(author)
            state.report_flag = bool(flag)
            self._changed()

    def acknowledge_update(self, state_id: str, update_id: str, author: str) -> None:
        with self.lock:
            state = self._state(state_id)
            if update_id not in state.stale_reasons:
                raise NotStale(f"state {state_id} is not stale with update {update_id}")
            if state.author != author:
                raise NotAuthor(f"state {state_id} was authored by {state.author}")
            state.stale_reasons.remove(update_id)
            self._changed()

    def report_candidates(self) -> list[str]:
        return sorted((s.id for s in self.states.values() if s.report_flag),
                      key=lambda sid: self.states[sid].seq)

    # --- summary for the console ---

    def summary(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "caseId": self.case_id,
            "datasetIds": self.dataset_ids,
            "rootStateId": self.root_state_id,
            "createdBy": self.created_by,
            "createdAt": self.created_at,
            "branches": [b.to_dict() for b in sorted(self.branches.values(), key=lambda b: b.id)],
            "states": [
                {
                    "id": s.id, "parents": s.parents, "branchId": s.branch_id,
                    "author": s.author, "seq": s.seq, "timestamp": s.timestamp,
                    "message": s.message, "payloadHash": s.payload_hash,
                    "reportFlag": s.report_flag, "stale": s.stale,
                    "staleReasons": list(s.stale_reasons),
                }
                for s in sorted(self.states.values(), key=lambda s: s.seq)
            ],
            "comments": [c.to_dict() for c in sorted(self.comments.values(), key=lambda c: c.seq)],
            "knowledgeEvents": [e.to_dict() for e in self.knowledge_events],
        }

    # --- persistence ---

    def meta_to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "caseId": self.case_id,
            "datasetIds": self.dataset_ids,
            "rootStateId": self.root_state_id,
            "createdBy": self.created_by,
            "createdAt": self.created_at,
            "seq": self._seq,
            "counters": self._counters,
            "collaborators": sorted(self.collaborators),
            "pendingEvents": {u: [e.seq for e in evs] for u, evs in self.pending_events.items()},
            "flags": {
                s.id: {"reportFlag": s.report_flag, "staleReasons": list(s.stale_reasons)}
                for s in self.states.values()
                if s.report_flag or s.stale_reasons
            },
        }


class CaseStore:
    """Datasets, documents and the back-end job list for one case.

    With a ``root`` path the store writes through to disk and can be
    recovered after a restart; without one it is purely in-memory.
    """

    def __init__(self, root: Optional[Path] = None, case_id: str = "case-1"):
        self.root = Path(root) if root else None
        self.case_id = case_id
        self.datasets: dict[str, "Dataset"] = {}
        self.documents: dict[str, Document] = {}
        self.jobs: list = []
        self.warnings: list[CorruptStore] = []
        self._doc_counter = 0
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
            self._load()

    # --- document lifecycle ---

    def create_document(self, name: str, dataset_ids: list[str], author: str,
                        layout_params: Optional[layout_mod.LayoutParams] = None) -> Document:
        from .ingest import dataset_payload  # local import to avoid a cycle

        for dsid in dataset_ids:
            if dsid not in self.datasets:
                raise UnknownDataset(f"unknown dataset {dsid}")
        self._doc_counter += 1
        doc = Document(f"doc-{self._doc_counter}", name, self.case_id, dataset_ids, author)
        payload = dataset_payload([self.datasets[d] for d in dataset_ids])
        if payload.objects:
            edges = [(r.source_id, r.target_id) for r in payload.relationships.values()]
            payload.positions = layout_mod.initial_layout(
                payload.objects.keys(), edges, layout_params or layout_mod.LayoutParams())
        doc._on_commit = self._persist_state
        doc._on_change = self._persist_document_meta
        root_state = doc._add_state(payload, [], "branch-1", author, "initial dataset")
        doc.root_state_id = root_state.id
        doc.branches["branch-1"] = Branch(
            "branch-1", "main", "", root_state.id, author,
            entries=[{"type": "state", "id": root_state.id, "seq": root_state.seq}],
        )
        doc._counters["branch"] = 1
        self.documents[doc.id] = doc
        self._persist_state(doc, root_state)
        self._persist_document_meta(doc)
        return doc

    def document(self, doc_id: str) -> Document:
        doc = self.documents.get(doc_id)
        if doc is None:
            raise UnknownDocument(f"unknown document {doc_id}")
        return doc

    # --- persistence ---

    def _doc_dir(self, doc: Document) -> Path:
        return self.root / "documents" / doc.id

    def _persist_state(self, doc: Document, state: AnalysisState) -> None:
        if self.root is None:
            return
        states_dir = self._doc_dir(doc) / "states"
        states_dir.mkdir(parents=True, exist_ok=True)
        path = states_dir / f"{state.id}.json"
        if not path.exists():  # append-only: never rewrite a committed state
            tmp = path.with_suffix(".json.tmp")
            tmp.write_bytes(canonical_json(state.to_dict()))
            tmp.rename(path)

    def _persist_document_meta(self, doc: Document) -> None:
        if self.root is None:
            return
        doc_dir = self._doc_dir(doc)
        doc_dir.mkdir(parents=True, exist_ok=True)
        (doc_dir / "document.json").write_bytes(canonical_json(doc.meta_to_dict()))
        (doc_dir / "branches.json").write_bytes(
            canonical_json([b.to_dict() for b in doc.branches.values()]))
        (doc_dir / "events.json").write_bytes(canonical_json({
            "knowledgeEvents": [e.to_dict() for e in doc.knowledge_events],
            "comments": [c.to_dict() for c in doc.comments.values()],
        }))

    def persist_dataset(self, dataset) -> None:
        if self.root is None:
            return
        ds_dir = self.root / "datasets"
        ds_dir.mkdir(parents=True, exist_ok=True)
        (ds_dir / f"{dataset.id}.json").write_bytes(canonical_json(dataset.to_dict()))

    def _load(self) -> None:
        from .ingest import Dataset

        ds_dir = self.root / "datasets"
        if ds_dir.is_dir():
            for path in sorted(ds_dir.glob("*.json")):
                try:
                    self.datasets[path.stem] = Dataset.from_dict(json.loads(path.read_text()))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    self.warnings.append(CorruptStore(f"{path}: {exc}"))
        docs_dir = self.root / "documents"
        if docs_dir.is_dir():
            for doc_dir in sorted(docs_dir.iterdir()):
                if doc_dir.is_dir():
                    self._load_document(doc_dir)
        jobs_path = self.root / "jobs.json"
        if jobs_path.is_file():
            try:
                self.load_jobs(json.loads(jobs_path.read_text()))
            except (json.JSONDecodeError, ValueError) as exc:
                self.warnings.append(CorruptStore(f"{jobs_path}: {exc}"))

    def _load_document(self, doc_dir: Path) -> None:
        meta_path = doc_dir / "document.json"
        try:
            meta = json.loads(meta_path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            self.warnings.append(CorruptStore(f"{meta_path}: {exc}"))
            return
        doc = Document(meta["id"], meta["name"], meta["caseId"], meta["datasetIds"],
                       meta["createdBy"])
        doc.created_at = meta["createdAt"]
        doc.root_state_id = meta["rootStateId"]
        doc._seq = meta["seq"]
        doc._counters = dict(meta.get("counters", {}))
        doc.collaborators = set(meta.get("collaborators", []))
        # states: verify content hashes; skip (and report) anything corrupt
        for path in sorted((doc_dir / "states").glob("*.json")):
            try:
                raw = json.loads(path.read_text())
                state = AnalysisState.from_dict(raw)
                if payload_hash(state.payload) != state.payload_hash \
                        or state_id_for(state.meta_dict()) != state.id \
                        or path.stem != state.id:
                    raise ValueError("content hash mismatch")
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                self.warnings.append(CorruptStore(f"{path}: {exc}"))
                continue
            doc.states[state.id] = state
        # drop states whose parents did not survive recovery
        changed = True
        while changed:
            changed = False
            for sid, state in list(doc.states.items()):
                if any(p not in doc.states for p in state.parents):
                    self.warnings.append(CorruptStore(f"state {sid}: missing parent, dropped"))
                    del doc.states[sid]
                    changed = True
        try:
            branches = json.loads((doc_dir / "branches.json").read_text())
            for b in branches:
                branch = Branch.from_dict(b)
                branch.entries = [e for e in branch.entries
                                  if e["type"] != "state" or e["id"] in doc.states]
                doc.branches[branch.id] = branch
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            self.warnings.append(CorruptStore(f"{doc_dir / 'branches.json'}: {exc}"))
        try:
            events = json.loads((doc_dir / "events.json").read_text())
            doc.knowledge_events = [KnowledgeEvent.from_dict(e)
                                    for e in events.get("knowledgeEvents", [])]
            for c in events.get("comments", []):
                comment = LogComment.from_dict(c)
                doc.comments[comment.id] = comment
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            self.warnings.append(CorruptStore(f"{doc_dir / 'events.json'}: {exc}"))
        by_seq = {e.seq: e for e in doc.knowledge_events}
        doc.pending_events = {
            u: [by_seq[s] for s in seqs if s in by_seq]
            for u, seqs in meta.get("pendingEvents", {}).items()
        }
        for sid, flags in meta.get("flags", {}).items():
            if sid in doc.states:
                doc.states[sid].report_flag = flags.get("reportFlag", False)
                doc.states[sid].stale_reasons = list(flags.get("staleReasons", []))
        doc._on_commit = self._persist_state
        doc._on_change = self._persist_document_meta
        self.documents[doc.id] = doc
        num = doc.id.rsplit("-", 1)[-1]
        if num.isdigit():
            self._doc_counter = max(self._doc_counter, int(num))

    # --- jobs stub ---

    def load_jobs(self, jobs: list[dict]) -> None:
        from .ingest import JobStatus

        self.jobs = [JobStatus.from_dict(j) for j in jobs]
        if self.root is not None:
            (self.root / "jobs.json").write_bytes(
                canonical_json([j.to_dict() for j in self.jobs]))

    def list_jobs(self, case_id: Optional[str] = None):
        return sorted(self.jobs, key=lambda j: j.id)
