"""Graph elements, credibility semantics and visibility resolution.

The data model distinguishes three credibility levels. Evidence comes from
the central database and is immutable inside the tool; Knowledge and
Assumption are user-entered, carry an author stamp, and render with a
dashed outline. An Assumption is private to its author and exists only in
the analysis state where it was introduced and in states derived from it.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Callable, Iterable, Optional

from .errors import (
    AlreadyGrouped,
    AttributeLocked,
    ConflictingFlags,
    CredibilityViolation,
    DraftClosed,
    EmptySelection,
    InvalidEvaluationCode,
    UnknownObject,
)


class CredibilityLevel(IntEnum):
    """Three-tier trust model. Lower number = more trusted."""

    EVIDENCE = 1
    KNOWLEDGE = 2
    ASSUMPTION = 3

    @property
    def dots(self) -> int:
        """Signaling-dot count: the more dots, the higher the credibility."""
        return 4 - self.value


SOURCE_RELIABILITY = ("A", "B", "C", "X")
INFO_VALIDITY = (1, 2, 3, 4)


@dataclass(frozen=True)
class EvaluationCode:
    """Law-enforcement 4x4 evaluation: source reliability x information validity."""

    source_reliability: str
    info_validity: int

    def __post_init__(self):
        if self.source_reliability not in SOURCE_RELIABILITY or self.info_validity not in INFO_VALIDITY:
            raise InvalidEvaluationCode(
                f"invalid evaluation code {self.source_reliability}{self.info_validity}"
            )

    @classmethod
    def parse(cls, code: str) -> "EvaluationCode":
        if not isinstance(code, str) or len(code) != 2 or not code[1].isdigit():
            raise InvalidEvaluationCode(f"invalid evaluation code {code!r}")
        return cls(code[0], int(code[1]))

    def __str__(self) -> str:
        return f"{self.source_reliability}{self.info_validity}"


@dataclass
class AttributeValue:
    value: Any
    credibility: CredibilityLevel
    author: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "credibility": int(self.credibility),
            "author": self.author,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AttributeValue":
        return cls(d["value"], CredibilityLevel(d["credibility"]), d.get("author"))


def _check_provenance(credibility, author, source_dataset, evaluation):
    if credibility == CredibilityLevel.EVIDENCE:
        if source_dataset is None or author is not None:
            raise CredibilityViolation(
                "Evidence elements carry a source dataset and no author"
            )
    else:
        if author is None or source_dataset is not None:
            raise CredibilityViolation(
                "user-entered elements carry an author and no source dataset"
            )
        if evaluation is not None:
            raise CredibilityViolation("evaluation codes apply to Evidence only")


@dataclass
class EntityObject:
    id: str
    kind: str
    attributes: dict[str, AttributeValue] = field(default_factory=dict)
    credibility: CredibilityLevel = CredibilityLevel.ASSUMPTION
    evaluation: Optional[EvaluationCode] = None
    author: Optional[str] = None
    source_dataset: Optional[str] = None
    is_placeholder: bool = False

    def __post_init__(self):
        _check_provenance(self.credibility, self.author, self.source_dataset, self.evaluation)
        if self.is_placeholder and self.credibility == CredibilityLevel.EVIDENCE:
            raise CredibilityViolation("placeholders are never Evidence")

    @property
    def user_defined(self) -> bool:
        """User-entered elements render with a dashed outline."""
        return self.credibility != CredibilityLevel.EVIDENCE

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "attributes": {k: v.to_dict() for k, v in sorted(self.attributes.items())},
            "credibility": int(self.credibility),
            "evaluation": str(self.evaluation) if self.evaluation else None,
            "author": self.author,
            "sourceDataset": self.source_dataset,
            "isPlaceholder": self.is_placeholder,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EntityObject":
        return cls(
            id=d["id"],
            kind=d["kind"],
            attributes={k: AttributeValue.from_dict(v) for k, v in d.get("attributes", {}).items()},
            credibility=CredibilityLevel(d["credibility"]),
            evaluation=EvaluationCode.parse(d["evaluation"]) if d.get("evaluation") else None,
            author=d.get("author"),
            source_dataset=d.get("sourceDataset"),
            is_placeholder=d.get("isPlaceholder", False),
        )


@dataclass
class Relationship:
    id: str
    source_id: str
    target_id: str
    kind: str
    directed: bool = True
    attributes: dict[str, AttributeValue] = field(default_factory=dict)
    credibility: CredibilityLevel = CredibilityLevel.ASSUMPTION
    evaluation: Optional[EvaluationCode] = None
    author: Optional[str] = None
    source_dataset: Optional[str] = None

    def __post_init__(self):
        _check_provenance(self.credibility, self.author, self.source_dataset, self.evaluation)

    @property
    def user_defined(self) -> bool:
        return self.credibility != CredibilityLevel.EVIDENCE

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "sourceId": self.source_id,
            "targetId": self.target_id,
            "kind": self.kind,
            "directed": self.directed,
            "attributes": {k: v.to_dict() for k, v in sorted(self.attributes.items())},
            "credibility": int(self.credibility),
            "evaluation": str(self.evaluation) if self.evaluation else None,
            "author": self.author,
            "sourceDataset": self.source_dataset,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Relationship":
        return cls(
            id=d["id"],
            source_id=d["sourceId"],
            target_id=d["targetId"],
            kind=d["kind"],
            directed=d.get("directed", True),
            attributes={k: AttributeValue.from_dict(v) for k, v in d.get("attributes", {}).items()},
            credibility=CredibilityLevel(d["credibility"]),
            evaluation=EvaluationCode.parse(d["evaluation"]) if d.get("evaluation") else None,
            author=d.get("author"),
            source_dataset=d.get("sourceDataset"),
        )


@dataclass
class NodeVisual:
    object_id: str
    minimized: bool = False
    focus: bool = False
    group_id: Optional[str] = None

    def __post_init__(self):
        if self.minimized and self.focus:
            raise ConflictingFlags("a node cannot be both minimized and focused")

    def to_dict(self) -> dict:
        return {
            "objectId": self.object_id,
            "minimized": self.minimized,
            "focus": self.focus,
            "groupId": self.group_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NodeVisual":
        return cls(d["objectId"], d.get("minimized", False), d.get("focus", False), d.get("groupId"))


@dataclass
class Group:
    id: str
    name: str
    member_ids: set[str]
    tag_color: Optional[str] = None
    collapsed: bool = False

    @property
    def badge_count(self) -> int:
        """Shown beside the collapsed node: the amount of aggregated nodes."""
        return len(self.member_ids)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "memberIds": sorted(self.member_ids),
            "tagColor": self.tag_color,
            "collapsed": self.collapsed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Group":
        return cls(d["id"], d["name"], set(d["memberIds"]), d.get("tagColor"), d.get("collapsed", False))


@dataclass
class StatePayload:
    """The content of one analysis state: membership, groups, visuals, layout."""

    objects: dict[str, EntityObject] = field(default_factory=dict)
    relationships: dict[str, Relationship] = field(default_factory=dict)
    groups: dict[str, Group] = field(default_factory=dict)
    node_visuals: dict[str, NodeVisual] = field(default_factory=dict)
    positions: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "objects": {k: v.to_dict() for k, v in sorted(self.objects.items())},
            "relationships": {k: v.to_dict() for k, v in sorted(self.relationships.items())},
            "groups": {k: v.to_dict() for k, v in sorted(self.groups.items())},
            "nodeVisuals": {k: v.to_dict() for k, v in sorted(self.node_visuals.items())},
            "positions": {k: [float(p[0]), float(p[1])] for k, p in sorted(self.positions.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StatePayload":
        return cls(
            objects={k: EntityObject.from_dict(v) for k, v in d.get("objects", {}).items()},
            relationships={k: Relationship.from_dict(v) for k, v in d.get("relationships", {}).items()},
            groups={k: Group.from_dict(v) for k, v in d.get("groups", {}).items()},
            node_visuals={k: NodeVisual.from_dict(v) for k, v in d.get("nodeVisuals", {}).items()},
            positions={k: (float(v[0]), float(v[1])) for k, v in d.get("positions", {}).items()},
        )

    def clone(self) -> "StatePayload":
        return copy.deepcopy(self)


@dataclass
class VisibleGraph:
    """resolve_view output: the subgraph a given viewer is allowed to see.

    Always endpoint-closed: every relationship's endpoints are present.
    """

    viewer: str
    objects: dict[str, EntityObject]
    relationships: dict[str, Relationship]
    groups: dict[str, Group]
    node_visuals: dict[str, NodeVisual]
    positions: dict[str, tuple[float, float]]

    def to_dict(self) -> dict:
        return {
            "viewer": self.viewer,
            "objects": {k: v.to_dict() for k, v in sorted(self.objects.items())},
            "relationships": {k: v.to_dict() for k, v in sorted(self.relationships.items())},
            "groups": {k: v.to_dict() for k, v in sorted(self.groups.items())},
            "nodeVisuals": {k: v.to_dict() for k, v in sorted(self.node_visuals.items())},
            "positions": {k: [float(p[0]), float(p[1])] for k, p in sorted(self.positions.items())},
        }


def visible_graph(
    payload: StatePayload,
    viewer: str,
    effective_level: Optional[Callable[[str, CredibilityLevel], CredibilityLevel]] = None,
) -> VisibleGraph:
    """Apply the visibility rules to a state payload.

    Evidence and Knowledge are always included; an Assumption only for its
    author. Relationships incident to a hidden object are hidden, so the
    result is always endpoint-closed. ``effective_level`` lets the caller
    overlay promote/demote events recorded after the element was committed.
    """
    def level(elem_id, recorded):
        return effective_level(elem_id, recorded) if effective_level else recorded

    def element_visible(elem_id, credibility, author):
        lvl = level(elem_id, credibility)
        if lvl in (CredibilityLevel.EVIDENCE, CredibilityLevel.KNOWLEDGE):
            return True
        return author == viewer

    objects = {
        oid: obj for oid, obj in payload.objects.items()
        if element_visible(oid, obj.credibility, obj.author)
    }
    relationships = {
        rid: rel for rid, rel in payload.relationships.items()
        if rel.source_id in objects and rel.target_id in objects
        and element_visible(rid, rel.credibility, rel.author)
    }
    groups = {}
    for gid, grp in payload.groups.items():
        members = grp.member_ids & objects.keys()
        if members:
            groups[gid] = Group(grp.id, grp.name, set(members), grp.tag_color, grp.collapsed)
    visuals = {oid: v for oid, v in payload.node_visuals.items() if oid in objects}
    positions = {oid: p for oid, p in payload.positions.items() if oid in objects}
    return VisibleGraph(viewer, objects, relationships, groups, visuals, positions)


class StateDraft:
    """Mutable working copy of a state payload, single-owner, closed on commit."""

    _fallback_counter = itertools.count(1)

    def __init__(
        self,
        payload: StatePayload,
        owner: str,
        base_state_id: Optional[str] = None,
        branch_id: Optional[str] = None,
        id_alloc: Optional[Callable[[str], str]] = None,
    ):
        self.payload = payload.clone()
        self.owner = owner
        self.base_state_id = base_state_id
        self.branch_id = branch_id
        self.closed = False
        self._id_alloc = id_alloc or (lambda prefix: f"{prefix}-{next(StateDraft._fallback_counter)}")
        self.relayout_requested = False

    @classmethod
    def new_empty(cls, owner: str) -> "StateDraft":
        return cls(StatePayload(), owner)

    def _check_open(self):
        if self.closed:
            raise DraftClosed("draft already committed")

    def close(self):
        self.closed = True

    # --- element creation / mutation ---

    def create_object(
        self,
        kind: str,
        attributes: Optional[dict[str, Any]] = None,
        credibility: CredibilityLevel = CredibilityLevel.ASSUMPTION,
        author: Optional[str] = None,
    ) -> str:
        """Insert a user-defined object. Evidence enters only via ingestion."""
        self._check_open()
        author = author or self.owner
        if credibility == CredibilityLevel.EVIDENCE:
            raise CredibilityViolation("Evidence objects enter only via dataset ingestion")
        oid = self._id_alloc("obj")
        attrs = {
            k: AttributeValue(v, credibility, author) for k, v in (attributes or {}).items()
        }
        self.payload.objects[oid] = EntityObject(
            id=oid,
            kind=kind,
            attributes=attrs,
            credibility=credibility,
            author=author,
            is_placeholder=(kind == "placeholder"),
        )
        self.payload.node_visuals[oid] = NodeVisual(oid)
        return oid

    def create_relationship(
        self,
        source_id: str,
        target_id: str,
        kind: str,
        credibility: CredibilityLevel = CredibilityLevel.ASSUMPTION,
        author: Optional[str] = None,
        directed: bool = True,
    ) -> str:
        self._check_open()
        author = author or self.owner
        if credibility == CredibilityLevel.EVIDENCE:
            raise CredibilityViolation("Evidence relationships enter only via dataset ingestion")
        for endpoint in (source_id, target_id):
            if endpoint not in self.payload.objects:
                raise UnknownObject(f"unknown endpoint {endpoint}")
        rid = self._id_alloc("rel")
        self.payload.relationships[rid] = Relationship(
            id=rid,
            source_id=source_id,
            target_id=target_id,
            kind=kind,
            directed=directed,
            credibility=credibility,
            author=author,
        )
        return rid

    def set_attribute(
        self,
        object_id: str,
        key: str,
        value: Any,
        credibility: CredibilityLevel,
        author: Optional[str] = None,
    ) -> None:
        """Attach or overwrite an attribute with its own credibility stamp.

        An attribute may be less trusted than its owning element, never
        more; Evidence attributes are read-only locally.
        """
        self._check_open()
        author = author or self.owner
        elem = self.payload.objects.get(object_id) or self.payload.relationships.get(object_id)
        if elem is None:
            raise UnknownObject(f"unknown object {object_id}")
        if credibility == CredibilityLevel.EVIDENCE:
            raise CredibilityViolation("Evidence attributes enter only via dataset ingestion")
        if int(credibility) < int(elem.credibility):
            raise CredibilityViolation(
                f"attribute at level {int(credibility)} cannot be more trusted than "
                f"its owner at level {int(elem.credibility)}"
            )
        existing = elem.attributes.get(key)
        if existing is not None and existing.credibility == CredibilityLevel.EVIDENCE:
            raise AttributeLocked(f"attribute {key!r} comes from the central database")
        elem.attributes[key] = AttributeValue(value, credibility, author)

    def remove_object(self, object_id: str) -> None:
        """Remove a user-added object, or exclude an Evidence object from this state.

        Evidence is never deleted from the dataset; exclusion only drops it
        from this state's membership.
        """
        self._check_open()
        if object_id not in self.payload.objects:
            raise UnknownObject(f"unknown object {object_id}")
        del self.payload.objects[object_id]
        self.payload.node_visuals.pop(object_id, None)
        self.payload.positions.pop(object_id, None)
        for rid in [r for r, rel in self.payload.relationships.items()
                    if object_id in (rel.source_id, rel.target_id)]:
            del self.payload.relationships[rid]
        for gid in list(self.payload.groups):
            grp = self.payload.groups[gid]
            grp.member_ids.discard(object_id)
            if not grp.member_ids:
                del self.payload.groups[gid]

    # --- groups and visuals ---

    def group_nodes(self, node_ids: Iterable[str], name: str, tag_color: Optional[str] = None) -> str:
        self._check_open()
        ids = list(node_ids)
        if not ids:
            raise EmptySelection("cannot group an empty selection")
        for nid in ids:
            if nid not in self.payload.objects:
                raise UnknownObject(f"unknown object {nid}")
            visual = self.payload.node_visuals.get(nid)
            if visual is not None and visual.group_id is not None:
                raise AlreadyGrouped(f"node {nid} already belongs to group {visual.group_id}")
        gid = self._id_alloc("grp")
        self.payload.groups[gid] = Group(gid, name, set(ids), tag_color, collapsed=False)
        for nid in ids:
            visual = self.payload.node_visuals.setdefault(nid, NodeVisual(nid))
            visual.group_id = gid
        return gid

    def set_group_collapsed(self, group_id: str, collapsed: bool) -> None:
        self._check_open()
        if group_id not in self.payload.groups:
            raise UnknownObject(f"unknown group {group_id}")
        self.payload.groups[group_id].collapsed = collapsed

    def set_node_visual(self, object_id: str, change: str, position: Optional[tuple[float, float]] = None) -> None:
        """Apply one visual change: minimize|restore|focus|unfocus|move."""
        self._check_open()
        if object_id not in self.payload.objects:
            raise UnknownObject(f"unknown object {object_id}")
        visual = self.payload.node_visuals.setdefault(object_id, NodeVisual(object_id))
        if change == "minimize":
            visual.minimized = True
            visual.focus = False
        elif change == "restore":
            visual.minimized = False
        elif change == "focus":
            if visual.minimized:
                raise ConflictingFlags("cannot focus a minimized node")
            visual.focus = True
        elif change == "unfocus":
            visual.focus = False
        elif change == "move":
            if position is None:
                raise ConflictingFlags("move requires a position")
            self.payload.positions[object_id] = (float(position[0]), float(position[1]))
        else:
            raise ConflictingFlags(f"unknown visual change {change!r}")
