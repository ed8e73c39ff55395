"""Difference table between two analysis states and user-driven merging.

The diff partitions both states' elements into equal / only-A / only-B
plus conflicting pairs (same id, differing content). Merging is always an
explicit user selection over that table: which unique parts to include,
how to resolve each conflict, which groups to carry over, and which
state's layout to adopt. The merged state has exactly two parents.

Both operations run on viewer-resolved graphs, so assumptions invisible
to the merging user never enter the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import layout as layout_mod
from .errors import (
    CrossDocumentDiff,
    InvalidSelection,
    NotBranchOwner,
    UnresolvedConflict,
)
from .model import Group, NodeVisual, StatePayload, VisibleGraph
from .store import Document


def element_signature(elem) -> tuple:
    """Equality key: id, kind, attribute map (keys and values) and credibility."""
    d = elem.to_dict()
    attrs = tuple(sorted((k, repr(v["value"]), v["credibility"])
                         for k, v in d["attributes"].items()))
    endpoint = (d.get("sourceId"), d.get("targetId"), d.get("directed"))
    return (d["id"], d["kind"], attrs, d["credibility"], endpoint)


def _group_signature(grp: Group) -> tuple:
    return (grp.name, tuple(sorted(grp.member_ids)), grp.tag_color)


@dataclass
class DiffResult:
    state_a: str
    state_b: str
    viewer: str
    equal: set[str] = field(default_factory=set)
    only_a: set[str] = field(default_factory=set)
    only_b: set[str] = field(default_factory=set)
    conflicting: set[str] = field(default_factory=set)
    group_equal: set[str] = field(default_factory=set)       # matched by name
    group_only_a: set[str] = field(default_factory=set)
    group_only_b: set[str] = field(default_factory=set)
    group_conflicting: set[str] = field(default_factory=set)
    visual_diff: dict[str, dict] = field(default_factory=dict)
    # element records by id, for merge assembly and the UI table
    elements_a: dict = field(default_factory=dict)
    elements_b: dict = field(default_factory=dict)
    groups_a: dict[str, Group] = field(default_factory=dict)  # by name
    groups_b: dict[str, Group] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Three-column difference table plus conflict list for the console."""
        def rows(ids, source):
            return [source[i].to_dict() for i in sorted(ids)]
        return {
            "stateA": self.state_a,
            "stateB": self.state_b,
            "onlyA": rows(self.only_a, self.elements_a),
            "equal": rows(self.equal, self.elements_a),
            "onlyB": rows(self.only_b, self.elements_b),
            "conflicts": [
                {"id": i, "a": self.elements_a[i].to_dict(), "b": self.elements_b[i].to_dict()}
                for i in sorted(self.conflicting)
            ],
            "groups": {
                "equal": sorted(self.group_equal),
                "onlyA": sorted(self.group_only_a),
                "onlyB": sorted(self.group_only_b),
                "conflicting": sorted(self.group_conflicting),
            },
            "visualDiff": self.visual_diff,
        }


@dataclass
class MergeSelection:
    include_equal: bool = True
    chosen_only_a: set[str] = field(default_factory=set)
    chosen_only_b: set[str] = field(default_factory=set)
    conflict_resolutions: dict[str, str] = field(default_factory=dict)  # id -> "A"|"B"
    chosen_groups: set[tuple[str, str]] = field(default_factory=set)    # (side, name)
    layout_source: str = "A"

    @classmethod
    def full(cls, diff: DiffResult, layout_source: str = "A") -> "MergeSelection":
        """Take everything from both sides; conflicts resolve to A."""
        return cls(
            include_equal=True,
            chosen_only_a=set(diff.only_a),
            chosen_only_b=set(diff.only_b),
            conflict_resolutions={i: "A" for i in diff.conflicting},
            chosen_groups={("A", n) for n in diff.group_only_a | diff.group_equal
                           | diff.group_conflicting}
                          | {("B", n) for n in diff.group_only_b},
            layout_source=layout_source,
        )

    @classmethod
    def from_dict(cls, d: dict) -> "MergeSelection":
        return cls(
            include_equal=d.get("includeEqual", True),
            chosen_only_a=set(d.get("chosenOnlyA", [])),
            chosen_only_b=set(d.get("chosenOnlyB", [])),
            conflict_resolutions=dict(d.get("conflictResolutions", {})),
            chosen_groups={(side, name) for side, name in d.get("chosenGroups", [])},
            layout_source=d.get("layoutSource", "A"),
        )


@dataclass
class MergeOutcome:
    state_id: str
    dropped_relationships: list[str]

    def to_dict(self) -> dict:
        return {"stateId": self.state_id,
                "droppedRelationships": sorted(self.dropped_relationships)}


def diff_graphs(graph_a: VisibleGraph, graph_b: VisibleGraph,
                state_a: str, state_b: str, viewer: str) -> DiffResult:
    result = DiffResult(state_a, state_b, viewer)
    elems_a = {**graph_a.objects, **graph_a.relationships}
    elems_b = {**graph_b.objects, **graph_b.relationships}
    result.elements_a = elems_a
    result.elements_b = elems_b
    for eid in elems_a.keys() | elems_b.keys():
        in_a, in_b = eid in elems_a, eid in elems_b
        if in_a and in_b:
            if element_signature(elems_a[eid]) == element_signature(elems_b[eid]):
                result.equal.add(eid)
            else:
                result.conflicting.add(eid)
        elif in_a:
            result.only_a.add(eid)
        else:
            result.only_b.add(eid)
    # groups are per-state objects; the analyst-visible identity is the name
    result.groups_a = {g.name: g for g in graph_a.groups.values()}
    result.groups_b = {g.name: g for g in graph_b.groups.values()}
    for name in result.groups_a.keys() | result.groups_b.keys():
        in_a, in_b = name in result.groups_a, name in result.groups_b
        if in_a and in_b:
            if _group_signature(result.groups_a[name]) == _group_signature(result.groups_b[name]):
                result.group_equal.add(name)
            else:
                result.group_conflicting.add(name)
        elif in_a:
            result.group_only_a.add(name)
        else:
            result.group_only_b.add(name)
    # per-node visual differences for nodes known on both sides
    for oid in graph_a.objects.keys() & graph_b.objects.keys():
        va = graph_a.node_visuals.get(oid, NodeVisual(oid)).to_dict()
        vb = graph_b.node_visuals.get(oid, NodeVisual(oid)).to_dict()
        pa = graph_a.positions.get(oid)
        pb = graph_b.positions.get(oid)
        if va != vb or pa != pb:
            result.visual_diff[oid] = {"a": {**va, "position": pa},
                                       "b": {**vb, "position": pb}}
    return result


def diff(document: Document, state_a: str, state_b: str, viewer: str,
         document_b: Optional[Document] = None) -> DiffResult:
    if document_b is not None and document_b is not document:
        raise CrossDocumentDiff("states live in different documents")
    graph_a = document.resolve_view(state_a, viewer)
    graph_b = document.resolve_view(state_b, viewer)
    return diff_graphs(graph_a, graph_b, state_a, state_b, viewer)


def _validate_selection(d: DiffResult, sel: MergeSelection) -> None:
    unresolved = d.conflicting - sel.conflict_resolutions.keys()
    if unresolved:
        raise UnresolvedConflict(f"unresolved conflicts: {sorted(unresolved)}")
    if not sel.chosen_only_a <= d.only_a:
        raise InvalidSelection("chosenOnlyA is not a subset of the only-A set")
    if not sel.chosen_only_b <= d.only_b:
        raise InvalidSelection("chosenOnlyB is not a subset of the only-B set")
    for eid, side in sel.conflict_resolutions.items():
        if eid not in d.conflicting or side not in ("A", "B"):
            raise InvalidSelection(f"bad conflict resolution {eid!r} -> {side!r}")
    if sel.layout_source not in ("A", "B"):
        raise InvalidSelection(f"layout source must be A or B, got {sel.layout_source!r}")
    for side, name in sel.chosen_groups:
        groups = d.groups_a if side == "A" else d.groups_b if side == "B" else None
        if groups is None or name not in groups:
            raise InvalidSelection(f"unknown group selection ({side!r}, {name!r})")


def merge(document: Document, target_branch: str, state_a: str, state_b: str,
          selection: MergeSelection, author: str, message: str = "merge",
          layout_params: Optional[layout_mod.LayoutParams] = None) -> MergeOutcome:
    """Assemble the merged payload from the selection and commit it.

    Positions come from the adopted layout for nodes present there; the
    rest are placed incrementally. Relationships that lose an endpoint
    through the selection are dropped and reported.
    """
    with document.lock:
        branch = document.branches.get(target_branch)
        if branch is None:
            from .errors import UnknownBranch
            raise UnknownBranch(f"unknown branch {target_branch}")
        if branch.owner != author:
            raise NotBranchOwner(f"branch {target_branch} is owned by {branch.owner}")
        d = diff(document, state_a, state_b, author)
        _validate_selection(d, selection)

        graph_a = document.resolve_view(state_a, author)
        graph_b = document.resolve_view(state_b, author)
        chosen: dict[str, tuple[str, object]] = {}  # id -> (side, element)
        if selection.include_equal:
            for eid in d.equal:
                chosen[eid] = ("A", d.elements_a[eid])
        for eid in selection.chosen_only_a:
            chosen[eid] = ("A", d.elements_a[eid])
        for eid in selection.chosen_only_b:
            chosen[eid] = ("B", d.elements_b[eid])
        for eid, side in selection.conflict_resolutions.items():
            chosen[eid] = (side, (d.elements_a if side == "A" else d.elements_b)[eid])

        payload = StatePayload()
        for eid, (side, elem) in chosen.items():
            if hasattr(elem, "source_id"):
                continue  # relationships handled after objects, for closure
            payload.objects[eid] = elem
        dropped = []
        for eid, (side, elem) in chosen.items():
            if not hasattr(elem, "source_id"):
                continue
            if elem.source_id in payload.objects and elem.target_id in payload.objects:
                payload.relationships[eid] = elem
            else:
                dropped.append(eid)

        # visuals: adopted-layout side wins where it knows the node
        primary = graph_a if selection.layout_source == "A" else graph_b
        secondary = graph_b if selection.layout_source == "A" else graph_a
        for oid in payload.objects:
            visual = primary.node_visuals.get(oid) or secondary.node_visuals.get(oid)
            visual = NodeVisual(oid, visual.minimized, visual.focus, None) if visual \
                else NodeVisual(oid)
            payload.node_visuals[oid] = visual

        # groups: selected by (side, name); members restricted to what survived
        for side, name in sorted(selection.chosen_groups):
            source = (d.groups_a if side == "A" else d.groups_b)[name]
            members = source.member_ids & payload.objects.keys()
            members = {m for m in members
                       if payload.node_visuals[m].group_id is None}
            if not members:
                continue
            # keep the source id when free so merge(A,A) reproduces A exactly
            gid = source.id if source.id not in payload.groups else document.alloc_id("grp")
            payload.groups[gid] = Group(gid, name, members, source.tag_color,
                                        source.collapsed)
            for m in members:
                payload.node_visuals[m].group_id = gid

        # layout adoption + incremental placement for the remainder
        for oid in payload.objects:
            if oid in primary.positions:
                payload.positions[oid] = primary.positions[oid]
        missing = [oid for oid in payload.objects if oid not in payload.positions]
        for oid in list(missing):
            if oid in secondary.positions:
                payload.positions[oid] = secondary.positions[oid]
                missing.remove(oid)
        if missing:
            edges = [(r.source_id, r.target_id) for r in payload.relationships.values()]
            placed = layout_mod.incremental_place(
                payload.positions, missing, edges,
                layout_params or layout_mod.LayoutParams())
            payload.positions.update(placed)

        payload = payload.clone()
        state = document._add_state(payload, [state_a, state_b], target_branch,
                                    author, message)
        document.collaborators.add(author)
        return MergeOutcome(state.id, dropped)
