import random

import pytest

from casegraph import CredibilityLevel, payload_hash
from casegraph.diffmerge import MergeSelection, diff, merge
from casegraph.errors import (
    CrossDocumentDiff,
    InvalidSelection,
    NotBranchOwner,
    UnresolvedConflict,
)

A = CredibilityLevel.ASSUMPTION
K = CredibilityLevel.KNOWLEDGE


def brute_force_partition(graph_a, graph_b):
    """Independent oracle: exhaustive pairwise comparison on raw dicts.

    Two elements are equal when id, kind, attribute map (keys and values)
    and credibility all match.
    """
    def record(elem):
        d = elem.to_dict()
        return (d["id"], d["kind"], d["credibility"],
                tuple(sorted((k, str(v["value"]), v["credibility"])
                             for k, v in d["attributes"].items())),
                d.get("sourceId"), d.get("targetId"), d.get("directed"))

    elems_a = {**graph_a.objects, **graph_a.relationships}
    elems_b = {**graph_b.objects, **graph_b.relationships}
    equal, only_a, only_b, conflicting = set(), set(), set(), set()
    for eid in elems_a:
        if eid not in elems_b:
            only_a.add(eid)
        elif record(elems_a[eid]) == record(elems_b[eid]):
            equal.add(eid)
        else:
            conflicting.add(eid)
    for eid in elems_b:
        if eid not in elems_a:
            only_b.add(eid)
    return equal, only_a, only_b, conflicting


def two_branches(document, edit_a=None, edit_b=None, owner="u1"):
    """Commit one state on each of two branches off the root."""
    draft = document.open_draft("branch-1", owner)
    if edit_a:
        edit_a(draft)
    sid_a = document.commit_state("branch-1", draft, "a", owner)
    bid = document.create_branch("side", "", document.root_state_id, owner)
    draft = document.open_draft(bid, owner)
    if edit_b:
        edit_b(draft)
    sid_b = document.commit_state(bid, draft, "b", owner)
    return sid_a, sid_b


class TestDiff:
    def test_reflexive(self, document):
        root = document.root_state_id
        d = diff(document, root, root, "u1")
        assert d.only_a == d.only_b == d.conflicting == set()
        assert d.equal == set(document.states[root].payload.objects) \
            | set(document.states[root].payload.relationships)

    def test_added_node_lands_in_only_b(self, document):
        added = []
        sid_a, sid_b = two_branches(
            document, edit_b=lambda dr: added.append(dr.create_object("person", {}, A, "u1")))
        d = diff(document, sid_a, sid_b, "u1")
        assert d.only_b == set(added)
        assert d.only_a == set()
        assert d.conflicting == set()

    def test_modified_attributes_conflict(self, document):
        sid_a, sid_b = two_branches(
            document,
            edit_a=lambda dr: dr.set_attribute("ds1-o0", "alias", "X", K, "u1"),
            edit_b=lambda dr: dr.set_attribute("ds1-o0", "alias", "Y", K, "u1"))
        d = diff(document, sid_a, sid_b, "u1")
        assert d.conflicting == {"ds1-o0"}

    def test_symmetry(self, document):
        sid_a, sid_b = two_branches(
            document,
            edit_a=lambda dr: dr.create_object("person", {}, A, "u1"),
            edit_b=lambda dr: dr.create_object("vehicle", {}, A, "u1"))
        ab = diff(document, sid_a, sid_b, "u1")
        ba = diff(document, sid_b, sid_a, "u1")
        assert ab.only_a == ba.only_b
        assert ab.only_b == ba.only_a
        assert ab.equal == ba.equal

    def test_foreign_assumptions_never_enter_diff(self, document):
        leaked = []
        sid_a, sid_b = two_branches(
            document, edit_a=lambda dr: leaked.append(dr.create_object("person", {}, A, "u1")))
        d = diff(document, sid_a, sid_b, "u2")
        assert leaked[0] not in d.only_a | d.equal | d.conflicting

    def test_cross_document_rejected(self, store, document):
        other = store.create_document("other", ["ds1"], "u1")
        with pytest.raises(CrossDocumentDiff):
            diff(document, document.root_state_id, other.root_state_id, "u1",
                 document_b=other)

    def test_partition_laws_on_random_states(self, store):
        rng = random.Random(42)
        for trial in range(30):
            doc = store.create_document(f"rand-{trial}", ["ds1"], "u1")
            def edit(dr):
                for _ in range(rng.randrange(3)):
                    dr.create_object("person", {"n": rng.randrange(3)}, A, "u1")
                if rng.random() < 0.5:
                    dr.set_attribute("ds1-o1", "note", rng.randrange(4), K, "u1")
                if rng.random() < 0.4:
                    dr.remove_object(f"ds1-o{rng.randrange(6)}")
            sid_a, sid_b = two_branches(doc, edit_a=edit, edit_b=edit)
            d = diff(doc, sid_a, sid_b, "u1")
            equal, only_a, only_b, conflicting = brute_force_partition(
                doc.resolve_view(sid_a, "u1"), doc.resolve_view(sid_b, "u1"))
            assert d.equal == equal
            assert d.only_a == only_a
            assert d.only_b == only_b
            assert d.conflicting == conflicting
            # disjointness + coverage
            assert d.equal.isdisjoint(d.only_a) and d.equal.isdisjoint(d.only_b)
            elems_a = set(doc.resolve_view(sid_a, "u1").objects) \
                | set(doc.resolve_view(sid_a, "u1").relationships)
            assert d.equal | d.only_a | d.conflicting == elems_a


class TestMerge:
    def test_full_merge_of_disjoint_additions_is_union(self, document):
        ids = []
        sid_a, sid_b = two_branches(
            document,
            edit_a=lambda dr: ids.append(dr.create_object("person", {}, A, "u1")),
            edit_b=lambda dr: ids.append(dr.create_object("vehicle", {}, A, "u1")))
        d = diff(document, sid_a, sid_b, "u1")
        out = merge(document, "branch-1", sid_a, sid_b, MergeSelection.full(d), "u1")
        merged = document.states[out.state_id].payload
        n_a = len(document.states[sid_a].payload.objects)
        n_b = len(document.states[sid_b].payload.objects)
        assert len(merged.objects) == n_a + n_b - len(
            d.equal & set(document.states[sid_a].payload.objects))
        assert set(ids) <= set(merged.objects)

    def test_merge_has_exactly_two_parents(self, document):
        sid_a, sid_b = two_branches(document)
        d = diff(document, sid_a, sid_b, "u1")
        out = merge(document, "branch-1", sid_a, sid_b, MergeSelection.full(d), "u1")
        assert document.states[out.state_id].parents == [sid_a, sid_b]

    def test_idempotent_self_merge(self, document):
        draft = document.open_draft("branch-1", "u1")
        oid = draft.create_object("person", {}, A, "u1")
        draft.create_relationship(oid, "ds1-o0", "meets")
        draft.group_nodes(["ds1-o1", "ds1-o2"], "pair", tag_color="#abc")
        sid = document.commit_state("branch-1", draft, "base", "u1")
        d = diff(document, sid, sid, "u1")
        out = merge(document, "branch-1", sid, sid, MergeSelection.full(d), "u1")
        assert document.states[out.state_id].payload_hash == \
            document.states[sid].payload_hash

    def test_groups_from_a_nodes_from_b(self, document):
        extra_b = []
        def edit_a(dr):
            dr.group_nodes(["ds1-o0", "ds1-o1"], "suspects")
        def edit_b(dr):
            extra_b.append(dr.create_object("person", {}, A, "u1"))
        sid_a, sid_b = two_branches(document, edit_a=edit_a, edit_b=edit_b)
        d = diff(document, sid_a, sid_b, "u1")
        sel = MergeSelection(
            include_equal=True,
            chosen_only_b=set(d.only_b),
            chosen_groups={("A", "suspects")},
            layout_source="B",
        )
        out = merge(document, "branch-1", sid_a, sid_b, sel, "u1")
        merged = document.states[out.state_id].payload
        assert extra_b[0] in merged.objects
        names = {g.name: g for g in merged.groups.values()}
        assert names["suspects"].member_ids == {"ds1-o0", "ds1-o1"}

    def test_unselected_endpoint_drops_relationship(self, document):
        created = {}
        def edit_b(dr):
            created["obj"] = dr.create_object("person", {}, A, "u1")
            created["rel"] = dr.create_relationship(created["obj"], "ds1-o0", "calls")
        sid_a, sid_b = two_branches(document, edit_b=edit_b)
        d = diff(document, sid_a, sid_b, "u1")
        sel = MergeSelection(chosen_only_b={created["rel"]})  # endpoint not chosen
        out = merge(document, "branch-1", sid_a, sid_b, sel, "u1")
        merged = document.states[out.state_id].payload
        assert created["rel"] not in merged.relationships
        assert out.dropped_relationships == [created["rel"]]

    def test_merged_payload_endpoint_closed(self, store):
        rng = random.Random(7)
        for trial in range(10):
            doc = store.create_document(f"closure-{trial}", ["ds1"], "u1")
            def edit(dr):
                o = dr.create_object("person", {}, A, "u1")
                dr.create_relationship(o, f"ds1-o{rng.randrange(6)}", "x")
            sid_a, sid_b = two_branches(doc, edit_a=edit, edit_b=edit)
            d = diff(doc, sid_a, sid_b, "u1")
            sel = MergeSelection(
                include_equal=rng.random() < 0.8,
                chosen_only_a={x for x in d.only_a if rng.random() < 0.5},
                chosen_only_b={x for x in d.only_b if rng.random() < 0.5},
                conflict_resolutions={x: "A" for x in d.conflicting})
            out = merge(doc, "branch-1", sid_a, sid_b, sel, "u1")
            merged = doc.states[out.state_id].payload
            for rel in merged.relationships.values():
                assert rel.source_id in merged.objects
                assert rel.target_id in merged.objects

    def test_layout_adoption_exact(self, document):
        sid_a, sid_b = two_branches(
            document,
            edit_a=lambda dr: dr.set_node_visual("ds1-o0", "move", (111.0, -5.5)))
        d = diff(document, sid_a, sid_b, "u1")
        for source, reference in (("A", sid_a), ("B", sid_b)):
            out = merge(document, "branch-1", sid_a, sid_b,
                        MergeSelection.full(d, layout_source=source), "u1")
            merged = document.states[out.state_id].payload
            ref = document.states[reference].payload.positions
            for oid, pos in ref.items():
                if oid in merged.positions:
                    assert merged.positions[oid] == pos

    def test_unresolved_conflict_rejected(self, document):
        sid_a, sid_b = two_branches(
            document,
            edit_a=lambda dr: dr.set_attribute("ds1-o0", "alias", "X", K, "u1"),
            edit_b=lambda dr: dr.set_attribute("ds1-o0", "alias", "Y", K, "u1"))
        with pytest.raises(UnresolvedConflict):
            merge(document, "branch-1", sid_a, sid_b, MergeSelection(), "u1")

    def test_selection_outside_diff_rejected(self, document):
        sid_a, sid_b = two_branches(document)
        with pytest.raises(InvalidSelection):
            merge(document, "branch-1", sid_a, sid_b,
                  MergeSelection(chosen_only_a={"ghost"}), "u1")

    def test_merge_into_foreign_branch_rejected(self, document):
        sid_a, sid_b = two_branches(document)
        with pytest.raises(NotBranchOwner):
            merge(document, "branch-1", sid_a, sid_b, MergeSelection(), "u2")

    def test_merge_from_colleague_state_into_own_branch(self, document):
        # non-intrusive collaboration: u2 merges u1's state into u2's branch
        draft = document.open_draft("branch-1", "u1")
        draft.set_attribute("ds1-o0", "alias", "X", K, "u1")
        sid_a = document.commit_state("branch-1", draft, "u1 work", "u1")
        bid = document.create_branch("u2-line", "", document.root_state_id, "u2")
        draft = document.open_draft(bid, "u2")
        sid_b = document.commit_state(bid, draft, "u2 base", "u2")
        d = diff(document, sid_a, sid_b, "u2")
        out = merge(document, bid, sid_a, sid_b, MergeSelection.full(d), "u2")
        merged = document.states[out.state_id]
        assert merged.branch_id == bid
        assert "alias" in merged.payload.objects["ds1-o0"].attributes
