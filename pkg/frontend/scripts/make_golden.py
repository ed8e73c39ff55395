"""Regenerate the golden fixtures in frontend/test/golden/ from a live engine.

Builds a small document with every rendering-relevant feature (dashed
user-defined elements, credibility dots, a collapsed group, a focus
ring, a minimized node, a stale state, a conflicting pair of states and
their real merge) and dumps the exact JSON the /v1/ API would serve.

Run from the repository root:  python3 frontend/scripts/make_golden.py
"""

import json
import pathlib

from casegraph import CaseStore, CredibilityLevel, apply_update, load_dataset
from casegraph.diffmerge import MergeSelection, diff, merge

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "test" / "golden"

DATASET = {
    "id": "ds1",
    "name": "extract",
    "objects": [
        {"id": "o0", "kind": "person", "attributes": {"name": "A. Voss"}, "eval": "B2"},
        {"id": "o1", "kind": "person", "attributes": {"name": "R. Kehl"}, "eval": "B2"},
        {"id": "o2", "kind": "vehicle", "attributes": {"plate": "XX-314"}, "eval": "A1"},
        {"id": "o3", "kind": "location", "attributes": {"street": "Dock 4"}, "eval": "C3"},
    ],
    "relationships": [
        {"id": "r0", "sourceId": "o0", "targetId": "o2", "kind": "owns", "eval": "A1"},
        {"id": "r1", "sourceId": "o1", "targetId": "o3", "kind": "seen-at", "eval": "C3"},
    ],
}


def main():
    store = CaseStore()
    load_dataset(store, DATASET)
    doc = store.create_document("golden case", ["ds1"], "u1")

    # base commit: hub object, private assumption, group, focus, minimize
    draft = doc.open_draft("branch-1", "u1")
    hub = draft.create_object("person", {"role": "unknown"},
                              CredibilityLevel.KNOWLEDGE, "u1")
    hunch = draft.create_object("person", {"note": "maybe lookout"},
                                CredibilityLevel.ASSUMPTION, "u1")
    draft.create_relationship(hub, "o0", "contacts", CredibilityLevel.KNOWLEDGE, "u1")
    gid = draft.group_nodes(["o1", "o2"], "pair")
    draft.set_group_collapsed(gid, True)
    draft.set_node_visual("o0", "focus")
    draft.set_node_visual(hunch, "minimize")
    draft.remove_object("o3")
    base = doc.commit_state("branch-1", draft, "base", "u1")

    alt = doc.create_branch("alt", "other reading", base, "u1")
    draft = doc.open_draft(alt, "u1")
    draft.set_attribute(hub, "role", "driver", CredibilityLevel.KNOWLEDGE, "u1")
    state_b = doc.commit_state(alt, draft, "driver theory", "u1")

    draft = doc.open_draft("branch-1", "u1")
    draft.set_attribute(hub, "role", "lookout", CredibilityLevel.KNOWLEDGE, "u1")
    state_a = doc.commit_state("branch-1", draft, "lookout theory", "u1")

    # only the root still references o3 -> exactly one stale state
    apply_update(store, {"id": "upd-9", "datasetId": "ds1", "baseVersion": 1,
                         "removedObjectIds": ["o3"]})

    GOLDEN.mkdir(parents=True, exist_ok=True)
    def dump(name, data):
        (GOLDEN / name).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")

    dump("document.json", doc.summary())
    dump("snapshot.json", doc.checkout(state_a, "u1").to_dict())
    d = diff(doc, state_a, state_b, "u1")
    dump("diff.json", d.to_dict())

    selection = MergeSelection.full(d, layout_source="A")
    selection.conflict_resolutions = {eid: "B" for eid in d.conflicting}
    outcome = merge(doc, "branch-1", state_a, state_b, selection, "u1",
                    message="adopt driver reading")
    dump("merge_response.json", outcome.to_dict())
    dump("merged_state.json", doc.checkout(outcome.state_id, "u1").to_dict())
    print(f"wrote fixtures for states a={state_a[:12]} b={state_b[:12]} "
          f"merged={outcome.state_id[:12]} into {GOLDEN}")


if __name__ == "__main__":
    main()
