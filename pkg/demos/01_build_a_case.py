"""Walk through building an investigation document from a raw dataset.

Loads a small central-database extract, creates a document (which lays
out the network deterministically), then commits analyst annotations on
a branch: a hypothesised person, a relationship, an attribute, a group.
"""

from casegraph import CaseStore, CredibilityLevel, load_dataset

DATASET = {
    "id": "case-7",
    "name": "burglary series",
    "objects": [
        {"id": "p1", "kind": "person", "attributes": {"name": "A. Voss"}, "eval": "B2"},
        {"id": "p2", "kind": "person", "attributes": {"name": "R. Kehl"}, "eval": "B2"},
        {"id": "v1", "kind": "vehicle", "attributes": {"plate": "XX-314"}, "eval": "A1"},
        {"id": "loc1", "kind": "location", "attributes": {"street": "Dock 4"}, "eval": "C3"},
    ],
    "relationships": [
        {"id": "r1", "sourceId": "p1", "targetId": "v1", "kind": "registered-owner", "eval": "A1"},
        {"id": "r2", "sourceId": "p2", "targetId": "loc1", "kind": "seen-at", "eval": "C3"},
    ],
}


def main():
    store = CaseStore()
    load_dataset(store, DATASET)
    doc = store.create_document("burglary series", ["case-7"], "analyst-1")
    print(f"document {doc.id}, root state {doc.root_state_id}")
    for node_id, (x, y) in sorted(doc.states[doc.root_state_id].payload.positions.items()):
        print(f"  {node_id:5s} at ({x:7.2f}, {y:7.2f})")

    draft = doc.open_draft("branch-1", "analyst-1")
    fence = draft.create_object(
        "person", {"role": "fence?"}, CredibilityLevel.ASSUMPTION, "analyst-1")
    draft.create_relationship(fence, "p2", "contacts")
    draft.set_attribute("p1", "alias", "The Fox", CredibilityLevel.KNOWLEDGE, "analyst-1")
    draft.group_nodes(["p1", "p2"], "suspects")
    state_id = doc.commit_state("branch-1", draft, "first hypotheses", "analyst-1")

    snap = doc.checkout(state_id, "analyst-1")
    print(f"\ncommitted {state_id} (seq {snap.seq})")
    for obj in snap.graph.objects.values():
        marker = "dashed" if obj.user_defined else "solid "
        print(f"  {marker} {obj.kind:8s} {obj.id}  "
              f"level={obj.credibility.name} dots={obj.credibility.dots}")

    # a colleague sees the Knowledge attribute but not the private Assumption
    colleague = doc.checkout(state_id, "analyst-2")
    print(f"\ncolleague sees {len(colleague.graph.objects)} objects "
          f"(the hypothesised fence stays private)")


if __name__ == "__main__":
    main()
