"""A central-database delta arrives mid-investigation.

Committed states are immutable, so the update never edits them; instead
every state whose payload references a touched element is flagged stale
with the update id as the reason. The state's author reviews and
acknowledges, which clears the flag.
"""

from casegraph import CaseStore, CredibilityLevel, apply_update, load_dataset

from importlib import import_module
DATASET = import_module("01_build_a_case").DATASET

DELTA = {
    "id": "upd-2024-117",
    "datasetId": "case-7",
    "baseVersion": 1,
    "modifiedObjects": [
        {"id": "v1", "kind": "vehicle",
         "attributes": {"plate": "XX-314", "status": "reported stolen"},
         "eval": "A1"},
    ],
    "removedObjectIds": ["loc1"],
}


def main():
    store = CaseStore()
    load_dataset(store, DATASET)
    doc = store.create_document("burglary series", ["case-7"], "analyst-1")

    # one state that still references the vehicle, one that dropped it
    draft = doc.open_draft("branch-1", "analyst-1")
    draft.set_attribute("p1", "note", "check car", CredibilityLevel.KNOWLEDGE, "analyst-1")
    keeps = doc.commit_state("branch-1", draft, "keeps v1", "analyst-1")
    draft = doc.open_draft("branch-1", "analyst-1")
    draft.remove_object("v1")
    draft.remove_object("loc1")
    dropped = doc.commit_state("branch-1", draft, "drops v1 and loc1", "analyst-1")

    report = apply_update(store, DELTA)
    print(f"dataset now at version {store.datasets['case-7'].version}")
    for doc_id, states in report.affected_states.items():
        print(f"flagged in {doc_id}: {sorted(s[:12] for s in states)}")
    print(f"state 'keeps v1'  stale: {doc.states[keeps].stale} "
          f"reasons={doc.states[keeps].stale_reasons}")
    print(f"state 'drops both' stale: {doc.states[dropped].stale}")

    doc.acknowledge_update(keeps, "upd-2024-117", "analyst-1")
    print(f"after review, 'keeps v1' stale: {doc.states[keeps].stale}")


if __name__ == "__main__":
    main()
