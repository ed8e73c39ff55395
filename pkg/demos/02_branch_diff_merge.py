"""Two analysis lines on the same case, compared and merged.

Branch 'main' and branch 'alt-theory' both edit the alias of the same
suspect, creating a conflict. The diff partitions elements into
equal / only-A / only-B / conflicting; the merge takes an explicit
selection (here: keep B's alias, adopt A's layout) and commits a state
with two parents.
"""

from casegraph import CaseStore, CredibilityLevel, load_dataset
from casegraph.diffmerge import MergeSelection, diff, merge

from importlib import import_module
DATASET = import_module("01_build_a_case").DATASET


def main():
    store = CaseStore()
    load_dataset(store, DATASET)
    doc = store.create_document("burglary series", ["case-7"], "analyst-1")

    draft = doc.open_draft("branch-1", "analyst-1")
    draft.set_attribute("p1", "alias", "The Fox", CredibilityLevel.KNOWLEDGE, "analyst-1")
    a = doc.commit_state("branch-1", draft, "fox theory", "analyst-1")

    alt = doc.create_branch("alt-theory", "different reading of the wiretap",
                            doc.root_state_id, "analyst-1")
    draft = doc.open_draft(alt, "analyst-1")
    draft.set_attribute("p1", "alias", "The Badger", CredibilityLevel.KNOWLEDGE, "analyst-1")
    lookout = draft.create_object("person", {"role": "lookout"},
                                  CredibilityLevel.ASSUMPTION, "analyst-1")
    draft.create_relationship(lookout, "loc1", "watches")
    b = doc.commit_state(alt, draft, "badger theory", "analyst-1")

    d = diff(doc, a, b, "analyst-1")
    print(f"diff {a[:12]}… vs {b[:12]}…")
    print(f"  equal: {sorted(d.equal)}")
    print(f"  only in B: {sorted(d.only_b)}")
    print(f"  conflicting: {sorted(d.conflicting)}")

    selection = MergeSelection.full(d, layout_source="A")
    selection.conflict_resolutions = {eid: "B" for eid in d.conflicting}
    out = merge(doc, "branch-1", a, b, selection, "analyst-1",
                message="adopt badger alias, keep both additions")
    merged = doc.states[out.state_id]
    print(f"\nmerged into {out.state_id[:12]}… parents={len(merged.parents)}")
    print(f"  alias now: {merged.payload.objects['p1'].attributes['alias'].value}")
    if out.dropped_relationships:
        print(f"  dropped (lost an endpoint): {out.dropped_relationships}")


if __name__ == "__main__":
    main()
