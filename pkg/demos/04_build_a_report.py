"""Select states for reporting and export a standalone HTML document.

States are first marked with a report flag; the report then snapshots
each one (so later commits never change it), and the HTML export draws
the network statically: dashed outlines for analyst-defined elements,
credibility dots, collapsed-group badges.
"""

import pathlib
import tempfile

from casegraph import (
    CaseStore,
    CredibilityLevel,
    build_report,
    export_report,
    load_dataset,
)

from importlib import import_module
DATASET = import_module("01_build_a_case").DATASET


def main():
    store = CaseStore()
    load_dataset(store, DATASET)
    doc = store.create_document("burglary series", ["case-7"], "analyst-1")

    draft = doc.open_draft("branch-1", "analyst-1")
    fence = draft.create_object("person", {"role": "fence?"},
                                CredibilityLevel.ASSUMPTION, "analyst-1")
    draft.create_relationship(fence, "p2", "contacts")
    gid = draft.group_nodes(["p1", "p2", fence], "inner circle")
    draft.set_group_collapsed(gid, True)
    overview = doc.commit_state("branch-1", draft, "overview", "analyst-1")

    doc.mark_for_report(doc.root_state_id, True, "analyst-1")
    doc.mark_for_report(overview, True, "analyst-1")
    print("flagged for report:", [s[:12] for s in doc.report_candidates()])

    report = build_report(
        doc,
        [(doc.root_state_id, "The network as delivered by the central database."),
         (overview, "Current working hypothesis with the suspected fence.")],
        title="Burglary series — interim report",
        author="analyst-1")

    out = pathlib.Path(tempfile.mkdtemp()) / "report.html"
    out.write_bytes(export_report(report, "html"))
    print(f"report {report.id}: {len(report.sections)} sections -> {out}")
    html = out.read_text()
    print("  dashed outlines rendered:", "stroke-dasharray" in html)
    print("  group badge rendered:    ", 'class="group-badge"' in html)


if __name__ == "__main__":
    main()
