import hashlib

import pytest

from casegraph import (
    CredibilityLevel,
    build_report,
    canonical_json,
    export_report,
    import_report,
)
from casegraph.errors import UnflaggedState, UnknownState, UnsupportedFormat


@pytest.fixture
def flagged_states(document):
    draft = document.open_draft("branch-1", "u1")
    ids = [draft.create_object("person", {}, CredibilityLevel.ASSUMPTION, "u1")
           for _ in range(5)]
    gid = draft.group_nodes(ids, "victims")
    draft.set_group_collapsed(gid, True)
    s1 = document.commit_state("branch-1", draft, "grouped", "u1")
    draft = document.open_draft("branch-1", "u1")
    draft.set_attribute("ds1-o0", "alias", "Fox", CredibilityLevel.KNOWLEDGE, "u1")
    s2 = document.commit_state("branch-1", draft, "alias", "u1")
    document.mark_for_report(s1, True, "u1")
    document.mark_for_report(s2, True, "u1")
    return s1, s2


class TestBuild:
    def test_sections_in_requested_order(self, document, flagged_states):
        s1, s2 = flagged_states
        report = build_report(document, [(s2, "later first"), (s1, "earlier")],
                              "Case report", "u1")
        assert [sec.state_id for sec in report.sections] == [s2, s1]
        assert [sec.description for sec in report.sections] == ["later first", "earlier"]

    def test_unflagged_state_rejected(self, document, flagged_states):
        assert document.root_state_id not in flagged_states
        with pytest.raises(UnflaggedState):
            build_report(document, [(document.root_state_id, "")], "r", "u1")

    def test_unknown_state(self, document):
        with pytest.raises(UnknownState):
            build_report(document, [("ghost", "")], "r", "u1")

    def test_later_mutations_never_change_report(self, document, flagged_states):
        s1, s2 = flagged_states
        report = build_report(document, [(s1, "a"), (s2, "b")], "r", "u1")
        digest = hashlib.sha256(export_report(report, "json")).hexdigest()
        for i in range(5):
            draft = document.open_draft("branch-1", "u1")
            draft.create_object("person", {"i": i}, author="u1")
            document.commit_state("branch-1", draft, f"later-{i}", "u1")
        assert hashlib.sha256(export_report(report, "json")).hexdigest() == digest


class TestExport:
    def test_json_round_trip(self, document, flagged_states):
        s1, s2 = flagged_states
        report = build_report(document, [(s1, "desc")], "r", "u1")
        data = export_report(report, "json")
        restored = import_report(data)
        assert canonical_json(restored.to_dict()) == canonical_json(report.to_dict())

    def test_html_shows_group_badge(self, document, flagged_states):
        s1, _ = flagged_states
        report = build_report(document, [(s1, "")], "r", "u1")
        html = export_report(report, "html").decode()
        assert 'class="group-badge"' in html
        assert ">5</text>" in html  # 5-member collapsed group

    def test_html_renders_dashed_and_dots(self, document, flagged_states):
        _, s2 = flagged_states
        draft = document.open_draft("branch-1", "u1")
        draft.create_object("person", {}, author="u1")
        s3 = document.commit_state("branch-1", draft, "assume", "u1")
        document.mark_for_report(s3, True, "u1")
        report = build_report(document, [(s3, "")], "r", "u1")
        html = export_report(report, "html").decode()
        assert "stroke-dasharray" in html   # user-defined outline
        assert 'class="dot"' in html

    def test_dot_counts_follow_level_rule(self, document, flagged_states):
        s1, _ = flagged_states
        report = build_report(document, [(s1, "")], "r", "u1")
        for section in report.sections:
            for obj in section.snapshot.objects.values():
                assert obj.credibility.dots == 4 - int(obj.credibility)

    def test_unsupported_format(self, document, flagged_states):
        s1, _ = flagged_states
        report = build_report(document, [(s1, "")], "r", "u1")
        with pytest.raises(UnsupportedFormat):
            export_report(report, "pdf")

    def test_descriptions_escaped_in_html(self, document, flagged_states):
        s1, _ = flagged_states
        report = build_report(document, [(s1, "<script>alert(1)</script>")], "r", "u1")
        html = export_report(report, "html").decode()
        assert "<script>" not in html
