"""Assembly and export of final reports for state attorneys.

A report is an ordered sequence of frozen state snapshots with analyst
descriptions. Snapshots are deep copies taken at build time, so later
work on the source document never alters an existing report. HTML export
is static markup with inline SVG drawings; no scripting, for archival
safety.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import UnflaggedState, UnknownState, UnsupportedFormat
from .model import CredibilityLevel, StatePayload
from .store import Document, canonical_json

FORMAT_VERSION = 1


@dataclass
class ReportSection:
    state_id: str
    description: str
    snapshot: StatePayload  # frozen deep copy
    positions: dict[str, tuple[float, float]]

    def to_dict(self) -> dict:
        return {
            "stateId": self.state_id,
            "description": self.description,
            "snapshotPayload": self.snapshot.to_dict(),
            "positions": {k: [float(p[0]), float(p[1])]
                          for k, p in sorted(self.positions.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportSection":
        return cls(
            state_id=d["stateId"],
            description=d["description"],
            snapshot=StatePayload.from_dict(d["snapshotPayload"]),
            positions={k: (float(v[0]), float(v[1]))
                       for k, v in d["positions"].items()},
        )


@dataclass
class ReportDocument:
    id: str
    case_id: str
    title: str
    created_by: str
    created_at: str
    sections: list[ReportSection] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "caseId": self.case_id,
            "title": self.title,
            "createdBy": self.created_by,
            "createdAt": self.created_at,
            "formatVersion": self.format_version,
            "sections": [s.to_dict() for s in self.sections],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        return cls(
            id=d["id"],
            case_id=d["caseId"],
            title=d["title"],
            created_by=d["createdBy"],
            created_at=d["createdAt"],
            sections=[ReportSection.from_dict(s) for s in d["sections"]],
            format_version=d.get("formatVersion", FORMAT_VERSION),
        )


def build_report(document: Document, ordered_sections: list[tuple[str, str]],
                 title: str, author: str) -> ReportDocument:
    """Freeze the flagged states listed in ``ordered_sections`` into a report.

    Snapshots present the author's own view (their assumptions included);
    order is preserved exactly as requested.
    """
    with document.lock:
        sections = []
        for state_id, description in ordered_sections:
            state = document.states.get(state_id)
            if state is None:
                raise UnknownState(f"unknown state {state_id}")
            if not state.report_flag:
                raise UnflaggedState(f"state {state_id} is not flagged for the report")
            graph = document.resolve_view(state_id, author)
            snapshot = StatePayload(
                objects=dict(graph.objects),
                relationships=dict(graph.relationships),
                groups=dict(graph.groups),
                node_visuals=dict(graph.node_visuals),
                positions=dict(graph.positions),
            ).clone()
            sections.append(ReportSection(state_id, description, snapshot,
                                          dict(snapshot.positions)))
        report_id = document.alloc_id("report")
        return ReportDocument(
            id=f"{document.id}-{report_id}",
            case_id=document.case_id,
            title=title,
            created_by=author,
            created_at=datetime.now(timezone.utc).isoformat(),
            sections=sections,
        )


def export_report(report: ReportDocument, fmt: str) -> bytes:
    if fmt == "json":
        return canonical_json(report.to_dict())
    if fmt == "html":
        return _render_html(report).encode("utf-8")
    raise UnsupportedFormat(f"unsupported export format {fmt!r}")


def import_report(data: bytes) -> ReportDocument:
    return ReportDocument.from_dict(json.loads(data.decode("utf-8")))


# --- static HTML rendering ---

_NODE_R = 12
_DOT_R = 2.2


def _dots_svg(cx: float, cy: float, level: CredibilityLevel) -> str:
    """Credibility dots below the element: count = 4 - level."""
    n = level.dots
    parts = []
    start = cx - (n - 1) * 3.5
    for i in range(n):
        parts.append(f'<circle class="dot" cx="{start + i * 7:.1f}" cy="{cy:.1f}" '
                     f'r="{_DOT_R}" fill="#333"/>')
    return "".join(parts)


def _section_svg(section: ReportSection) -> str:
    payload = section.snapshot
    pos = section.positions
    if not pos:
        return '<svg width="200" height="60"><text x="10" y="30">empty view</text></svg>'
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    pad = 40
    minx, miny = min(xs) - pad, min(ys) - pad
    width = max(xs) - min(xs) + 2 * pad
    height = max(ys) - min(ys) + 2 * pad

    out = [f'<svg viewBox="{minx:.1f} {miny:.1f} {width:.1f} {height:.1f}" '
           f'width="{min(width, 900):.0f}" xmlns="http://www.w3.org/2000/svg">']
    for rel in payload.relationships.values():
        if rel.source_id not in pos or rel.target_id not in pos:
            continue
        (x1, y1), (x2, y2) = pos[rel.source_id], pos[rel.target_id]
        dash = ' stroke-dasharray="4 3"' if rel.user_defined else ""
        out.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                   f'stroke="#888"{dash}/>')
    collapsed_members = {
        m for g in payload.groups.values() if g.collapsed for m in g.member_ids
    }
    for oid, obj in payload.objects.items():
        if oid not in pos or oid in collapsed_members:
            continue
        x, y = pos[oid]
        visual = payload.node_visuals.get(oid)
        if visual is not None and visual.minimized:
            out.append(f'<circle class="minimized" cx="{x:.1f}" cy="{y:.1f}" r="3" fill="#666"/>')
            continue
        dash = ' stroke-dasharray="5 3"' if obj.user_defined else ""
        ring = ""
        if visual is not None and visual.focus:
            ring = (f'<circle class="focus-ring" cx="{x:.1f}" cy="{y:.1f}" '
                    f'r="{_NODE_R + 4}" fill="none" stroke="#1565c0" stroke-width="3"/>')
        out.append(ring)
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{_NODE_R}" fill="#fff" '
                   f'stroke="#333" stroke-width="1.5"{dash}/>')
        out.append(_dots_svg(x, y + _NODE_R + 6, obj.credibility))
        label = html.escape(str(obj.attributes.get("name").value)
                            if "name" in obj.attributes else obj.kind)
        out.append(f'<text x="{x:.1f}" y="{y - _NODE_R - 4:.1f}" font-size="8" '
                   f'text-anchor="middle">{label}</text>')
    for grp in payload.groups.values():
        member_pos = [pos[m] for m in grp.member_ids if m in pos]
        if not member_pos:
            continue
        gx = sum(p[0] for p in member_pos) / len(member_pos)
        gy = sum(p[1] for p in member_pos) / len(member_pos)
        if grp.collapsed:
            out.append(f'<circle cx="{gx:.1f}" cy="{gy:.1f}" r="{_NODE_R + 4}" '
                       f'fill="#eee" stroke="#333"/>')
            out.append(f'<text class="group-badge" x="{gx + _NODE_R + 8:.1f}" '
                       f'y="{gy - _NODE_R:.1f}" font-size="9">{grp.badge_count}</text>')
        if grp.tag_color:
            out.append(f'<rect x="{gx - 8:.1f}" y="{gy + _NODE_R + 12:.1f}" width="16" '
                       f'height="4" fill="{html.escape(grp.tag_color)}"/>')
    out.append("</svg>")
    return "".join(out)


def _render_html(report: ReportDocument) -> str:
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8"/>',
        f"<title>{html.escape(report.title)}</title>",
        "<style>body{font-family:serif;max-width:960px;margin:2em auto}"
        "section{page-break-inside:avoid;margin-bottom:3em}"
        "svg{border:1px solid #ddd}</style>",
        "</head><body>",
        f"<h1>{html.escape(report.title)}</h1>",
        f"<p>Case {html.escape(report.case_id)} &middot; compiled by "
        f"{html.escape(report.created_by)} &middot; {html.escape(report.created_at)}</p>",
    ]
    for i, section in enumerate(report.sections, 1):
        parts.append("<section>")
        parts.append(f"<h2>View {i}</h2>")
        parts.append(_section_svg(section))
        if section.description:
            parts.append(f"<p>{html.escape(section.description)}</p>")
        parts.append("</section>")
    parts.append("</body></html>")
    return "\n".join(parts)
