"""casegraph: a provenance-tracked investigation-graph engine.

Versions network-analysis states on a branching commit DAG, enforces a
three-level data-credibility model with per-author visibility, diffs and
merges analysis states under explicit user selection, flags states whose
evidence was updated, and assembles selected states into exportable
reports.
"""

from .diffmerge import DiffResult, MergeOutcome, MergeSelection, diff, merge
from .errors import CasegraphError
from .ingest import Dataset, JobStatus, UpdateDelta, apply_update, load_dataset
from .layout import LayoutParams, incremental_place, initial_layout, relayout
from .model import (
    AttributeValue,
    CredibilityLevel,
    EntityObject,
    EvaluationCode,
    Group,
    NodeVisual,
    Relationship,
    StateDraft,
    StatePayload,
    VisibleGraph,
    visible_graph,
)
from .report import ReportDocument, build_report, export_report, import_report
from .service import ServiceConfig, create_app, start_service
from .store import (
    AnalysisState,
    Branch,
    CaseStore,
    Document,
    KnowledgeEvent,
    LogComment,
    Snapshot,
    canonical_json,
    payload_hash,
)

__version__ = "0.1.0"
