/** Shapes served by the /v1/ JSON API, plus small derived helpers. */

export interface AttributeValue {
  value: unknown;
  credibility: number;
  author: string | null;
}

export interface EntityObject {
  id: string;
  kind: string;
  attributes: Record<string, AttributeValue>;
  credibility: number;
  evaluation: string | null;
  author: string | null;
  sourceDataset: string | null;
  isPlaceholder: boolean;
}

export interface Relationship {
  id: string;
  sourceId: string;
  targetId: string;
  kind: string;
  directed: boolean;
  attributes: Record<string, AttributeValue>;
  credibility: number;
  evaluation: string | null;
  author: string | null;
  sourceDataset: string | null;
}

export interface Group {
  id: string;
  name: string;
  memberIds: string[];
  tagColor: string | null;
  collapsed: boolean;
}

export interface NodeVisual {
  objectId: string;
  minimized: boolean;
  focus: boolean;
  groupId: string | null;
}

export interface VisibleGraph {
  viewer: string;
  objects: Record<string, EntityObject>;
  relationships: Record<string, Relationship>;
  groups: Record<string, Group>;
  nodeVisuals: Record<string, NodeVisual>;
  positions: Record<string, [number, number]>;
}

export interface StateSnapshot {
  stateId: string;
  parents: string[];
  branchId: string;
  author: string;
  message: string;
  seq: number;
  timestamp: string;
  editable: boolean;
  graph: VisibleGraph;
  reportFlag: boolean;
  stale: boolean;
  staleReasons: string[];
}

export interface StateSummary {
  id: string;
  parents: string[];
  branchId: string;
  author: string;
  seq: number;
  timestamp: string;
  message: string;
  payloadHash: string;
  reportFlag: boolean;
  stale: boolean;
  staleReasons: string[];
}

export interface BranchSummary {
  id: string;
  name: string;
  hypothesis: string;
  createdFrom: string;
  owner: string;
  entries: { type: string; id: string; seq: number }[];
  active: boolean;
}

export interface DocumentSummary {
  id: string;
  name: string;
  caseId: string;
  datasetIds: string[];
  rootStateId: string;
  createdBy: string;
  createdAt: string;
  branches: BranchSummary[];
  states: StateSummary[];
}

export type DiffElement = EntityObject | Relationship;

export interface DiffTable {
  stateA: string;
  stateB: string;
  onlyA: DiffElement[];
  equal: DiffElement[];
  onlyB: DiffElement[];
  conflicts: { id: string; a: DiffElement; b: DiffElement }[];
  groups: {
    equal: string[];
    onlyA: string[];
    onlyB: string[];
    conflicting: string[];
  };
  visualDiff: unknown;
}

export interface MergeSelection {
  includeEqual?: boolean;
  chosenOnlyA?: string[];
  chosenOnlyB?: string[];
  conflictResolutions?: Record<string, "A" | "B">;
  chosenGroups?: [string, string][];
  layoutSource?: "A" | "B";
}

export interface MergeResponse {
  stateId: string;
  droppedRelationships: string[];
}

/** Credibility dots shown next to an element: level 1 -> 3 dots, 3 -> 1. */
export function credibilityDots(level: number): number {
  return 4 - level;
}

/** Analyst-defined elements (dashed outline); database evidence is solid. */
export function isUserDefined(element: {
  author: string | null;
  sourceDataset: string | null;
}): boolean {
  return element.author !== null && element.sourceDataset === null;
}

/** Diagram summary row for a state just fetched as a full snapshot. */
export function summaryFromSnapshot(snap: StateSnapshot): StateSummary {
  return {
    id: snap.stateId,
    parents: snap.parents,
    branchId: snap.branchId,
    author: snap.author,
    seq: snap.seq,
    timestamp: snap.timestamp,
    message: snap.message,
    payloadHash: "",
    reportFlag: snap.reportFlag,
    stale: snap.stale,
    staleReasons: snap.staleReasons,
  };
}
