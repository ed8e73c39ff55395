import type { DocumentSummary, StateSummary } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const COLUMN_WIDTH = 60;
const ROW_HEIGHT = 50;
const NODE_RADIUS = 10;

export interface HistoryDiagramOptions {
  /** Fired when exactly two states are selected. */
  onSelectPair?: (stateA: string, stateB: string) => void;
}

/** The document's analysis history as a left-to-right commit diagram.
 *
 * One circle per committed state (x by sequence number, y by branch),
 * an edge to each parent — merge states therefore show two entering
 * edges. Stale states are tinted. Clicking toggles selection; once two
 * states are selected the pair is reported for comparison. New states
 * can be appended without re-rendering the whole document.
 */
export class HistoryDiagram {
  private readonly selected: string[] = [];
  private readonly states = new Map<string, StateSummary>();
  private readonly branchRows = new Map<string, number>();

  constructor(
    private readonly container: SVGSVGElement | SVGGElement,
    private readonly options: HistoryDiagramOptions = {},
  ) {}

  get selection(): string[] {
    return [...this.selected];
  }

  setDocument(doc: DocumentSummary): void {
    this.container.replaceChildren();
    this.states.clear();
    this.branchRows.clear();
    this.selected.length = 0;
    for (const branch of doc.branches) {
      this.branchRows.set(branch.id, this.branchRows.size);
    }
    for (const state of doc.states) {
      this.addState(state);
    }
  }

  /** Append one freshly committed state (no reload of the document). */
  addState(state: StateSummary): void {
    if (this.states.has(state.id)) {
      return;
    }
    if (!this.branchRows.has(state.branchId)) {
      this.branchRows.set(state.branchId, this.branchRows.size);
    }
    this.states.set(state.id, state);
    const [x, y] = this.position(state);
    for (const parentId of state.parents) {
      const parent = this.states.get(parentId);
      if (!parent) {
        continue;
      }
      const [px, py] = this.position(parent);
      const edge = document.createElementNS(SVG_NS, "line");
      edge.setAttribute("class", "history-edge");
      edge.setAttribute("data-from", parentId);
      edge.setAttribute("data-to", state.id);
      edge.setAttribute("x1", String(px));
      edge.setAttribute("y1", String(py));
      edge.setAttribute("x2", String(x));
      edge.setAttribute("y2", String(y));
      this.container.appendChild(edge);
    }
    const node = document.createElementNS(SVG_NS, "circle");
    const classes = ["history-node"];
    if (state.parents.length === 2) {
      classes.push("merge-node");
    }
    if (state.stale) {
      classes.push("stale");
    }
    if (state.reportFlag) {
      classes.push("report-flagged");
    }
    node.setAttribute("class", classes.join(" "));
    node.setAttribute("data-id", state.id);
    node.setAttribute("cx", String(x));
    node.setAttribute("cy", String(y));
    node.setAttribute("r", String(NODE_RADIUS));
    node.addEventListener("click", () => this.toggle(state.id));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${state.message} (${state.author})`;
    node.appendChild(title);
    this.container.appendChild(node);
  }

  private position(state: StateSummary): [number, number] {
    const row = this.branchRows.get(state.branchId) ?? 0;
    return [state.seq * COLUMN_WIDTH, (row + 1) * ROW_HEIGHT];
  }

  private toggle(stateId: string): void {
    const index = this.selected.indexOf(stateId);
    if (index >= 0) {
      this.selected.splice(index, 1);
    } else {
      if (this.selected.length === 2) {
        this.selected.length = 0;
      }
      this.selected.push(stateId);
    }
    for (const el of this.container.querySelectorAll(".history-node")) {
      el.classList.toggle(
        "selected",
        this.selected.includes(el.getAttribute("data-id") ?? ""),
      );
    }
    if (this.selected.length === 2 && this.options.onSelectPair) {
      this.options.onSelectPair(this.selected[0], this.selected[1]);
    }
  }
}
