import { ApiClient } from "./api";
import { HistoryDiagram } from "./historyDiagram";
import { MergeDialog } from "./mergeDialog";
import { renderNetwork } from "./networkView";
import type { DocumentSummary, MergeSelection, StateSnapshot } from "./types";
import { summaryFromSnapshot } from "./types";

export type ConsoleMode = "exploration" | "comparison" | "report";

const SVG_NS = "http://www.w3.org/2000/svg";

/** The investigation console: history diagram on top, network below.
 *
 * Exploration mode shows one state's network. Selecting two states in
 * the diagram switches to comparison mode: both networks side by side
 * plus the merge dialog. A submitted merge posts to the engine and the
 * new two-parent state is appended to the diagram in place — the
 * document is never re-fetched.
 */
export class ConsoleApp {
  mode: ConsoleMode = "exploration";

  readonly diagram: HistoryDiagram;
  readonly dialog: MergeDialog;

  private doc: DocumentSummary | null = null;
  private comparing: [string, string] | null = null;

  private readonly diagramSvg: SVGSVGElement;
  private readonly networkSvg: SVGSVGElement;
  private readonly compareLeft: SVGGElement;
  private readonly compareRight: SVGGElement;

  constructor(
    private readonly rootEl: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.diagramSvg = this.addSvg("history");
    this.networkSvg = this.addSvg("network");
    this.compareLeft = document.createElementNS(SVG_NS, "g");
    this.compareLeft.setAttribute("class", "compare-a");
    this.compareRight = document.createElementNS(SVG_NS, "g");
    this.compareRight.setAttribute("class", "compare-b");
    this.compareRight.setAttribute("transform", "translate(400, 0)");

    this.diagram = new HistoryDiagram(this.diagramSvg, {
      onSelectPair: (a, b) => void this.enterComparison(a, b),
    });
    const dialogRoot = document.createElement("div");
    this.rootEl.appendChild(dialogRoot);
    this.dialog = new MergeDialog(dialogRoot, (selection) =>
      void this.submitMerge(selection),
    );
  }

  async loadDocument(docId: string): Promise<void> {
    this.doc = await this.api.getDocument(docId);
    this.diagram.setDocument(this.doc);
    this.setMode("exploration");
    await this.showState(this.doc.rootStateId);
  }

  async showState(stateId: string): Promise<StateSnapshot> {
    const snap = await this.api.getState(this.requireDoc().id, stateId);
    this.networkSvg.replaceChildren();
    renderNetwork(this.networkSvg, snap.graph);
    return snap;
  }

  async enterComparison(stateA: string, stateB: string): Promise<void> {
    const doc = this.requireDoc();
    this.comparing = [stateA, stateB];
    const [snapA, snapB, diffTable] = await Promise.all([
      this.api.getState(doc.id, stateA),
      this.api.getState(doc.id, stateB),
      this.api.getDiff(doc.id, stateA, stateB),
    ]);
    this.setMode("comparison");
    this.networkSvg.replaceChildren(this.compareLeft, this.compareRight);
    renderNetwork(this.compareLeft, snapA.graph);
    renderNetwork(this.compareRight, snapB.graph);
    this.dialog.open(diffTable);
  }

  async submitMerge(selection: MergeSelection): Promise<string> {
    const doc = this.requireDoc();
    if (!this.comparing) {
      throw new Error("not in comparison mode");
    }
    const [stateA, stateB] = this.comparing;
    const branchId =
      doc.states.find((s) => s.id === stateA)?.branchId ?? "branch-1";
    const outcome = await this.api.merge(
      doc.id,
      branchId,
      stateA,
      stateB,
      selection,
    );
    const snap = await this.api.getState(doc.id, outcome.stateId);
    this.diagram.addState(summaryFromSnapshot(snap));
    this.dialog.close();
    this.comparing = null;
    this.setMode("exploration");
    this.networkSvg.replaceChildren();
    renderNetwork(this.networkSvg, snap.graph);
    return outcome.stateId;
  }

  setMode(mode: ConsoleMode): void {
    this.mode = mode;
    this.rootEl.dataset.mode = mode;
  }

  private requireDoc(): DocumentSummary {
    if (!this.doc) {
      throw new Error("no document loaded");
    }
    return this.doc;
  }

  private addSvg(cls: string): SVGSVGElement {
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("class", cls);
    svg.setAttribute("viewBox", "-200 -150 400 300");
    this.rootEl.appendChild(svg);
    return svg;
  }
}

export { ApiClient } from "./api";
export { HistoryDiagram } from "./historyDiagram";
export { MergeDialog } from "./mergeDialog";
export { renderNetwork } from "./networkView";
export * from "./types";
