import type { DiffTable, MergeSelection } from "./types";

/** Dialog that turns a diff table into an explicit merge selection.
 *
 * One checkbox per one-sided element, one A/B radio pair per conflict
 * (all required), and a layout-source choice. Submitting hands the
 * assembled selection to the caller; the dialog itself never talks to
 * the network.
 */
export class MergeDialog {
  private diffTable: DiffTable | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly onSubmit: (selection: MergeSelection) => void,
  ) {
    root.classList.add("merge-dialog");
    root.hidden = true;
  }

  get isOpen(): boolean {
    return !this.root.hidden;
  }

  open(diffTable: DiffTable): void {
    this.diffTable = diffTable;
    this.root.replaceChildren();
    this.root.hidden = false;

    this.section("Only in A", diffTable.onlyA.map((e) => e.id), "only-a");
    this.section("Only in B", diffTable.onlyB.map((e) => e.id), "only-b");

    const conflicts = document.createElement("fieldset");
    conflicts.className = "conflicts";
    const legend = document.createElement("legend");
    legend.textContent = "Conflicts (pick one side each)";
    conflicts.appendChild(legend);
    for (const conflict of diffTable.conflicts) {
      const row = document.createElement("div");
      row.className = "conflict-row";
      row.dataset.id = conflict.id;
      const label = document.createElement("span");
      label.textContent = conflict.id;
      row.appendChild(label);
      for (const side of ["A", "B"] as const) {
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = `conflict-${conflict.id}`;
        radio.value = side;
        row.appendChild(radio);
      }
      conflicts.appendChild(row);
    }
    this.root.appendChild(conflicts);

    const layout = document.createElement("select");
    layout.className = "layout-source";
    for (const side of ["A", "B"]) {
      const option = document.createElement("option");
      option.value = side;
      option.textContent = `Layout from ${side}`;
      layout.appendChild(option);
    }
    this.root.appendChild(layout);

    const submit = document.createElement("button");
    submit.className = "submit-merge";
    submit.textContent = "Merge";
    submit.addEventListener("click", () => this.submit());
    this.root.appendChild(submit);
  }

  close(): void {
    this.root.hidden = true;
    this.root.replaceChildren();
    this.diffTable = null;
  }

  /** Tick the checkbox / radio for an element id (also used by tests). */
  choose(elementId: string, side?: "A" | "B"): void {
    if (side) {
      const radio = this.root.querySelector<HTMLInputElement>(
        `input[name="conflict-${elementId}"][value="${side}"]`,
      );
      if (radio) {
        radio.checked = true;
        return;
      }
    }
    const box = this.root.querySelector<HTMLInputElement>(
      `input[type="checkbox"][value="${elementId}"]`,
    );
    if (box) {
      box.checked = true;
    }
  }

  private section(title: string, ids: string[], cls: string): void {
    if (!ids.length) {
      return;
    }
    const fieldset = document.createElement("fieldset");
    fieldset.className = cls;
    const legend = document.createElement("legend");
    legend.textContent = title;
    fieldset.appendChild(legend);
    for (const id of ids) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = id;
      label.appendChild(box);
      label.append(id);
      fieldset.appendChild(label);
    }
    this.root.appendChild(fieldset);
  }

  private submit(): void {
    if (!this.diffTable) {
      return;
    }
    const checked = (cls: string): string[] =>
      [...this.root.querySelectorAll<HTMLInputElement>(
        `.${cls} input[type="checkbox"]`,
      )]
        .filter((box) => box.checked)
        .map((box) => box.value);

    const resolutions: Record<string, "A" | "B"> = {};
    for (const conflict of this.diffTable.conflicts) {
      const radio = this.root.querySelector<HTMLInputElement>(
        `input[name="conflict-${conflict.id}"]:checked`,
      );
      if (!radio) {
        this.root
          .querySelector(`.conflict-row[data-id="${conflict.id}"]`)
          ?.classList.add("unresolved");
        return; // every conflict needs a decision before submitting
      }
      resolutions[conflict.id] = radio.value as "A" | "B";
    }
    const layout = this.root.querySelector<HTMLSelectElement>(".layout-source");
    this.onSubmit({
      includeEqual: true,
      chosenOnlyA: checked("only-a"),
      chosenOnlyB: checked("only-b"),
      conflictResolutions: resolutions,
      layoutSource: (layout?.value as "A" | "B") ?? "A",
    });
  }
}
