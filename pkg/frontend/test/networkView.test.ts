import { beforeEach, describe, expect, it } from "vitest";

import { renderNetwork } from "../src/networkView";
import { credibilityDots, isUserDefined } from "../src/types";
import type { StateSnapshot, VisibleGraph } from "../src/types";
import snapshotJson from "./golden/snapshot.json";

const snapshot = snapshotJson as unknown as StateSnapshot;

function render(graph: VisibleGraph): SVGSVGElement {
  const svg = document.createElementNS(
    "http://www.w3.org/2000/svg",
    "svg",
  ) as SVGSVGElement;
  document.body.appendChild(svg);
  renderNetwork(svg, graph);
  return svg;
}

describe("network rendering against the engine-produced golden state", () => {
  let svg: SVGSVGElement;
  const graph = snapshot.graph;

  const collapsedMembers = new Set(
    Object.values(graph.groups)
      .filter((g) => g.collapsed)
      .flatMap((g) => g.memberIds),
  );

  beforeEach(() => {
    document.body.replaceChildren();
    svg = render(graph);
  });

  it("dashes exactly the analyst-defined objects", () => {
    for (const obj of Object.values(graph.objects)) {
      if (collapsedMembers.has(obj.id)) {
        continue;
      }
      const body = svg.querySelector(
        `.node[data-id="${obj.id}"] .node-body`,
      )!;
      expect(body, obj.id).not.toBeNull();
      expect(body.hasAttribute("stroke-dasharray"), obj.id).toBe(
        isUserDefined(obj),
      );
    }
    // the fixture exercises both cases
    expect(Object.values(graph.objects).some(isUserDefined)).toBe(true);
    expect(Object.values(graph.objects).some((o) => !isUserDefined(o))).toBe(
      true,
    );
  });

  it("dashes exactly the analyst-defined relationships", () => {
    for (const rel of Object.values(graph.relationships)) {
      const line = svg.querySelector(`.edge[data-id="${rel.id}"]`)!;
      expect(line.hasAttribute("stroke-dasharray"), rel.id).toBe(
        isUserDefined(rel),
      );
    }
  });

  it("shows 4 - level credibility dots on every visible node", () => {
    for (const obj of Object.values(graph.objects)) {
      if (collapsedMembers.has(obj.id)) {
        continue;
      }
      const dots = svg.querySelectorAll(`.node[data-id="${obj.id}"] .dot`);
      expect(dots.length, obj.id).toBe(credibilityDots(obj.credibility));
    }
  });

  it("collapses a group into one node with a member-count badge", () => {
    for (const group of Object.values(graph.groups)) {
      if (!group.collapsed) {
        continue;
      }
      const badge = svg.querySelector(
        `.group-node[data-id="${group.id}"] .group-badge`,
      )!;
      expect(badge).not.toBeNull();
      expect(badge.textContent).toBe(String(group.memberIds.length));
      for (const member of group.memberIds) {
        expect(svg.querySelector(`.node[data-id="${member}"]`)).toBeNull();
      }
    }
    expect(svg.querySelectorAll(".group-badge").length).toBeGreaterThan(0);
  });

  it("draws a focus ring exactly where the engine set the focus flag", () => {
    for (const visual of Object.values(graph.nodeVisuals)) {
      if (collapsedMembers.has(visual.objectId)) {
        continue;
      }
      const ring = svg.querySelector(
        `.node[data-id="${visual.objectId}"] .focus-ring`,
      );
      expect(ring !== null, visual.objectId).toBe(visual.focus);
    }
    expect(svg.querySelectorAll(".focus-ring").length).toBe(1);
  });

  it("shrinks minimized nodes", () => {
    for (const visual of Object.values(graph.nodeVisuals)) {
      if (collapsedMembers.has(visual.objectId) || !visual.minimized) {
        continue;
      }
      const body = svg.querySelector(
        `.node[data-id="${visual.objectId}"] .node-body`,
      )!;
      expect(Number(body.getAttribute("r"))).toBeLessThan(12);
    }
  });
});
