import { credibilityDots, isUserDefined } from "./types";
import type { Group, VisibleGraph } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_RADIUS = 12;
const MINIMIZED_RADIUS = 5;
const FOCUS_RING_RADIUS = 17;
const DOT_RADIUS = 1.8;
const DOT_SPACING = 5;
const DASH_PATTERN = "4 2";

function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function centroid(ids: string[], graph: VisibleGraph): [number, number] {
  let x = 0;
  let y = 0;
  let count = 0;
  for (const id of ids) {
    const pos = graph.positions[id];
    if (pos) {
      x += pos[0];
      y += pos[1];
      count += 1;
    }
  }
  return count ? [x / count, y / count] : [0, 0];
}

function appendDots(
  parent: SVGGElement,
  level: number,
  cx: number,
  cy: number,
): void {
  const count = credibilityDots(level);
  const start = cx - ((count - 1) * DOT_SPACING) / 2;
  for (let i = 0; i < count; i++) {
    parent.appendChild(
      svg("circle", {
        class: "dot",
        cx: String(start + i * DOT_SPACING),
        cy: String(cy),
        r: String(DOT_RADIUS),
      }),
    );
  }
}

function collapsedGroupFor(
  objectId: string,
  graph: VisibleGraph,
): Group | null {
  const groupId = graph.nodeVisuals[objectId]?.groupId;
  if (!groupId) {
    return null;
  }
  const group = graph.groups[groupId];
  return group && group.collapsed ? group : null;
}

/** Draw the analysis network statically into an <svg> or <g> element.
 *
 * Rendering follows the element provenance: analyst-defined elements
 * get dashed outlines, every element shows its credibility dots,
 * collapsed groups collapse into one node with a member-count badge,
 * focused nodes get an outer ring and minimized nodes shrink.
 */
export function renderNetwork(
  container: SVGSVGElement | SVGGElement,
  graph: VisibleGraph,
): void {
  container.replaceChildren();

  const edgeAnchor = (objectId: string): [number, number] => {
    const group = collapsedGroupFor(objectId, graph);
    if (group) {
      return centroid(group.memberIds, graph);
    }
    return graph.positions[objectId] ?? [0, 0];
  };

  for (const rel of Object.values(graph.relationships)) {
    const [x1, y1] = edgeAnchor(rel.sourceId);
    const [x2, y2] = edgeAnchor(rel.targetId);
    const line = svg("line", {
      class: "edge",
      "data-id": rel.id,
      x1: String(x1),
      y1: String(y1),
      x2: String(x2),
      y2: String(y2),
    });
    if (isUserDefined(rel)) {
      line.setAttribute("stroke-dasharray", DASH_PATTERN);
    }
    container.appendChild(line);
  }

  const drawnGroups = new Set<string>();
  for (const obj of Object.values(graph.objects)) {
    const group = collapsedGroupFor(obj.id, graph);
    if (group) {
      if (!drawnGroups.has(group.id)) {
        drawnGroups.add(group.id);
        container.appendChild(renderCollapsedGroup(group, graph));
      }
      continue;
    }
    const visual = graph.nodeVisuals[obj.id];
    const [x, y] = graph.positions[obj.id] ?? [0, 0];
    const radius = visual?.minimized ? MINIMIZED_RADIUS : NODE_RADIUS;
    const node = svg("g", {
      class: "node",
      "data-id": obj.id,
      "data-kind": obj.kind,
      transform: `translate(${x}, ${y})`,
    });
    if (visual?.focus) {
      node.appendChild(
        svg("circle", { class: "focus-ring", r: String(FOCUS_RING_RADIUS) }),
      );
    }
    const body = svg("circle", { class: "node-body", r: String(radius) });
    if (isUserDefined(obj)) {
      body.setAttribute("stroke-dasharray", DASH_PATTERN);
    }
    node.appendChild(body);
    appendDots(node, obj.credibility, 0, radius + 6);
    if (!visual?.minimized) {
      const label = svg("text", { class: "label", y: String(-radius - 4) });
      label.textContent = obj.id;
      node.appendChild(label);
    }
    container.appendChild(node);
  }
}

function renderCollapsedGroup(group: Group, graph: VisibleGraph): SVGGElement {
  const [x, y] = centroid(group.memberIds, graph);
  const node = svg("g", {
    class: "node group-node",
    "data-id": group.id,
    transform: `translate(${x}, ${y})`,
  });
  node.appendChild(svg("circle", { class: "node-body", r: String(NODE_RADIUS) }));
  if (group.tagColor) {
    node.appendChild(
      svg("rect", {
        class: "tag",
        x: String(-NODE_RADIUS),
        y: String(NODE_RADIUS + 2),
        width: String(2 * NODE_RADIUS),
        height: "4",
        fill: group.tagColor,
      }),
    );
  }
  const badge = svg("text", {
    class: "group-badge",
    x: String(NODE_RADIUS),
    y: String(-NODE_RADIUS),
  });
  badge.textContent = String(group.memberIds.length);
  node.appendChild(badge);
  const label = svg("text", { class: "label", y: String(-NODE_RADIUS - 10) });
  label.textContent = group.name;
  node.appendChild(label);
  return node;
}
