/** Circular mention/retweet graph. Nodes sit on the circle perimeter,
 * grouped contiguously by community over alternating gray backdrop arcs,
 * ordered inside each community by total degree (hubs first). Hovering a
 * node highlights its incoming and outgoing edges in distinct colors and
 * shows the community's entity cloud; accounts outside the active filter
 * set are dimmed. */

import type { NetworkNode, NetworkPayload } from "../types.js";
import type { ViewState } from "../state.js";
import {
  ARC_SHADES,
  cloudSize,
  EDGE_IN_COLOR,
  EDGE_OUT_COLOR,
  esc,
  LABEL_COLORS,
} from "../palette.js";

const SIZE = 420;
const CENTER = SIZE / 2;
const RADIUS = 150;
const ARC_INNER = RADIUS - 18;
const ARC_OUTER = RADIUS + 18;

interface Placed {
  node: NetworkNode;
  angle: number;
  x: number;
  y: number;
}

function orderNodes(nodes: NetworkNode[]): NetworkNode[] {
  return [...nodes].sort((a, b) => {
    if (a.community !== b.community) return a.community - b.community;
    const da = a.in_degree + a.out_degree;
    const db = b.in_degree + b.out_degree;
    if (da !== db) return db - da;
    return a.handle < b.handle ? -1 : a.handle > b.handle ? 1 : 0;
  });
}

function place(nodes: NetworkNode[]): Placed[] {
  const n = Math.max(nodes.length, 1);
  return nodes.map((node, i) => {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    return {
      node,
      angle,
      x: CENTER + RADIUS * Math.cos(angle),
      y: CENTER + RADIUS * Math.sin(angle),
    };
  });
}

function annularSector(a0: number, a1: number, fill: string, community: number): string {
  // Slight padding keeps adjacent arcs visually separate.
  const pad = 0.02;
  const lo = a0 - pad;
  const hi = a1 + pad;
  const large = hi - lo > Math.PI ? 1 : 0;
  const p = (r: number, a: number) =>
    `${(CENTER + r * Math.cos(a)).toFixed(2)} ${(CENTER + r * Math.sin(a)).toFixed(2)}`;
  const d =
    `M ${p(ARC_OUTER, lo)} A ${ARC_OUTER} ${ARC_OUTER} 0 ${large} 1 ${p(ARC_OUTER, hi)} ` +
    `L ${p(ARC_INNER, hi)} A ${ARC_INNER} ${ARC_INNER} 0 ${large} 0 ${p(ARC_INNER, lo)} Z`;
  return `<path class="community-arc" data-community="${community}" d="${d}" fill="${fill}"/>`;
}

function communityArcs(placed: Placed[], total: number): string {
  if (placed.length === 0) return "";
  const span = (2 * Math.PI) / total;
  const arcs: string[] = [];
  let startIdx = 0;
  for (let i = 1; i <= placed.length; i += 1) {
    const boundary = i === placed.length || placed[i]!.node.community !== placed[startIdx]!.node.community;
    if (!boundary) continue;
    const first = placed[startIdx]!;
    const last = placed[i - 1]!;
    const fill = ARC_SHADES[arcs.length % ARC_SHADES.length]!;
    arcs.push(annularSector(first.angle - span / 2, last.angle + span / 2, fill, first.node.community));
    startIdx = i;
  }
  return arcs.join("");
}

function edgeLines(payload: NetworkPayload, pos: Map<string, Placed>, hover: string | null): string {
  const hovered = hover ? pos.get(hover.toLowerCase())?.node.id ?? null : null;
  return payload.edges
    .map((edge) => {
      const a = pos.get(edge.src);
      const b = pos.get(edge.dst);
      if (!a || !b) return "";
      let cls = "edge";
      let stroke = "#cbd5e0";
      if (hovered) {
        if (edge.dst === hovered) {
          cls = "edge edge-in";
          stroke = EDGE_IN_COLOR;
        } else if (edge.src === hovered) {
          cls = "edge edge-out";
          stroke = EDGE_OUT_COLOR;
        } else {
          cls = "edge edge-dim";
        }
      }
      const width = Math.min(0.6 + edge.weight * 0.25, 3).toFixed(2);
      return (
        `<line class="${cls}" x1="${a.x.toFixed(2)}" y1="${a.y.toFixed(2)}"` +
        ` x2="${b.x.toFixed(2)}" y2="${b.y.toFixed(2)}" stroke="${stroke}"` +
        ` stroke-width="${width}"><title>${esc(edge.src)} -&gt; ${esc(edge.dst)} (${edge.weight})</title></line>`
      );
    })
    .join("");
}

function hoverCloud(payload: NetworkPayload, hover: string | null, pos: Map<string, Placed>): string {
  if (!hover) return "";
  const placed = pos.get(hover.toLowerCase());
  if (!placed) return "";
  const community = payload.communities[String(placed.node.community)];
  if (!community) return "";
  const max = Math.max(...community.cloud.map(([, count]) => count), 1);
  const terms = community.cloud
    .map(
      ([term, count]) =>
        `<span class="cloud-term" style="font-size:${cloudSize(count, max)}px">${esc(term)} <i>${count}</i></span>`,
    )
    .join(" ");
  return (
    `<div class="community-cloud"><h4>community ${placed.node.community}` +
    ` &middot; @${esc(placed.node.handle)}</h4>${terms}</div>`
  );
}

export function renderNetworkView(payload: NetworkPayload, state: ViewState): string {
  const placed = place(orderNodes(payload.nodes));
  const pos = new Map<string, Placed>();
  for (const p of placed) {
    pos.set(p.node.id, p);
    pos.set(p.node.handle.toLowerCase(), p);
  }

  const nodes = placed
    .map((p) => {
      const dim = p.node.active ? "" : " node-dim";
      const hovered =
        state.hover && state.hover.toLowerCase() === p.node.handle.toLowerCase() ? " node-hover" : "";
      return (
        `<circle class="node${dim}${hovered}" data-node="${esc(p.node.handle)}"` +
        ` cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="7"` +
        ` fill="${LABEL_COLORS[p.node.label]}">` +
        `<title>@${esc(p.node.handle)} in ${p.node.in_degree} / out ${p.node.out_degree}</title></circle>`
      );
    })
    .join("");

  const labels = placed
    .map((p) => {
      const outside = 1.18;
      const x = CENTER + RADIUS * outside * Math.cos(p.angle);
      const y = CENTER + RADIUS * outside * Math.sin(p.angle);
      const anchor = Math.cos(p.angle) > 0.1 ? "start" : Math.cos(p.angle) < -0.1 ? "end" : "middle";
      return (
        `<text class="node-label" x="${x.toFixed(1)}" y="${y.toFixed(1)}"` +
        ` text-anchor="${anchor}">${esc(p.node.handle)}</text>`
      );
    })
    .join("");

  const transform =
    `translate(${state.pan[0].toFixed(2)} ${state.pan[1].toFixed(2)})` +
    ` scale(${state.zoom.toFixed(4)})`;

  return (
    `<svg class="network" viewBox="0 0 ${SIZE} ${SIZE}">` +
    `<g class="viewport" transform="${transform}">` +
    communityArcs(placed, Math.max(placed.length, 1)) +
    edgeLines(payload, pos, state.hover) +
    nodes +
    labels +
    `</g></svg>` +
    `<div class="network-footer">modularity ${payload.modularity.toFixed(4)}</div>` +
    hoverCloud(payload, state.hover, pos)
  );
}
