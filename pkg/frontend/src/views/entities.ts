/** Three entity clouds, one per type: persons in blue, places in purple,
 * organizations in orange. Term size grows with the square root of the
 * mention count; clicking a term stacks or removes that entity filter. */

import type { EntitiesPayload, EntityType } from "../types.js";
import type { ViewState } from "../state.js";
import { cloudSize, ENTITY_COLORS, esc } from "../palette.js";

const TYPE_ORDER: EntityType[] = ["person", "place", "organization"];

function cloud(type: EntityType, terms: [string, number][], state: ViewState): string {
  const max = Math.max(...terms.map(([, count]) => count), 1);
  const spans = terms
    .map(([name, count]) => {
      const selected = state.entities.includes(name) ? " selected" : "";
      return (
        `<span class="cloud-term entity-${type}${selected}" data-entity="${esc(name)}"` +
        ` style="font-size:${cloudSize(count, max)}px;color:${ENTITY_COLORS[type]}"` +
        ` title="${count} mentions">${esc(name)}</span>`
      );
    })
    .join(" ");
  const body = terms.length > 0 ? spans : `<span class="cloud-empty">none in the current view</span>`;
  return (
    `<section class="entity-cloud" data-type="${type}">` +
    `<h3 style="color:${ENTITY_COLORS[type]}">${type}</h3>` +
    `<div class="cloud-body">${body}</div></section>`
  );
}

export function renderEntityClouds(payload: EntitiesPayload, state: ViewState): string {
  return TYPE_ORDER.map((type) => cloud(type, payload[type] ?? [], state)).join("");
}
