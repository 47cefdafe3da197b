/** Side-by-side comparison panels.
 *
 * Words: the queried entity sits centered between two ranked neighbor
 * lists, real sources on the left and suspicious on the right; a partition
 * that lacks the token explains itself inline instead of faking a list.
 * Clicking a neighbor stacks the entity+word pair filter.
 *
 * Images: the selected image sits centered with its most similar images on
 * the matching partition side, drawn in circles whose radius grows with the
 * cosine score. */

import type { CompareImageHit, CompareImagesPayload, CompareWordsPayload } from "../types.js";
import { assetUrl } from "../api.js";
import { esc, LABEL_COLORS } from "../palette.js";

function wordColumn(side: CompareWordsPayload["real"], partition: "real" | "suspicious"): string {
  if (side.missing_reason !== null) {
    return `<p class="missing">no data for this partition (${esc(side.missing_reason)})</p>`;
  }
  const rows = side.neighbors
    .map(([word, score]) => {
      const width = Math.max(4, Math.round(Math.max(score, 0) * 100));
      return (
        `<li class="word-row" data-word="${esc(word)}">` +
        `<span class="word">${esc(word)}</span>` +
        `<span class="bar" style="width:${width}px;background:${LABEL_COLORS[partition]}"></span>` +
        `<span class="score">${score.toFixed(3)}</span></li>`
      );
    })
    .join("");
  return `<ol class="word-list">${rows}</ol>`;
}

export function renderWordComparison(payload: CompareWordsPayload | null): string {
  if (payload === null) {
    return `<p class="hint">select an entity to compare its related words</p>`;
  }
  return (
    `<div class="compare-words">` +
    `<div class="side side-real"><h4>real</h4>${wordColumn(payload.real, "real")}</div>` +
    `<div class="query-box"><span class="query-token">${esc(payload.token)}</span></div>` +
    `<div class="side side-suspicious"><h4>suspicious</h4>${wordColumn(payload.suspicious, "suspicious")}</div>` +
    `</div>`
  );
}

function imageCircle(hit: CompareImageHit): string {
  // Radius in px, monotone in the cosine score; scores at or below zero
  // collapse to the floor size.
  const r = Math.round(14 + 26 * Math.min(Math.max(hit.score, 0), 1));
  const d = r * 2;
  return (
    `<figure class="image-hit" data-image="${esc(hit.image_id)}" data-score="${hit.score.toFixed(6)}">` +
    `<img src="${assetUrl(hit.image_id)}" alt="${esc(hit.image_id)}"` +
    ` style="width:${d}px;height:${d}px;border-color:${LABEL_COLORS[hit.label]}"/>` +
    `<figcaption>@${esc(hit.handle)} &middot; ${hit.score.toFixed(3)}</figcaption></figure>`
  );
}

export function renderImageComparison(payload: CompareImagesPayload | null): string {
  if (payload === null) {
    return `<p class="hint">click a tweet image to find its nearest neighbors</p>`;
  }
  const real = payload.real.map(imageCircle).join("");
  const suspicious = payload.suspicious.map(imageCircle).join("");
  return (
    `<div class="compare-images">` +
    `<div class="side side-real"><h4>real</h4>${real}</div>` +
    `<div class="query-box"><img class="query-image" src="${assetUrl(payload.query.image_id)}"` +
    ` alt="${esc(payload.query.image_id)}"/>` +
    `<span class="query-caption">@${esc(payload.query.handle)}</span></div>` +
    `<div class="side side-suspicious"><h4>suspicious</h4>${suspicious}</div>` +
    `</div>`
  );
}

export function renderComparison(
  words: CompareWordsPayload | null,
  images: CompareImagesPayload | null,
): string {
  return (
    `<div class="compare-panel">` +
    `<h3>related words</h3>${renderWordComparison(words)}` +
    `<h3>similar images</h3>${renderImageComparison(images)}` +
    `</div>`
  );
}
