/** Filtered tweet list with entity spans highlighted in their type colors,
 * image thumbnails that enlarge on hover and open the image comparison on
 * click, and pagination over the server's fixed page size. */

import type { TweetRow, TweetsPayload } from "../types.js";
import { assetUrl } from "../api.js";
import { ENTITY_COLORS, esc, LABEL_COLORS } from "../palette.js";

/** Escape the text while wrapping each entity span in a colored mark.
 * Spans are byte offsets into the raw text and never overlap. */
export function highlightEntities(text: string, spans: TweetRow["entities"]): string {
  const ordered = [...spans].sort((a, b) => a.start - b.start);
  const parts: string[] = [];
  let cursor = 0;
  for (const span of ordered) {
    if (span.start < cursor || span.start + span.length > text.length) continue;
    parts.push(esc(text.slice(cursor, span.start)));
    const surface = text.slice(span.start, span.start + span.length);
    parts.push(
      `<mark class="entity-${span.type}" data-entity="${esc(span.canonical)}"` +
        ` style="color:${ENTITY_COLORS[span.type]}">${esc(surface)}</mark>`,
    );
    cursor = span.start + span.length;
  }
  parts.push(esc(text.slice(cursor)));
  return parts.join("");
}

function tweetItem(row: TweetRow): string {
  const thumbs = row.images
    .map(
      (id) =>
        `<img class="thumb" src="${assetUrl(id)}" data-image="${esc(id)}" alt="${esc(id)}"/>`,
    )
    .join("");
  return (
    `<li class="tweet" data-tweet="${esc(row.id)}">` +
    `<div class="tweet-head"><span class="handle underline-${esc(row.label)}"` +
    ` style="border-color:${LABEL_COLORS[row.label]}">@${esc(row.handle)}</span>` +
    `<time>${esc(row.created_at)}</time></div>` +
    `<p class="tweet-text">${highlightEntities(row.text, row.entities)}</p>` +
    (thumbs ? `<div class="tweet-images">${thumbs}</div>` : "") +
    `</li>`
  );
}

export function renderTweetList(payload: TweetsPayload): string {
  const pages = Math.max(Math.ceil(payload.total / payload.page_size), 1);
  const prev =
    payload.page > 1
      ? `<button class="pager" data-page="${payload.page - 1}">prev</button>`
      : `<button class="pager" disabled>prev</button>`;
  const next =
    payload.page < pages
      ? `<button class="pager" data-page="${payload.page + 1}">next</button>`
      : `<button class="pager" disabled>next</button>`;
  const body =
    payload.tweets.length > 0
      ? `<ol class="tweet-list">${payload.tweets.map(tweetItem).join("")}</ol>`
      : `<p class="hint">no tweets match the current filters</p>`;
  return (
    `<div class="tweets-header"><span>${payload.total} tweets &middot; page ${payload.page} of ${pages}</span>` +
    `${prev}${next}</div>` +
    body
  );
}
