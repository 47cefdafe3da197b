/** Account list: one row per source with label underline, daily-volume
 * bars, and six language-feature donuts split into the real-leaning and
 * suspicious-leaning halves. Donut ring length encodes the 0-100 scaled
 * score, the centered number is the account's rank for that feature, and
 * the orange/blue ticks mark the corpus mean and median. */

import type { AccountRow, AccountsPayload, TimelinePayload } from "../types.js";
import type { ViewState } from "../state.js";
import { esc, LABEL_COLORS, MEAN_TICK_COLOR, MEDIAN_TICK_COLOR } from "../palette.js";

const DONUT_R = 15;
const DONUT_BOX = 44;
const RING = 2 * Math.PI * DONUT_R;

function tick(value: number, color: string, kind: string): string {
  // Ring angle for a 0-100 value, 12 o'clock origin, clockwise.
  const theta = (Math.min(Math.max(value, 0), 100) / 100) * 2 * Math.PI - Math.PI / 2;
  const c = DONUT_BOX / 2;
  const x1 = c + (DONUT_R - 4) * Math.cos(theta);
  const y1 = c + (DONUT_R - 4) * Math.sin(theta);
  const x2 = c + (DONUT_R + 4) * Math.cos(theta);
  const y2 = c + (DONUT_R + 4) * Math.sin(theta);
  return (
    `<line class="tick-${kind}" x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}"` +
    ` x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}" stroke="${color}" stroke-width="1.5"/>`
  );
}

function donut(row: AccountRow, feature: string, payload: AccountsPayload): string {
  const scaled = row.scaled[feature] ?? 0;
  const rank = row.rank[feature] ?? 0;
  const c = DONUT_BOX / 2;
  const filled = (scaled / 100) * RING;
  return (
    `<svg class="donut" viewBox="0 0 ${DONUT_BOX} ${DONUT_BOX}" role="img">` +
    `<title>${esc(feature)}: ${scaled.toFixed(1)} (rank ${rank})</title>` +
    `<circle cx="${c}" cy="${c}" r="${DONUT_R}" fill="none" stroke="#edf2f7" stroke-width="5"/>` +
    `<circle class="donut-arc" cx="${c}" cy="${c}" r="${DONUT_R}" fill="none"` +
    ` stroke="currentColor" stroke-width="5"` +
    ` stroke-dasharray="${filled.toFixed(2)} ${RING.toFixed(2)}"` +
    ` transform="rotate(-90 ${c} ${c})"/>` +
    tick(payload.stats.mean[feature] ?? 0, MEAN_TICK_COLOR, "mean") +
    tick(payload.stats.median[feature] ?? 0, MEDIAN_TICK_COLOR, "median") +
    `<text class="donut-rank" x="${c}" y="${c}" text-anchor="middle" dominant-baseline="central">${rank}</text>` +
    `</svg>`
  );
}

function volumeBars(timeline: TimelinePayload | undefined): string {
  const days = timeline?.days ?? [];
  if (days.length === 0) return `<svg class="volume" viewBox="0 0 120 24"></svg>`;
  const max = Math.max(...days.map(([, count]) => count), 1);
  const step = 120 / days.length;
  const bars = days
    .map(([day, count], i) => {
      const h = (count / max) * 22;
      const x = i * step;
      return (
        `<rect x="${x.toFixed(2)}" y="${(24 - h).toFixed(2)}" width="${Math.max(step - 0.5, 0.5).toFixed(2)}"` +
        ` height="${h.toFixed(2)}"><title>${esc(day)}: ${count}</title></rect>`
      );
    })
    .join("");
  return `<svg class="volume" viewBox="0 0 120 24">${bars}</svg>`;
}

function orderRows(payload: AccountsPayload, sort: string): AccountRow[] {
  const rows = [...payload.accounts];
  if (!payload.features.includes(sort)) return rows; // payload arrives handle-sorted
  rows.sort((a, b) => (a.rank[sort] ?? 0) - (b.rank[sort] ?? 0));
  return rows;
}

export function renderAccountView(
  payload: AccountsPayload,
  timelines: Map<string, TimelinePayload>,
  state: ViewState,
): string {
  const features = [...payload.groups.real_leaning, ...payload.groups.suspicious_leaning];
  const splitAt = payload.groups.real_leaning.length;

  const header = features
    .map((f, i) => {
      const active = state.sort === f ? " sort-active" : "";
      const divider = i === splitAt ? " group-start" : "";
      return `<th class="sortable${active}${divider}" data-sort="${esc(f)}">${esc(f)}</th>`;
    })
    .join("");

  const body = orderRows(payload, state.sort)
    .map((row) => {
      const selected = state.account === row.handle ? " selected" : "";
      const cells = features
        .map((f, i) => {
          const divider = i === splitAt ? ' class="group-start"' : "";
          return `<td${divider}>${donut(row, f, payload)}</td>`;
        })
        .join("");
      return (
        `<tr class="account-row${selected}" data-handle="${esc(row.handle)}"` +
        ` title="${esc(row.description)}">` +
        `<td class="handle-cell"><span class="handle underline-${esc(row.label)}"` +
        ` style="border-color:${LABEL_COLORS[row.label]}">@${esc(row.handle)}</span>` +
        `<span class="count">${row.tweet_count}</span></td>` +
        `<td>${volumeBars(timelines.get(row.handle))}</td>` +
        cells +
        `</tr>`
      );
    })
    .join("");

  return (
    `<table class="accounts">` +
    `<thead><tr><th class="sortable" data-sort="handle">account</th><th>volume</th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
