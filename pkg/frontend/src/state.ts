/** Single source of truth for everything the five views show.
 *
 * ViewState mirrors the server's filter vocabulary (account, entities,
 * start, end, word) and adds the view-only knobs: sort feature, hovered
 * network node, selected image, tweet page, and network pan/zoom. The whole
 * state serializes to a URL query in a fixed key order, and parsing is
 * total: unknown keys are dropped and malformed values fall back to their
 * defaults, so any URL yields a usable state.
 */

export interface ViewState {
  account: string | null;
  /** Newest selection first; the head entity anchors the word pair and the
   * word comparison panel, matching how the server pairs `word` with the
   * first entity in the query. */
  entities: string[];
  start: string | null;
  end: string | null;
  word: string | null;
  sort: string;
  hover: string | null;
  image: string | null;
  page: number;
  zoom: number;
  pan: [number, number];
}

export const DEFAULT_SORT = "handle";

export function emptyState(): ViewState {
  return {
    account: null,
    entities: [],
    start: null,
    end: null,
    word: null,
    sort: DEFAULT_SORT,
    hover: null,
    image: null,
    page: 1,
    zoom: 1,
    pan: [0, 0],
  };
}

// Fixed serialization order; tests pin it so two clients building a URL from
// the same state always agree byte for byte.
export const KEY_ORDER = [
  "account",
  "entities",
  "start",
  "end",
  "word",
  "sort",
  "hover",
  "image",
  "page",
  "zoom",
  "pan",
] as const;

function trimNumber(value: number): string {
  // Round-trippable and short: up to 4 decimals, trailing zeros dropped.
  return String(Math.round(value * 10000) / 10000);
}

/** Serialize to a query string (no leading "?"). Defaults are omitted, so
 * the empty state serializes to "". Entity names are encoded one by one and
 * joined with bare commas, which keeps literal commas inside a name safe. */
export function serializeState(state: ViewState): string {
  const parts: string[] = [];
  const put = (key: string, value: string) => {
    parts.push(`${key}=${value}`);
  };
  if (state.account) put("account", encodeURIComponent(state.account));
  if (state.entities.length > 0)
    put("entities", state.entities.map(encodeURIComponent).join(","));
  if (state.start) put("start", encodeURIComponent(state.start));
  if (state.end) put("end", encodeURIComponent(state.end));
  if (state.word) put("word", encodeURIComponent(state.word));
  if (state.sort !== DEFAULT_SORT) put("sort", encodeURIComponent(state.sort));
  if (state.hover) put("hover", encodeURIComponent(state.hover));
  if (state.image) put("image", encodeURIComponent(state.image));
  if (state.page !== 1) put("page", String(state.page));
  if (state.zoom !== 1) put("zoom", trimNumber(state.zoom));
  if (state.pan[0] !== 0 || state.pan[1] !== 0)
    put("pan", `${trimNumber(state.pan[0])},${trimNumber(state.pan[1])}`);
  return parts.join("&");
}

function decode(raw: string): string {
  try {
    return decodeURIComponent(raw);
  } catch {
    return raw;
  }
}

function parseFinite(raw: string, fallback: number): number {
  const value = Number(raw);
  return Number.isFinite(value) ? value : fallback;
}

/** Parse a query string (leading "?" allowed). Never throws. */
export function parseState(query: string): ViewState {
  const state = emptyState();
  const trimmed = query.startsWith("?") ? query.slice(1) : query;
  if (!trimmed) return state;
  for (const piece of trimmed.split("&")) {
    const eq = piece.indexOf("=");
    if (eq < 0) continue;
    const key = piece.slice(0, eq);
    const raw = piece.slice(eq + 1);
    switch (key) {
      case "account":
        state.account = decode(raw) || null;
        break;
      case "entities":
        state.entities = raw
          .split(",")
          .map(decode)
          .map((name) => name.trim())
          .filter((name) => name.length > 0);
        break;
      case "start":
        state.start = decode(raw) || null;
        break;
      case "end":
        state.end = decode(raw) || null;
        break;
      case "word":
        state.word = decode(raw) || null;
        break;
      case "sort":
        state.sort = decode(raw) || DEFAULT_SORT;
        break;
      case "hover":
        state.hover = decode(raw) || null;
        break;
      case "image":
        state.image = decode(raw) || null;
        break;
      case "page": {
        const page = Math.floor(parseFinite(raw, 1));
        state.page = page >= 1 ? page : 1;
        break;
      }
      case "zoom": {
        const zoom = parseFinite(raw, 1);
        state.zoom = zoom > 0 ? zoom : 1;
        break;
      }
      case "pan": {
        const [x, y] = raw.split(",");
        state.pan = [parseFinite(x ?? "", 0), parseFinite(y ?? "", 0)];
        break;
      }
      default:
        break;
    }
  }
  // A word filter is only meaningful alongside the entity it pairs with;
  // the server rejects the combination otherwise.
  if (state.entities.length === 0) state.word = null;
  return state;
}

/** Filter-relevant projection: two states with equal cores issue the same
 * data requests (view-only knobs aside from page never reach the server). */
export function filterCore(state: ViewState): string {
  return JSON.stringify([
    state.account,
    state.entities,
    state.start,
    state.end,
    state.word,
    state.page,
  ]);
}
