/** Request construction for the read-only JSON API.
 *
 * Every URL the app can issue is built here as a pure function of ViewState
 * (plus the account list for per-row timelines), so the full request
 * sequence for a given URL is reproducible: same state in, same URLs out,
 * in the same order.
 */

import type { ViewState } from "./state.js";

export const PAGE_SIZE = 50;
export const ENTITY_K = 30;
export const COMPARE_K = 10;

/** Query fragment holding exactly the params the server's filter parser
 * reads, in a fixed order. Empty string when no filter is active. */
export function filterQuery(state: ViewState): string {
  const parts: string[] = [];
  if (state.account) parts.push("account=" + encodeURIComponent(state.account));
  if (state.entities.length > 0)
    parts.push("entities=" + state.entities.map(encodeURIComponent).join(","));
  if (state.start) parts.push("start=" + encodeURIComponent(state.start));
  if (state.end) parts.push("end=" + encodeURIComponent(state.end));
  // The server pairs word with the first entity; without one it would 400.
  if (state.word && state.entities.length > 0)
    parts.push("word=" + encodeURIComponent(state.word));
  return parts.join("&");
}

function withFilters(path: string, state: ViewState, extra = ""): string {
  const fq = filterQuery(state);
  const query = [extra, fq].filter((p) => p.length > 0).join("&");
  return query ? `${path}?${query}` : path;
}

export function accountsUrl(): string {
  return "/api/accounts";
}

/** Per-account daily volume; only the time window applies to it. */
export function timelineUrl(handle: string, state: ViewState): string {
  const parts: string[] = [];
  if (state.start) parts.push("start=" + encodeURIComponent(state.start));
  if (state.end) parts.push("end=" + encodeURIComponent(state.end));
  const base = `/api/accounts/${encodeURIComponent(handle)}/timeline`;
  return parts.length > 0 ? `${base}?${parts.join("&")}` : base;
}

export function networkUrl(state: ViewState): string {
  return withFilters("/api/network", state);
}

export function entitiesUrl(state: ViewState): string {
  return withFilters("/api/entities", state, `k=${ENTITY_K}`);
}

export function tweetsUrl(state: ViewState): string {
  return withFilters("/api/tweets", state, `page=${state.page}`);
}

export function compareWordsUrl(entity: string): string {
  return `/api/compare/words?entity=${encodeURIComponent(entity)}&k=${COMPARE_K}`;
}

export function compareImagesUrl(imageId: string): string {
  return `/api/compare/images?image=${encodeURIComponent(imageId)}&k=${COMPARE_K}`;
}

export function assetUrl(imageId: string): string {
  return `/assets/images/${encodeURIComponent(imageId)}`;
}

/** The fixed-order request plan for a full refresh. The timeline block
 * expands to one URL per account row, in payload order, once the account
 * list is known; pass [] for the planning view before /api/accounts lands. */
export function buildRequests(state: ViewState, handles: string[] = []): string[] {
  const urls = [accountsUrl()];
  for (const handle of handles) urls.push(timelineUrl(handle, state));
  urls.push(networkUrl(state), entitiesUrl(state), tweetsUrl(state));
  if (state.entities.length > 0) urls.push(compareWordsUrl(state.entities[0]!));
  if (state.image) urls.push(compareImagesUrl(state.image));
  return urls;
}

export class ApiError extends Error {
  constructor(
    public url: string,
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface FetchLike {
  (url: string): Promise<{
    ok: boolean;
    status: number;
    json(): Promise<unknown>;
  }>;
}

/** GET a JSON endpoint, turning the server's error envelope into ApiError. */
export async function getJson<T>(fetchImpl: FetchLike, url: string): Promise<T> {
  let response;
  try {
    response = await fetchImpl(url);
  } catch (err) {
    throw new ApiError(url, 0, "network", String(err));
  }
  if (!response.ok) {
    let code = "http_error";
    let message = `request failed with status ${response.status}`;
    try {
      const body = (await response.json()) as { detail?: { code?: string; message?: string } };
      if (body?.detail?.code) code = body.detail.code;
      if (body?.detail?.message) message = body.detail.message;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(url, response.status, code, message);
  }
  return (await response.json()) as T;
}
