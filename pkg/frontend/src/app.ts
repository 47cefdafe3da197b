/** View coordinator.
 *
 * One ViewState drives all five views. Every user action maps to exactly
 * one state transition through apply(): transitions that change the filter
 * core (account, entities, time, word, page) re-fetch every data payload in
 * a fixed request order; view-only transitions (sort, hover, pan/zoom)
 * re-render from the cached payloads without touching the network. The URL
 * sink receives the serialized state on every transition, so reloading that
 * URL replays the same request sequence against the API.
 *
 * A refresh epoch implements latest-request-wins: when a newer transition
 * starts while payloads are still in flight, the stale refresh stops
 * rendering the moment it notices.
 */

import {
  accountsUrl,
  ApiError,
  compareImagesUrl,
  compareWordsUrl,
  entitiesUrl,
  type FetchLike,
  getJson,
  networkUrl,
  timelineUrl,
  tweetsUrl,
} from "./api.js";
import {
  emptyState,
  filterCore,
  parseState,
  serializeState,
  type ViewState,
} from "./state.js";
import type {
  AccountsPayload,
  CompareImagesPayload,
  CompareWordsPayload,
  EntitiesPayload,
  NetworkPayload,
  TimelinePayload,
  TweetsPayload,
} from "./types.js";
import { renderAccountView } from "./views/accounts.js";
import { renderComparison } from "./views/compare.js";
import { renderEntityClouds } from "./views/entities.js";
import { renderNetworkView } from "./views/network.js";
import { renderTweetList } from "./views/tweets.js";

export interface Sinks {
  accounts(html: string): void;
  network(html: string): void;
  entities(html: string): void;
  compare(html: string): void;
  tweets(html: string): void;
  url(query: string): void;
}

export interface AppOptions {
  fetchImpl: FetchLike;
  sinks: Sinks;
  /** Origin prefix for requests; empty in the browser (same origin). */
  base?: string;
}

interface DataCache {
  accounts: AccountsPayload;
  timelines: Map<string, TimelinePayload>;
  network: NetworkPayload;
  entities: EntitiesPayload;
  tweets: TweetsPayload;
  words: CompareWordsPayload | null;
  images: CompareImagesPayload | null;
}

function errorPanel(err: unknown): string {
  const message =
    err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  const safe = message.replace(/[&<>]/g, (ch) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[ch] ?? ch);
  return `<div class="error">request failed &mdash; ${safe}</div>`;
}

export class App {
  state: ViewState = emptyState();
  /** Every API URL issued, in issue order; integration tests read this. */
  requestLog: string[] = [];

  private readonly fetchImpl: FetchLike;
  private readonly sinks: Sinks;
  private readonly base: string;
  private cache: DataCache | null = null;
  private epoch = 0;

  constructor(options: AppOptions) {
    this.fetchImpl = options.fetchImpl;
    this.sinks = options.sinks;
    this.base = options.base ?? "";
  }

  /** Restore state from a URL query and load everything. */
  async boot(query: string): Promise<void> {
    this.state = parseState(query);
    this.sinks.url(serializeState(this.state));
    await this.refreshData();
  }

  /** One user action, one transition. */
  async apply(next: ViewState): Promise<void> {
    const prev = this.state;
    this.state = next;
    this.sinks.url(serializeState(next));
    if (this.cache === null || filterCore(prev) !== filterCore(next)) {
      await this.refreshData();
      return;
    }
    if (prev.image !== next.image) {
      await this.refreshImageComparison();
      return;
    }
    this.renderAll();
  }

  // Action vocabulary used by both the browser wiring and the tests.

  selectAccount(handle: string): Promise<void> {
    const account = this.state.account === handle ? null : handle;
    return this.apply({ ...this.state, account, page: 1 });
  }

  /** Toggle an entity filter. The newest selection moves to the front so it
   * anchors both the word pair and the comparison panel; changing the
   * entity set invalidates any word pairing. */
  selectEntity(name: string): Promise<void> {
    const current = this.state.entities;
    const entities = current.includes(name)
      ? current.filter((e) => e !== name)
      : [name, ...current];
    return this.apply({ ...this.state, entities, word: null, page: 1 });
  }

  selectWord(word: string): Promise<void> {
    const next = this.state.word === word ? null : word;
    return this.apply({ ...this.state, word: next, page: 1 });
  }

  selectImage(imageId: string | null): Promise<void> {
    const image = this.state.image === imageId ? null : imageId;
    return this.apply({ ...this.state, image });
  }

  setTimeWindow(start: string | null, end: string | null): Promise<void> {
    return this.apply({ ...this.state, start, end, page: 1 });
  }

  setSort(feature: string): Promise<void> {
    return this.apply({ ...this.state, sort: feature });
  }

  setHover(handle: string | null): Promise<void> {
    return this.apply({ ...this.state, hover: handle });
  }

  setPage(page: number): Promise<void> {
    return this.apply({ ...this.state, page: Math.max(1, Math.floor(page)) });
  }

  setViewport(zoom: number, pan: [number, number]): Promise<void> {
    return this.apply({ ...this.state, zoom, pan });
  }

  // Read-only snapshots for tests and wiring.

  currentQuery(): string {
    return serializeState(this.state);
  }

  tweetIds(): string[] {
    return this.cache?.tweets.tweets.map((t) => t.id) ?? [];
  }

  tweetTotal(): number {
    return this.cache?.tweets.total ?? 0;
  }

  accountHandles(): string[] {
    return this.cache?.accounts.accounts.map((a) => a.handle) ?? [];
  }

  private async get<T>(url: string): Promise<T> {
    this.requestLog.push(url);
    return getJson<T>(this.fetchImpl, this.base + url);
  }

  /** Full reload in the canonical request order: accounts, one timeline per
   * account row, network, entities, tweets, then the comparison payloads
   * their subjects call for. Sequential awaits keep the issue order exact. */
  private async refreshData(): Promise<void> {
    const epoch = ++this.epoch;
    const state = this.state;
    try {
      const accounts = await this.get<AccountsPayload>(accountsUrl());
      if (epoch !== this.epoch) return;

      const timelines = new Map<string, TimelinePayload>();
      for (const row of accounts.accounts) {
        timelines.set(row.handle, await this.get<TimelinePayload>(timelineUrl(row.handle, state)));
        if (epoch !== this.epoch) return;
      }

      const network = await this.get<NetworkPayload>(networkUrl(state));
      if (epoch !== this.epoch) return;
      const entities = await this.get<EntitiesPayload>(entitiesUrl(state));
      if (epoch !== this.epoch) return;
      const tweets = await this.get<TweetsPayload>(tweetsUrl(state));
      if (epoch !== this.epoch) return;

      const words = state.entities.length > 0 ? await this.fetchWords(state.entities[0]!) : null;
      if (epoch !== this.epoch) return;
      const images = state.image ? await this.fetchImages(state.image) : null;
      if (epoch !== this.epoch) return;

      this.cache = { accounts, timelines, network, entities, tweets, words, images };
      this.renderAll();
    } catch (err) {
      if (epoch !== this.epoch) return;
      this.cache = null; // no stale data behind an error banner
      const panel = errorPanel(err);
      this.sinks.accounts(panel);
      this.sinks.network(panel);
      this.sinks.entities(panel);
      this.sinks.compare(panel);
      this.sinks.tweets(panel);
    }
  }

  /** An entity token can be absent from both embedding models; that is an
   * inline condition for the comparison panel, not an app failure. */
  private async fetchWords(entity: string): Promise<CompareWordsPayload> {
    try {
      return await this.get<CompareWordsPayload>(compareWordsUrl(entity));
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        const side = { neighbors: [], missing_reason: err.message };
        return {
          query: entity,
          token: entity.toLowerCase().split(/\s+/).join("_"),
          real: { ...side },
          suspicious: { ...side },
        };
      }
      throw err;
    }
  }

  private async fetchImages(imageId: string): Promise<CompareImagesPayload | null> {
    try {
      return await this.get<CompareImagesPayload>(compareImagesUrl(imageId));
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  private async refreshImageComparison(): Promise<void> {
    if (this.cache === null) return;
    const epoch = ++this.epoch;
    const image = this.state.image;
    try {
      const payload = image ? await this.fetchImages(image) : null;
      if (epoch !== this.epoch) return;
      this.cache.images = payload;
      this.renderAll();
    } catch (err) {
      if (epoch !== this.epoch) return;
      this.sinks.compare(errorPanel(err));
    }
  }

  private renderAll(): void {
    if (this.cache === null) return;
    const { accounts, timelines, network, entities, tweets, words, images } = this.cache;
    this.sinks.accounts(renderAccountView(accounts, timelines, this.state));
    this.sinks.network(renderNetworkView(network, this.state));
    this.sinks.entities(renderEntityClouds(entities, this.state));
    this.sinks.compare(renderComparison(words, images));
    this.sinks.tweets(renderTweetList(tweets));
  }
}
