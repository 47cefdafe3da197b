/** Shared test helpers: a tiny seeded RNG for generative cases and canned
 * API payloads shaped like real service output. */

import type {
  AccountRow,
  AccountsPayload,
  CompareImagesPayload,
  CompareWordsPayload,
  EntitiesPayload,
  NetworkPayload,
  TimelinePayload,
  TweetsPayload,
} from "../src/types.js";
import { emptyState, type ViewState } from "../src/state.js";

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function pick<T>(rng: () => number, items: readonly T[]): T {
  return items[Math.floor(rng() * items.length)]!;
}

const SAMPLE_ACCOUNTS = ["CivicDesk", "NightSiren", "harborwatch", "TruthPulse"];
const SAMPLE_ENTITIES = ["unity health", "gop", "mara quinn", "port of anselm", "k,v entity"];
const SAMPLE_WORDS = ["premiums", "reform", "overhaul"];
const SAMPLE_INSTANTS = ["2018-03-02", "2018-03-05T12:30:00+00:00", "2018-03-09"];
const SAMPLE_IMAGES = ["img_003.png", "img_027.png"];
const SAMPLE_SORTS = ["handle", "anger", "fairness", "negativity"];

/** A normalized random ViewState: the kind the app itself can produce. */
export function randomState(rng: () => number): ViewState {
  const state = emptyState();
  if (rng() < 0.5) state.account = pick(rng, SAMPLE_ACCOUNTS);
  const entityCount = Math.floor(rng() * 3);
  const pool = [...SAMPLE_ENTITIES];
  for (let i = 0; i < entityCount && pool.length > 0; i += 1) {
    const idx = Math.floor(rng() * pool.length);
    state.entities.push(pool.splice(idx, 1)[0]!);
  }
  if (rng() < 0.4) state.start = pick(rng, SAMPLE_INSTANTS);
  if (rng() < 0.4) state.end = pick(rng, SAMPLE_INSTANTS);
  if (state.entities.length > 0 && rng() < 0.5) state.word = pick(rng, SAMPLE_WORDS);
  state.sort = pick(rng, SAMPLE_SORTS);
  if (rng() < 0.3) state.hover = pick(rng, SAMPLE_ACCOUNTS);
  if (rng() < 0.3) state.image = pick(rng, SAMPLE_IMAGES);
  if (rng() < 0.4) state.page = 1 + Math.floor(rng() * 5);
  if (rng() < 0.3) state.zoom = Math.round((0.5 + rng() * 3) * 100) / 100;
  if (rng() < 0.3)
    state.pan = [
      Math.round(rng() * 200 - 100) || 0,
      Math.round(rng() * 200 - 100) || 0,
    ];
  return state;
}

const FEATURES = ["fairness", "loyalty", "subjectivity", "fear", "anger", "negativity"];

function accountRow(handle: string, label: "real" | "suspicious", seed: number): AccountRow {
  const rng = mulberry32(seed);
  const scaled: Record<string, number> = {};
  const rank: Record<string, number> = {};
  for (const f of FEATURES) {
    scaled[f] = Math.round(rng() * 1000) / 10;
    rank[f] = 1 + Math.floor(rng() * 12);
  }
  return {
    id: handle.toLowerCase(),
    handle,
    label,
    description: `${handle} newsroom feed`,
    location: "",
    tweet_count: 40 + Math.floor(rng() * 60),
    scaled,
    rank,
  };
}

export function cannedAccounts(): AccountsPayload {
  const handles: [string, "real" | "suspicious"][] = [
    ["BayStandard", "real"],
    ["CivicDesk", "real"],
    ["DawnChorus", "suspicious"],
    ["EchoHarbor", "suspicious"],
    ["FairPoint", "real"],
    ["GrimLedger", "suspicious"],
    ["HarborWatch", "real"],
    ["IronQuill", "suspicious"],
    ["JadeCourier", "real"],
    ["KelpWire", "real"],
    ["LoomingEye", "suspicious"],
    ["NightSiren", "suspicious"],
  ];
  const accounts = handles.map(([h, label], i) => accountRow(h, label, 100 + i));
  // Deterministic ranks for sort assertions: rank by index under "anger".
  accounts.forEach((row, i) => {
    row.rank["anger"] = accounts.length - i;
    row.scaled["anger"] = (accounts.length - i - 1) * 9;
  });
  const mean: Record<string, number> = {};
  const median: Record<string, number> = {};
  for (const f of FEATURES) {
    mean[f] = 48.5;
    median[f] = 52.0;
  }
  return {
    features: FEATURES,
    groups: {
      real_leaning: ["fairness", "loyalty", "subjectivity"],
      suspicious_leaning: ["fear", "anger", "negativity"],
    },
    accounts,
    stats: { mean, median },
  };
}

export function cannedTimeline(handle: string): TimelinePayload {
  return {
    handle,
    start: "2018-03-01T00:00:00+00:00",
    end: "2018-03-11T00:00:00+00:00",
    days: [
      ["2018-03-01", 4],
      ["2018-03-02", 9],
      ["2018-03-03", 2],
    ],
    total: 15,
  };
}

export function cannedNetwork(): NetworkPayload {
  const rows: [string, "real" | "suspicious", number][] = [
    ["BayStandard", "real", 0],
    ["CivicDesk", "real", 0],
    ["DawnChorus", "suspicious", 0],
    ["EchoHarbor", "suspicious", 1],
    ["FairPoint", "real", 1],
    ["NightSiren", "suspicious", 1],
  ];
  return {
    nodes: rows.map(([handle, label, community], i) => ({
      id: handle.toLowerCase(),
      handle,
      label,
      community,
      active: handle !== "NightSiren",
      in_degree: i,
      out_degree: 5 - i,
    })),
    edges: [
      { src: "baystandard", dst: "civicdesk", weight: 3, kind: "social" },
      { src: "civicdesk", dst: "baystandard", weight: 1, kind: "social" },
      { src: "echoharbor", dst: "civicdesk", weight: 2, kind: "social" },
      { src: "nightsiren", dst: "echoharbor", weight: 4, kind: "social" },
    ],
    communities: {
      "0": { accounts: ["baystandard", "civicdesk", "dawnchorus"], cloud: [["gop", 12], ["reform", 5]] },
      "1": { accounts: ["echoharbor", "fairpoint", "nightsiren"], cloud: [["port of anselm", 9]] },
    },
    modularity: 0.4321,
  };
}

export function cannedEntities(): EntitiesPayload {
  return {
    person: [
      ["mara quinn", 40],
      ["devon hale", 10],
    ],
    place: [["port of anselm", 25]],
    organization: [
      ["unity health", 90],
      ["gop", 9],
    ],
  };
}

export function cannedTweets(): TweetsPayload {
  return {
    total: 120,
    page: 2,
    page_size: 50,
    tweets: [
      {
        id: "t0051",
        handle: "CivicDesk",
        label: "real",
        created_at: "2018-03-09T08:00:00+00:00",
        text: "Unity Health reform splits the council as Mara Quinn objects",
        entities: [
          { canonical: "unity health", type: "organization", start: 0, length: 12 },
          { canonical: "mara quinn", type: "person", start: 42, length: 10 },
        ],
        images: ["img_003.png"],
      },
      {
        id: "t0052",
        handle: "NightSiren",
        label: "suspicious",
        created_at: "2018-03-09T07:00:00+00:00",
        text: "<b>they</b> lied & you pay",
        entities: [],
        images: [],
      },
    ],
  };
}

export function cannedWords(): CompareWordsPayload {
  return {
    query: "unity health",
    token: "unity_health",
    real: {
      neighbors: [
        ["premiums", 0.81],
        ["reform", 0.66],
      ],
      missing_reason: null,
    },
    suspicious: { neighbors: [], missing_reason: "below the frequency floor" },
  };
}

export function cannedImages(): CompareImagesPayload {
  return {
    query: {
      image_id: "img_003.png",
      handle: "CivicDesk",
      label: "real",
      tweet_id: "t0051",
      text: "Unity Health reform splits the council",
    },
    real: [
      { image_id: "img_010.png", score: 0.97, handle: "BayStandard", label: "real", tweet_id: "t0060", text: null },
      { image_id: "img_011.png", score: 0.42, handle: "KelpWire", label: "real", tweet_id: "t0061", text: null },
    ],
    suspicious: [
      { image_id: "img_027.png", score: 0.88, handle: "NightSiren", label: "suspicious", tweet_id: "t0070", text: null },
    ],
  };
}
