/** Response shapes of the JSON API, mirrored field for field. */

export type PartitionLabel = "real" | "suspicious";
export type EntityType = "person" | "place" | "organization";

export interface AccountRow {
  id: string;
  handle: string;
  label: PartitionLabel;
  description: string;
  location: string;
  tweet_count: number;
  scaled: Record<string, number>;
  rank: Record<string, number>;
}

export interface AccountsPayload {
  features: string[];
  groups: { real_leaning: string[]; suspicious_leaning: string[] };
  accounts: AccountRow[];
  stats: { mean: Record<string, number>; median: Record<string, number> };
}

export interface TimelinePayload {
  handle: string;
  start: string;
  end: string;
  days: [string, number][];
  total: number;
}

export interface NetworkNode {
  id: string;
  handle: string;
  label: PartitionLabel;
  community: number;
  active: boolean;
  in_degree: number;
  out_degree: number;
}

export interface NetworkEdge {
  src: string;
  dst: string;
  weight: number;
  kind: string;
}

export interface NetworkPayload {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
  communities: Record<string, { accounts: string[]; cloud: [string, number][] }>;
  modularity: number;
}

export type EntitiesPayload = Record<EntityType, [string, number][]>;

export interface TweetEntitySpan {
  canonical: string;
  type: EntityType;
  start: number;
  length: number;
}

export interface TweetRow {
  id: string;
  handle: string;
  label: PartitionLabel;
  created_at: string;
  text: string;
  entities: TweetEntitySpan[];
  images: string[];
}

export interface TweetsPayload {
  total: number;
  page: number;
  page_size: number;
  tweets: TweetRow[];
}

export interface CompareWordsSide {
  neighbors: [string, number][];
  missing_reason: string | null;
}

export interface CompareWordsPayload {
  query: string;
  token: string;
  real: CompareWordsSide;
  suspicious: CompareWordsSide;
}

export interface CompareImageHit {
  image_id: string;
  score: number;
  handle: string;
  label: PartitionLabel;
  tweet_id: string;
  text: string | null;
}

export interface CompareImagesPayload {
  query: Omit<CompareImageHit, "score">;
  real: CompareImageHit[];
  suspicious: CompareImageHit[];
}
