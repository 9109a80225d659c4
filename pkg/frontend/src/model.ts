/** Mirrors of the JSON bodies served under /api/v1. */

export type NodeKind =
  | "apex"
  | "fqdn"
  | "ip"
  | "name_server"
  | "mail_server"
  | "cname_target"
  | "soa";

export type Verdict = "BENIGN" | "MALICIOUS";

export interface NodeOut {
  id: number;
  kind: NodeKind;
  label: string;
}

export interface EdgeOut {
  src: number;
  dst: number;
  kind: string;
  days: string[];
}

export interface SubgraphOut {
  nodes: NodeOut[];
  edges: EdgeOut[];
  truncated: boolean;
}

export interface SearchResult {
  domain: string;
  kind: string;
  positives: number | null;
}

export interface HostingEntry {
  ip: string;
  first_day: string;
  last_day: string;
  asn: number | null;
  country: string | null;
}

export interface DomainSummary {
  domain: string;
  kind: string;
  first_seen: string;
  last_seen: string;
  latest_positives: number | null;
  latest_rank: number | null;
  hosting_history: HostingEntry[];
}

export interface NodeScore {
  id: number;
  kind: string;
  label: string;
  score: number;
}

export interface SeedCount {
  benign: number;
  malicious: number;
}

export interface InferResponse {
  domain: string;
  score: number;
  verdict: Verdict;
  converged: boolean;
  iterations_used: number;
  seed_count: SeedCount;
  truncated: boolean;
  nodes: NodeScore[];
}

export interface ScoreResponse {
  domain: string;
  score: number;
  verdict: Verdict;
  computed_at: string;
  known: boolean;
}

export interface TimelineFrame {
  day: string;
  subgraph: SubgraphOut;
  scores: NodeScore[] | null;
}

export interface HealthResponse {
  status: string;
  nodes: number;
  edges: number;
  latest_day: string | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

export interface BpParamsIn {
  epsilon?: number;
  max_iterations?: number;
  tolerance?: number;
  damping?: number;
  prior_strength?: number;
}

export interface InferRequest {
  domain: string;
  hops?: number;
  from?: string;
  to?: string;
  params?: BpParamsIn;
}
