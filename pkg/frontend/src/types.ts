/** Payload shapes of the clustering service under /api/v1. */

export interface DatasetEntry {
  id: string;
  n: number;
  d: number;
  sha256: string;
}

export interface DatasetList {
  datasets: DatasetEntry[];
}

export interface UploadReply {
  id: string;
  n: number;
  d: number;
  var_names: string[];
  grouped: boolean;
}

export interface Preview {
  id: string;
  n: number;
  d: number;
  var_names: string[];
  row_ids: string[];
  rows: number[][];
  grouped: boolean;
  group?: string[];
  group_names?: string[];
}

export type JobKind = "cluster" | "hcluster" | "select";

export interface JobRequest {
  kind: JobKind;
  dataset_id: string;
  params: Record<string, unknown>;
}

export type JobState = "queued" | "running" | "done" | "failed";

export interface JobStatus {
  job_id: string;
  kind: JobKind;
  dataset_id: string;
  state: JobState;
  progress: number;
  result_id: string | null;
  error: string | null;
}

/** Versioned result archive; the UI treats it as read-only. */
export interface ResultArchive {
  schema_version: number;
  kind: "cluster" | "hcluster";
  config: Record<string, unknown>;
  partition?: { labels: number[]; k: number; sizes: number[]; objective: number };
  hier_partition?: unknown;
  selection_report?: {
    method: string;
    grid: number[];
    scores: (number | null | "infinite")[];
    chosen_lambda: number;
    chosen_k: number | null;
  } | null;
  timings: Record<string, number>;
}

export interface ScatterPayload {
  vars: string[];
  row_ids: string[];
  values: number[][];
  cluster: number[];
  group?: string[];
}

export interface ParallelLine {
  row_id: string;
  values: number[];
  cluster: number;
  dimmed: boolean;
}

export interface ParallelPayload {
  vars: string[];
  lines: ParallelLine[];
}

export type CountsBy = "cluster" | "group" | "cluster_x_group";

export interface OneWayCounts {
  by: "cluster" | "group";
  labels: (number | string)[];
  counts: number[];
}

export interface TwoWayCounts {
  by: "cluster_x_group";
  groups: string[];
  clusters: number[];
  table: number[][];
}

export type CountsPayload = OneWayCounts | TwoWayCounts;
