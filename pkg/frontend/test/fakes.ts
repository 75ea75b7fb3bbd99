import { ApiError, type Api } from "../src/api.js";
import { Store } from "../src/state.js";
import type {
  CountsBy,
  CountsPayload,
  DatasetEntry,
  DatasetList,
  JobRequest,
  JobStatus,
  ParallelPayload,
  Preview,
  ResultArchive,
  ScatterPayload,
  UploadReply,
} from "../src/types.js";

export interface Fixture {
  preview: Preview;
  labels: number[];
  kind: "cluster" | "hcluster";
  archive: ResultArchive;
}

/** Scripted service double. Mirrors the server's view logic (projection,
 * dimming, counts marginals, the hierarchical-only 409) so view tests see
 * the same payload shapes the real service produces. */
export class FakeApi implements Api {
  datasets: DatasetEntry[] = [];
  previews = new Map<string, Preview>();
  fixtures = new Map<string, Fixture>();
  submits: JobRequest[] = [];
  jobs = new Map<string, JobStatus>();
  uploads: string[] = [];
  uploadReply: UploadReply | null = null;
  jobCalls = 0;
  scatterCalls = 0;
  parallelCalls = 0;
  private nextJob = 0;

  async listDatasets(): Promise<DatasetList> {
    return { datasets: [...this.datasets] };
  }

  async upload(filename: string, _content: Blob): Promise<UploadReply> {
    this.uploads.push(filename);
    if (!this.uploadReply) throw new ApiError(400, "upload not configured");
    return this.uploadReply;
  }

  async preview(datasetId: string, _rows?: number): Promise<Preview> {
    const p = this.previews.get(datasetId);
    if (!p) throw new ApiError(404, `unknown dataset '${datasetId}'`);
    return structuredClone(p);
  }

  async submit(body: JobRequest): Promise<{ job_id: string }> {
    this.submits.push(structuredClone(body));
    const job_id = `job${this.nextJob++}`;
    this.jobs.set(job_id, {
      job_id,
      kind: body.kind,
      dataset_id: body.dataset_id,
      state: "queued",
      progress: 0,
      result_id: null,
      error: null,
    });
    return { job_id };
  }

  async job(jobId: string): Promise<JobStatus> {
    this.jobCalls++;
    const j = this.jobs.get(jobId);
    if (!j) throw new ApiError(404, `unknown job '${jobId}'`);
    return structuredClone(j);
  }

  setJob(jobId: string, patch: Partial<JobStatus>): void {
    Object.assign(this.jobs.get(jobId)!, patch);
  }

  finishJob(jobId: string, resultId: string): void {
    this.setJob(jobId, { state: "done", progress: 1, result_id: resultId });
  }

  failJob(jobId: string, error: string): void {
    this.setJob(jobId, { state: "failed", progress: 1, error });
  }

  private fixtureOf(resultId: string): Fixture {
    const f = this.fixtures.get(resultId);
    if (!f) throw new ApiError(404, `unknown result '${resultId}'`);
    return f;
  }

  async result(resultId: string): Promise<ResultArchive> {
    return structuredClone(this.fixtureOf(resultId).archive);
  }

  private project(f: Fixture, vars?: string[]): { names: string[]; idx: number[] } {
    const names = vars && vars.length > 0 ? vars : f.preview.var_names;
    const bad = names.filter((v) => !f.preview.var_names.includes(v));
    if (bad.length > 0)
      throw new ApiError(422, `unknown variables ${JSON.stringify(bad)}`, {
        valid: f.preview.var_names,
      });
    return { names, idx: names.map((v) => f.preview.var_names.indexOf(v)) };
  }

  async scatter(resultId: string, vars?: string[]): Promise<ScatterPayload> {
    this.scatterCalls++;
    const f = this.fixtureOf(resultId);
    const { names, idx } = this.project(f, vars);
    const out: ScatterPayload = {
      vars: names,
      row_ids: [...f.preview.row_ids],
      values: f.preview.rows.map((row) => idx.map((i) => row[i])),
      cluster: [...f.labels],
    };
    if (f.preview.grouped) out.group = [...(f.preview.group ?? [])];
    return out;
  }

  async parallel(
    resultId: string,
    vars?: string[],
    highlight?: number,
  ): Promise<ParallelPayload> {
    this.parallelCalls++;
    const f = this.fixtureOf(resultId);
    const { names, idx } = this.project(f, vars);
    const k = Math.max(...f.labels) + 1;
    if (highlight !== undefined && (highlight < 0 || highlight >= k))
      throw new ApiError(422, `highlight cluster ${highlight} out of range`, {
        valid: [...Array(k).keys()],
      });
    return {
      vars: names,
      lines: f.preview.rows.map((row, i) => ({
        row_id: f.preview.row_ids[i],
        values: idx.map((j) => row[j]),
        cluster: f.labels[i],
        dimmed: highlight !== undefined && f.labels[i] !== highlight,
      })),
    };
  }

  async counts(resultId: string, by: CountsBy): Promise<CountsPayload> {
    const f = this.fixtureOf(resultId);
    const k = Math.max(...f.labels) + 1;
    if (by === "cluster") {
      const counts = Array(k).fill(0);
      for (const lab of f.labels) counts[lab]++;
      return { by: "cluster", labels: [...Array(k).keys()], counts };
    }
    if (f.kind !== "hcluster")
      throw new ApiError(409, `counts by '${by}' requires a hierarchical result`);
    const names = f.preview.group_names ?? [];
    const gidx = new Map(names.map((g, i) => [g, i]));
    if (by === "group") {
      const counts = Array(names.length).fill(0);
      for (const g of f.preview.group ?? []) counts[gidx.get(g)!]++;
      return { by: "group", labels: names, counts };
    }
    const table = names.map(() => Array(k).fill(0) as number[]);
    (f.preview.group ?? []).forEach((g, i) => {
      table[gidx.get(g)!][f.labels[i]]++;
    });
    return { by: "cluster_x_group", groups: names, clusters: [...Array(k).keys()], table };
  }
}

// -- fixtures ---------------------------------------------------------------

/** 9 rows, 4 variables, three planted clusters of 3. */
export function singleFixture(api: FakeApi): { datasetId: string; resultId: string } {
  const datasetId = "blobs3";
  const rows = [
    [0.0, 0.1, 0.2, 0.0],
    [0.1, 0.0, 0.1, 0.1],
    [0.2, 0.2, 0.0, 0.2],
    [10.0, 10.1, 10.0, 10.2],
    [10.1, 10.0, 10.2, 10.0],
    [10.2, 10.2, 10.1, 10.1],
    [20.0, 0.1, 20.0, 0.0],
    [20.1, 0.0, 20.2, 0.1],
    [20.2, 0.2, 20.1, 0.2],
  ];
  const preview: Preview = {
    id: datasetId,
    n: 9,
    d: 4,
    var_names: ["w", "x", "y", "z"],
    row_ids: rows.map((_, i) => `r${i}`),
    rows,
    grouped: false,
  };
  api.datasets.push({ id: datasetId, n: 9, d: 4, sha256: "0".repeat(64) });
  api.previews.set(datasetId, preview);
  const labels = [0, 0, 0, 1, 1, 1, 2, 2, 2];
  const resultId = "res-blobs3";
  api.fixtures.set(resultId, {
    preview,
    labels,
    kind: "cluster",
    archive: {
      schema_version: 1,
      kind: "cluster",
      config: { lambda: 34, max_clusters: 20 },
      partition: { labels, k: 3, sizes: [3, 3, 3], objective: 102.5 },
      selection_report: {
        method: "calinski_harabasz",
        grid: [18, 34, 50],
        scores: [120.0, 240.0, 180.0],
        chosen_lambda: 34,
        chosen_k: 3,
      },
      timings: { fit_seconds: 0.01 },
    },
  });
  return { datasetId, resultId };
}

/** Six 2-D points in sub-domains A (4 rows) and B (2), two global clusters. */
export function groupedFixture(api: FakeApi): { datasetId: string; resultId: string } {
  const datasetId = "sixpoint";
  const rows = [
    [0.0, 0.0],
    [0.1, 0.0],
    [10.0, 0.0],
    [10.1, 0.0],
    [0.05, 1.0],
    [9.95, 1.0],
  ];
  const preview: Preview = {
    id: datasetId,
    n: 6,
    d: 2,
    var_names: ["x", "y"],
    row_ids: rows.map((_, i) => `r${i}`),
    rows,
    grouped: true,
    group: ["A", "A", "A", "A", "B", "B"],
    group_names: ["A", "B"],
  };
  api.datasets.push({ id: datasetId, n: 6, d: 2, sha256: "1".repeat(64) });
  api.previews.set(datasetId, preview);
  const labels = [0, 0, 1, 1, 0, 1];
  const resultId = "res-six";
  api.fixtures.set(resultId, {
    preview,
    labels,
    kind: "hcluster",
    archive: {
      schema_version: 1,
      kind: "hcluster",
      config: { lambda_global: 2, lambda_local: 1 },
      hier_partition: { k_global: 2 },
      timings: { fit_seconds: 0.005 },
    },
  });
  return { datasetId, resultId };
}

export function makeStore(api: FakeApi, pollMs: number = 1 << 30): Store {
  return new Store(api, { pollMs });
}

/** Submit the configured job and drive it straight to done. */
export async function runToDone(
  store: Store,
  api: FakeApi,
  resultId: string,
): Promise<boolean> {
  const ok = await store.runCluster();
  if (!ok) return false;
  const jobId = store.session.jobId!;
  api.finishJob(jobId, resultId);
  await store.pollOnce(jobId);
  store.stopPolling();
  return true;
}
