import { ApiError, type Api } from "./api.js";
import type {
  CountsBy,
  CountsPayload,
  DatasetEntry,
  JobRequest,
  JobStatus,
  ParallelPayload,
  Preview,
  ResultArchive,
  ScatterPayload,
} from "./types.js";

export type Tab = "welcome" | "load" | "cluster" | "scatter" | "parallel";

export const TAB_ORDER: Tab[] = ["welcome", "load", "cluster", "scatter", "parallel"];

export const TAB_LABELS: Record<Tab, string> = {
  welcome: "Welcome",
  load: "Load Data",
  cluster: "Cluster",
  scatter: "Scatter Plot",
  parallel: "Parallel Plot",
};

/** Panel cap keeps the matrix plot responsive; users pick which variables. */
export const MAX_MATRIX_VARS = 6;

export type SelectionMethod = "cv" | "silhouette" | "calinski_harabasz";

export interface Session {
  tab: Tab;
  banner: string | null;
  note: string | null;
  datasets: DatasetEntry[];
  source: "upload" | "workspace";
  dataset: Preview | null;
  selectedVars: string[];
  matrixShown: boolean;
  subdomainHighlight: string | null;
  method: SelectionMethod;
  maxClusters: number;
  grid: { lo: number; hi: number; steps: number };
  hierMode: boolean;
  lambdaGlobal: number;
  lambdaLocal: number;
  jobId: string | null;
  job: JobStatus | null;
  resultId: string | null;
  result: ResultArchive | null;
  resultK: number;
  counts: CountsPayload | null;
  countsBy: CountsBy;
  viewVars: string[];
  scatter: ScatterPayload | null;
  parallel: ParallelPayload | null;
  highlight: number | "all";
  groupFilter: string | "all";
}

export function initialSession(): Session {
  return {
    tab: "welcome",
    banner: null,
    note: null,
    datasets: [],
    source: "workspace",
    dataset: null,
    selectedVars: [],
    matrixShown: false,
    subdomainHighlight: null,
    method: "calinski_harabasz",
    maxClusters: 20,
    grid: { lo: 1, hi: 50, steps: 25 },
    hierMode: true,
    lambdaGlobal: 2,
    lambdaLocal: 1,
    jobId: null,
    job: null,
    resultId: null,
    result: null,
    resultK: 0,
    counts: null,
    countsBy: "cluster",
    viewVars: [],
    scatter: null,
    parallel: null,
    highlight: "all",
    groupFilter: "all",
  };
}

function messageOf(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}

/** Session store. Holds all UI state, talks to the service, and notifies
 * subscribers after every change. Results are never mutated: every view
 * payload is stored exactly as the service returned it.
 *
 * Job discipline: at most one job in flight; status is polled every second
 * and a poll response whose job_id no longer matches the session's current
 * job is discarded as stale. */
export class Store {
  readonly session: Session;
  private listeners: (() => void)[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;
  private readonly pollMs: number;

  constructor(
    private readonly api: Api,
    opts: { pollMs?: number } = {},
  ) {
    this.session = initialSession();
    this.pollMs = opts.pollMs ?? 1000;
  }

  subscribe(fn: () => void): void {
    this.listeners.push(fn);
  }

  private touch(): void {
    for (const fn of this.listeners) fn();
  }

  private fail(err: unknown): void {
    this.session.banner = messageOf(err);
    this.touch();
  }

  // -- tabs ----------------------------------------------------------------

  setTab(tab: Tab): void {
    this.session.tab = tab;
    this.touch();
  }

  // -- load data -----------------------------------------------------------

  setSource(source: "upload" | "workspace"): void {
    this.session.source = source;
    this.touch();
  }

  async refreshDatasets(): Promise<void> {
    try {
      const reply = await this.api.listDatasets();
      this.session.datasets = reply.datasets;
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Load a workspace dataset and make it active. Any previous result and
   * its views belong to the old dataset, so they are cleared. */
  async openDataset(datasetId: string): Promise<void> {
    try {
      const preview = await this.api.preview(datasetId, 1000);
      const s = this.session;
      s.dataset = preview;
      s.selectedVars = preview.var_names.slice(0, MAX_MATRIX_VARS);
      s.matrixShown = false;
      s.subdomainHighlight = null;
      s.hierMode = preview.grouped;
      s.banner = null;
      s.note = null;
      this.clearJobAndResult();
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  async uploadDataset(filename: string, content: Blob): Promise<void> {
    try {
      const reply = await this.api.upload(filename, content);
      await this.refreshDatasets();
      await this.openDataset(reply.id);
    } catch (err) {
      this.fail(err);
    }
  }

  private clearJobAndResult(): void {
    this.stopPolling();
    const s = this.session;
    s.jobId = null;
    s.job = null;
    s.resultId = null;
    s.result = null;
    s.resultK = 0;
    s.counts = null;
    s.countsBy = "cluster";
    s.viewVars = [];
    s.scatter = null;
    s.parallel = null;
    s.highlight = "all";
    s.groupFilter = "all";
  }

  toggleVar(name: string): void {
    const s = this.session;
    const idx = s.selectedVars.indexOf(name);
    if (idx >= 0) {
      s.selectedVars.splice(idx, 1);
      s.note = null;
    } else if (s.selectedVars.length >= MAX_MATRIX_VARS) {
      s.note = `matrix plot shows at most ${MAX_MATRIX_VARS} variables; unselect one first`;
    } else {
      s.selectedVars.push(name);
      s.note = null;
    }
    this.touch();
  }

  produceMatrix(): void {
    this.session.matrixShown = true;
    this.touch();
  }

  setSubdomainHighlight(group: string | null): void {
    this.session.subdomainHighlight = group;
    this.touch();
  }

  // -- cluster job ---------------------------------------------------------

  setMethod(method: SelectionMethod): void {
    this.session.method = method;
    this.touch();
  }

  setMaxClusters(value: number): void {
    this.session.maxClusters = value;
    this.touch();
  }

  setGrid(lo: number, hi: number, steps: number): void {
    this.session.grid = { lo, hi, steps };
    this.touch();
  }

  setHierMode(on: boolean): void {
    this.session.hierMode = on;
    this.touch();
  }

  setLambdas(lambdaGlobal: number, lambdaLocal: number): void {
    this.session.lambdaGlobal = lambdaGlobal;
    this.session.lambdaLocal = lambdaLocal;
    this.touch();
  }

  inFlight(): boolean {
    const job = this.session.job;
    return job !== null && (job.state === "queued" || job.state === "running");
  }

  /** Submit the configured job. Refused (returns false) while another job
   * is in flight or when no dataset is active. */
  async runCluster(): Promise<boolean> {
    const s = this.session;
    if (this.inFlight()) return false;
    if (!s.dataset) {
      s.banner = "load a dataset first";
      this.touch();
      return false;
    }
    const body: JobRequest =
      s.dataset.grouped && s.hierMode
        ? {
            kind: "hcluster",
            dataset_id: s.dataset.id,
            params: { lambda_global: s.lambdaGlobal, lambda_local: s.lambdaLocal },
          }
        : {
            kind: "select",
            dataset_id: s.dataset.id,
            params: {
              method: s.method,
              grid: { lo: s.grid.lo, hi: s.grid.hi, steps: s.grid.steps },
              max_clusters: s.maxClusters,
            },
          };
    s.banner = null;
    try {
      const { job_id } = await this.api.submit(body);
      s.jobId = job_id;
      s.job = {
        job_id,
        kind: body.kind,
        dataset_id: body.dataset_id,
        state: "queued",
        progress: 0,
        result_id: null,
        error: null,
      };
      this.touch();
      this.startPolling(job_id);
      return true;
    } catch (err) {
      this.fail(err);
      return false;
    }
  }

  private startPolling(jobId: string): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      void this.pollOnce(jobId).then((terminal) => {
        if (terminal) this.stopPolling();
      });
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One poll tick. Returns true when this poller should stop (terminal
   * state or stale response). */
  async pollOnce(jobId: string): Promise<boolean> {
    let status: JobStatus;
    try {
      status = await this.api.job(jobId);
    } catch (err) {
      this.fail(err);
      return true;
    }
    if (status.job_id !== this.session.jobId) return true; // stale poll, discard
    this.session.job = status;
    if (status.state === "done" && status.result_id) {
      await this.activateResult(status.result_id);
      return true;
    }
    if (status.state === "failed") {
      this.session.banner = `clustering failed: ${status.error ?? "unknown error"}`;
      this.touch();
      return true;
    }
    this.touch();
    return false;
  }

  /** Fetch the archive and every plot payload for a finished result. */
  private async activateResult(resultId: string): Promise<void> {
    const s = this.session;
    try {
      const archive = await this.api.result(resultId);
      const counts = await this.api.counts(resultId, "cluster");
      const k = counts.by === "cluster" ? counts.labels.length : 0;
      const vars = (s.dataset?.var_names ?? []).slice(0, MAX_MATRIX_VARS);
      const scatter = await this.api.scatter(resultId, vars);
      const parallel = await this.api.parallel(resultId, vars);
      s.resultId = resultId;
      s.result = archive;
      s.resultK = k;
      s.counts = counts;
      s.countsBy = "cluster";
      s.viewVars = vars;
      s.scatter = scatter;
      s.parallel = parallel;
      s.highlight = "all";
      s.groupFilter = "all";
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  hierResult(): boolean {
    return this.session.result?.kind === "hcluster";
  }

  // -- result views --------------------------------------------------------

  async setCountsBy(by: CountsBy): Promise<void> {
    const s = this.session;
    if (!s.resultId) return;
    try {
      s.counts = await this.api.counts(s.resultId, by);
      s.countsBy = by;
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Reselect plot variables; refetches the views but never re-clusters. */
  async toggleViewVar(name: string): Promise<void> {
    const s = this.session;
    if (!s.resultId || !s.dataset) return;
    const idx = s.viewVars.indexOf(name);
    if (idx >= 0) {
      if (s.viewVars.length === 1) return; // keep at least one axis
      s.viewVars.splice(idx, 1);
    } else if (s.viewVars.length >= MAX_MATRIX_VARS) {
      s.note = `matrix plot shows at most ${MAX_MATRIX_VARS} variables; unselect one first`;
      this.touch();
      return;
    } else {
      s.viewVars.push(name);
    }
    s.note = null;
    await this.refetchViews();
  }

  private async refetchViews(): Promise<void> {
    const s = this.session;
    if (!s.resultId) return;
    try {
      const highlight = s.highlight === "all" ? undefined : s.highlight;
      s.scatter = await this.api.scatter(s.resultId, s.viewVars);
      s.parallel = await this.api.parallel(s.resultId, s.viewVars, highlight);
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  async setHighlight(highlight: number | "all"): Promise<void> {
    const s = this.session;
    if (!s.resultId) return;
    try {
      s.parallel = await this.api.parallel(
        s.resultId,
        s.viewVars,
        highlight === "all" ? undefined : highlight,
      );
      s.highlight = highlight;
      this.touch();
    } catch (err) {
      this.fail(err);
    }
  }

  setGroupFilter(group: string | "all"): void {
    this.session.groupFilter = group;
    this.touch();
  }
}
