import type {
  CountsBy,
  CountsPayload,
  DatasetList,
  JobRequest,
  JobStatus,
  ParallelPayload,
  Preview,
  ResultArchive,
  ScatterPayload,
  UploadReply,
} from "./types.js";

/** Service client interface; tests substitute a scripted fake. */
export interface Api {
  listDatasets(): Promise<DatasetList>;
  upload(filename: string, content: Blob): Promise<UploadReply>;
  preview(datasetId: string, rows?: number): Promise<Preview>;
  submit(body: JobRequest): Promise<{ job_id: string }>;
  job(jobId: string): Promise<JobStatus>;
  result(resultId: string): Promise<ResultArchive>;
  scatter(resultId: string, vars?: string[]): Promise<ScatterPayload>;
  parallel(resultId: string, vars?: string[], highlight?: number): Promise<ParallelPayload>;
  counts(resultId: string, by: CountsBy): Promise<CountsPayload>;
}

/** Error carrying the service's {code, message, details} envelope. */
export class ApiError extends Error {
  constructor(
    readonly code: number,
    message: string,
    readonly details: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** fetch-based client; `base` is the API base URL ("" for same origin). */
export class HttpApi implements Api {
  constructor(readonly base: string = "") {}

  private url(path: string, query?: Record<string, string | undefined>): string {
    let u = `${this.base}/api/v1${path}`;
    if (query) {
      const params = new URLSearchParams();
      for (const [key, value] of Object.entries(query)) {
        if (value !== undefined) params.set(key, value);
      }
      const qs = params.toString();
      if (qs) u += `?${qs}`;
    }
    return u;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(path, init);
    const body = await resp.json().catch(() => null);
    if (!resp.ok) {
      const env = body as { code?: number; message?: string; details?: unknown } | null;
      throw new ApiError(env?.code ?? resp.status, env?.message ?? resp.statusText, env?.details);
    }
    return body as T;
  }

  listDatasets(): Promise<DatasetList> {
    return this.request(this.url("/datasets"));
  }

  upload(filename: string, content: Blob): Promise<UploadReply> {
    const form = new FormData();
    form.append("file", content, filename);
    return this.request(this.url("/datasets"), { method: "POST", body: form });
  }

  preview(datasetId: string, rows = 10): Promise<Preview> {
    return this.request(this.url(`/datasets/${datasetId}/preview`, { rows: String(rows) }));
  }

  submit(body: JobRequest): Promise<{ job_id: string }> {
    return this.request(this.url("/jobs"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  job(jobId: string): Promise<JobStatus> {
    return this.request(this.url(`/jobs/${jobId}`));
  }

  result(resultId: string): Promise<ResultArchive> {
    return this.request(this.url(`/results/${resultId}`));
  }

  scatter(resultId: string, vars?: string[]): Promise<ScatterPayload> {
    return this.request(this.url(`/results/${resultId}/scatter`, { vars: vars?.join(",") }));
  }

  parallel(resultId: string, vars?: string[], highlight?: number): Promise<ParallelPayload> {
    return this.request(
      this.url(`/results/${resultId}/parallel`, {
        vars: vars?.join(","),
        highlight: highlight === undefined ? undefined : String(highlight),
      }),
    );
  }

  counts(resultId: string, by: CountsBy): Promise<CountsPayload> {
    return this.request(this.url(`/results/${resultId}/counts`, { by }));
  }
}
