/** Thin typed client for the qplumb HTTP API; no UI state lives here. */

import type {
  LayoutDoc,
  OpSchema,
  ReportDoc,
  SessionSummary,
  StageRequest,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly type: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    if (!response.ok) {
      let type = "HttpError";
      let message = text || response.statusText;
      try {
        const doc = JSON.parse(text);
        type = doc.error?.type ?? type;
        message = doc.error?.message ?? message;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(response.status, type, message);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body ?? {}),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/v1/health");
  }

  async ops(): Promise<OpSchema[]> {
    const doc = await this.request<{ ops: OpSchema[] }>("/v1/ops");
    return doc.ops;
  }

  runPipeline(stages: StageRequest[], input: string[] = []): Promise<string[]> {
    return this.post<{ output: string[] }>("/v1/pipeline", { stages, input }).then(
      (doc) => doc.output,
    );
  }

  async createSession(): Promise<string> {
    const doc = await this.post<{ id: string }>("/v1/session");
    return doc.id;
  }

  apply(sessionId: string, stage: StageRequest): Promise<SessionSummary> {
    return this.post(`/v1/session/${sessionId}/apply`, { stage });
  }

  undo(sessionId: string): Promise<SessionSummary> {
    return this.post(`/v1/session/${sessionId}/undo`);
  }

  redo(sessionId: string): Promise<SessionSummary> {
    return this.post(`/v1/session/${sessionId}/redo`);
  }

  circuit(sessionId: string): Promise<{ lines: string[]; digest: string }> {
    return this.request(`/v1/session/${sessionId}/circuit`);
  }

  layout(sessionId: string): Promise<LayoutDoc> {
    return this.request(`/v1/session/${sessionId}/layout`);
  }

  report(sessionId: string): Promise<ReportDoc> {
    return this.request(`/v1/session/${sessionId}/report`);
  }

  downloadUrl(sessionId: string, artifact: "circuit" | "layout" | "report"): string {
    return `${this.baseUrl}/v1/session/${sessionId}/download/${artifact}`;
  }
}
