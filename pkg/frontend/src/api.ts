/** Thin typed client for the policygen service. All flow decisions come
 * from the server; this module only moves JSON. */

import type {
  AnswerValue,
  BankInfo,
  PolicyDocument,
  SessionView,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class PolicyApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      throw await this.toError(response);
    }
    return (await response.json()) as T;
  }

  private async toError(response: Response): Promise<ApiError> {
    let code = "http_error";
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { error?: { code?: string; message?: string } };
      if (body.error) {
        code = body.error.code ?? code;
        message = body.error.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the defaults
    }
    return new ApiError(response.status, code, message);
  }

  bank(): Promise<BankInfo> {
    return this.request<BankInfo>("/bank");
  }

  createSession(): Promise<SessionView> {
    return this.request<SessionView>("/sessions", { method: "POST" });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}`);
  }

  submitAnswer(id: string, qnum: string, value: AnswerValue): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ qnum, value }),
    });
  }

  amendAnswer(id: string, qnum: string, value: AnswerValue): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}/answers/${qnum}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ value }),
    });
  }

  preview(id: string): Promise<PolicyDocument> {
    return this.request<PolicyDocument>(`/sessions/${id}/preview`);
  }

  generateUrl(id: string, format: string): string {
    return `${this.base}/sessions/${id}/generate?format=${encodeURIComponent(format)}`;
  }

  async downloadPolicy(id: string, format: string): Promise<string> {
    const response = await this.fetchFn(this.generateUrl(id, format));
    if (!response.ok) {
      throw await this.toError(response);
    }
    return response.text();
  }
}
