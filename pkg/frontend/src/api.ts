/** Typed client for the v1 HTTP API. */

export interface CandidateDoc {
  name: string;
  score: number;
  level: number | null;
}

export interface SessionDoc {
  session_id: string;
  state: "active" | "accepted" | "exhausted";
  mode: string;
  kind: string;
  label: string;
  route: number[];
  visited_levels: number[];
  evaluations: number;
  presented: CandidateDoc[];
  incomparable: string[];
  accepted: CandidateDoc | null;
  candidate: CandidateDoc | null;
}

export interface OpenSessionDoc {
  session_id: string;
  evaluations: number;
  candidate?: CandidateDoc;
  exhausted?: boolean;
}

export interface StepDoc {
  candidate?: CandidateDoc;
  exhausted?: boolean;
  evaluations: number;
}

export interface AcceptDoc {
  query_label: string;
  entity: string;
  score: number;
  rejections: number;
  evaluations: number;
}

export interface PartitionClassDoc {
  level: number;
  members: { name: string; score: number }[];
  reference: unknown;
}

export interface PartitionDoc {
  kind: string;
  classes: PartitionClassDoc[];
  assignment: Record<string, number>;
  policy: string;
  kb_fingerprint: string;
  pivot?: string;
}

export interface KbSummaryDoc {
  name: string;
  version: number;
  fingerprint: string;
  counts: { objects: number; goals: number; instances: number };
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function fail(response: Response): Promise<never> {
  let code = "http-error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body: keep the generic message
  }
  throw new ApiError(code, message, response.status);
}

export class ApiClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    const impl = fetchImpl ?? (globalThis.fetch as FetchLike);
    // bind so the client survives being handed around as a value
    this.fetchImpl = (input, init) => impl(input, init);
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) await fail(response);
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  kbSummary(): Promise<KbSummaryDoc> {
    return this.request("/v1/kb");
  }

  partition(): Promise<PartitionDoc> {
    return this.request("/v1/partition");
  }

  openSession(body: unknown): Promise<OpenSessionDoc> {
    return this.request("/v1/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  sessionState(sessionId: string): Promise<SessionDoc> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  reject(sessionId: string): Promise<StepDoc> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}/reject`, {
      method: "POST",
    });
  }

  accept(sessionId: string): Promise<AcceptDoc> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}/accept`, {
      method: "POST",
    });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}`, {
      method: "DELETE",
    });
  }
}
