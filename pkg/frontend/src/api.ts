/** Typed client for the triage service HTTP API. */

export type Label = "N" | "D" | "H";

export interface RuleHit {
  rule: string;
  family: string;
  label: Label;
  start: number;
  end: number;
}

export interface VulgarityHit {
  surface: string;
  canonical: string;
  via: string;
  start: number;
  end: number;
}

export interface Affect {
  emotive: boolean;
  emotive_value: number;
  emotions: string[];
}

export interface Highlight {
  start: number;
  end: number;
  kind: string;
  detail: string;
}

export interface MachineScore {
  model_version: number;
  label: Label;
  svm_score: number;
  svm_harmful: boolean;
  rule_label: Label;
  rule_hits: RuleHit[];
  vulgarity_hits: VulgarityHit[];
  affect: Affect;
  highlights: Highlight[];
}

export interface Decision {
  label: Label;
  reviewer: string;
  note: string;
  decided_at: string;
}

export interface Entry {
  id: string;
  text: string;
  source: string;
  timestamp: string;
  machine: MachineScore;
  decision: Decision | null;
}

export interface QueuePage {
  total: number;
  page: number;
  page_size: number;
  items: Entry[];
}

export interface ModelInfo {
  version: number;
  cell: string;
  features: number;
  decisions_since_retrain: number;
  min_new_decisions: number;
  entries_total: number;
  entries_pending: number;
}

export interface RetrainResult {
  model_version: number;
  trained_on: number;
  rescored: number;
  objective: number;
}

export type QueueStatus = "pending" | "decided" | "all";

export interface QueueQuery {
  status: QueueStatus;
  page: number;
  page_size: number;
  label?: Label;
}

/** Failed request; status 0 means the service could not be reached at all. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(status === 0 ? detail : `${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export class TriageApi {
  private readonly fetchFn: typeof fetch;

  constructor(
    private readonly baseUrl: string,
    fetchFn?: typeof fetch,
  ) {
    // wrap so the default fetch keeps its expected receiver in browsers
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  queue(query: QueueQuery): Promise<QueuePage> {
    const params = new URLSearchParams({
      status: query.status,
      page: String(query.page),
      page_size: String(query.page_size),
    });
    if (query.label) params.set("label", query.label);
    return this.request<QueuePage>("GET", `/queue?${params}`);
  }

  entry(id: string): Promise<Entry> {
    return this.request<Entry>("GET", `/entries/${encodeURIComponent(id)}`);
  }

  ingest(body: { id?: string; text: string; source?: string; timestamp?: string }): Promise<Entry> {
    return this.request<Entry>("POST", "/entries", body);
  }

  decide(id: string, body: { label: Label; reviewer: string; note?: string }): Promise<Entry> {
    return this.request<Entry>("POST", `/entries/${encodeURIComponent(id)}/decision`, body);
  }

  retrain(): Promise<RetrainResult> {
    return this.request<RetrainResult>("POST", "/retrain");
  }

  model(): Promise<ModelInfo> {
    return this.request<ModelInfo>("GET", "/model");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch {
      throw new ApiError(0, "service unreachable");
    }
    if (!res.ok) {
      let detail = res.statusText || `HTTP ${res.status}`;
      try {
        const data = (await res.json()) as { detail?: unknown };
        if (typeof data.detail === "string") detail = data.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }
}
