/**
 * Typed client for the lexmerge verification service.
 *
 * The transport is injectable so tests (and future tooling) can run the
 * client against a scripted fake without a network.  All methods resolve
 * to parsed JSON or throw {@link ApiError} carrying the HTTP status and
 * the service's `detail` message when one is present.
 */

export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

export interface RankedAlternative {
  id: string;
  confidence: number;
  display: string;
  gloss: string;
}

/** Display payload for one queue item, exactly as the service sends it. */
export interface MatchPayload {
  kind: string;
  left: string;
  right: string;
  confidence: number;
  phase: string;
  left_display: string;
  right_display: string;
  left_gloss: string;
  right_gloss: string;
  alternatives: RankedAlternative[];
}

export interface MappingPayload {
  kind: string;
  headword: string;
  pos: string;
  group: number;
  translations: string[];
  field_code: string | null;
  stage: string;
  concept: string;
  confidence: number;
  alternatives: RankedAlternative[];
}

export type ItemPayload = MatchPayload | MappingPayload;

export interface Item {
  item_id: string;
  queue_id: string;
  index: number;
  kind: string;
  status: string;
  payload: ItemPayload;
}

export interface QueueStats {
  queue_id: string;
  total: number;
  judged: number;
  pct_correct: number | null;
  accepted: number;
  rejected: number;
  corrected: number;
  pending: number;
}

export interface VerdictAck {
  item: string;
  verdict: string;
  corrected: string | null;
  verifier: string;
  replayed: boolean;
}

export type Verdict = "accept" | "reject" | "correct";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

export interface ClientOptions {
  /** URL prefix, default "" (same origin). */
  base?: string;
  /** Value for the X-Verifier-Id header identifying this annotator. */
  verifier?: string;
  /** Transport override; defaults to the global fetch. */
  fetcher?: Fetcher;
}

export class Client {
  private readonly base: string;
  private readonly verifier: string;
  private readonly fetcher: Fetcher;

  constructor(options: ClientOptions = {}) {
    this.base = options.base ?? "";
    this.verifier = options.verifier ?? "anonymous";
    this.fetcher = options.fetcher ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const headers: Record<string, string> = { "X-Verifier-Id": this.verifier };
    if (init?.body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    const response = await this.fetcher(this.base + path, { ...init, headers });
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body: unknown = await response.json();
        if (
          typeof body === "object" && body !== null &&
          typeof (body as { detail?: unknown }).detail === "string"
        ) {
          detail = (body as { detail: string }).detail;
        }
      } catch {
        // Non-JSON error body; keep the generic message.
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  async listQueues(): Promise<QueueStats[]> {
    const response = await this.request("/api/queues");
    return (await response.json()) as QueueStats[];
  }

  async stats(queueId: string): Promise<QueueStats> {
    const response = await this.request(
      `/api/queues/${encodeURIComponent(queueId)}/stats`,
    );
    return (await response.json()) as QueueStats;
  }

  /** Lease the next pending item, or null once the queue is drained (204). */
  async nextItem(queueId: string): Promise<Item | null> {
    const response = await this.request(
      `/api/queues/${encodeURIComponent(queueId)}/next`,
    );
    if (response.status === 204) {
      return null;
    }
    return (await response.json()) as Item;
  }

  async submitVerdict(
    itemId: string,
    verdict: Verdict,
    corrected: string | null = null,
    idempotencyKey: string | null = null,
  ): Promise<VerdictAck> {
    const response = await this.request(
      `/api/items/${encodeURIComponent(itemId)}/verdict`,
      {
        method: "POST",
        body: JSON.stringify({
          verdict,
          corrected,
          idempotency_key: idempotencyKey,
        }),
      },
    );
    return (await response.json()) as VerdictAck;
  }
}
