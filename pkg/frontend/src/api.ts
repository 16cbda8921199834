/** Typed client for the play server's JSON API.
 *
 * Every shape here mirrors a server response verbatim; the console never
 * derives game quantities itself.
 */

export type ProcessName =
  | "halve-or-double"
  | "double-only"
  | "halve-only"
  | "allocate-first"
  | "allocate-second";

export type DecisionName = "switch" | "stay" | "indifferent";
export type Action = "switch" | "stay";

export interface CatalogEntry {
  name: string;
  kind: "discrete" | "continuous";
  proper: boolean;
  params: Record<string, string>;
  description: string;
}

export interface Recommendation {
  decision: DecisionName;
  expected_benefit: number | null;
  attainable: boolean;
}

export interface BenefitReport {
  y: number;
  numerator: number;
  denominator: number;
  expected_benefit: number | null;
  decision: DecisionName;
  attainable: boolean;
}

export interface EvalResponse {
  density: string;
  process: string;
  report: BenefitReport;
  strategy: { decision: DecisionName; value: number } | null;
}

export interface SessionSettings {
  density: string;
  process: ProcessName;
  seed: number;
  blind?: boolean;
  coach?: boolean;
}

export interface SessionDescriptor {
  id: string;
  density: { kind: string; name: string; [extra: string]: unknown };
  process: string;
  seed: number;
  blind: boolean;
  coach: boolean;
}

export interface DealResponse {
  play_index: number;
  /** null while a blind session hides the revealed amount */
  y: number | null;
  /** present only when the session was created with coach mode */
  recommendation?: Recommendation;
}

export interface Totals {
  plays: number;
  user: number;
  always_switch: number;
  never_switch: number;
  analytic_optimal: number;
}

export interface PlayRow {
  play_index: number;
  y: number;
  z: number;
  b: number;
  action: Action;
  realized_gain: number;
  recommendation: Recommendation;
}

export interface DecideResponse extends PlayRow {
  totals: Totals;
}

export interface HistoryResponse extends SessionDescriptor {
  plays: PlayRow[];
  totals: Totals;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  const text = await res.text();
  let body: unknown = null;
  if (text) {
    try {
      body = JSON.parse(text);
    } catch {
      body = null;
    }
  }
  if (!res.ok) {
    const detail =
      body !== null && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `HTTP ${res.status}`;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

function post<T>(url: string, payload: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

/** All endpoints, rooted at `base` ("" means same origin). */
export class Api {
  constructor(readonly base: string = "") {}

  catalog(): Promise<{ densities: CatalogEntry[] }> {
    return request(`${this.base}/api/catalog`);
  }

  evaluate(density: string, process: string, y: number): Promise<EvalResponse> {
    return post(`${this.base}/api/eval`, { density, process, y });
  }

  createSession(settings: SessionSettings): Promise<SessionDescriptor> {
    return post(`${this.base}/api/session`, settings);
  }

  deal(sessionId: string): Promise<DealResponse> {
    return post(`${this.base}/api/session/${sessionId}/deal`, {});
  }

  decide(sessionId: string, playIndex: number, action: Action): Promise<DecideResponse> {
    return post(`${this.base}/api/session/${sessionId}/decide`, {
      play_index: playIndex,
      action,
    });
  }

  history(sessionId: string): Promise<HistoryResponse> {
    return request(`${this.base}/api/session/${sessionId}/history`);
  }
}
