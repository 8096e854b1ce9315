import type {
  ComputeResponse,
  HealthDoc,
  PinnedOutcome,
  TournamentDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly details: string[],
  ) {
    super(details.join("; ") || `request failed with status ${status}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Client for the probability service.  Exactly three endpoints exist and
 * the UI performs no other network access. */
export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  health(): Promise<HealthDoc> {
    return this.request("GET", "/health");
  }

  tournament(): Promise<TournamentDoc> {
    return this.request("GET", "/tournament");
  }

  compute(pins: readonly PinnedOutcome[]): Promise<ComputeResponse> {
    return this.request("POST", "/compute", { overrides: pins });
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetails(response));
    }
    return (await response.json()) as T;
  }
}

/** Pull human-readable messages out of an error body.  The service reports
 * either a list of strings or a list of validation objects under "detail". */
async function errorDetails(response: Response): Promise<string[]> {
  let payload: unknown;
  try {
    payload = await response.json();
  } catch {
    return [];
  }
  const detail = (payload as { detail?: unknown })?.detail;
  if (typeof detail === "string") {
    return [detail];
  }
  if (Array.isArray(detail)) {
    return detail.map((item) =>
      typeof item === "string" ? item : validationMessage(item),
    );
  }
  return [];
}

function validationMessage(item: unknown): string {
  if (item && typeof item === "object" && "msg" in item) {
    const { msg, loc } = item as { msg: unknown; loc?: unknown };
    const where = Array.isArray(loc) ? `${loc.join(".")}: ` : "";
    return where + String(msg);
  }
  return JSON.stringify(item);
}
