// Thin typed client over the itinerary HTTP API.

import {
  ComparisonDoc,
  ExplorerConfig,
  ItineraryCollection,
  SummaryPage,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (err) {
    throw new ApiError(0, `network error: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private base: string) {}

  private url(path: string, params?: Record<string, string>): string {
    const u = new URL(path, this.base);
    if (params) {
      for (const [k, v] of Object.entries(params)) {
        if (v !== "") u.searchParams.set(k, v);
      }
    }
    return u.toString();
  }

  searchShips(q: string, filters: Record<string, string> = {}): Promise<SummaryPage> {
    return getJson(this.url("/ships", { q, ...filters }));
  }

  searchCaptains(q: string): Promise<SummaryPage> {
    return getJson(this.url("/captains", { q }));
  }

  itinerary(shipId: string): Promise<ItineraryCollection> {
    return getJson(this.url(`/itineraries/${encodeURIComponent(shipId)}`));
  }

  compare(a: string, b: string): Promise<ComparisonDoc> {
    return getJson(this.url("/itineraries/compare", { a, b }));
  }
}

export async function loadConfig(path = "config.json"): Promise<ExplorerConfig> {
  const raw = await getJson<Partial<ExplorerConfig>>(path);
  return {
    apiBaseUrl: raw.apiBaseUrl ?? "http://127.0.0.1:8000",
    tileUrl: raw.tileUrl ?? null,
    coastlineUrl: raw.coastlineUrl ?? null,
    stepperMode: raw.stepperMode === "wrap" ? "wrap" : "disable",
    offline: raw.offline ?? false,
  };
}
