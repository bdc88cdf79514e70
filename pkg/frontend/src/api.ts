import type {
  AlternativesResponse,
  CoverageResponse,
  DemographicsResponse,
  EligibilityResponse,
  HealthResponse,
  MatchesResponse,
  ServicesResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Thin typed client over the compass-kg HTTP API. */
export class CompassApi {
  constructor(private base: string = "") {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const url = new URL(this.base + path, this.base ? undefined : window.location.href);
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value) url.searchParams.set(key, value);
    }
    const res = await fetch(url.toString());
    if (!res.ok) {
      const body = await res.json().catch(() => ({ code: "unknown", message: res.statusText }));
      throw new ApiError(res.status, body.code ?? "unknown", body.message ?? res.statusText);
    }
    return (await res.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.get("/health");
  }

  services(params?: { codeClass?: string; location?: string }): Promise<ServicesResponse> {
    return this.get("/services", params as Record<string, string>);
  }

  matches(client: string): Promise<MatchesResponse> {
    return this.get(`/clients/${encodeURIComponent(client)}/matches`);
  }

  eligibility(client: string): Promise<EligibilityResponse> {
    return this.get(`/clients/${encodeURIComponent(client)}/eligibility`);
  }

  alternatives(satisfier: string, profile: string, exclude: string[]): Promise<AlternativesResponse> {
    return this.get("/alternatives", {
      satisfier,
      profile,
      exclude: exclude.join(","),
    });
  }

  demographics(): Promise<DemographicsResponse> {
    return this.get("/coverage/demographics");
  }

  gaps(): Promise<CoverageResponse> {
    return this.get("/coverage/gaps");
  }
}
