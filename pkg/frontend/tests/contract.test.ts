// Contract tests against recorded API responses: every number the UI shows
// must be traceable to a response field, and the session logic must hold its
// invariants without a server.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  applyAlternatives,
  beginRequest,
  buildCards,
  candidateCards,
  draftIsEmpty,
  emptyDraft,
  markApplied,
  newSession,
  rejectService,
  selectableCodeIds,
  setOptions,
  shouldApply,
  toggleCode,
  toggleNeed,
  unreject,
} from "../src/state.js";
import { renderCards, renderDashboard, renderPromptState } from "../src/render.js";
import type {
  AlternativesResponse,
  CoverageResponse,
  DemographicsResponse,
  EligibilityResponse,
  MatchesResponse,
  ServicesResponse,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function recorded<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

const matches16 = recorded<MatchesResponse>("matches_client16.json");
const eligibility16 = recorded<EligibilityResponse>("eligibility_client16.json");
const eligibility101 = recorded<EligibilityResponse>("eligibility_client101.json");
const servicesPayload = recorded<ServicesResponse>("services.json");
const housingAlternatives = recorded<AlternativesResponse>("alternatives_housing.json");
const afterRejection = recorded<AlternativesResponse>("alternatives_reject_s17.json");
const demographics = recorded<DemographicsResponse>("demographics.json");
const gaps = recorded<CoverageResponse>("gaps.json");

describe("match view", () => {
  it("lists the five recorded services for the Client16 profile", () => {
    const cards = buildCards(matches16, eligibility16);
    expect(cards).toHaveLength(5);
    expect(cards.every((c) => c.badge.kind === "eligible")).toBe(true);
    const html = renderCards(cards);
    for (const match of matches16.matches) {
      expect(html).toContain(match.service.prefixed!);
    }
  });

  it("shows a barrier badge when a requirement is unmet", () => {
    const matches: MatchesResponse = {
      client: eligibility101.client,
      matches: eligibility101.barriers.map((b) => ({
        service: b.service,
        label: null,
        codes: [],
        matchedSatisfiers: [],
        requirements: [{ characteristic: b.unmetCharacteristic, label: b.unmetLabel }],
      })),
    };
    const cards = buildCards(matches, eligibility101);
    expect(cards.length).toBeGreaterThan(0);
    for (const card of cards) {
      expect(card.badge.kind).toBe("barrier");
    }
    const html = renderCards(cards);
    expect(html).toContain("barrier:");
    expect(html).toContain(eligibility101.barriers[0].unmetCharacteristic.prefixed!);
  });

  it("shows the removal hint when the API provides one", () => {
    const withHint: EligibilityResponse = {
      ...eligibility101,
      barriers: [
        {
          ...eligibility101.barriers[0],
          removalServiceType: { type: "iri", value: "x", prefixed: "cp:INST-ID_Clinic" },
        },
      ],
    };
    const matches: MatchesResponse = {
      client: withHint.client,
      matches: [
        {
          service: withHint.barriers[0].service,
          label: null,
          codes: [],
          matchedSatisfiers: [],
          requirements: [],
        },
      ],
    };
    const html = renderCards(buildCards(matches, withHint));
    expect(html).toContain("cp:INST-ID_Clinic");
  });

  it("renders a prompt and fires nothing for an empty profile", () => {
    expect(draftIsEmpty(emptyDraft())).toBe(true);
    expect(renderPromptState()).toContain('data-role="prompt"');
  });
});

describe("rejection loop", () => {
  function sessionWithHousingOptions() {
    let session = newSession();
    session = setOptions(session, candidateCards(housingAlternatives));
    return session;
  }

  it("one rejection in the recorded scenario leaves exactly one option", () => {
    let session = sessionWithHousingOptions();
    expect(session.options).toHaveLength(2);
    const { session: next, request } = rejectService(session, "cp:S17-Female-Shelter");
    expect(request).not.toBeNull();
    expect(request!.satisfier).toBe("cp:NS-Housing");
    expect(request!.profile).toBe("cp:Comp-Inst-Female-Homeless-Area0");
    expect(request!.exclude).toEqual(["cp:S17-Female-Shelter"]);
    session = applyAlternatives(next, candidateCards(afterRejection));
    expect(session.options).toHaveLength(1);
    expect(session.options![0].id).toBe("cp:S10-1-Shelter");
  });

  it("is monotone: a replan response never adds services", () => {
    let session = sessionWithHousingOptions();
    const before = new Set(session.options!.map((c) => c.id));
    const { session: next } = rejectService(session, "cp:S17-Female-Shelter");
    const sneaky: AlternativesResponse = {
      services: [
        ...afterRejection.services,
        {
          service: { type: "iri", value: "http://x/new", prefixed: "cp:S-New" },
          label: null,
          codes: [],
          matchedSatisfiers: [],
          requirements: [],
        },
      ],
    };
    session = applyAlternatives(next, candidateCards(sneaky));
    for (const card of session.options!) {
      expect(before.has(card.id)).toBe(true);
      expect(card.id).not.toBe("cp:S17-Female-Shelter");
    }
  });

  it("rejecting everything reaches the empty state with a gap link", () => {
    let session = sessionWithHousingOptions();
    for (const id of ["cp:S17-Female-Shelter", "cp:S10-1-Shelter"]) {
      const { session: next } = rejectService(session, id);
      session = next;
    }
    session = applyAlternatives(session, []);
    const html = renderCards(session.options!);
    expect(html).toContain('data-role="no-options"');
    expect(html).toContain('data-role="gap-link"');
  });

  it("un-reject restores the prior list", () => {
    let session = sessionWithHousingOptions();
    const before = session.options!.map((c) => c.id);
    const { session: next } = rejectService(session, "cp:S17-Female-Shelter");
    session = applyAlternatives(next, candidateCards(afterRejection));
    session = unreject(session);
    expect(session.options!.map((c) => c.id)).toEqual(before);
    expect(session.rejected).toHaveLength(0);
  });
});

describe("dashboard", () => {
  it("renders demographics verbatim in server order, top count first", () => {
    const html = renderDashboard(demographics, gaps);
    const counts = [...html.matchAll(/data-role="demo-count">(\d+)</g)].map((m) => Number(m[1]));
    expect(counts).toEqual(demographics.rows.map((r) => r.count));
    expect(counts[0]).toBe(18);
  });

  it("shows empty-state panels when coverage is clean", () => {
    const html = renderDashboard(demographics, gaps);
    expect(gaps.gaps).toHaveLength(0);
    expect(html).toContain('data-role="gaps-empty"');
    expect(html).toContain('data-role="duplicates-empty"');
  });

  it("shows gap rows when the API reports them", () => {
    const withGap: CoverageResponse = {
      gaps: [
        {
          location: { type: "iri", value: "http://x/a0", prefixed: "cp:Area0_Location" },
          satisfier: { type: "iri", value: "http://x/ns", prefixed: "cp:NS-Housing" },
          demandingClients: 7,
        },
      ],
      duplicates: [],
    };
    const html = renderDashboard(demographics, withGap);
    expect(html).toContain('data-role="gap"');
    expect(html).toContain("cp:NS-Housing");
    expect(html).toContain("7 demanding");
  });

  it("renders the empty-usage state", () => {
    const html = renderDashboard({ total: 0, rows: [] }, gaps);
    expect(html).toContain('data-role="demo-empty"');
  });
});

describe("profile draft", () => {
  it("only codes from the taxonomy payload are selectable", () => {
    const ids = selectableCodeIds(servicesPayload);
    expect(ids.has("cp:INST-Female")).toBe(true);
    let draft = emptyDraft();
    draft = toggleCode(draft, servicesPayload, "cp:CL-Gender", "cp:INST-Female");
    expect(draft.codes["cp:CL-Gender"]).toEqual(["cp:INST-Female"]);
    const unchanged = toggleCode(draft, servicesPayload, "cp:CL-Gender", "cp:INST-Made-Up");
    expect(unchanged).toBe(draft);
  });

  it("toggling twice clears the selection", () => {
    let draft = emptyDraft();
    draft = toggleNeed(draft, "cp:NS-Housing");
    draft = toggleNeed(draft, "cp:NS-Housing");
    expect(draft.needs).toEqual([]);
    expect(draftIsEmpty(draft)).toBe(true);
  });
});

describe("request sequencing", () => {
  it("drops stale responses (last write wins)", () => {
    let session = newSession();
    const first = beginRequest(session);
    session = first.session;
    const second = beginRequest(session);
    session = second.session;
    // the second (newer) response lands first
    expect(shouldApply(session, second.seq)).toBe(true);
    session = markApplied(session, second.seq);
    // the stale first response must now be ignored
    expect(shouldApply(session, first.seq)).toBe(false);
  });
});
