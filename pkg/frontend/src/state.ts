// Session state for the explorer. Everything here is pure and synchronous so
// the behavior is testable without a DOM; main.ts owns the wiring.

import type {
  AlternativesResponse,
  BarrierJson,
  EligibilityResponse,
  MatchesResponse,
  ServiceMatchJson,
  ServicesResponse,
} from "./types.js";
import { termId } from "./types.js";

export interface ProfileDraft {
  clientId: string;
  codes: Record<string, string[]>; // code class -> selected code ids
  needs: string[]; // selected satisfier ids
  location: string | null;
  profile: string | null; // selected requirement profile id
}

export function emptyDraft(): ProfileDraft {
  return { clientId: "", codes: {}, needs: [], location: null, profile: null };
}

export function draftIsEmpty(draft: ProfileDraft): boolean {
  return (
    draft.clientId.trim() === "" &&
    draft.needs.length === 0 &&
    Object.values(draft.codes).every((list) => list.length === 0)
  );
}

/** Only codes the server lists in its taxonomy payload are selectable. */
export function selectableCodeIds(services: ServicesResponse): Set<string> {
  return new Set(services.taxonomy.codes.map((c) => termId(c.code)));
}

export function toggleCode(
  draft: ProfileDraft,
  services: ServicesResponse,
  codeClass: string,
  code: string,
): ProfileDraft {
  if (!selectableCodeIds(services).has(code)) {
    return draft; // unserved codes are not selectable
  }
  const current = draft.codes[codeClass] ?? [];
  const next = current.includes(code)
    ? current.filter((c) => c !== code)
    : [...current, code];
  return { ...draft, codes: { ...draft.codes, [codeClass]: next } };
}

export function toggleNeed(draft: ProfileDraft, satisfier: string): ProfileDraft {
  const next = draft.needs.includes(satisfier)
    ? draft.needs.filter((n) => n !== satisfier)
    : [...draft.needs, satisfier];
  return { ...draft, needs: next };
}

// -- service cards ------------------------------------------------------------

export type Badge =
  | { kind: "eligible" }
  | { kind: "barrier"; unmet: string; unmetLabel: string | null; removalHint: string | null }
  | { kind: "candidate" };

export interface ServiceCard {
  id: string;
  label: string | null;
  codes: string[];
  satisfiers: string[];
  profiles: string[]; // requirement profile ids, for replanning
  badge: Badge;
}

function cardFromMatch(match: ServiceMatchJson, badge: Badge): ServiceCard {
  return {
    id: termId(match.service),
    label: match.label,
    codes: match.codes.map(termId),
    satisfiers: match.matchedSatisfiers.map(termId),
    profiles: match.requirements.map((r) => termId(r.characteristic)),
    badge,
  };
}

function badgeForService(serviceId: string, eligibility: EligibilityResponse): Badge {
  if (eligibility.eligible.some((m) => termId(m.service) === serviceId)) {
    return { kind: "eligible" };
  }
  const barrier: BarrierJson | undefined = eligibility.barriers.find(
    (b) => termId(b.service) === serviceId,
  );
  if (barrier) {
    return {
      kind: "barrier",
      unmet: termId(barrier.unmetCharacteristic),
      unmetLabel: barrier.unmetLabel,
      removalHint: barrier.removalServiceType ? termId(barrier.removalServiceType) : null,
    };
  }
  return { kind: "candidate" };
}

/** Merge the matches list with the eligibility split into badged cards. */
export function buildCards(
  matches: MatchesResponse,
  eligibility: EligibilityResponse,
): ServiceCard[] {
  return matches.matches.map((m) => cardFromMatch(m, badgeForService(termId(m.service), eligibility)));
}

export function candidateCards(alternatives: AlternativesResponse): ServiceCard[] {
  return alternatives.services.map((m) => cardFromMatch(m, { kind: "candidate" }));
}

// -- rejection loop -------------------------------------------------------------

export interface ReplanRequest {
  satisfier: string;
  profile: string;
  exclude: string[];
}

export interface Session {
  draft: ProfileDraft;
  options: ServiceCard[] | null;
  rejected: string[];
  history: ServiceCard[][];
  seq: number; // last issued request id
  applied: number; // last rendered request id (last-write-wins)
}

export function newSession(): Session {
  return { draft: emptyDraft(), options: null, rejected: [], history: [], seq: 0, applied: 0 };
}

export function beginRequest(session: Session): { session: Session; seq: number } {
  const seq = session.seq + 1;
  return { session: { ...session, seq }, seq };
}

/** Last-write-wins: stale responses (older than the applied one) are dropped. */
export function shouldApply(session: Session, seq: number): boolean {
  return seq > session.applied;
}

export function markApplied(session: Session, seq: number): Session {
  return { ...session, applied: seq };
}

export function setOptions(session: Session, options: ServiceCard[]): Session {
  return { ...session, options };
}

/**
 * Reject a service: remember it for the whole session and derive the
 * replanning request (same satisfier and requirement profile, all rejections
 * excluded). Services without a satisfier or profile cannot be replanned
 * server-side; the caller then just filters the current list.
 */
export function rejectService(
  session: Session,
  serviceId: string,
): { session: Session; request: ReplanRequest | null } {
  if (!session.options) {
    return { session, request: null };
  }
  const card = session.options.find((c) => c.id === serviceId);
  const rejected = session.rejected.includes(serviceId)
    ? session.rejected
    : [...session.rejected, serviceId];
  const next: Session = {
    ...session,
    rejected,
    history: [...session.history, session.options],
    options: session.options.filter((c) => c.id !== serviceId),
  };
  if (!card || card.satisfiers.length === 0 || card.profiles.length === 0) {
    return { session: next, request: null };
  }
  return {
    session: next,
    request: { satisfier: card.satisfiers[0], profile: card.profiles[0], exclude: rejected },
  };
}

/**
 * Apply a replan response. Monotone by construction: the new list never
 * contains a rejected service and never introduces a service that was not on
 * the list before the rejection.
 */
export function applyAlternatives(session: Session, cards: ServiceCard[]): Session {
  const previous = session.history.length
    ? session.history[session.history.length - 1]
    : session.options ?? [];
  const allowed = new Set(previous.map((c) => c.id));
  const rejected = new Set(session.rejected);
  const options = cards.filter((c) => allowed.has(c.id) && !rejected.has(c.id));
  return { ...session, options };
}

/** Undo the latest rejection and restore the prior list. */
export function unreject(session: Session): Session {
  if (session.history.length === 0) {
    return session;
  }
  const history = session.history.slice(0, -1);
  const options = session.history[session.history.length - 1];
  const rejected = session.rejected.slice(0, -1);
  return { ...session, history, options, rejected };
}
