// DOM wiring for the explorer. State transitions and rendering live in
// state.ts / render.ts; this file only moves data between them and the page.

import { ApiError, CompassApi } from "./api.js";
import {
  applyAlternatives,
  beginRequest,
  buildCards,
  candidateCards,
  draftIsEmpty,
  markApplied,
  newSession,
  rejectService,
  Session,
  setOptions,
  shouldApply,
  toggleCode,
  toggleNeed,
  unreject,
} from "./state.js";
import {
  renderCards,
  renderDashboard,
  renderError,
  renderPickers,
  renderPromptState,
} from "./render.js";
import type { ServicesResponse } from "./types.js";

const api = new CompassApi("");
let session: Session = newSession();
let servicesPayload: ServicesResponse | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function renderOptions() {
  el("results").innerHTML = session.options === null
    ? renderPromptState()
    : renderCards(session.options);
}

async function loadPickers() {
  try {
    servicesPayload = await api.services();
    el("pickers").innerHTML = renderPickers(servicesPayload, session.draft);
  } catch (err) {
    el("pickers").innerHTML = renderError(err instanceof Error ? err.message : String(err));
  }
}

async function exploreClient() {
  const clientId = (el("client-id") as HTMLInputElement).value.trim();
  session = { ...session, draft: { ...session.draft, clientId } };
  if (draftIsEmpty(session.draft)) {
    session = { ...session, options: null };
    renderOptions();
    return; // prompt state, no request fired
  }
  const { session: started, seq } = beginRequest(session);
  session = started;
  try {
    const [matches, eligibility] = await Promise.all([
      api.matches(clientId),
      api.eligibility(clientId),
    ]);
    if (!shouldApply(session, seq)) return; // a newer response already landed
    session = markApplied(setOptions(session, buildCards(matches, eligibility)), seq);
    renderOptions();
  } catch (err) {
    if (!shouldApply(session, seq)) return;
    session = markApplied(session, seq);
    el("results").innerHTML = renderError(
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err),
    );
  }
}

async function exploreDraft() {
  // Need-driven search: first selected need plus the chosen profile drive the
  // alternatives endpoint; rejections accumulate across the session.
  const draft = session.draft;
  if (draft.needs.length === 0 || !draft.profile) {
    renderOptions();
    return;
  }
  const { session: started, seq } = beginRequest(session);
  session = started;
  try {
    const response = await api.alternatives(draft.needs[0], draft.profile, session.rejected);
    if (!shouldApply(session, seq)) return;
    session = markApplied(setOptions(session, candidateCards(response)), seq);
    renderOptions();
  } catch (err) {
    if (!shouldApply(session, seq)) return;
    session = markApplied(session, seq);
    el("results").innerHTML = renderError(String(err));
  }
}

async function onReject(serviceId: string) {
  const { session: next, request } = rejectService(session, serviceId);
  session = next;
  if (!request) {
    renderOptions();
    return;
  }
  const { session: started, seq } = beginRequest(session);
  session = started;
  try {
    const response = await api.alternatives(request.satisfier, request.profile, request.exclude);
    if (!shouldApply(session, seq)) return;
    session = markApplied(applyAlternatives(session, candidateCards(response)), seq);
    renderOptions();
  } catch (err) {
    if (!shouldApply(session, seq)) return;
    session = markApplied(session, seq);
    el("results").innerHTML = renderError(String(err));
  }
}

async function loadDashboard() {
  try {
    const [demographics, coverage] = await Promise.all([api.demographics(), api.gaps()]);
    el("dashboard").innerHTML = renderDashboard(demographics, coverage);
  } catch (err) {
    el("dashboard").innerHTML = renderError(String(err));
  }
}

function wire() {
  el("explore").addEventListener("click", () => void exploreClient());
  el("search").addEventListener("click", () => void exploreDraft());
  el("undo").addEventListener("click", () => {
    session = unreject(session);
    renderOptions();
  });
  el("results").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "reject" && target.dataset.service) {
      void onReject(target.dataset.service);
    }
  });
  el("pickers").addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    if (!servicesPayload) return;
    const action = target.dataset.action;
    if (action === "toggle-code") {
      session = {
        ...session,
        draft: toggleCode(
          session.draft,
          servicesPayload,
          target.dataset.class ?? "",
          target.dataset.code ?? "",
        ),
      };
    } else if (action === "toggle-need") {
      session = { ...session, draft: toggleNeed(session.draft, target.dataset.need ?? "") };
    } else if (action === "set-profile") {
      session = { ...session, draft: { ...session.draft, profile: target.value || null } };
    } else if (action === "set-location") {
      session = { ...session, draft: { ...session.draft, location: target.value || null } };
    }
  });
  renderOptions();
  void loadPickers();
  void loadDashboard();
}

document.addEventListener("DOMContentLoaded", wire);
