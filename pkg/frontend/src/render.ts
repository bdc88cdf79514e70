// HTML string renderers. Pure functions over API payloads and session state;
// every number shown comes straight from a response field.

import type {
  CoverageResponse,
  DemographicsResponse,
  ServicesResponse,
} from "./types.js";
import { termId } from "./types.js";
import type { ProfileDraft, ServiceCard } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function badgeHtml(card: ServiceCard): string {
  const badge = card.badge;
  if (badge.kind === "eligible") {
    return '<span class="badge eligible">eligible</span>';
  }
  if (badge.kind === "barrier") {
    const what = escapeHtml(badge.unmetLabel ?? badge.unmet);
    const hint = badge.removalHint
      ? ` &middot; could be removed by ${escapeHtml(badge.removalHint)}`
      : "";
    return `<span class="badge barrier">barrier: ${what}${hint}</span>`;
  }
  return '<span class="badge candidate">match</span>';
}

export function renderCards(cards: ServiceCard[]): string {
  if (cards.length === 0) {
    return (
      '<p class="empty-state" data-role="no-options">No options left. ' +
      'Check the <a href="#dashboard" data-role="gap-link">coverage gap report</a>.</p>'
    );
  }
  const items = cards
    .map(
      (card) => `
  <li class="service-card" data-service="${escapeHtml(card.id)}">
    <div class="service-name">${escapeHtml(card.label ?? card.id)}</div>
    <div class="service-codes">${card.codes.map(escapeHtml).join(", ")}</div>
    ${badgeHtml(card)}
    <button data-action="reject" data-service="${escapeHtml(card.id)}">Not for me</button>
  </li>`,
    )
    .join("\n");
  return `<ul class="service-list">${items}</ul>`;
}

export function renderPromptState(): string {
  return '<p class="empty-state" data-role="prompt">Enter a client id or pick needs to begin.</p>';
}

export function renderError(message: string): string {
  return (
    `<p class="error" data-role="error">${escapeHtml(message)} ` +
    '<button data-action="retry">Retry</button></p>'
  );
}

export function renderPickers(services: ServicesResponse, draft: ProfileDraft): string {
  const byClass = new Map<string, { id: string; label: string }[]>();
  for (const code of services.taxonomy.codes) {
    const id = termId(code.code);
    const list = byClass.get(code.codeClass) ?? [];
    list.push({ id, label: code.label ?? id });
    byClass.set(code.codeClass, list);
  }
  const groups: string[] = [];
  for (const [codeClass, codes] of byClass) {
    const boxes = codes
      .map((code) => {
        const selected = (draft.codes[codeClass] ?? []).includes(code.id);
        return (
          `<label><input type="checkbox" data-action="toggle-code" ` +
          `data-class="${escapeHtml(codeClass)}" data-code="${escapeHtml(code.id)}" ` +
          `${selected ? "checked" : ""}/> ${escapeHtml(code.label)}</label>`
        );
      })
      .join(" ");
    groups.push(`<fieldset><legend>${escapeHtml(codeClass)}</legend>${boxes}</fieldset>`);
  }
  const needs = services.satisfiers
    .map((s) => {
      const id = termId(s.satisfier);
      const selected = draft.needs.includes(id);
      return (
        `<label><input type="checkbox" data-action="toggle-need" data-need="${escapeHtml(id)}" ` +
        `${selected ? "checked" : ""}/> ${escapeHtml(s.label ?? id)}</label>`
      );
    })
    .join(" ");
  const profiles = new Map<string, string>();
  for (const svc of services.services) {
    for (const req of svc.requirements) {
      profiles.set(termId(req.characteristic), req.label ?? termId(req.characteristic));
    }
  }
  const profileOptions = ['<option value="">(any)</option>']
    .concat(
      [...profiles.entries()].map(
        ([id, label]) =>
          `<option value="${escapeHtml(id)}" ${draft.profile === id ? "selected" : ""}>` +
          `${escapeHtml(label)}</option>`,
      ),
    )
    .join("");
  const locations = services.locations
    .map((l) => {
      const id = termId(l.location);
      return (
        `<option value="${escapeHtml(id)}" ${draft.location === id ? "selected" : ""}>` +
        `${escapeHtml(l.label ?? id)}</option>`
      );
    })
    .join("");
  return `
<div class="pickers">
  <fieldset><legend>Needs</legend>${needs}</fieldset>
  ${groups.join("\n")}
  <label>Eligibility profile
    <select data-action="set-profile">${profileOptions}</select>
  </label>
  <label>Community
    <select data-action="set-location"><option value="">(any)</option>${locations}</select>
  </label>
</div>`;
}

export function renderDashboard(
  demographics: DemographicsResponse,
  coverage: CoverageResponse,
): string {
  const demoRows = demographics.rows
    .map(
      (row) => `
  <tr>
    <td>${escapeHtml(row.location.prefixed ?? row.location.value)}</td>
    <td>${escapeHtml(row.stakeholderLabel ?? row.stakeholder.prefixed ?? row.stakeholder.value)}</td>
    <td>${escapeHtml(row.serviceCode ? (row.serviceCode.prefixed ?? row.serviceCode.value) : "")}</td>
    <td class="count" data-role="demo-count">${row.count}</td>
  </tr>`,
    )
    .join("\n");
  const demoTable = demographics.rows.length
    ? `<table class="demographics"><thead>
<tr><th>location</th><th>group</th><th>service</th><th>clients</th></tr>
</thead><tbody>${demoRows}</tbody></table>`
    : '<p class="empty-state" data-role="demo-empty">No service usage recorded.</p>';

  const gapItems = coverage.gaps
    .map(
      (gap) =>
        `<li data-role="gap">${escapeHtml(gap.location.prefixed ?? gap.location.value)}: ` +
        `${escapeHtml(gap.satisfier.prefixed ?? gap.satisfier.value)} ` +
        `(${gap.demandingClients} demanding)</li>`,
    )
    .join("\n");
  const gapPanel = coverage.gaps.length
    ? `<ul class="gaps">${gapItems}</ul>`
    : '<p class="empty-state" data-role="gaps-empty">No coverage gaps.</p>';

  const dupItems = coverage.duplicates
    .map(
      (dup) =>
        `<li data-role="duplicate">${escapeHtml(dup.location.prefixed ?? dup.location.value)}: ` +
        `${escapeHtml(dup.serviceCode.prefixed ?? dup.serviceCode.value)} offered by ` +
        `${dup.services.map((s) => escapeHtml(s.prefixed ?? s.value)).join(", ")}</li>`,
    )
    .join("\n");
  const dupPanel = coverage.duplicates.length
    ? `<ul class="duplicates">${dupItems}</ul>`
    : '<p class="empty-state" data-role="duplicates-empty">No duplicated offerings.</p>';

  return `
<section class="panel"><h2>Priority demographics</h2>${demoTable}</section>
<section class="panel"><h2>Gaps</h2>${gapPanel}</section>
<section class="panel"><h2>Duplicates</h2>${dupPanel}</section>`;
}
