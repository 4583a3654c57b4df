// Search pages. The advanced form offers up to four clause rows with
// field dropdowns and AND/OR connectives, and stays populated after an
// empty result so the query can be refined in place.

import { esc, option, pager, table } from "../render.js";
import type { Page, SearchHit } from "../types.js";

export const SEARCH_FIELDS: Record<string, string[]> = {
  ASSET: ["iufaid", "legacyid", "name", "details", "serial_number", "status"],
  LOCATION: ["name", "description"],
  REQUEST: ["title", "description", "comments", "status", "request_type"],
  USER: ["username", "name"],
};

export interface ClauseState {
  field: string;
  value: string;
  connective: "AND" | "OR";
}

export interface AdvancedState {
  entity: string;
  clauses: ClauseState[];
}

export function emptyAdvancedState(entity = "ASSET"): AdvancedState {
  const first = SEARCH_FIELDS[entity][0];
  return {
    entity,
    clauses: Array.from({ length: 4 }, () => ({
      field: first,
      value: "",
      connective: "AND" as const,
    })),
  };
}

function hitRows(page: Page<SearchHit>): string {
  if (page.total === 0) {
    return `<p class="empty">${esc(page.message ?? "No results match your criteria")}</p>`;
  }
  return (
    table(
      ["Kind", "Id", "Title", "Snippet"],
      page.rows.map((hit) => [
        esc(hit.entity),
        String(hit.id),
        esc(hit.title),
        esc(hit.snippet ?? ""),
      ]),
    ) + pager(page.page, page.pages, page.total, "/uuis/search/results")
  );
}

export function renderBasicResults(query: string, page: Page<SearchHit>): string {
  return `
<h2>Search results for "${esc(query)}"</h2>
${hitRows(page)}`;
}

export function renderAdvancedSearch(state: AdvancedState, results?: Page<SearchHit>): string {
  const entityOptions = Object.keys(SEARCH_FIELDS)
    .map((e) => option(e, e, e === state.entity))
    .join("");
  const rows = state.clauses
    .map((clause, index) => {
      const fieldOptions = SEARCH_FIELDS[state.entity]
        .map((f) => option(f, f, f === clause.field))
        .join("");
      const connective =
        index === 0
          ? ""
          : `<select name="connective-${index}">
               ${option("AND", "AND", clause.connective === "AND")}
               ${option("OR", "OR", clause.connective === "OR")}
             </select>`;
      return `<div class="clause">
  ${connective}
  <select name="field-${index}">${fieldOptions}</select>
  <input name="value-${index}" value="${esc(clause.value)}" />
</div>`;
    })
    .join("\n");
  return `
<h2>Advanced Search</h2>
<form id="advanced-search">
  <label class="field"><span>Search in</span><select name="entity">${entityOptions}</select></label>
  ${rows}
  <button type="submit">Search</button>
</form>
${results ? hitRows(results) : ""}`;
}

export function readAdvancedForm(form: HTMLFormElement): AdvancedState {
  const entity = (form.elements.namedItem("entity") as HTMLSelectElement).value;
  const clauses: ClauseState[] = [];
  for (let index = 0; index < 4; index += 1) {
    const fieldEl = form.elements.namedItem(`field-${index}`) as HTMLSelectElement | null;
    const valueEl = form.elements.namedItem(`value-${index}`) as HTMLInputElement | null;
    if (!fieldEl || !valueEl) continue;
    const connectiveEl = form.elements.namedItem(`connective-${index}`) as HTMLSelectElement | null;
    clauses.push({
      field: fieldEl.value,
      value: valueEl.value,
      connective: (connectiveEl?.value as "AND" | "OR") ?? "AND",
    });
  }
  return { entity, clauses };
}

export function nonEmptyClauses(state: AdvancedState): ClauseState[] {
  const used = state.clauses.filter((c) => c.value.trim() !== "");
  // The backend treats an all-blank form as "match everything in scope";
  // send one blank clause to express that.
  return used.length > 0 ? used : [state.clauses[0]];
}
