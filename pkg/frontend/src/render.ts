// Small HTML-string helpers. Pages render to strings so the views can be
// exercised without a browser.

export function esc(value: unknown): string {
  if (value === null || value === undefined) return "";
  return String(value)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function table(headers: string[], rows: string[][], className = "grid"): string {
  const head = headers.map((h) => `<th>${esc(h)}</th>`).join("");
  const body = rows
    .map((row) => `<tr>${row.map((cell) => `<td>${cell}</td>`).join("")}</tr>`)
    .join("\n");
  return `<table class="${className}"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export function pager(page: number, pages: number, total: number, route: string): string {
  const prev = page > 1 ? `<a href="#${route}?page=${page - 1}">&lt; prev</a>` : "&lt; prev";
  const next = page < pages ? `<a href="#${route}?page=${page + 1}">next &gt;</a>` : "next &gt;";
  return `<div class="pager">${prev} ${page} / ${pages} ${next} <span>${total} total records</span></div>`;
}

export function banner(message: string): string {
  return `<div class="banner">${esc(message)}</div>`;
}

export function option(value: string | number, label: string, selected = false): string {
  return `<option value="${esc(value)}"${selected ? " selected" : ""}>${esc(label)}</option>`;
}

export function field(label: string, control: string): string {
  return `<label class="field"><span>${esc(label)}</span>${control}</label>`;
}
