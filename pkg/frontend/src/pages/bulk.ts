// Bulk load page: two file-upload forms and the per-row outcome table.

import { esc, table } from "../render.js";
import type { BulkOutcome } from "../types.js";

export function renderBulkPage(outcomes?: BulkOutcome[], kind?: string): string {
  const results = outcomes
    ? `<h3>${esc(kind ?? "")} outcomes</h3>` +
      table(
        ["Row", "Result", "Message"],
        outcomes.map((o) => [String(o.row), esc(o.result), esc(o.message ?? "")]),
      )
    : "";
  return `
<h2>Bulk Load</h2>
<p>The file must contain a header in the first line specifying data order.</p>
<form id="bulk-insert" class="bulk">
  <h3>Bulk Insert</h3>
  <input type="file" name="file" accept=".csv" required />
  <button type="submit">Upload file</button>
</form>
<form id="bulk-update" class="bulk">
  <h3>Bulk Update</h3>
  <input type="file" name="file" accept=".csv" required />
  <button type="submit">Upload file</button>
</form>
${results}`;
}
