// Audit page: the nine-column trail, newest first, with a sortable
// Last Updated column and a pager.

import { esc, pager, table } from "../render.js";
import type { AuditEntry, Page } from "../types.js";

export const AUDIT_COLUMNS = [
  "Id",
  "Actor",
  "Event",
  "Class",
  "Object Id",
  "Property Name",
  "Old Value",
  "New Value",
  "Last Updated",
];

export function renderAuditList(page: Page<AuditEntry>, order: "asc" | "desc"): string {
  const flipped = order === "desc" ? "asc" : "desc";
  const rows = page.rows.map((entry) => [
    String(entry.id),
    esc(entry.actor ?? ""),
    esc(entry.event),
    esc(entry.class_name),
    String(entry.object_id),
    esc(entry.property_name ?? ""),
    esc(entry.old_value ?? ""),
    esc(entry.new_value ?? ""),
    esc(entry.last_updated),
  ]);
  const body = table(AUDIT_COLUMNS, rows);
  const sortable = body.replace(
    "<th>Last Updated</th>",
    `<th><a href="#/uuis/auditLog/list?order=${flipped}">Last Updated</a></th>`,
  );
  return `
<h2>AuditLog List</h2>
${sortable}
${pager(page.page, page.pages, page.total, `/uuis/auditLog/list?order=${order}`)}`;
}
