// Report pages: the three reports with their filter bars, pagination
// footer ("N total records"), and CSV downloads.

import type { ApiClient } from "../api.js";
import { esc, option, table } from "../render.js";
import type { AssetType, Location, Report, UniversityPart } from "../types.js";

export interface ReportContext {
  buildings: Location[];
  roomTypes: AssetType[];
  parts: UniversityPart[];
}

export function renderReportIndex(): string {
  return `
<h2>Reports</h2>
<ul>
  <li><a href="#/uuis/report/userPermissions">User Permission Report</a></li>
  <li><a href="#/uuis/report/requests">Requests Report</a></li>
  <li><a href="#/uuis/report/assetsByLocation">Assets by location report</a></li>
</ul>`;
}

function reportTable(report: Report): string {
  const footer = `<div class="pager">&lt; prev ${report.page} next &gt; <span>${report.total} total records</span></div>`;
  return (
    table(
      report.columns,
      report.rows.map((row) => row.map((cell) => esc(cell ?? ""))),
    ) + footer
  );
}

export function renderAssetsByLocation(report: Report, ctx: ReportContext, filters: {
  building_id?: string;
  room_type_id?: string;
  per_page?: string;
}): string {
  const buildingOptions = [option("", "Any Building")].concat(
    ctx.buildings.map((b) => option(b.id, b.name, String(b.id) === filters.building_id)),
  );
  const roomTypeOptions = [option("", "Any Room")].concat(
    ctx.roomTypes.map((t) => option(t.id, t.name, String(t.id) === filters.room_type_id)),
  );
  return `
<h2>Report - Assets By Location</h2>
<form id="report-filter">
  <label>Building: <select name="building_id">${buildingOptions.join("")}</select></label>
  <label>Room Type: <select name="room_type_id">${roomTypeOptions.join("")}</select></label>
  <label>Per Page: <input name="per_page" size="3" value="${esc(filters.per_page ?? "20")}" /></label>
  <button type="submit">submit</button>
  <a id="csv-download" href="#" data-report="assetsByLocation">Download CSV</a>
</form>
${reportTable(report)}`;
}

export function renderRequestReport(report: Report, ctx: ReportContext, filters: {
  department_id?: string;
  status?: string;
  date_from?: string;
  date_to?: string;
  per_page?: string;
}): string {
  const departmentOptions = [option("", "Any Department")].concat(
    ctx.parts.map((p) => option(p.id, p.name, String(p.id) === filters.department_id)),
  );
  const statusOptions = [option("", "Any Status")].concat(
    ["WA", "WX", "EX", "RJ", "NE"].map((code) => option(code, code, code === filters.status)),
  );
  return `
<h2>Report - Requests</h2>
<form id="report-filter">
  <label>Department: <select name="department_id">${departmentOptions.join("")}</select></label>
  <label>Request Status: <select name="status">${statusOptions.join("")}</select></label>
  <label>Per Page: <input name="per_page" size="3" value="${esc(filters.per_page ?? "20")}" /></label>
  <label>From: <input name="date_from" value="${esc(filters.date_from ?? "")}" placeholder="2010-04-17" /></label>
  <label>To: <input name="date_to" value="${esc(filters.date_to ?? "")}" placeholder="2010-04-19" /></label>
  <button type="submit">submit</button>
  <a id="csv-download" href="#" data-report="requests">Download CSV</a>
</form>
${reportTable(report)}`;
}

export function renderUserPermissionReport(report: Report, ctx: ReportContext, filters: {
  department_id?: string;
}): string {
  const departmentOptions = [option("", "Any Department")].concat(
    ctx.parts.map((p) => option(p.id, p.name, String(p.id) === filters.department_id)),
  );
  return `
<h2>Report - User Permissions</h2>
<form id="report-filter">
  <label>Department: <select name="department_id">${departmentOptions.join("")}</select></label>
  <button type="submit">submit</button>
  <a id="csv-download" href="#" data-report="userPermissions">Download CSV</a>
</form>
${reportTable(report)}`;
}

export async function loadReportContext(api: ApiClient): Promise<ReportContext> {
  const [locations, types, parts] = await Promise.all([
    api.locationList(1, 1000),
    api.locationTypeList(),
    api.partList(),
  ]);
  return {
    buildings: locations.rows.filter((l) => l.type_name === "Building"),
    roomTypes: types.rows,
    parts: parts.rows,
  };
}

export function filterQuery(filters: Record<string, string | undefined>): string {
  const pairs = Object.entries(filters).filter(([, v]) => v !== undefined && v !== "");
  if (pairs.length === 0) return "";
  return "?" + pairs.map(([k, v]) => `${k}=${encodeURIComponent(v!)}`).join("&");
}
