// Left navigation. Entries are gated by the signed-in user's level and
// permissions: students and professors (level 0) only see request pages.

import { esc } from "./render.js";
import type { SessionUser } from "./types.js";

export interface NavEntry {
  label: string;
  route: string;
}

export function navEntries(user: SessionUser): NavEntry[] {
  const entries: NavEntry[] = [{ label: "REQUESTS", route: "/uuis/request/list" }];
  if (user.level === 0) {
    return entries;
  }
  const has = (perm: string) => user.permissions.includes(perm);
  if (has("asset.view")) {
    entries.push({ label: "ASSETS", route: "/uuis/asset/list" });
  }
  if (has("asset.create")) {
    entries.push({ label: "BULK LOAD", route: "/uuis/bulkLoad" });
  }
  entries.push({ label: "LOCATIONS", route: "/uuis/location/list" });
  entries.push({ label: "UNIVERSITY STRUCTURE", route: "/uuis/universityPart/list" });
  entries.push({ label: "SEARCH", route: "/uuis/search/advanced" });
  if (has("report.view")) {
    entries.push({ label: "REPORTS", route: "/uuis/report" });
  }
  if (has("user.admin")) {
    entries.push({ label: "USERS & PERMISSIONS", route: "/uuis/user/list" });
  }
  if (has("audit.view")) {
    entries.push({ label: "AUDITING", route: "/uuis/auditLog/list" });
  }
  return entries;
}

export function renderShell(user: SessionUser, nav: NavEntry[], content: string): string {
  const items = nav
    .map((entry) => `<a class="nav-item" href="#${entry.route}">${esc(entry.label)}</a>`)
    .join("\n");
  return `
<div class="layout">
  <header class="top">
    <span class="brand">Unified University Inventory System</span>
    <form id="header-search" class="searchbox">
      <input name="q" type="text" placeholder="Search" />
      <button type="submit">Submit</button>
      <a href="#/uuis/search/advanced">Advanced search</a>
    </form>
    <span class="welcome">Welcome, ${esc(user.username)} (<a href="#/uuis/logout">Sign out</a>)</span>
  </header>
  <nav class="side">${items}</nav>
  <main id="content">${content}</main>
</div>`;
}
