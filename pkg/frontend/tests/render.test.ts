// Unit tests for the pure view functions: no DOM, no network.

import { describe, expect, it } from "vitest";

import { navEntries } from "../src/nav.js";
import { renderAuditList, AUDIT_COLUMNS } from "../src/pages/audit.js";
import { renderAssetForm } from "../src/pages/assets.js";
import { NO_REQUESTS, renderDashboard, renderRequestDetail } from "../src/pages/requests.js";
import {
  emptyAdvancedState,
  nonEmptyClauses,
  renderAdvancedSearch,
} from "../src/pages/search.js";
import { esc } from "../src/render.js";
import type { InventoryRequest, SessionUser } from "../src/types.js";

function user(level: number, permissions: string[]): SessionUser {
  return {
    id: 1,
    version: 0,
    username: "tester",
    name: "Tester",
    level,
    roles: [],
    permissions,
    managed_parts: [],
    member_parts: [],
  };
}

function request(id: number, status: string): InventoryRequest {
  return {
    id,
    version: 0,
    title: `Request ${id}`,
    description: "desc",
    comments: "comm",
    request_type: "TRANSFER",
    status,
    requester_id: 8,
    requester_username: "kenny",
    part_assigned_id: 7,
    part_assigned_name: "Department of Biology",
    user_assigned_id: null,
    subject_id: 1,
    subject_iufaid: "IUFAID0000000001",
    submission_date: "2010-04-17T12:43:59Z",
  };
}

describe("navigation gating", () => {
  it("level-0 users see only the request pages", () => {
    const entries = navEntries(user(0, ["request.create", "asset.view"]));
    expect(entries.map((e) => e.label)).toEqual(["REQUESTS"]);
  });

  it("admins see the full menu", () => {
    const everything = user(3, [
      "request.create", "request.approve", "request.execute",
      "asset.view", "asset.edit", "asset.create",
      "location.create", "location.edit", "location.delete",
      "user.admin", "report.view", "audit.view", "search.advanced",
    ]);
    expect(navEntries(everything).map((e) => e.label)).toEqual([
      "REQUESTS",
      "ASSETS",
      "BULK LOAD",
      "LOCATIONS",
      "UNIVERSITY STRUCTURE",
      "SEARCH",
      "REPORTS",
      "USERS & PERMISSIONS",
      "AUDITING",
    ]);
  });
});

describe("request dashboard", () => {
  it("renders the three sections", () => {
    const html = renderDashboard({ waiting_approval: [], waiting_execution: [], mine: [] });
    expect(html).toContain("Requests waiting for approval");
    expect(html).toContain("Requests Waiting for Execution");
    expect(html).toContain("My Requests");
  });

  it("empty buckets say no requests are available", () => {
    const html = renderDashboard({ waiting_approval: [], waiting_execution: [], mine: [] });
    expect(html.match(new RegExp(NO_REQUESTS, "g"))).toHaveLength(3);
  });

  it("shows the rejection banner when asked", () => {
    const html = renderDashboard(
      { waiting_approval: [], waiting_execution: [], mine: [] },
      "Request rejected",
    );
    expect(html).toContain("Request rejected");
  });

  it("renders request rows with subject iufaid and status", () => {
    const html = renderDashboard({
      waiting_approval: [request(5, "WAITING_APPROVAL")],
      waiting_execution: [],
      mine: [request(1, "REJECTED")],
    });
    expect(html).toContain("IUFAID0000000001");
    expect(html).toContain("REJECTED");
    expect(html).toContain("Request 5");
  });
});

describe("request detail actions", () => {
  it("offers approve and reject to an approver on a waiting request", () => {
    const html = renderRequestDetail(
      request(9, "WAITING_APPROVAL"),
      user(1, ["request.approve"]),
    );
    expect(html).toContain('data-action="approve"');
    expect(html).toContain('data-action="reject"');
    expect(html).not.toContain('data-action="execute"');
  });

  it("offers execution buttons only in the execution state", () => {
    const html = renderRequestDetail(
      request(9, "WAITING_EXECUTION"),
      user(1, ["request.execute"]),
    );
    expect(html).toContain('data-action="execute"');
    expect(html).toContain('data-action="notExecute"');
    expect(html).not.toContain('data-action="approve"');
  });

  it("offers nothing to a plain requester", () => {
    const html = renderRequestDetail(request(9, "WAITING_APPROVAL"), user(0, []));
    expect(html).not.toContain("data-action");
  });
});

describe("asset form defaults", () => {
  it("defaults to AVAILABLE status and no parent", () => {
    const html = renderAssetForm({ types: [], locations: [], parts: [], assets: [] });
    expect(html).toContain('<option value="AVAILABLE" selected>AVAILABLE</option>');
    expect(html).toContain('<option value="" selected>No parent</option>');
    expect(html).toContain("Please select an owner...");
  });

  it("renders property editors for the selected type with hints", () => {
    const computer = {
      id: 2,
      version: 0,
      name: "Computer",
      description: null,
      properties: [
        { id: 1, name: "CPU", hint: "e.g. 2 GHz" },
        { id: 2, name: "RAM", hint: "e.g. 4 GB" },
      ],
    };
    const html = renderAssetForm({
      types: [computer],
      locations: [],
      parts: [],
      assets: [],
      selectedTypeId: 2,
    });
    expect(html).toContain('name="prop-1"');
    expect(html).toContain('placeholder="e.g. 2 GHz"');
    expect(html).toContain(">CPU</span>");
    expect(html).toContain('name="prop-2"');
  });
});

describe("advanced search form", () => {
  it("renders four clause rows with connective selectors after the first", () => {
    const html = renderAdvancedSearch(emptyAdvancedState());
    expect(html.match(/name="field-\d"/g)).toHaveLength(4);
    expect(html.match(/name="connective-\d"/g)).toHaveLength(3);
  });

  it("keeps the typed values when results are empty", () => {
    const state = emptyAdvancedState();
    state.clauses[0] = { field: "name", value: "unobtainium", connective: "AND" };
    const html = renderAdvancedSearch(state, {
      rows: [],
      page: 1,
      per_page: 20,
      total: 0,
      pages: 1,
      message: "No results match your criteria",
    });
    expect(html).toContain('value="unobtainium"');
    expect(html).toContain("No results match your criteria");
  });

  it("collapses blank clauses down to the filled ones", () => {
    const state = emptyAdvancedState();
    state.clauses[2] = { field: "name", value: "box", connective: "OR" };
    const clauses = nonEmptyClauses(state);
    expect(clauses).toHaveLength(1);
    expect(clauses[0].value).toBe("box");
  });
});

describe("audit table", () => {
  it("renders the nine columns with a sortable Last Updated header", () => {
    const html = renderAuditList(
      {
        rows: [
          {
            id: 344,
            actor: null,
            event: "UPDATE",
            class_name: "Asset",
            object_id: 497,
            object_version: 1,
            property_name: "iufaID",
            old_value: null,
            new_value: "IUFAID0000000497",
            uri: null,
            date_created: "2010-04-19T19:43:57Z",
            last_updated: "2010-04-19T19:43:57Z",
          },
        ],
        page: 1,
        per_page: 10,
        total: 345,
        pages: 35,
      },
      "desc",
    );
    for (const column of AUDIT_COLUMNS.filter((c) => c !== "Last Updated")) {
      expect(html).toContain(`<th>${column}</th>`);
    }
    expect(html).toContain('href="#/uuis/auditLog/list?order=asc"');
    expect(html).toContain("IUFAID0000000497");
    expect(html).toContain("345 total records");
  });
});

describe("escaping", () => {
  it("escapes markup in user data", () => {
    expect(esc('<script>alert("x")</script>')).toBe(
      "&lt;script&gt;alert(&quot;x&quot;)&lt;/script&gt;",
    );
  });
});
