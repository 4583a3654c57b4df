// Live walkthrough against a real backend: boots the API server with the
// demo fixture, then drives the same client and view functions the
// browser uses.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { navEntries } from "../src/nav.js";
import { renderDashboard, renderRequestDetail } from "../src/pages/requests.js";
import { renderAssetList } from "../src/pages/assets.js";
import { renderPartList } from "../src/pages/structure.js";
import { renderAuditList } from "../src/pages/audit.js";
import { esc } from "../src/render.js";
import type { SessionUser } from "../src/types.js";

const PORT = 8890 + (process.pid % 100);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${BASE}/uuis/request/list`);
      if (response.status === 401) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "uuis.cli", "serve", "--store", ":memory:", "--seed", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe("login and dashboard", () => {
  it("rejects bad credentials with a clean error", async () => {
    const api = new ApiClient(BASE);
    await expect(api.login("phil", "wrong")).rejects.toMatchObject({
      status: 401,
      code: "authentication",
    });
  });

  it("logs in a seeded approver and shows the three dashboard sections", async () => {
    const api = new ApiClient(BASE);
    const { user } = await api.login("phil", "phil");
    expect(user.level).toBe(1);
    expect(user.permissions).toContain("request.approve");

    const buckets = await api.requestList();
    const html = renderDashboard(buckets);
    expect(html).toContain("Requests waiting for approval");
    expect(html).toContain("Requests Waiting for Execution");
    expect(html).toContain("My Requests");
  });

  it("gates the navigation for a level-0 user", async () => {
    const api = new ApiClient(BASE);
    const { user } = await api.login("kenny", "kenny");
    expect(navEntries(user).map((entry) => entry.label)).toEqual(["REQUESTS"]);
  });
});

describe("approval walkthrough", () => {
  it("approving moves the request into Waiting for Execution", async () => {
    const requester = new ApiClient(BASE);
    await requester.login("kenny", "kenny");
    const created = await requester.requestCreate({ comments: "projector bulb burnt out" });
    expect(created.status).toBe("WAITING_APPROVAL");

    const approver = new ApiClient(BASE);
    const { user } = await approver.login("phil", "phil");

    const before = await approver.requestList();
    expect(before.waiting_approval.map((r) => r.id)).toContain(created.id);

    const detailHtml = renderRequestDetail(await approver.requestShow(created.id), user);
    expect(detailHtml).toContain('data-action="approve"');
    expect(detailHtml).toContain('data-action="reject"');

    await approver.approve(created.id);
    const after = await approver.requestList();
    expect(after.waiting_approval.map((r) => r.id)).not.toContain(created.id);
    expect(after.waiting_execution.map((r) => r.id)).toContain(created.id);

    const movedHtml = renderDashboard(after);
    expect(movedHtml).toContain("projector bulb burnt out");
  });

  it("rejecting follows the banner path and lands in My Requests as REJECTED", async () => {
    const requester = new ApiClient(BASE);
    await requester.login("kenny", "kenny");
    const created = await requester.requestCreate({ comments: "second monitor please" });

    const approver = new ApiClient(BASE);
    await approver.login("phil", "phil");
    const rejected = await approver.reject(created.id);
    expect(rejected.status).toBe("REJECTED");

    const buckets = await approver.requestList();
    const html = renderDashboard(buckets, "Request rejected");
    expect(html).toContain("Request rejected");

    const mine = await requester.requestList();
    const row = mine.mine.find((r) => r.id === created.id);
    expect(row?.status).toBe("REJECTED");
  });

  it("refuses an illegal second rejection with a conflict error", async () => {
    const requester = new ApiClient(BASE);
    await requester.login("kenny", "kenny");
    const created = await requester.requestCreate({ comments: "once only" });

    const approver = new ApiClient(BASE);
    await approver.login("phil", "phil");
    await approver.reject(created.id);
    await expect(approver.reject(created.id)).rejects.toMatchObject({
      status: 409,
      code: "illegal_transition",
    });
  });
});

describe("screen data matches API responses byte for byte", () => {
  function expectRendered(html: string, values: (string | number | null)[]): void {
    for (const value of values) {
      if (value === null || value === "") continue;
      expect(html).toContain(esc(value));
    }
  }

  it("dashboard rows reproduce the API fields", async () => {
    const api = new ApiClient(BASE);
    await api.login("dave", "dave");
    const buckets = await api.requestList();
    const html = renderDashboard(buckets);
    for (const request of [...buckets.waiting_approval, ...buckets.mine]) {
      expectRendered(html, [
        request.title,
        request.request_type,
        request.status,
        request.subject_iufaid,
      ]);
    }
  });

  it("asset list rows reproduce the API fields", async () => {
    const api = new ApiClient(BASE);
    await api.login("dave", "dave");
    const page = await api.assetList(1, 20);
    const html = renderAssetList(page);
    for (const asset of page.rows) {
      expectRendered(html, [
        asset.iufaid,
        asset.name,
        asset.type_name,
        asset.owner_name,
        asset.location_name,
      ]);
    }
    expect(html).toContain(`${page.total} total records`);
  });

  it("university structure list reproduces the ten seed rows", async () => {
    const api = new ApiClient(BASE);
    await api.login("dave", "dave");
    const parts = await api.partList();
    expect(parts.total).toBe(10);
    const html = renderPartList(parts.rows);
    for (const part of parts.rows) {
      expectRendered(html, [part.name, part.type]);
    }
    expect(html).toContain("IT Group");
    expect(html).toContain("Department of Computer Theory");
  });

  it("audit page reproduces trail entries newest first", async () => {
    const api = new ApiClient(BASE);
    await api.login("dave", "dave");
    await api.assetUpdate(1, { details: "walkthrough touch" });
    const page = await api.auditList(1, 10, "desc");
    expect(page.rows.length).toBeGreaterThan(0);
    const html = renderAuditList(page, "desc");
    for (const entry of page.rows) {
      expectRendered(html, [entry.event, entry.class_name, entry.new_value ?? ""]);
    }
    const ids = page.rows.map((entry) => entry.id);
    expect(ids).toEqual([...ids].sort((a, b) => b - a));
  });
});

describe("friendly error surface", () => {
  it("never renders a raw 500 for bad input", async () => {
    const api = new ApiClient(BASE);
    await api.login("dave", "dave");
    try {
      await api.requestCreate({ comments: "x", subject_id: 999999 });
      expect.unreachable("expected a validation error");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).status).toBe(400);
      expect((error as ApiError).message).not.toContain("Traceback");
    }
  });
});
