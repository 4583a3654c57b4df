// Request dashboard: the three buckets, the detail view with its action
// buttons, and the new-request forms (basic and advanced).

import type { ApiClient } from "../api.js";
import { banner, esc, option, table } from "../render.js";
import type { Asset, InventoryRequest, RequestBuckets, SessionUser } from "../types.js";

export const NO_REQUESTS = "No requests available";

function requestRows(requests: InventoryRequest[]): string {
  if (requests.length === 0) {
    return `<p class="empty">${NO_REQUESTS}</p>`;
  }
  return table(
    ["Id", "Title", "Request Type", "Subject", "Description", "Status"],
    requests.map((r) => [
      `<a href="#/uuis/request/show/${r.id}">${r.id}</a>`,
      esc(r.title),
      esc(r.request_type),
      esc(r.subject_iufaid ?? ""),
      esc(r.description ?? ""),
      esc(r.status),
    ]),
  );
}

export function renderDashboard(buckets: RequestBuckets, message?: string): string {
  return `
${message ? banner(message) : ""}
<section>
  <h2>Requests waiting for approval</h2>
  ${requestRows(buckets.waiting_approval)}
</section>
<section>
  <h2>Requests Waiting for Execution</h2>
  ${requestRows(buckets.waiting_execution)}
</section>
<section>
  <h2>My Requests</h2>
  ${requestRows(buckets.mine)}
</section>
<p><a class="button" href="#/uuis/request/create">New Request</a></p>`;
}

export function renderRequestDetail(request: InventoryRequest, user: SessionUser): string {
  const canApprove =
    request.status === "WAITING_APPROVAL" && user.permissions.includes("request.approve");
  const canExecute =
    request.status === "WAITING_EXECUTION" && user.permissions.includes("request.execute");
  const actions = [
    canApprove ? `<button data-action="approve" data-id="${request.id}">Approve</button>` : "",
    canApprove ? `<button data-action="reject" data-id="${request.id}">Reject</button>` : "",
    canExecute ? `<button data-action="execute" data-id="${request.id}">Mark as executed</button>` : "",
    canExecute ? `<button data-action="notExecute" data-id="${request.id}">Not executed</button>` : "",
  ].join(" ");
  return `
<h2>Request ${request.id}</h2>
${table(
    ["Field", "Value"],
    [
      ["Title", esc(request.title)],
      ["Type", esc(request.request_type)],
      ["Status", esc(request.status)],
      ["Subject", esc(request.subject_iufaid ?? "")],
      ["Requested By", esc(request.requester_username)],
      ["Property Of", esc(request.part_assigned_name)],
      ["Description", esc(request.description ?? "")],
      ["Comments", esc(request.comments ?? "")],
      ["Submitted", esc(request.submission_date)],
    ],
  )}
<div class="actions">${actions}</div>
<p><a href="#/uuis/request/list">Back to list</a></p>`;
}

export function renderRequestForm(subjects: Asset[]): string {
  const subjectOptions = [option("", "No subject")].concat(
    subjects.map((a) => option(a.id, `${a.iufaid ?? a.id} — ${a.name}`)),
  );
  return `
<h2>New Request</h2>
<form id="request-form">
  <label class="field"><span>Comments</span><textarea name="comments"></textarea></label>
  <fieldset>
    <legend>Advanced</legend>
    <label class="field"><span>Request type</span>
      <select name="request_type">
        ${option("", "(basic request)")}
        ${["TRANSFER", "REPAIR", "ACQUISITION", "OTHER"].map((t) => option(t, t)).join("")}
      </select>
    </label>
    <label class="field"><span>Subject asset</span>
      <select name="subject_id">${subjectOptions.join("")}</select>
    </label>
  </fieldset>
  <button type="submit">Create</button>
</form>`;
}

export async function loadDashboard(api: ApiClient): Promise<RequestBuckets> {
  return api.requestList();
}

export function wireDashboard(root: HTMLElement, api: ApiClient, refresh: (msg?: string) => void): void {
  root.querySelectorAll<HTMLButtonElement>("button[data-action]").forEach((button) => {
    button.addEventListener("click", async () => {
      const id = Number(button.dataset.id);
      const action = button.dataset.action!;
      try {
        if (action === "approve") await api.approve(id);
        if (action === "reject") await api.reject(id);
        if (action === "execute") await api.execute(id);
        if (action === "notExecute") await api.notExecute(id);
        refresh(action === "reject" ? "Request rejected" : undefined);
      } catch (error) {
        refresh(String(error));
      }
    });
  });
}
