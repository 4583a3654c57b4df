// Browser entry point: hash router over the page modules. Routes mirror
// the backend paths (#/uuis/...) so every screen corresponds to an API
// surface. All data comes from the ApiClient; this module only wires DOM.

import { ApiClient, ApiError } from "./api.js";
import { navEntries, renderShell } from "./nav.js";
import { renderAuditList } from "./pages/audit.js";
import {
  loadAssetForm,
  parseTypeProperties,
  readPropertyValues,
  renderAssetDetail,
  renderAssetForm,
  renderAssetList,
  renderAssetTypeForm,
} from "./pages/assets.js";
import { renderBulkPage } from "./pages/bulk.js";
import {
  loadLocationForm,
  renderLocationDetail,
  renderLocationForm,
  renderLocationList,
  renderLocationTypeForm,
} from "./pages/locations.js";
import { renderLogin } from "./pages/login.js";
import {
  renderDashboard,
  renderRequestDetail,
  renderRequestForm,
  wireDashboard,
} from "./pages/requests.js";
import {
  filterQuery,
  loadReportContext,
  renderAssetsByLocation,
  renderReportIndex,
  renderRequestReport,
  renderUserPermissionReport,
} from "./pages/reports.js";
import {
  emptyAdvancedState,
  nonEmptyClauses,
  readAdvancedForm,
  renderAdvancedSearch,
  renderBasicResults,
} from "./pages/search.js";
import { loadPartForm, renderPartDetail, renderPartForm, renderPartList } from "./pages/structure.js";
import {
  loadUserForm,
  renderRoleForm,
  renderRoleList,
  renderRoleUsers,
  renderUserDetail,
  renderUserForm,
  renderUserList,
  selectedValues,
} from "./pages/users.js";
import { banner } from "./render.js";
import type { SessionUser } from "./types.js";

const api = new ApiClient("");
let currentUser: SessionUser | null = null;
let flash: string | undefined;

const app = () => document.getElementById("app")!;

function friendlyError(error: unknown): string {
  if (error instanceof ApiError) {
    if (error.status === 500) {
      return `Something went wrong on our side. Reference: ${error.correlationId ?? "n/a"}`;
    }
    return error.message;
  }
  return String(error);
}

function setContent(html: string): HTMLElement {
  if (!currentUser) {
    app().innerHTML = html;
    return app();
  }
  app().innerHTML = renderShell(currentUser, navEntries(currentUser), html);
  const headerSearch = document.getElementById("header-search") as HTMLFormElement | null;
  headerSearch?.addEventListener("submit", (event) => {
    event.preventDefault();
    const q = (headerSearch.elements.namedItem("q") as HTMLInputElement).value;
    window.location.hash = `#/uuis/search/basic?q=${encodeURIComponent(q)}`;
  });
  return document.getElementById("content")!;
}

function takeFlash(): string | undefined {
  const message = flash;
  flash = undefined;
  return message;
}

function formValue(form: HTMLFormElement, name: string): string {
  return (form.elements.namedItem(name) as HTMLInputElement | HTMLSelectElement).value;
}

function optionalInt(value: string): number | undefined {
  return value === "" ? undefined : Number(value);
}

async function showLogin(message?: string): Promise<void> {
  currentUser = null;
  app().innerHTML = renderLogin(message);
  const form = document.getElementById("login-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const result = await api.login(formValue(form, "username"), formValue(form, "password"));
      currentUser = result.user;
      window.location.hash = "#/uuis/request/list";
      await route();
    } catch (error) {
      await showLogin(friendlyError(error));
    }
  });
}

async function guarded(go: () => Promise<void>): Promise<void> {
  try {
    await go();
  } catch (error) {
    if (error instanceof ApiError && error.status === 401) {
      await showLogin();
      return;
    }
    setContent(banner(friendlyError(error)));
  }
}

async function showDashboard(): Promise<void> {
  const buckets = await api.requestList();
  const root = setContent(renderDashboard(buckets, takeFlash()));
  wireDashboard(root, api, (message) => {
    flash = message;
    void route();
  });
}

async function showRequestDetail(id: number): Promise<void> {
  const request = await api.requestShow(id);
  const root = setContent(renderRequestDetail(request, currentUser!));
  wireDashboard(root, api, (message) => {
    flash = message;
    window.location.hash = "#/uuis/request/list";
  });
}

async function showRequestForm(): Promise<void> {
  const assets = currentUser!.permissions.includes("asset.view")
    ? (await api.assetList(1, 1000)).rows
    : [];
  const root = setContent(renderRequestForm(assets));
  const form = root.querySelector("#request-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      const requestType = formValue(form, "request_type");
      await api.requestCreate({
        comments: formValue(form, "comments") || undefined,
        request_type: requestType || undefined,
        subject_id: optionalInt(formValue(form, "subject_id")),
      });
      window.location.hash = "#/uuis/request/list";
    });
  });
}

async function showAssets(params: URLSearchParams): Promise<void> {
  const page = await api.assetList(Number(params.get("page") ?? 1), 20);
  setContent(renderAssetList(page));
}

async function showAssetForm(assetId?: number): Promise<void> {
  const data = await loadAssetForm(api, assetId);

  const draw = (): void => {
    const root = setContent(renderAssetForm(data));
    const form = root.querySelector("#asset-form") as HTMLFormElement;
    if (assetId === undefined) {
      // swapping the type swaps the property editor
      (form.elements.namedItem("type_id") as HTMLSelectElement).addEventListener("change", () => {
        data.selectedTypeId = Number(formValue(form, "type_id"));
        draw();
      });
    }
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      await guarded(async () => {
        const body: Record<string, unknown> = {
          name: formValue(form, "name"),
          legacyid: formValue(form, "legacyid") || null,
          serial_number: formValue(form, "serial_number") || null,
          details: formValue(form, "details") || null,
          location_id: Number(formValue(form, "location_id")),
          status: formValue(form, "status"),
          parent_id: optionalInt(formValue(form, "parent_id")) ?? null,
          owner_id: Number(formValue(form, "owner_id")),
          property_values: readPropertyValues(form),
        };
        if (assetId === undefined) {
          body.type_id = Number(formValue(form, "type_id"));
          const created = await api.assetSave(body);
          window.location.hash = `#/uuis/asset/show/${created.id}`;
        } else {
          body.version = Number(form.dataset.version);
          await api.assetUpdate(assetId, body);
          window.location.hash = `#/uuis/asset/show/${assetId}`;
        }
      });
    });
  };
  draw();
}

async function showAssetTypeForm(): Promise<void> {
  const root = setContent(renderAssetTypeForm());
  const form = root.querySelector("#asset-type-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      await api.assetTypeSave({
        name: formValue(form, "name"),
        description: formValue(form, "description") || null,
        properties: parseTypeProperties(formValue(form, "properties")),
      });
      window.location.hash = "#/uuis/asset/list";
    });
  });
}

async function showLocations(params: URLSearchParams): Promise<void> {
  const page = await api.locationList(Number(params.get("page") ?? 1), 20);
  setContent(renderLocationList(page));
}

async function showLocationDetail(id: number): Promise<void> {
  const location = await api.locationShow(id);
  const root = setContent(renderLocationDetail(location));
  root.querySelector("#delete-location")?.addEventListener("click", async () => {
    if (!window.confirm(`Delete location ${location.name}? Click ok to confirm.`)) return;
    await guarded(async () => {
      await api.locationDelete(id);
      flash = "Location deleted";
      window.location.hash = "#/uuis/location/list";
    });
  });
}

async function showLocationForm(locationId?: number): Promise<void> {
  const data = await loadLocationForm(api, locationId);
  const root = setContent(renderLocationForm(data));
  const form = root.querySelector("#location-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      const body: Record<string, unknown> = {
        name: formValue(form, "name"),
        description: formValue(form, "description") || null,
        parent_location_id: optionalInt(formValue(form, "parent_location_id")) ?? null,
        capacity: Number(formValue(form, "capacity")),
        owner_id: Number(formValue(form, "owner_id")),
        property_values: readPropertyValues(form),
      };
      if (locationId === undefined) {
        body.type_id = Number(formValue(form, "type_id"));
        const created = await api.locationSave(body);
        window.location.hash = `#/uuis/location/show/${created.id}`;
      } else {
        body.version = Number(form.dataset.version);
        await api.locationUpdate(locationId, body);
        window.location.hash = `#/uuis/location/show/${locationId}`;
      }
    });
  });
}

async function showLocationTypeForm(): Promise<void> {
  const root = setContent(renderLocationTypeForm());
  const form = root.querySelector("#location-type-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      await api.locationTypeSave({
        name: formValue(form, "name"),
        description: formValue(form, "description") || null,
        properties: parseTypeProperties(formValue(form, "properties")),
      });
      window.location.hash = "#/uuis/location/list";
    });
  });
}

async function showParts(): Promise<void> {
  const parts = await api.partList();
  setContent(renderPartList(parts.rows));
}

async function showPartDetail(id: number): Promise<void> {
  setContent(renderPartDetail(await api.partShow(id)));
}

async function showPartForm(partId?: number): Promise<void> {
  const data = await loadPartForm(api, partId);
  const root = setContent(renderPartForm(data));
  const form = root.querySelector("#part-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      const heads = Array.from(
        (form.elements.namedItem("heads") as HTMLSelectElement).selectedOptions,
      ).map((o) => Number(o.value));
      const body: Record<string, unknown> = {
        name: formValue(form, "name"),
        parent_id: optionalInt(formValue(form, "parent_id")) ?? null,
        type: formValue(form, "type"),
        heads,
      };
      if (partId === undefined) {
        await api.partSave(body);
      } else {
        body.version = Number(form.dataset.version);
        await api.partUpdate(partId, body);
      }
      window.location.hash = "#/uuis/universityPart/list";
    });
  });
}

async function showUsers(params: URLSearchParams): Promise<void> {
  const page = await api.userList(Number(params.get("page") ?? 1), 20);
  setContent(renderUserList(page));
}

async function showUserDetail(id: number): Promise<void> {
  const user = await api.userShow(id);
  const root = setContent(renderUserDetail(user));
  root.querySelector("#delete-user")?.addEventListener("click", async () => {
    if (!window.confirm(`Delete user ${user.username}?`)) return;
    await guarded(async () => {
      await api.userDelete(id);
      window.location.hash = "#/uuis/user/list";
    });
  });
}

async function showUserForm(userId?: number): Promise<void> {
  const data = await loadUserForm(api, userId);
  const root = setContent(renderUserForm(data));
  const form = root.querySelector("#user-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      const roles = selectedValues(form, "roles").map(Number);
      if (userId === undefined) {
        await api.userSave({
          username: formValue(form, "username"),
          name: formValue(form, "name"),
          password: formValue(form, "password"),
          roles,
        });
      } else {
        const body: Record<string, unknown> = {
          name: formValue(form, "name"),
          roles,
          version: Number(form.dataset.version),
        };
        const password = formValue(form, "password");
        if (password) body.password = password;
        await api.userUpdate(userId, body);
      }
      window.location.hash = "#/uuis/user/list";
    });
  });
}

async function showRoles(): Promise<void> {
  setContent(renderRoleList(await api.roleList()));
}

async function showRoleUsers(id: number): Promise<void> {
  const roles = await api.roleList();
  const role = roles.rows.find((r) => r.id === id);
  if (!role) throw new ApiError(404, "not_found", "no such role");
  const members = await api.roleUsers(id);
  setContent(renderRoleUsers(role, members.rows));
}

async function showRoleForm(roleId?: number): Promise<void> {
  const current =
    roleId === undefined
      ? undefined
      : (await api.roleList()).rows.find((r) => r.id === roleId);
  const root = setContent(renderRoleForm(current));
  const form = root.querySelector("#role-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    await guarded(async () => {
      const permissions = selectedValues(form, "permissions");
      if (roleId === undefined) {
        await api.roleSave({ name: formValue(form, "name"), permissions });
      } else {
        await api.roleUpdate(roleId, {
          name: formValue(form, "name"),
          permissions,
          version: Number(form.dataset.version),
        });
      }
      window.location.hash = "#/uuis/role/list";
    });
  });
  root.querySelector("#delete-role")?.addEventListener("click", async () => {
    if (!window.confirm("Delete this role?")) return;
    await guarded(async () => {
      await api.roleDelete(roleId!);
      window.location.hash = "#/uuis/role/list";
    });
  });
}

async function showBulk(): Promise<void> {
  const root = setContent(renderBulkPage());
  for (const kind of ["insert", "update"] as const) {
    const form = root.querySelector(`#bulk-${kind}`) as HTMLFormElement;
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      await guarded(async () => {
        const input = form.querySelector("input[type=file]") as HTMLInputElement;
        const file = input.files?.[0];
        if (!file) return;
        const result = await api.bulkUpload(kind, file, file.name);
        setContent(renderBulkPage(result.outcomes, kind));
        await showBulkRewire();
      });
    });
  }
}

async function showBulkRewire(): Promise<void> {
  // after rendering outcomes the forms need their handlers again
  await showBulk().catch(() => undefined);
}

async function showBasicSearch(params: URLSearchParams): Promise<void> {
  const query = params.get("q") ?? "";
  const page = await api.searchBasic(query, Number(params.get("page") ?? 1), 20);
  setContent(renderBasicResults(query, page));
}

async function showAdvancedSearch(): Promise<void> {
  let state = emptyAdvancedState();

  const draw = async (withResults?: boolean): Promise<void> => {
    let results;
    if (withResults) {
      results = await api.searchAdvanced({
        entity: state.entity,
        clauses: nonEmptyClauses(state),
        per_page: 20,
      });
    }
    const root = setContent(renderAdvancedSearch(state, results));
    const form = root.querySelector("#advanced-search") as HTMLFormElement;
    (form.elements.namedItem("entity") as HTMLSelectElement).addEventListener("change", () => {
      state = emptyAdvancedState((form.elements.namedItem("entity") as HTMLSelectElement).value);
      void draw();
    });
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      state = readAdvancedForm(form);
      // the form stays populated even when nothing matches
      await guarded(() => draw(true));
    });
  };
  await draw();
}

async function showReports(pathname: string, params: URLSearchParams): Promise<void> {
  const ctx = await loadReportContext(api);
  const filters = Object.fromEntries(params.entries());
  const query = filterQuery(filters);
  let html: string;
  let reportName: "assetsByLocation" | "requests" | "userPermissions";
  if (pathname.endsWith("assetsByLocation")) {
    reportName = "assetsByLocation";
    html = renderAssetsByLocation(await api.reportAssetsByLocation(query), ctx, filters);
  } else if (pathname.endsWith("requests")) {
    reportName = "requests";
    html = renderRequestReport(await api.reportRequests(query), ctx, filters);
  } else {
    reportName = "userPermissions";
    html = renderUserPermissionReport(await api.reportUserPermissions(query), ctx, filters);
  }
  const root = setContent(html);
  const form = root.querySelector("#report-filter") as HTMLFormElement | null;
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    const chosen: Record<string, string> = {};
    Array.from(form.elements).forEach((element) => {
      const input = element as HTMLInputElement;
      if (input.name && input.value) chosen[input.name] = input.value;
    });
    window.location.hash = `#/uuis/report/${reportName}${filterQuery(chosen)}`;
  });
  root.querySelector("#csv-download")?.addEventListener("click", async (event) => {
    event.preventDefault();
    const csv = await api.reportCsv(reportName, query);
    const blob = new Blob([csv], { type: "text/csv" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${reportName}.csv`;
    link.click();
    URL.revokeObjectURL(link.href);
  });
}

async function showAudit(params: URLSearchParams): Promise<void> {
  const order = params.get("order") === "asc" ? "asc" : "desc";
  const page = await api.auditList(Number(params.get("page") ?? 1), 10, order);
  setContent(renderAuditList(page, order));
}

export async function route(): Promise<void> {
  const hash = window.location.hash.replace(/^#/, "") || "/uuis/request/list";
  const [pathname, queryString] = hash.split("?");
  const params = new URLSearchParams(queryString ?? "");
  if (!currentUser) {
    await showLogin();
    return;
  }
  const segments = pathname.split("/").filter(Boolean); // ["uuis", controller, action, id?]
  const controller = segments[1] ?? "request";
  const action = segments[2] ?? "list";
  const id = segments[3] ? Number(segments[3]) : undefined;

  await guarded(async () => {
    if (pathname === "/uuis/logout") {
      await api.logout();
      await showLogin("Signed out");
      return;
    }
    switch (controller) {
      case "request":
        if (action === "list") return showDashboard();
        if (action === "show") return showRequestDetail(id!);
        if (action === "create") return showRequestForm();
        break;
      case "asset":
        if (action === "list") return showAssets(params);
        if (action === "show") return showAssetDetailPage(id!);
        if (action === "create") return showAssetForm();
        if (action === "edit") return showAssetForm(id);
        break;
      case "assetType":
        if (action === "create") return showAssetTypeForm();
        break;
      case "location":
        if (action === "list") return showLocations(params);
        if (action === "show") return showLocationDetail(id!);
        if (action === "create") return showLocationForm();
        if (action === "edit") return showLocationForm(id);
        break;
      case "locationType":
        if (action === "create") return showLocationTypeForm();
        break;
      case "universityPart":
        if (action === "list") return showParts();
        if (action === "show") return showPartDetail(id!);
        if (action === "create") return showPartForm();
        if (action === "edit") return showPartForm(id);
        break;
      case "user":
        if (action === "list") return showUsers(params);
        if (action === "show") return showUserDetail(id!);
        if (action === "create") return showUserForm();
        if (action === "edit") return showUserForm(id);
        break;
      case "role":
        if (action === "list") return showRoles();
        if (action === "users") return showRoleUsers(id!);
        if (action === "create") return showRoleForm();
        if (action === "edit") return showRoleForm(id);
        break;
      case "bulkLoad":
        return showBulk();
      case "search":
        if (action === "basic") return showBasicSearch(params);
        return showAdvancedSearch();
      case "report":
        if (!action || action === "list") {
          setContent(renderReportIndex());
          return;
        }
        return showReports(pathname, params);
      case "auditLog":
        return showAudit(params);
    }
    setContent(banner(`No such page: ${pathname}`));
  });
}

async function showAssetDetailPage(id: number): Promise<void> {
  setContent(renderAssetDetail(await api.assetShow(id)));
}

async function bootstrap(): Promise<void> {
  window.addEventListener("hashchange", () => void route());
  try {
    const session = await api.session();
    currentUser = session.user;
    await route();
  } catch {
    await showLogin();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void bootstrap();
}
