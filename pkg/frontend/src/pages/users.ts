// Users & permissions pages: user list/detail/forms and role management
// with grouped permission checkboxes.

import type { ApiClient } from "../api.js";
import { esc, field, option, pager, table } from "../render.js";
import type { Page, Role, UserRow } from "../types.js";

export const PERMISSION_GROUPS: Record<string, string[]> = {
  Requests: ["request.create", "request.approve", "request.execute"],
  Assets: ["asset.view", "asset.edit", "asset.create"],
  Locations: ["location.create", "location.edit", "location.delete"],
  Administration: ["user.admin", "report.view", "audit.view", "search.advanced"],
};

export function renderUserList(page: Page<UserRow>): string {
  return `
<h2>User List</h2>
${table(
    ["Id", "Username", "Name", "Level"],
    page.rows.map((u) => [
      `<a href="#/uuis/user/show/${u.id}">${u.id}</a>`,
      esc(u.username),
      esc(u.name),
      String(u.level),
    ]),
  )}
${pager(page.page, page.pages, page.total, "/uuis/user/list")}
<p><a class="button" href="#/uuis/user/create">New User</a>
   <a class="button" href="#/uuis/role/list">Roles</a></p>`;
}

export function renderUserDetail(user: UserRow): string {
  return `
<h2>User ${user.id}</h2>
${table(
    ["Field", "Value"],
    [
      ["Username", esc(user.username)],
      ["Name", esc(user.name)],
      ["Level", String(user.level)],
      ["Roles", esc((user.roles ?? []).join(", "))],
      ["Permissions", esc((user.permissions ?? []).join(" "))],
    ],
  )}
<p><a class="button" href="#/uuis/user/edit/${user.id}">Edit user</a>
   <button id="delete-user" data-id="${user.id}">Delete user</button>
   <a href="#/uuis/user/list">Back to list</a></p>`;
}

export interface UserFormData {
  roles: Role[];
  current?: UserRow;
}

export function renderUserForm(data: UserFormData): string {
  const current = data.current;
  const granted = new Set(current?.roles ?? []);
  const roleBoxes = data.roles
    .map(
      (r) => `<label class="check">
  <input type="checkbox" name="roles" value="${r.id}" ${granted.has(r.name) ? "checked" : ""} />
  ${esc(r.name)} <small>${esc(r.permissions.join(", "))}</small>
</label>`,
    )
    .join("\n");
  return `
<h2>${current ? `Edit User ${current.id}` : "Create User"}</h2>
<form id="user-form" ${current ? `data-id="${current.id}" data-version="${current.version}"` : ""}>
  ${current ? "" : field("Username", `<input name="username" required />`)}
  ${field("Name", `<input name="name" required value="${esc(current?.name ?? "")}" />`)}
  ${field("Password", `<input name="password" type="password" ${current ? "" : "required"} />`)}
  <fieldset><legend>Roles</legend>${roleBoxes}</fieldset>
  <button type="submit">${current ? "Update" : "Create"}</button>
</form>`;
}

export function renderRoleList(page: Page<Role>): string {
  return `
<h2>Role List</h2>
${table(
    ["Id", "Name", "Permissions", "Users"],
    page.rows.map((r) => [
      String(r.id),
      esc(r.name),
      esc(r.permissions.join(" ")),
      `<a href="#/uuis/role/users/${r.id}">Role List</a>`,
    ]),
  )}
<p><a class="button" href="#/uuis/role/create">Create</a></p>`;
}

export function renderRoleUsers(role: Role, members: UserRow[]): string {
  return `
<h2>Users with role ${esc(role.name)}</h2>
${table(
    ["Id", "Username", "Name", "Level"],
    members.map((u) => [String(u.id), esc(u.username), esc(u.name), String(u.level)]),
  )}
<p><a href="#/uuis/role/list">Back to roles</a></p>`;
}

export function renderRoleForm(current?: Role): string {
  const granted = new Set(current?.permissions ?? []);
  const groups = Object.entries(PERMISSION_GROUPS)
    .map(
      ([group, perms]) => `<fieldset><legend>${esc(group)}</legend>${perms
        .map(
          (p) => `<label class="check">
  <input type="checkbox" name="permissions" value="${p}" ${granted.has(p) ? "checked" : ""} /> ${p}
</label>`,
        )
        .join("\n")}</fieldset>`,
    )
    .join("\n");
  return `
<h2>${current ? `Edit Role ${current.id}` : "Create Role"}</h2>
<form id="role-form" ${current ? `data-id="${current.id}" data-version="${current.version}"` : ""}>
  ${field("Name", `<input name="name" required value="${esc(current?.name ?? "")}" />`)}
  ${groups}
  <button type="submit">${current ? "Update" : "Create"}</button>
  ${current ? `<button type="button" id="delete-role" data-id="${current.id}">Delete</button>` : ""}
</form>`;
}

export async function loadUserForm(api: ApiClient, userId?: number): Promise<UserFormData> {
  const roles = await api.roleList();
  return {
    roles: roles.rows,
    current: userId === undefined ? undefined : await api.userShow(userId),
  };
}

export function selectedValues(form: HTMLFormElement, name: string): string[] {
  return Array.from(form.querySelectorAll<HTMLInputElement>(`input[name="${name}"]:checked`)).map(
    (box) => box.value,
  );
}

export { option };
