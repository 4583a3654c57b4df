// University structure pages: the part list, the create form with its
// heads selector, and the edit form.

import type { ApiClient } from "../api.js";
import { esc, field, option, table } from "../render.js";
import type { UniversityPart, UserRow } from "../types.js";

export function renderPartList(parts: UniversityPart[]): string {
  return `
<h2>UniversityPart List</h2>
${table(
    ["Id", "Name", "Parent", "Type"],
    parts.map((p) => [
      `<a href="#/uuis/universityPart/show/${p.id}">${p.id}</a>`,
      esc(p.name),
      esc(p.parent_name ?? ""),
      esc(p.type),
    ]),
  )}
<p><a class="button" href="#/uuis/universityPart/create">Create</a></p>`;
}

export function renderPartDetail(part: UniversityPart): string {
  const heads = (part.heads ?? []).map((h) => esc(h.username)).join(", ");
  return `
<h2>UniversityPart ${part.id}</h2>
${table(
    ["Field", "Value"],
    [
      ["Name", esc(part.name)],
      ["Parent", esc(part.parent_name ?? "No parent")],
      ["Type", esc(part.type)],
      ["Heads", heads],
    ],
  )}
<p><a class="button" href="#/uuis/universityPart/edit/${part.id}">Edit</a>
   <a href="#/uuis/universityPart/list">Back to list</a></p>`;
}

export interface PartFormData {
  parts: UniversityPart[];
  users: UserRow[];
  current?: UniversityPart;
}

export function renderPartForm(data: PartFormData): string {
  const current = data.current;
  const parentOptions = [option("", "No parent", !current?.parent_id)].concat(
    data.parts
      .filter((p) => p.id !== current?.id)
      .map((p) => option(p.id, p.name, p.id === current?.parent_id)),
  );
  const typeOptions = ["GROUP", "UNIVERSITY", "FACULTY", "DEPARTMENT"]
    .map((t) => option(t, t, (current?.type ?? "UNIVERSITY") === t))
    .join("");
  const headIds = new Set((current?.heads ?? []).map((h) => h.id));
  const headOptions = data.users
    .map((u) => option(u.id, u.name, headIds.has(u.id)))
    .join("");
  return `
<h2>${current ? `Edit UniversityPart ${current.id}` : "Create UniversityPart"}</h2>
<form id="part-form" ${current ? `data-id="${current.id}" data-version="${current.version}"` : ""}>
  ${field("Name", `<input name="name" required value="${esc(current?.name ?? "")}" />`)}
  ${field("Parent", `<select name="parent_id">${parentOptions.join("")}</select>`)}
  ${field("Type", `<select name="type">${typeOptions}</select>`)}
  ${field("Heads", `<select name="heads" multiple size="5">${headOptions}</select>`)}
  <button type="submit">${current ? "Update" : "Create"}</button>
</form>`;
}

export async function loadPartForm(api: ApiClient, partId?: number): Promise<PartFormData> {
  const [parts, users] = await Promise.all([api.partList(), api.userList(1, 1000)]);
  return {
    parts: parts.rows,
    users: users.rows,
    current: partId === undefined ? undefined : await api.partShow(partId),
  };
}
