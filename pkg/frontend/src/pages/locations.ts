// Location pages: list, detail, create and edit forms, type creation, and
// the confirmed delete.

import type { ApiClient } from "../api.js";
import { esc, field, option, pager, table } from "../render.js";
import { propertyInputs } from "./assets.js";
import type { AssetType, Location, Page, UniversityPart } from "../types.js";

export function renderLocationList(page: Page<Location>): string {
  return `
<h2>Location List</h2>
${table(
    ["Id", "Name", "Located At", "Type", "Capacity", "Owner"],
    page.rows.map((l) => [
      `<a href="#/uuis/location/show/${l.id}">${l.id}</a>`,
      esc(l.name),
      esc(l.parent_location_name ?? "-"),
      esc(l.type_name),
      String(l.capacity),
      esc(l.owner_name),
    ]),
  )}
${pager(page.page, page.pages, page.total, "/uuis/location/list")}
<p><a class="button" href="#/uuis/location/create">New Location</a>
   <a class="button" href="#/uuis/locationType/create">New Location Type</a></p>`;
}

export function renderLocationDetail(location: Location): string {
  const propertyRows = location.properties.map((p) => [esc(p.name), esc(p.value)]);
  return `
<h2>Location ${location.id}</h2>
${table(
    ["Field", "Value"],
    [
      ["Name", esc(location.name)],
      ["Description", esc(location.description ?? "")],
      ["Type", esc(location.type_name)],
      ["Located At", esc(location.parent_location_name ?? "-")],
      ["Capacity", String(location.capacity)],
      ["Owner", esc(location.owner_name)],
    ],
  )}
<h3>Properties</h3>
${propertyRows.length ? table(["Property", "Value"], propertyRows) : "<p>No properties</p>"}
<p>
  <a class="button" href="#/uuis/location/edit/${location.id}">Edit Location</a>
  <button id="delete-location" data-id="${location.id}">Delete Location</button>
  <a href="#/uuis/location/list">Back to list</a>
</p>`;
}

export interface LocationFormData {
  types: AssetType[];
  locations: Location[];
  parts: UniversityPart[];
  current?: Location;
}

export function renderLocationForm(data: LocationFormData): string {
  const current = data.current;
  const selectedType = current?.type_id ?? data.types[0]?.id;
  const typeOptions = data.types
    .map((t) => option(t.id, t.name, t.id === selectedType))
    .join("");
  const typeForProperties = data.types.find((t) => t.id === selectedType);
  const parentOptions = [option("", "No parent", !current?.parent_location_id)].concat(
    data.locations
      .filter((l) => l.id !== current?.id)
      .map((l) => option(l.id, l.name, l.id === current?.parent_location_id)),
  );
  const ownerOptions = data.parts
    .map((p) => option(p.id, p.name, p.id === current?.owner_id))
    .join("");
  return `
<h2>${current ? `Edit Location ${current.id}` : "Create Location"}</h2>
<form id="location-form" ${current ? `data-id="${current.id}" data-version="${current.version}"` : ""}>
  ${field("Name", `<input name="name" required value="${esc(current?.name ?? "")}" />`)}
  ${field("Description", `<input name="description" value="${esc(current?.description ?? "")}" />`)}
  ${field("Type", `<select name="type_id" ${current ? "disabled" : ""}>${typeOptions}</select>`)}
  ${field("Parent", `<select name="parent_location_id">${parentOptions.join("")}</select>`)}
  ${field("Capacity", `<input name="capacity" type="number" min="0" value="${current?.capacity ?? 0}" />`)}
  ${field("Owner", `<select name="owner_id">${ownerOptions}</select>`)}
  ${propertyInputs(typeForProperties, current?.properties ?? [])}
  <button type="submit">${current ? "Update" : "Create"}</button>
</form>`;
}

export function renderLocationTypeForm(): string {
  return `
<h2>Create Location Type</h2>
<form id="location-type-form">
  ${field("Name", `<input name="name" required />`)}
  ${field("Description", `<input name="description" />`)}
  ${field("Properties (one per line, name:hint)", `<textarea name="properties"></textarea>`)}
  <button type="submit">Create</button>
</form>`;
}

export async function loadLocationForm(api: ApiClient, locationId?: number): Promise<LocationFormData> {
  const [types, locations, parts] = await Promise.all([
    api.locationTypeList(),
    api.locationList(1, 1000),
    api.partList(),
  ]);
  return {
    types: types.rows,
    locations: locations.rows,
    parts: parts.rows,
    current: locationId === undefined ? undefined : await api.locationShow(locationId),
  };
}
