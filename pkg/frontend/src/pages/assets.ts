// Asset pages: list, detail with typed properties, create and edit forms,
// and the new-asset-type form.

import type { ApiClient } from "../api.js";
import { esc, field, option, pager, table } from "../render.js";
import type { Asset, AssetType, Location, Page, UniversityPart } from "../types.js";

export function renderAssetList(page: Page<Asset>): string {
  return `
<h2>Asset List</h2>
${table(
    ["Id", "Iufa ID", "Legacy ID", "Type", "Name", "Details", "Owner", "Location"],
    page.rows.map((a) => [
      `<a href="#/uuis/asset/show/${a.id}">${a.id}</a>`,
      esc(a.iufaid),
      esc(a.legacyid ?? ""),
      esc(a.type_name),
      esc(a.name),
      esc(a.details ?? ""),
      esc(a.owner_name),
      esc(a.location_name),
    ]),
  )}
${pager(page.page, page.pages, page.total, "/uuis/asset/list")}
<p><a class="button" href="#/uuis/asset/create">New Asset</a>
   <a class="button" href="#/uuis/assetType/create">New Asset Type</a></p>`;
}

export function renderAssetDetail(asset: Asset): string {
  const propertyRows = asset.properties.map((p) => [esc(p.name), esc(p.value)]);
  return `
<h2>Asset ${asset.id}</h2>
${table(
    ["Field", "Value"],
    [
      ["Iufa ID", esc(asset.iufaid)],
      ["Legacy ID", esc(asset.legacyid ?? "")],
      ["Type", esc(asset.type_name)],
      ["Name", esc(asset.name)],
      ["Details", esc(asset.details ?? "")],
      ["Serial Number", esc(asset.serial_number ?? "")],
      ["Status", esc(asset.status)],
      ["Owner", esc(asset.owner_name)],
      ["Location", esc(asset.location_name)],
      ["Parent", esc(asset.parent_iufaid ?? "No parent")],
      ["Assignee", esc(asset.assignee_username ?? "")],
    ],
  )}
<h3>Properties</h3>
${propertyRows.length ? table(["Property", "Value"], propertyRows) : "<p>No properties</p>"}
<p><a class="button" href="#/uuis/asset/edit/${asset.id}">Edit asset</a>
   <a href="#/uuis/asset/list">Back to list</a></p>`;
}

export interface AssetFormData {
  types: AssetType[];
  locations: Location[];
  parts: UniversityPart[];
  assets: Asset[];
  current?: Asset;
  selectedTypeId?: number;
}

export function propertyInputs(
  type: AssetType | undefined,
  values: { property_id: number; value: string }[],
): string {
  if (!type || type.properties.length === 0) return "";
  const byId = new Map(values.map((v) => [v.property_id, v.value]));
  const inputs = type.properties
    .map((p) =>
      field(
        p.name,
        `<input name="prop-${p.id}" value="${esc(byId.get(p.id) ?? "")}"` +
          ` placeholder="${esc(p.hint ?? "")}" />`,
      ),
    )
    .join("\n");
  return `<fieldset><legend>Properties</legend>${inputs}</fieldset>`;
}

export function renderAssetForm(data: AssetFormData): string {
  const current = data.current;
  const selectedType = data.selectedTypeId ?? current?.type_id ?? data.types[0]?.id;
  const typeOptions = data.types
    .map((t) => option(t.id, t.name, t.id === selectedType))
    .join("");
  const typeForProperties = data.types.find((t) => t.id === selectedType);
  const locationOptions = data.locations
    .map((l) => option(l.id, l.name, l.id === current?.location_id))
    .join("");
  const ownerOptions = [option("", "Please select an owner...")].concat(
    data.parts.map((p) => option(p.id, p.name, p.id === current?.owner_id)),
  );
  const parentOptions = [option("", "No parent", !current?.parent_id)].concat(
    data.assets
      .filter((a) => a.id !== current?.id)
      .map((a) => option(a.id, a.iufaid ?? String(a.id), a.id === current?.parent_id)),
  );
  const statusOptions = ["AVAILABLE", "RESERVED", "RETIRED"]
    .map((s) => option(s, s, (current?.status ?? "AVAILABLE") === s))
    .join("");
  const heading = current ? `Edit Asset ${current.id}` : "Create Asset";
  return `
<h2>${heading}</h2>
<form id="asset-form" ${current ? `data-id="${current.id}" data-version="${current.version}"` : ""}>
  ${field("Legacy ID", `<input name="legacyid" value="${esc(current?.legacyid ?? "")}" />`)}
  ${field("Type", `<select name="type_id" ${current ? "disabled" : ""}>${typeOptions}</select>`)}
  ${field("Serial Number", `<input name="serial_number" value="${esc(current?.serial_number ?? "")}" />`)}
  ${field("Name", `<input name="name" required value="${esc(current?.name ?? "")}" />`)}
  ${field("Details", `<input name="details" value="${esc(current?.details ?? "")}" />`)}
  ${field("Location", `<select name="location_id">${locationOptions}</select>`)}
  ${field("Status", `<select name="status">${statusOptions}</select>`)}
  ${field("Parent", `<select name="parent_id">${parentOptions.join("")}</select>`)}
  ${field("Owner", `<select name="owner_id">${ownerOptions.join("")}</select>`)}
  ${propertyInputs(typeForProperties, current?.properties ?? [])}
  <button type="submit">${current ? "Update" : "Create"}</button>
</form>`;
}

export function readPropertyValues(form: HTMLFormElement): Record<number, string> {
  const values: Record<number, string> = {};
  Array.from(form.elements).forEach((element) => {
    const input = element as HTMLInputElement;
    if (input.name?.startsWith("prop-") && input.value.trim() !== "") {
      values[Number(input.name.slice(5))] = input.value;
    }
  });
  return values;
}

export function renderAssetTypeForm(): string {
  return `
<h2>Create Asset Type</h2>
<form id="asset-type-form">
  ${field("Name", `<input name="name" required />`)}
  ${field("Description", `<input name="description" />`)}
  ${field("Properties (one per line, name:hint)", `<textarea name="properties"></textarea>`)}
  <button type="submit">Create</button>
</form>`;
}

export async function loadAssetForm(api: ApiClient, assetId?: number): Promise<AssetFormData> {
  const [types, locations, parts, assets] = await Promise.all([
    api.assetTypeList(),
    api.locationList(1, 1000),
    api.partList(),
    api.assetList(1, 1000),
  ]);
  return {
    types: types.rows,
    locations: locations.rows,
    parts: parts.rows,
    assets: assets.rows,
    current: assetId === undefined ? undefined : await api.assetShow(assetId),
  };
}

export function parseTypeProperties(raw: string): { name: string; hint: string }[] {
  return raw
    .split("\n")
    .map((line) => line.trim())
    .filter(Boolean)
    .map((line) => {
      const [name, ...rest] = line.split(":");
      return { name: name.trim(), hint: rest.join(":").trim() };
    });
}
