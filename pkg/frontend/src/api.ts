// Typed client over the UUIS HTTP API. Every datum the UI renders comes
// through this module; there is no other channel to the backend.

import type {
  ApiErrorBody,
  Asset,
  AssetType,
  AuditEntry,
  BulkOutcome,
  InventoryRequest,
  Location,
  Page,
  Report,
  RequestBuckets,
  Role,
  SearchHit,
  SessionUser,
  UniversityPart,
  UserRow,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public correlationId?: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  // Outside a browser there is no cookie jar, so the client keeps the
  // session cookie itself; browsers never expose Set-Cookie and rely on
  // credentialed fetch instead.
  private cookie: string | null = null;

  constructor(private base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown, form?: FormData): Promise<T> {
    const headers: Record<string, string> = {};
    let payload: BodyInit | undefined;
    if (form) {
      payload = form;
    } else if (body !== undefined) {
      headers["content-type"] = "application/json";
      payload = JSON.stringify(body);
    }
    if (this.cookie) headers["cookie"] = this.cookie;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: payload,
      credentials: "same-origin",
    });
    const setCookie = (response.headers as Headers & { getSetCookie?: () => string[] })
      .getSetCookie?.();
    if (setCookie && setCookie.length > 0) {
      this.cookie = setCookie.map((c) => c.split(";")[0]).join("; ");
    }
    if (!response.ok) {
      let detail: ApiErrorBody | null = null;
      try {
        detail = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body; fall through with generic info
      }
      throw new ApiError(
        response.status,
        detail?.code ?? `http_${response.status}`,
        detail?.message ?? response.statusText,
        detail?.correlation_id,
      );
    }
    if (response.headers.get("content-type")?.includes("text/csv")) {
      return (await response.text()) as unknown as T;
    }
    return (await response.json()) as T;
  }

  get<T>(path: string): Promise<T> {
    return this.request<T>("GET", path);
  }

  post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>("POST", path, body);
  }

  // -- auth ---------------------------------------------------------------

  login(username: string, password: string): Promise<{ user: SessionUser }> {
    return this.post("/uuis/login", { username, password });
  }

  logout(): Promise<{ ok: boolean }> {
    const result = this.post<{ ok: boolean }>("/uuis/logout");
    this.cookie = null;
    return result;
  }

  session(): Promise<{ user: SessionUser }> {
    return this.get("/uuis/session");
  }

  // -- requests -------------------------------------------------------------

  requestList(): Promise<RequestBuckets> {
    return this.get("/uuis/request/list");
  }

  requestShow(id: number): Promise<InventoryRequest> {
    return this.get(`/uuis/request/show/${id}`);
  }

  requestCreate(body: {
    title?: string;
    description?: string;
    comments?: string;
    request_type?: string;
    subject_id?: number;
  }): Promise<InventoryRequest> {
    return this.post("/uuis/request/save", body);
  }

  approve(id: number): Promise<InventoryRequest> {
    return this.post(`/uuis/request/approve/${id}`);
  }

  reject(id: number): Promise<InventoryRequest> {
    return this.post(`/uuis/request/reject/${id}`);
  }

  execute(id: number): Promise<InventoryRequest> {
    return this.post(`/uuis/request/execute/${id}`);
  }

  notExecute(id: number): Promise<InventoryRequest> {
    return this.post(`/uuis/request/notExecute/${id}`);
  }

  assign(id: number, partId: number): Promise<InventoryRequest> {
    return this.post(`/uuis/request/assign/${id}`, { part_id: partId });
  }

  // -- inventory --------------------------------------------------------------

  assetList(page = 1, perPage = 20, locationId?: number): Promise<Page<Asset>> {
    const location = locationId === undefined ? "" : `&location_id=${locationId}`;
    return this.get(`/uuis/asset/list?page=${page}&per_page=${perPage}${location}`);
  }

  assetShow(id: number): Promise<Asset> {
    return this.get(`/uuis/asset/show/${id}`);
  }

  assetSave(body: Record<string, unknown>): Promise<Asset> {
    return this.post("/uuis/asset/save", body);
  }

  assetUpdate(id: number, body: Record<string, unknown>): Promise<Asset> {
    return this.post(`/uuis/asset/update/${id}`, body);
  }

  assetTypeList(): Promise<Page<AssetType>> {
    return this.get("/uuis/assetType/list?per_page=100");
  }

  assetTypeSave(body: Record<string, unknown>): Promise<AssetType> {
    return this.post("/uuis/assetType/save", body);
  }

  locationList(page = 1, perPage = 20): Promise<Page<Location>> {
    return this.get(`/uuis/location/list?page=${page}&per_page=${perPage}`);
  }

  locationShow(id: number): Promise<Location> {
    return this.get(`/uuis/location/show/${id}`);
  }

  locationSave(body: Record<string, unknown>): Promise<Location> {
    return this.post("/uuis/location/save", body);
  }

  locationUpdate(id: number, body: Record<string, unknown>): Promise<Location> {
    return this.post(`/uuis/location/update/${id}`, body);
  }

  locationDelete(id: number): Promise<{ ok: boolean }> {
    return this.post(`/uuis/location/delete/${id}`);
  }

  locationTypeList(): Promise<Page<AssetType>> {
    return this.get("/uuis/locationType/list?per_page=100");
  }

  locationTypeSave(body: Record<string, unknown>): Promise<AssetType> {
    return this.post("/uuis/locationType/save", body);
  }

  // -- structure, users, roles --------------------------------------------------

  partList(): Promise<{ rows: UniversityPart[]; total: number }> {
    return this.get("/uuis/universityPart/list");
  }

  partShow(id: number): Promise<UniversityPart> {
    return this.get(`/uuis/universityPart/show/${id}`);
  }

  partSave(body: Record<string, unknown>): Promise<UniversityPart> {
    return this.post("/uuis/universityPart/save", body);
  }

  partUpdate(id: number, body: Record<string, unknown>): Promise<UniversityPart> {
    return this.post(`/uuis/universityPart/update/${id}`, body);
  }

  userList(page = 1, perPage = 20): Promise<Page<UserRow>> {
    return this.get(`/uuis/user/list?page=${page}&per_page=${perPage}`);
  }

  userShow(id: number): Promise<UserRow> {
    return this.get(`/uuis/user/show/${id}`);
  }

  userSave(body: Record<string, unknown>): Promise<UserRow> {
    return this.post("/uuis/user/save", body);
  }

  userUpdate(id: number, body: Record<string, unknown>): Promise<UserRow> {
    return this.post(`/uuis/user/update/${id}`, body);
  }

  userDelete(id: number): Promise<{ ok: boolean }> {
    return this.post(`/uuis/user/delete/${id}`);
  }

  roleList(): Promise<Page<Role>> {
    return this.get("/uuis/role/list?per_page=100");
  }

  roleUsers(id: number): Promise<{ rows: UserRow[]; total: number }> {
    return this.get(`/uuis/role/users/${id}`);
  }

  roleSave(body: Record<string, unknown>): Promise<Role> {
    return this.post("/uuis/role/save", body);
  }

  roleUpdate(id: number, body: Record<string, unknown>): Promise<Role> {
    return this.post(`/uuis/role/update/${id}`, body);
  }

  roleDelete(id: number): Promise<{ ok: boolean }> {
    return this.post(`/uuis/role/delete/${id}`);
  }

  // -- bulk, search, reports, audit ------------------------------------------------

  bulkUpload(kind: "insert" | "update", file: Blob, name: string): Promise<{ outcomes: BulkOutcome[] }> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request("POST", `/uuis/bulkLoad/${kind}`, undefined, form);
  }

  searchBasic(query: string, page = 1, perPage = 20): Promise<Page<SearchHit>> {
    return this.get(`/uuis/search/basic?q=${encodeURIComponent(query)}&page=${page}&per_page=${perPage}`);
  }

  searchAdvanced(body: {
    entity: string;
    clauses: { field: string; value: string; connective: string }[];
    page?: number;
    per_page?: number;
  }): Promise<Page<SearchHit>> {
    return this.post("/uuis/search/advanced", body);
  }

  reportAssetsByLocation(params = ""): Promise<Report> {
    return this.get(`/uuis/report/assetsByLocation${params}`);
  }

  reportRequests(params = ""): Promise<Report> {
    return this.get(`/uuis/report/requests${params}`);
  }

  reportUserPermissions(params = ""): Promise<Report> {
    return this.get(`/uuis/report/userPermissions${params}`);
  }

  reportCsv(name: "assetsByLocation" | "requests" | "userPermissions", params = ""): Promise<string> {
    return this.get(`/uuis/report/${name}/export${params}`);
  }

  auditList(page = 1, perPage = 10, order: "asc" | "desc" = "desc"): Promise<Page<AuditEntry>> {
    return this.get(`/uuis/auditLog/list?page=${page}&per_page=${perPage}&sort=lastUpdated&order=${order}`);
  }
}
