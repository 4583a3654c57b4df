// Shapes returned by the UUIS HTTP API.

export interface SessionUser {
  id: number;
  version: number;
  username: string;
  name: string;
  level: number;
  roles: string[];
  permissions: string[];
  managed_parts: number[];
  member_parts: number[];
}

export interface UniversityPart {
  id: number;
  version: number;
  name: string;
  parent_id: number | null;
  parent_name: string | null;
  type: string;
  heads?: UserRow[];
}

export interface UserRow {
  id: number;
  version: number;
  username: string;
  name: string;
  level: number;
  roles?: string[];
  permissions?: string[];
  managed_parts?: number[];
  member_parts?: number[];
}

export interface Role {
  id: number;
  version: number;
  name: string;
  permissions: string[];
}

export interface TypeProperty {
  id: number;
  name: string;
  hint: string | null;
}

export interface AssetType {
  id: number;
  version: number;
  name: string;
  description: string | null;
  properties: TypeProperty[];
}

export interface PropertyValue {
  property_id: number;
  name: string;
  value: string;
}

export interface Asset {
  id: number;
  version: number;
  iufaid: string | null;
  legacyid: string | null;
  status: string;
  name: string;
  details: string | null;
  serial_number: string | null;
  type_id: number;
  type_name: string;
  location_id: number;
  location_name: string;
  owner_id: number;
  owner_name: string;
  assignee_id: number | null;
  assignee_username: string | null;
  parent_id: number | null;
  parent_iufaid: string | null;
  properties: PropertyValue[];
}

export interface Location {
  id: number;
  version: number;
  name: string;
  description: string | null;
  type_id: number;
  type_name: string;
  parent_location_id: number | null;
  parent_location_name: string | null;
  owner_id: number;
  owner_name: string;
  assignee_id: number | null;
  capacity: number;
  properties: PropertyValue[];
}

export interface InventoryRequest {
  id: number;
  version: number;
  title: string;
  description: string | null;
  comments: string | null;
  request_type: string;
  status: string;
  requester_id: number;
  requester_username: string;
  part_assigned_id: number;
  part_assigned_name: string;
  user_assigned_id: number | null;
  subject_id: number | null;
  subject_iufaid: string | null;
  submission_date: string;
}

export interface RequestBuckets {
  waiting_approval: InventoryRequest[];
  waiting_execution: InventoryRequest[];
  mine: InventoryRequest[];
}

export interface Page<T> {
  rows: T[];
  page: number;
  per_page: number;
  total: number;
  pages: number;
  message?: string;
}

export interface SearchHit {
  entity: string;
  id: number;
  title: string;
  snippet: string | null;
}

export interface Report {
  columns: string[];
  rows: (string | number | null)[][];
  page: number;
  per_page: number;
  total: number;
}

export interface AuditEntry {
  id: number;
  actor: string | null;
  event: string;
  class_name: string;
  object_id: number;
  object_version: number | null;
  property_name: string | null;
  old_value: string | null;
  new_value: string | null;
  uri: string | null;
  date_created: string;
  last_updated: string;
}

export interface BulkOutcome {
  row: number;
  result: string;
  message: string | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  correlation_id: string;
}
