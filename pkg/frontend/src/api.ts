/**
 * Typed fetch client for the tilt-hub annotation endpoints.
 *
 * Every function resolves with the parsed response body or rejects with a
 * HubError carrying the server's error name and detail verbatim, so the
 * caller can render exactly what the hub said.
 */

export interface TaskSummary {
  id: string;
  policyId: string;
  cursor: number;
  total: number;
  status: string;
}

export interface PolicyTree {
  id: string;
  body: string;
  length: number;
  sourceUrl?: string;
}

export interface NextQuestion {
  done: boolean;
  cursor: number;
  total: number;
  field?: string;
  prompt?: string;
}

export interface SuggestionItem {
  field: string;
  spanStart: number;
  spanEnd: number;
  confidence: number;
  method: string;
}

export interface SubmissionBody {
  field: string;
  present: boolean;
  spans: [number, number][];
  annotator: string;
}

export interface SubmissionReceipt {
  id: string;
  cursor: number;
  total: number;
  status: string;
  progress: number;
}

export interface ExportSeed {
  docId?: string;
  docName?: string;
  language?: string;
  country?: string;
}

export class HubError extends Error {
  readonly detail: string;
  readonly status: number;

  constructor(name: string, detail: string, status: number) {
    super(`${name}: ${detail}`);
    this.name = name;
    this.detail = detail;
    this.status = status;
  }
}

async function requestJson<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (cause) {
    const detail = cause instanceof Error ? cause.message : String(cause);
    throw new HubError("NetworkError", detail, 0);
  }
  if (!response.ok) {
    let name = `HTTP ${response.status}`;
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { error?: string; detail?: string };
      if (typeof body.error === "string") name = body.error;
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // Non-JSON error body; keep the status line.
    }
    throw new HubError(name, detail, response.status);
  }
  return (await response.json()) as T;
}

export function getTask(taskId: string): Promise<TaskSummary> {
  return requestJson(`/tasks/${encodeURIComponent(taskId)}`);
}

export function getPolicy(policyId: string): Promise<PolicyTree> {
  return requestJson(`/policies/${encodeURIComponent(policyId)}`);
}

export function getNext(taskId: string): Promise<NextQuestion> {
  return requestJson(`/tasks/${encodeURIComponent(taskId)}/next`);
}

export function getSuggestions(taskId: string, field: string): Promise<SuggestionItem[]> {
  const query = new URLSearchParams({ field });
  return requestJson(`/tasks/${encodeURIComponent(taskId)}/suggestions?${query}`);
}

export function postSubmission(
  taskId: string,
  body: SubmissionBody,
): Promise<SubmissionReceipt> {
  return requestJson(`/tasks/${encodeURIComponent(taskId)}/submissions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function exportUrl(taskId: string, seed: ExportSeed): string {
  const query = new URLSearchParams();
  if (seed.docId) query.set("docId", seed.docId);
  if (seed.docName) query.set("docName", seed.docName);
  if (seed.language) query.set("language", seed.language);
  if (seed.country) query.set("country", seed.country);
  const suffix = query.size > 0 ? `?${query}` : "";
  return `/tasks/${encodeURIComponent(taskId)}/export${suffix}`;
}

export function fetchExport(taskId: string, seed: ExportSeed): Promise<unknown> {
  return requestJson(exportUrl(taskId, seed));
}
