/**
 * HTTP client for the landsig service.
 *
 * Every error response carries one documented code; ApiError exposes it so
 * the UI can show precise toasts without parsing messages.
 */

import type {
  Bbox,
  ClassificationView,
  DatasetInfo,
  FinalizeView,
  OverlapView,
  SessionView,
  TemplateView,
  ZoneFeatureCollection,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  detail: unknown;

  constructor(code: string, message: string, detail?: unknown) {
    super(message);
    this.code = code;
    this.detail = detail;
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(`${base}${path}`, init);
  } catch (err) {
    throw new ApiError("IoError", `service unreachable: ${String(err)}`);
  }
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    if (body && typeof body === "object" && "code" in body) {
      const e = body as { code: string; message: string; detail?: unknown };
      throw new ApiError(e.code, e.message, e.detail);
    }
    throw new ApiError("IoError", `unexpected response ${res.status}`);
  }
  return body as T;
}

function post(body: unknown, method = "POST"): RequestInit {
  return {
    method,
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class LandsigApi {
  constructor(private base: string = "") {}

  getDatasets(): Promise<DatasetInfo[]> {
    return request(this.base, "/datasets");
  }

  getTemplate(): Promise<TemplateView> {
    return request(this.base, "/template");
  }

  getZones(dataset: string): Promise<ZoneFeatureCollection> {
    return request(this.base, `/zones?dataset=${encodeURIComponent(dataset)}`);
  }

  openSession(dataset: string, bbox: Bbox): Promise<SessionView> {
    return request(this.base, "/sessions", post({ dataset, bbox }));
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}`);
  }

  reviseSession(sessionId: string, bbox: Bbox): Promise<SessionView> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}`, post({ bbox }, "PATCH"));
  }

  finalizeSession(sessionId: string, decision: "accept" | "discard"): Promise<FinalizeView> {
    return request(
      this.base,
      `/sessions/${encodeURIComponent(sessionId)}/finalize`,
      post({ decision }),
    );
  }

  classify(dataset: string, bbox: Bbox): Promise<ClassificationView> {
    return request(this.base, "/classify", post({ dataset, bbox }));
  }

  overlap(dataset: string, bbox: Bbox, label: string): Promise<OverlapView> {
    return request(this.base, "/overlap", post({ dataset, bbox, label }));
  }
}
