// REST client. The transport is injectable so tests can run against an
// in-memory service implementation.

import type { ControlsJson, GestureMeta, MotionJson, ProjectJson, SpeechResponse } from "./types.js";

export interface TransportResponse {
  status: number;
  json: unknown;
}

export type Transport = (method: string, path: string, body?: unknown) => Promise<TransportResponse>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export function fetchTransport(baseUrl = ""): Transport {
  return async (method, path, body) => {
    const resp = await fetch(baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    return { status: resp.status, json: await resp.json().catch(() => null) };
  };
}

export class ApiClient {
  constructor(private transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, json } = await this.transport(method, path, body);
    if (status >= 400) {
      const detail = (json as { detail?: string } | null)?.detail ?? `HTTP ${status}`;
      throw new ApiError(status, detail);
    }
    return json as T;
  }

  speech(text: string): Promise<SpeechResponse> {
    return this.call("POST", "/api/speech", { text });
  }

  generate(audioId: string, controls: ControlsJson, mode: "model" | "keyframe"): Promise<MotionJson> {
    return this.call("POST", "/api/generate", { audio_id: audioId, controls, mode });
  }

  controlsSchema(): Promise<unknown> {
    return this.call("GET", "/api/schema/controls");
  }

  listGestures(tag?: string): Promise<{ gestures: GestureMeta[] }> {
    return this.call("GET", `/api/motion-library${tag ? `?tag=${encodeURIComponent(tag)}` : ""}`);
  }

  gestureMotion(id: string, speed: number, flip: boolean): Promise<MotionJson> {
    return this.call("GET", `/api/motion-library/${id}?speed=${speed}&flip=${flip}`);
  }

  createProject(fields: { name?: string; text?: string; controls?: ControlsJson }): Promise<ProjectJson> {
    return this.call("POST", "/api/projects", fields);
  }

  getProject(id: string): Promise<ProjectJson> {
    return this.call("GET", `/api/projects/${id}`);
  }

  updateProject(id: string, fields: Partial<ProjectJson>): Promise<ProjectJson> {
    return this.call("PUT", `/api/projects/${id}`, fields);
  }

  undo(id: string): Promise<ProjectJson> {
    return this.call("POST", `/api/projects/${id}/undo`);
  }

  redo(id: string): Promise<ProjectJson> {
    return this.call("POST", `/api/projects/${id}/redo`);
  }
}
