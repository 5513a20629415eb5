/** Typed fetch wrappers over the workbench HTTP API. */

import { Json } from "./canonical.js";
import { SessionPayload } from "./state.js";

export interface CreateResponse {
  id: string;
  report: Json;
}

export class ApiError extends Error {
  constructor(public status: number, public body: Json) {
    super(`server returned ${status}`);
  }
}

async function request(path: string, init?: RequestInit): Promise<Json> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = (await response.json()) as Json;
  if (!response.ok) throw new ApiError(response.status, body);
  return body;
}

export async function createSession(surface: Json): Promise<CreateResponse> {
  return (await request("/sessions", {
    method: "POST",
    body: JSON.stringify(surface),
  })) as unknown as CreateResponse;
}

export async function getState(id: string): Promise<SessionPayload> {
  return (await request(`/sessions/${id}`)) as unknown as SessionPayload;
}

export async function flipArc(id: string, arc: string): Promise<SessionPayload> {
  return (await request(`/sessions/${id}/flip`, {
    method: "POST",
    body: JSON.stringify({ arc }),
  })) as unknown as SessionPayload;
}

export async function undo(id: string): Promise<SessionPayload> {
  return (await request(`/sessions/${id}/undo`, {
    method: "POST",
  })) as unknown as SessionPayload;
}

export async function mutate(
  id: string,
  vertex: string,
  mode: "surface" | "oppermann"
): Promise<Json> {
  return request(`/sessions/${id}/mutate`, {
    method: "POST",
    body: JSON.stringify({ vertex, mode }),
  });
}

export async function verify(
  id: string,
  arc: string,
  mode: "strict" | "sign-relaxed" | "support"
): Promise<Json> {
  return request(`/sessions/${id}/verify`, {
    method: "POST",
    body: JSON.stringify({ arc, mode }),
  });
}
