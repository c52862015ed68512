// Typed client for the tutor service JSON API.

import { apiBase } from "./config.js";

export type Level = "elemental" | "pre_intermediate" | "upper_intermediate";

export interface LevelInfo {
  level: Level;
  model_id: string;
  vocab_size: number;
  window: number;
}

export interface GenerateResponse {
  session_id: string;
  seed_text: string;
  generated_words: string[];
  full_text: string;
  level: Level;
  model_id: string;
  latency_ms: number;
}

export interface SessionTurn {
  seed_text: string;
  generated_words: string[];
  full_text: string;
  timestamp: string;
  latency_ms: number;
}

export interface SessionRecord {
  session_id: string;
  created_at: string;
  level: Level;
  turns: SessionTurn[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public errorCode: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${apiBase()}${path}`, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch (err) {
    throw new ApiError(0, "network", `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let code = "error";
    let message = `request failed (${response.status})`;
    try {
      const data = await response.json();
      code = data.error_code ?? code;
      message = data.message ?? message;
    } catch {
      // non-JSON error body; keep the defaults
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export function getHealth(): Promise<{ status: string; models_loaded: number }> {
  return request("GET", "/api/health");
}

export function getLevels(): Promise<LevelInfo[]> {
  return request("GET", "/api/levels");
}

export function createSession(level: Level): Promise<SessionRecord> {
  return request("POST", "/api/sessions", { level });
}

export function getSession(sessionId: string): Promise<SessionRecord> {
  return request("GET", `/api/sessions/${sessionId}`);
}

export function generate(
  level: Level,
  sessionId: string,
  seedText: string,
): Promise<GenerateResponse> {
  return request("POST", "/api/generate", {
    seed_text: seedText,
    level,
    session_id: sessionId,
  });
}

export async function transcribe(audio: Blob): Promise<string> {
  const form = new FormData();
  form.append("file", audio, "utterance.wav");
  let response: Response;
  try {
    response = await fetch(`${apiBase()}/api/transcribe`, { method: "POST", body: form });
  } catch (err) {
    throw new ApiError(0, "network", `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    const data = await response.json().catch(() => ({}));
    throw new ApiError(response.status, data.error_code ?? "error", data.message ?? "transcription failed");
  }
  return (await response.json()).text as string;
}
