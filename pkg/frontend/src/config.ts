// The service base URL is baked in at build time (LEXITUTOR_API_BASE) via
// dist/config.js; a window override lets deployments repoint without a
// rebuild, and tests inject their own value.

declare global {
  interface Window {
    LEXITUTOR_API_BASE?: string;
  }
}

export const DEFAULT_API_BASE = "http://localhost:8080";

export function apiBase(): string {
  if (typeof window !== "undefined" && window.LEXITUTOR_API_BASE) {
    return window.LEXITUTOR_API_BASE;
  }
  return DEFAULT_API_BASE;
}
