// Single UI state store. Every mutation funnels through here, and only one
// generate request may be in flight at a time; a level switch always starts
// a fresh session.

import * as api from "./api.js";
import type { GenerateResponse, Level, SessionTurn } from "./api.js";

export interface PracticeTurn {
  seed_text: string;
  generated_words: string[];
  full_text: string;
  timestamp: string;
}

export interface UiState {
  level: Level | null;
  sessionId: string | null;
  turns: PracticeTurn[];
  pending: boolean;
  error: string | null;
  notice: string | null;
}

export type Listener = (state: UiState) => void;

type ApiShape = Pick<typeof api, "createSession" | "generate" | "getSession">;

export class Store {
  private state: UiState = {
    level: null,
    sessionId: null,
    turns: [],
    pending: false,
    error: null,
    notice: null,
  };
  private listeners: Listener[] = [];

  constructor(private backend: ApiShape = api) {}

  getState(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Select a level; always opens a new session, even mid-practice. */
  async startSession(level: Level): Promise<void> {
    this.update({ level, sessionId: null, turns: [], error: null, notice: null });
    try {
      const session = await this.backend.createSession(level);
      // ignore stale responses after a quick level double-switch
      if (this.state.level !== level) return;
      this.update({ sessionId: session.session_id, turns: [] });
    } catch (err) {
      this.update({ error: describeError(err) });
    }
  }

  /**
   * Submit a seed for continuation. Whitespace-only seeds are rejected
   * locally; a second submit while one is pending is ignored.
   */
  async submitSeed(text: string): Promise<PracticeTurn | null> {
    if (this.state.pending) return null;
    const seed = text.trim();
    if (!seed) {
      this.update({ error: "Type a few words first." });
      return null;
    }
    const { level, sessionId } = this.state;
    if (!level || !sessionId) {
      this.update({ error: "Pick a level to start practicing." });
      return null;
    }
    this.update({ pending: true, error: null });
    try {
      const result: GenerateResponse = await this.backend.generate(level, sessionId, seed);
      const turn: PracticeTurn = {
        seed_text: result.seed_text,
        generated_words: result.generated_words,
        full_text: result.full_text,
        timestamp: new Date().toISOString(),
      };
      this.update({ pending: false, turns: [...this.state.turns, turn] });
      return turn;
    } catch (err) {
      this.update({ pending: false, error: describeError(err) });
      return null;
    }
  }

  /** Reload a session transcript from the service. */
  async loadHistory(sessionId: string): Promise<void> {
    try {
      const record = await this.backend.getSession(sessionId);
      this.update({
        level: record.level,
        sessionId: record.session_id,
        turns: record.turns.map((t: SessionTurn) => ({
          seed_text: t.seed_text,
          generated_words: t.generated_words,
          full_text: t.full_text,
          timestamp: t.timestamp,
        })),
        error: null,
        notice: null,
      });
    } catch (err) {
      if (err instanceof api.ApiError && err.status === 404) {
        this.update({ sessionId: null, turns: [], notice: "That session has expired. Start a new one." });
      } else {
        this.update({ error: describeError(err) });
      }
    }
  }

  /** The tail of the last continuation, offered as the next seed. */
  continueFromLastTurn(windowWords = 6): string | null {
    const last = this.state.turns[this.state.turns.length - 1];
    if (!last) return null;
    return last.full_text.split(" ").slice(-windowWords).join(" ");
  }

  clearError(): void {
    this.update({ error: null });
  }
}

export function describeError(err: unknown): string {
  if (err instanceof api.ApiError) {
    if (err.status === 0) return "Can't reach the practice service. Is it running?";
    if (err.status === 503) return "No model is loaded for this level yet.";
    return err.message;
  }
  return String(err);
}
