import { describe, expect, it } from "vitest";

import { ApiError, type GenerateResponse, type SessionRecord } from "../src/api.js";
import { Store } from "../src/state.js";

function fakeBackend(overrides: Partial<Record<string, unknown>> = {}) {
  let sessionCounter = 0;
  const calls = { createSession: 0, generate: 0, getSession: 0 };
  const backend = {
    calls,
    async createSession(level: string): Promise<SessionRecord> {
      calls.createSession += 1;
      sessionCounter += 1;
      return { session_id: `s-${sessionCounter}`, created_at: "now", level, turns: [] } as SessionRecord;
    },
    async generate(level: string, sessionId: string, seed: string): Promise<GenerateResponse> {
      calls.generate += 1;
      return {
        session_id: sessionId,
        seed_text: seed,
        generated_words: ["one", "two", "three", "four", "five"],
        full_text: `${seed} one two three four five`,
        level,
        model_id: level,
        latency_ms: 1,
      } as GenerateResponse;
    },
    async getSession(): Promise<SessionRecord> {
      calls.getSession += 1;
      throw new ApiError(404, "not_found", "unknown session");
    },
    ...overrides,
  };
  return backend;
}

describe("Store.startSession", () => {
  it("stores the session id and clears turns", async () => {
    const store = new Store(fakeBackend() as never);
    await store.startSession("elemental");
    expect(store.getState().sessionId).toBe("s-1");
    expect(store.getState().turns).toEqual([]);
  });

  it("level switch always opens a fresh session", async () => {
    const backend = fakeBackend();
    const store = new Store(backend as never);
    await store.startSession("elemental");
    await store.submitSeed("i like");
    await store.startSession("pre_intermediate");
    expect(backend.calls.createSession).toBe(2);
    expect(store.getState().sessionId).toBe("s-2");
    expect(store.getState().turns).toEqual([]);
  });

  it("service failure surfaces as an error banner message", async () => {
    const backend = fakeBackend({
      createSession: async () => {
        throw new ApiError(0, "network", "refused");
      },
    });
    const store = new Store(backend as never);
    await store.startSession("elemental");
    expect(store.getState().error).toMatch(/reach the practice service/i);
    expect(store.getState().sessionId).toBeNull();
  });
});

describe("Store.submitSeed", () => {
  it("appends a turn with the service's exact words", async () => {
    const store = new Store(fakeBackend() as never);
    await store.startSession("elemental");
    const turn = await store.submitSeed("i like");
    expect(turn?.generated_words).toEqual(["one", "two", "three", "four", "five"]);
    expect(store.getState().turns).toHaveLength(1);
  });

  it("rejects whitespace-only seeds locally", async () => {
    const backend = fakeBackend();
    const store = new Store(backend as never);
    await store.startSession("elemental");
    const turn = await store.submitSeed("   \t ");
    expect(turn).toBeNull();
    expect(backend.calls.generate).toBe(0);
    expect(store.getState().error).toBeTruthy();
  });

  it("ignores a second submit while one is pending", async () => {
    let release: (value: GenerateResponse) => void = () => {};
    const slow = new Promise<GenerateResponse>((resolve) => {
      release = resolve;
    });
    const backend = fakeBackend({ generate: () => slow });
    const store = new Store(backend as never);
    await store.startSession("elemental");

    const first = store.submitSeed("i like");
    const second = await store.submitSeed("me too");
    expect(second).toBeNull();
    expect(store.getState().pending).toBe(true);

    release({
      session_id: "s-1",
      seed_text: "i like",
      generated_words: ["a"],
      full_text: "i like a",
      level: "elemental",
      model_id: "elemental",
      latency_ms: 1,
    } as GenerateResponse);
    await first;
    expect(store.getState().pending).toBe(false);
    expect(store.getState().turns).toHaveLength(1);
  });

  it("requires a level and session first", async () => {
    const backend = fakeBackend();
    const store = new Store(backend as never);
    const turn = await store.submitSeed("hello there");
    expect(turn).toBeNull();
    expect(backend.calls.generate).toBe(0);
  });

  it("503 maps to a friendly no-model message", async () => {
    const backend = fakeBackend({
      generate: async () => {
        throw new ApiError(503, "no_model", "no model loaded");
      },
    });
    const store = new Store(backend as never);
    await store.startSession("elemental");
    await store.submitSeed("i like");
    expect(store.getState().error).toMatch(/no model/i);
    expect(store.getState().pending).toBe(false);
  });
});

describe("Store.loadHistory", () => {
  it("renders turns from the service record", async () => {
    const backend = fakeBackend({
      getSession: async () => ({
        session_id: "s-9",
        created_at: "then",
        level: "elemental",
        turns: [
          {
            seed_text: "i like",
            generated_words: ["tea"],
            full_text: "i like tea",
            timestamp: "then",
            latency_ms: 2,
          },
        ],
      }),
    });
    const store = new Store(backend as never);
    await store.loadHistory("s-9");
    expect(store.getState().sessionId).toBe("s-9");
    expect(store.getState().turns).toHaveLength(1);
  });

  it("404 shows the expired-session notice", async () => {
    const store = new Store(fakeBackend() as never);
    await store.loadHistory("gone");
    expect(store.getState().notice).toMatch(/expired/i);
    expect(store.getState().sessionId).toBeNull();
  });
});

describe("Store.continueFromLastTurn", () => {
  it("offers the tail of the last continuation", async () => {
    const store = new Store(fakeBackend() as never);
    await store.startSession("elemental");
    await store.submitSeed("we often drink green tea together");
    const tail = store.continueFromLastTurn(3);
    expect(tail).toBe("three four five");
  });

  it("is null with no turns", () => {
    expect(new Store(fakeBackend() as never).continueFromLastTurn()).toBeNull();
  });
});
