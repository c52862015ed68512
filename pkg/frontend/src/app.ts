// DOM wiring for the practice page. All controls are native elements
// (keyboard-operable by default) and labeled for screen readers; results
// and errors are announced through aria-live regions. The UI only ever
// renders text that came back from the service.

import * as api from "./api.js";
import type { Level, LevelInfo } from "./api.js";
import { Store, type PracticeTurn, type UiState, describeError } from "./state.js";

const LEVEL_LABELS: Record<Level, string> = {
  elemental: "Elemental",
  pre_intermediate: "Pre-intermediate",
  upper_intermediate: "Upper intermediate",
};

export function mountApp(root: HTMLElement, store = new Store()): Store {
  root.innerHTML = "";

  const heading = el("h1", {}, "Practice English");
  heading.id = "app-title";

  // --- level picker -------------------------------------------------------
  const levelLabel = el("label", { for: "level-select" }, "Your level");
  const levelSelect = el("select", { id: "level-select" }) as HTMLSelectElement;
  levelSelect.appendChild(el("option", { value: "" }, "Choose a level…"));
  levelSelect.addEventListener("change", () => {
    if (levelSelect.value) void store.startSession(levelSelect.value as Level);
  });

  // --- seed form ----------------------------------------------------------
  const seedLabel = el("label", { for: "seed-input" }, "Start a sentence");
  const seedInput = el("input", {
    id: "seed-input",
    type: "text",
    placeholder: "e.g. i like",
    autocomplete: "off",
  }) as HTMLInputElement;
  const submitButton = el("button", { id: "submit-seed", type: "submit" }, "Continue my sentence") as HTMLButtonElement;
  const dictateButton = el(
    "button",
    { id: "dictate", type: "button", "aria-label": "Dictate a seed phrase" },
    "🎤 Dictate",
  ) as HTMLButtonElement;

  const form = el("form", { id: "seed-form" }) as HTMLFormElement;
  form.append(seedLabel, seedInput, submitButton, dictateButton);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void store.submitSeed(seedInput.value);
  });
  dictateButton.addEventListener("click", async () => {
    dictateButton.disabled = true;
    try {
      // the dev service runs a mock speech provider; an empty WAV is enough
      const silence = new Blob([new Uint8Array(44)], { type: "audio/wav" });
      seedInput.value = await api.transcribe(silence);
      seedInput.focus();
    } catch (err) {
      banner.textContent = describeError(err);
    } finally {
      dictateButton.disabled = false;
    }
  });

  // --- notices ------------------------------------------------------------
  const banner = el("div", { id: "error-banner", role: "alert", "aria-live": "assertive" });
  const retryButton = el("button", { id: "retry", type: "button" }, "Retry") as HTMLButtonElement;
  retryButton.hidden = true;
  retryButton.addEventListener("click", () => {
    if (levelSelect.value) void store.startSession(levelSelect.value as Level);
  });
  const notice = el("div", { id: "notice", role: "status", "aria-live": "polite" });

  // --- turn list ----------------------------------------------------------
  const turnsHeading = el("h2", {}, "Your practice");
  const turnList = el("ol", { id: "turn-list", "aria-live": "polite", "aria-label": "Practice turns" });
  const emptyState = el("p", { id: "empty-state" }, "Nothing here yet — pick a level and type a few words.");
  const continueButton = el(
    "button",
    { id: "continue-from-here", type: "button" },
    "Continue from here",
  ) as HTMLButtonElement;
  continueButton.hidden = true;
  continueButton.addEventListener("click", () => {
    const tail = store.continueFromLastTurn();
    if (tail) {
      seedInput.value = tail;
      seedInput.focus();
    }
  });

  root.append(heading, levelLabel, levelSelect, form, banner, retryButton, notice,
              turnsHeading, emptyState, turnList, continueButton);

  // --- rendering ----------------------------------------------------------
  function renderTurn(turn: PracticeTurn): HTMLElement {
    const item = el("li", { class: "turn" });
    const sentence = el("p", { class: "full-text" });
    sentence.appendChild(el("span", { class: "seed" }, turn.seed_text + " "));
    for (const word of turn.generated_words) {
      const mark = el("mark", { class: "generated-word" }, word);
      sentence.appendChild(mark);
      sentence.appendChild(document.createTextNode(" "));
    }
    item.appendChild(sentence);
    return item;
  }

  function render(state: UiState): void {
    submitButton.disabled = state.pending || !state.sessionId;
    banner.textContent = state.error ?? "";
    banner.hidden = !state.error;
    retryButton.hidden = !(state.error && !state.sessionId && !!state.level);
    notice.textContent = state.notice ?? "";
    notice.hidden = !state.notice;

    turnList.innerHTML = "";
    for (const turn of state.turns) turnList.appendChild(renderTurn(turn));
    emptyState.hidden = state.turns.length > 0;
    continueButton.hidden = state.turns.length === 0;
  }

  store.subscribe(render);
  render(store.getState());

  void populateLevels(levelSelect, banner);
  return store;
}

async function populateLevels(select: HTMLSelectElement, banner: HTMLElement): Promise<void> {
  try {
    const levels: LevelInfo[] = await api.getLevels();
    for (const info of levels) {
      select.appendChild(el("option", { value: info.level }, LEVEL_LABELS[info.level] ?? info.level));
    }
    if (levels.length === 0) {
      banner.textContent = "The service has no models loaded.";
      banner.hidden = false;
    }
  } catch (err) {
    banner.textContent = describeError(err);
    banner.hidden = false;
  }
}

function el(tag: string, attrs: Record<string, string> = {}, text?: string): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}
