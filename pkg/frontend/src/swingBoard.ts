/**
 * One sibling group's swing cards.
 *
 * Participants rate how much each improvement matters relative to the most
 * important one, which is fixed at 100. Cards re-order live by provisional
 * percent with the reference card pinned on top. Submitting sends raw
 * percents to the service; the normalized readout under each card shows
 * the server's answer, never a locally computed one.
 */

import {
  JudgmentRejected,
  SwingGroup,
  SwingWriteResponse,
  ViolationInfo,
  WorkshopApi,
} from "./api.js";
import { formatWeightPercent, parsePercent } from "./format.js";

export interface SwingBoardOptions {
  api: WorkshopApi;
  scenarioId: string;
  assessorId: string;
  group: SwingGroup;
  onSubmitted?: (response: SwingWriteResponse) => void;
}

const NO_REFERENCE_MESSAGE = "pick your most important swing first";
const NON_POSITIVE_MESSAGE = "swing must be positive";

/** Violation -> which card it belongs to (null = whole board). */
export function violationTarget(violation: ViolationInfo, memberIds: string[]): string | null {
  if (violation.code === "no-reference-swing") return null;
  const quoted = violation.message.match(/'([^']+)'/);
  if (quoted && quoted[1] !== undefined && memberIds.includes(quoted[1])) {
    return quoted[1];
  }
  return null;
}

/** Violation -> the text shown inline. */
export function violationText(violation: ViolationInfo): string {
  if (violation.code === "no-reference-swing") return NO_REFERENCE_MESSAGE;
  if (violation.code === "non-positive-swing") return NON_POSITIVE_MESSAGE;
  return violation.message;
}

interface CardState {
  id: string;
  name: string;
  percent: number | null;
  error: string;
  normalized: number | null;
}

export class SwingBoard {
  private readonly options: SwingBoardOptions;
  private readonly cards: CardState[];
  private allowDecimals = false;
  private boardError = "";
  private networkBanner = "";
  private lastRevision: number | null = null;
  private root: HTMLElement | null = null;

  constructor(options: SwingBoardOptions) {
    this.options = options;
    this.cards = options.group.members.map((member) => ({
      id: member.id,
      name: member.name,
      percent: null,
      error: "",
      normalized: null,
    }));
  }

  /** Cards sorted for display: highest percent first, unrated last. */
  displayOrder(): CardState[] {
    return [...this.cards].sort((a, b) => {
      if (a.percent === null && b.percent === null) return 0;
      if (a.percent === null) return 1;
      if (b.percent === null) return -1;
      return b.percent - a.percent;
    });
  }

  setPercent(memberId: string, text: string): void {
    const card = this.cards.find((c) => c.id === memberId);
    if (!card) return;
    const value = parsePercent(text, this.allowDecimals);
    if (text.trim() === "") {
      card.percent = null;
      card.error = "";
    } else if (value === null) {
      card.error = this.allowDecimals
        ? "enter a number above 0 and at most 100"
        : "enter a whole number from 1 to 100";
    } else {
      card.percent = value;
      card.error = "";
    }
    this.update();
  }

  markReference(memberId: string): void {
    const card = this.cards.find((c) => c.id === memberId);
    if (!card) return;
    card.percent = 100;
    card.error = "";
    this.update();
  }

  setAllowDecimals(allow: boolean): void {
    this.allowDecimals = allow;
    this.update();
  }

  entries(): Record<string, number> {
    const out: Record<string, number> = {};
    for (const card of this.cards) {
      if (card.percent !== null) out[card.id] = card.percent;
    }
    return out;
  }

  async submit(): Promise<void> {
    this.boardError = "";
    this.networkBanner = "";
    for (const card of this.cards) card.error = "";
    try {
      const response = await this.options.api.submitSwings(
        this.options.scenarioId,
        this.options.assessorId,
        this.options.group.groupId,
        this.entries(),
      );
      this.lastRevision = response.revision;
      for (const card of this.cards) {
        card.normalized = response.normalized[card.id] ?? null;
      }
      this.options.onSubmitted?.(response);
    } catch (error) {
      if (error instanceof JudgmentRejected) {
        const memberIds = this.cards.map((c) => c.id);
        for (const violation of error.violations) {
          const target = violationTarget(violation, memberIds);
          const text = violationText(violation);
          if (target === null) {
            this.boardError = this.boardError ? `${this.boardError}; ${text}` : text;
          } else {
            const card = this.cards.find((c) => c.id === target);
            if (card) card.error = text;
          }
        }
      } else {
        // network failure or server trouble: keep the cards, offer retry
        this.networkBanner = "could not reach the workshop service; nothing was saved - retry";
      }
    }
    this.update();
  }

  render(): HTMLElement {
    const root = document.createElement("section");
    root.className = "swing-board";
    this.root = root;
    this.update();
    return root;
  }

  private update(): void {
    if (!this.root) return;
    const root = this.root;
    root.textContent = "";

    const title = document.createElement("h3");
    title.textContent = `Swing weights: ${this.options.group.groupId}`;
    root.appendChild(title);

    const toggleLabel = document.createElement("label");
    toggleLabel.className = "decimal-toggle";
    const toggle = document.createElement("input");
    toggle.type = "checkbox";
    toggle.checked = this.allowDecimals;
    toggle.addEventListener("change", () => this.setAllowDecimals(toggle.checked));
    toggleLabel.appendChild(toggle);
    toggleLabel.appendChild(document.createTextNode(" allow decimal percents"));
    root.appendChild(toggleLabel);

    if (this.networkBanner) {
      const banner = document.createElement("div");
      banner.className = "retry-banner";
      banner.setAttribute("role", "alert");
      banner.textContent = this.networkBanner;
      const retry = document.createElement("button");
      retry.textContent = "retry";
      retry.addEventListener("click", () => void this.submit());
      banner.appendChild(retry);
      root.appendChild(banner);
    }

    if (this.boardError) {
      const error = document.createElement("div");
      error.className = "board-error";
      error.textContent = this.boardError;
      root.appendChild(error);
    }

    const list = document.createElement("ul");
    list.className = "swing-cards";
    for (const card of this.displayOrder()) {
      list.appendChild(this.renderCard(card));
    }
    root.appendChild(list);

    const submit = document.createElement("button");
    submit.className = "submit-swings";
    submit.textContent = "Save swing judgments";
    submit.addEventListener("click", () => void this.submit());
    root.appendChild(submit);

    if (this.lastRevision !== null) {
      const revision = document.createElement("p");
      revision.className = "revision";
      revision.textContent = `saved at revision ${this.lastRevision}`;
      root.appendChild(revision);
    }
  }

  private renderCard(card: CardState): HTMLElement {
    const item = document.createElement("li");
    item.className = "swing-card";
    item.dataset.member = card.id;
    if (card.percent === 100) item.classList.add("reference");

    const name = document.createElement("span");
    name.className = "card-name";
    name.textContent = card.name;
    item.appendChild(name);

    const input = document.createElement("input");
    input.className = "card-percent";
    input.type = "text";
    input.inputMode = this.allowDecimals ? "decimal" : "numeric";
    input.value = card.percent === null ? "" : String(card.percent);
    input.addEventListener("change", () => this.setPercent(card.id, input.value));
    item.appendChild(input);

    const pin = document.createElement("button");
    pin.className = "pin-reference";
    pin.textContent = "most important (100)";
    pin.addEventListener("click", () => this.markReference(card.id));
    item.appendChild(pin);

    if (card.error) {
      const error = document.createElement("span");
      error.className = "card-error";
      error.textContent = card.error;
      item.appendChild(error);
    }

    if (card.normalized !== null) {
      const weight = document.createElement("span");
      weight.className = "card-weight";
      weight.textContent = formatWeightPercent(card.normalized);
      item.appendChild(weight);
    }

    return item;
  }
}
