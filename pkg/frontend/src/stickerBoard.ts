/**
 * Sticker board: one sticker per decision saying how well today's data
 * supports it. The six sticker kinds are the service's support vocabulary;
 * the legend shows the score each one carries. A participant's stickers
 * accumulate in a shared sheet because the service stores the whole map
 * per assessor, so submitting from one process board must not drop the
 * stickers placed on another.
 */

import { JudgmentRejected, SupportWriteResponse, WorkshopApi } from "./api.js";

export const SUPPORT_LEVELS: ReadonlyArray<{ label: string; score: string; hint: string }> = [
  { label: "no_support", score: "0.0", hint: "nothing usable today" },
  { label: "almost_none", score: "0.1", hint: "scraps only" },
  { label: "low", score: "0.3", hint: "partial, patchy" },
  { label: "medium", score: "0.5", hint: "usable with effort" },
  { label: "high", score: "0.7", hint: "good coverage" },
  { label: "almost_sufficient", score: "0.9", hint: "nearly everything needed" },
];

/** One assessor's stickers across every board in the session. */
export class SupportSheet {
  private readonly entries = new Map<string, string>();

  set(decisionId: string, label: string): void {
    this.entries.set(decisionId, label);
  }

  get(decisionId: string): string | undefined {
    return this.entries.get(decisionId);
  }

  asRecord(): Record<string, string> {
    const out: Record<string, string> = {};
    for (const [decisionId, label] of this.entries) out[decisionId] = label;
    return out;
  }

  size(): number {
    return this.entries.size;
  }
}

export interface StickerBoardOptions {
  api: WorkshopApi;
  scenarioId: string;
  assessorId: string;
  title: string;
  decisions: ReadonlyArray<{ id: string; name: string }>;
  sheet: SupportSheet;
  onSubmitted?: (response: SupportWriteResponse) => void;
}

export class StickerBoard {
  private readonly options: StickerBoardOptions;
  private errorLines: string[] = [];
  private networkBanner = "";
  private lastRevision: number | null = null;
  private root: HTMLElement | null = null;

  constructor(options: StickerBoardOptions) {
    this.options = options;
  }

  select(decisionId: string, label: string): void {
    this.options.sheet.set(decisionId, label);
    this.update();
  }

  /** Stickered decisions on this board (the sheet may span other boards). */
  completedCount(): number {
    let count = 0;
    for (const decision of this.options.decisions) {
      if (this.options.sheet.get(decision.id) !== undefined) count += 1;
    }
    return count;
  }

  isComplete(): boolean {
    return this.completedCount() === this.options.decisions.length;
  }

  async submit(): Promise<void> {
    this.errorLines = [];
    this.networkBanner = "";
    try {
      const response = await this.options.api.submitSupports(
        this.options.scenarioId,
        this.options.assessorId,
        this.options.sheet.asRecord(),
      );
      this.lastRevision = response.revision;
      this.options.onSubmitted?.(response);
    } catch (error) {
      if (error instanceof JudgmentRejected) {
        this.errorLines = error.violations.map((v) => v.message);
      } else {
        this.networkBanner = "could not reach the workshop service; nothing was saved - retry";
      }
    }
    this.update();
  }

  render(): HTMLElement {
    const root = document.createElement("section");
    root.className = "sticker-board";
    this.root = root;
    this.update();
    return root;
  }

  private update(): void {
    if (!this.root) return;
    const root = this.root;
    root.textContent = "";

    const title = document.createElement("h3");
    title.textContent = `Data support: ${this.options.title}`;
    root.appendChild(title);

    root.appendChild(this.renderLegend());

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

    for (const line of this.errorLines) {
      const error = document.createElement("div");
      error.className = "board-error";
      error.textContent = line;
      root.appendChild(error);
    }

    const table = document.createElement("table");
    table.className = "sticker-rows";
    for (const decision of this.options.decisions) {
      table.appendChild(this.renderRow(decision.id, decision.name));
    }
    root.appendChild(table);

    const progress = document.createElement("p");
    progress.className = "completion";
    progress.textContent = `${this.completedCount()} of ${this.options.decisions.length} decisions stickered`;
    if (this.isComplete()) progress.classList.add("complete");
    root.appendChild(progress);

    const submit = document.createElement("button");
    submit.className = "submit-stickers";
    submit.textContent = "Save stickers";
    submit.addEventListener("click", () => void this.submit());
    root.appendChild(submit);

    if (this.lastRevision !== null) {
      const revision = document.createElement("p");
      revision.className = "revision";
      revision.textContent = `saved at revision ${this.lastRevision}`;
      root.appendChild(revision);
    }
  }

  private renderLegend(): HTMLElement {
    const legend = document.createElement("ul");
    legend.className = "sticker-legend";
    for (const level of SUPPORT_LEVELS) {
      const entry = document.createElement("li");
      entry.textContent = `${level.label} (${level.score}): ${level.hint}`;
      legend.appendChild(entry);
    }
    return legend;
  }

  private renderRow(decisionId: string, name: string): HTMLElement {
    const row = document.createElement("tr");
    row.className = "sticker-row";
    row.dataset.decision = decisionId;

    const label = document.createElement("td");
    label.className = "decision-name";
    label.textContent = name;
    row.appendChild(label);

    const current = this.options.sheet.get(decisionId);
    for (const level of SUPPORT_LEVELS) {
      const cell = document.createElement("td");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = `sticker-${decisionId}`;
      radio.setAttribute("value", level.label);
      radio.title = `${level.label} (${level.score})`;
      radio.checked = current === level.label;
      radio.addEventListener("change", () => this.select(decisionId, level.label));
      cell.appendChild(radio);
      row.appendChild(cell);
    }
    return row;
  }
}
