/**
 * Facilitator's live results panel.
 *
 * Polls the service for the current ranking and weights. An incomplete
 * scenario is normal mid-workshop, so the 409 checklist renders as a
 * to-do list, not an error. When polling fails the last good data stays
 * on screen with a stale marker. A side panel runs additive consistency
 * probes and shows the ratio with a pass tick or a review flag.
 */

import {
  IncompleteScenario,
  PriorityReportDoc,
  ProbeResponse,
  WorkshopApi,
} from "./api.js";
import { formatGaugePercent, formatRatio, formatScore } from "./format.js";

export interface ResultsPanelOptions {
  api: WorkshopApi;
  scenarioId: string;
  topN?: number;
  intervalMs?: number;
  groupNames?: Record<string, string>;
}

interface PanelState {
  report: PriorityReportDoc | null;
  revision: number | null;
  missingGroups: string[];
  missingSupports: string[];
  incomplete: boolean;
  stale: boolean;
}

export class ResultsPanel {
  private readonly options: ResultsPanelOptions;
  private readonly state: PanelState = {
    report: null,
    revision: null,
    missingGroups: [],
    missingSupports: [],
    incomplete: false,
    stale: false,
  };
  private timer: ReturnType<typeof setInterval> | null = null;
  private root: HTMLElement | null = null;
  private probeResult: ProbeResponse | null = null;
  private probeError = "";

  constructor(options: ResultsPanelOptions) {
    this.options = options;
  }

  async refresh(): Promise<void> {
    const top = this.options.topN ?? 10;
    try {
      const response = await this.options.api.getRanking(this.options.scenarioId, top);
      this.state.report = response.report;
      this.state.revision = response.revision;
      this.state.incomplete = false;
      this.state.missingGroups = [];
      this.state.missingSupports = [];
      this.state.stale = false;
    } catch (error) {
      if (error instanceof IncompleteScenario) {
        this.state.incomplete = true;
        this.state.revision = error.revision;
        this.state.missingGroups = error.missingGroups;
        this.state.missingSupports = error.missingSupports;
        this.state.stale = false;
      } else {
        // keep whatever we had; just flag it as possibly out of date
        this.state.stale = true;
      }
    }
    this.update();
  }

  start(): void {
    if (this.timer !== null) return;
    void this.refresh();
    this.timer = setInterval(() => void this.refresh(), this.options.intervalMs ?? 1500);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  isPolling(): boolean {
    return this.timer !== null;
  }

  async runProbe(assessor: string, group: string, subset: string[], target: string): Promise<void> {
    this.probeError = "";
    this.probeResult = null;
    try {
      this.probeResult = await this.options.api.runProbe(
        this.options.scenarioId,
        assessor,
        group,
        subset,
        target,
      );
    } catch (error) {
      this.probeError = error instanceof Error ? error.message : String(error);
    }
    this.update();
  }

  render(): HTMLElement {
    const root = document.createElement("section");
    root.className = "results-panel";
    this.root = root;
    this.update();
    return root;
  }

  private update(): void {
    if (!this.root) return;
    const root = this.root;
    root.textContent = "";

    const title = document.createElement("h3");
    title.textContent = "Live results";
    root.appendChild(title);

    const status = document.createElement("p");
    status.className = "revision-line";
    const revision = this.state.revision === null ? "-" : String(this.state.revision);
    status.textContent = `revision ${revision}`;
    if (this.state.stale) {
      const stale = document.createElement("span");
      stale.className = "stale";
      stale.textContent = " (stale: service unreachable)";
      status.appendChild(stale);
    }
    root.appendChild(status);

    if (this.state.incomplete) {
      root.appendChild(this.renderChecklist());
    } else if (this.state.report) {
      root.appendChild(this.renderGauge(this.state.report));
      root.appendChild(this.renderRanking(this.state.report));
    } else {
      const waiting = document.createElement("p");
      waiting.className = "waiting";
      waiting.textContent = "waiting for first judgments";
      root.appendChild(waiting);
    }

    root.appendChild(this.renderProbePanel());
  }

  private renderChecklist(): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "todo-checklist";

    const heading = document.createElement("p");
    heading.textContent = "Still to collect before scores can be shown:";
    wrap.appendChild(heading);

    const list = document.createElement("ul");
    for (const groupId of this.state.missingGroups) {
      const entry = document.createElement("li");
      entry.className = "todo-group";
      const name = this.options.groupNames?.[groupId];
      entry.textContent = name ? `swing weights: ${name}` : `swing weights: ${groupId}`;
      list.appendChild(entry);
    }
    for (const decisionId of this.state.missingSupports) {
      const entry = document.createElement("li");
      entry.className = "todo-support";
      entry.textContent = `data-support sticker: ${decisionId}`;
      list.appendChild(entry);
    }
    wrap.appendChild(list);
    return wrap;
  }

  private renderGauge(report: PriorityReportDoc): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "support-gauge";

    const label = document.createElement("span");
    label.className = "gauge-label";
    label.textContent = `total weighted support ${formatGaugePercent(report.totalWeightedSupport)}`;
    wrap.appendChild(label);

    const bar = document.createElement("div");
    bar.className = "gauge-bar";
    const fill = document.createElement("div");
    fill.className = "gauge-fill";
    fill.style.width = formatGaugePercent(report.totalWeightedSupport);
    bar.appendChild(fill);
    wrap.appendChild(bar);
    return wrap;
  }

  private renderRanking(report: PriorityReportDoc): HTMLElement {
    const table = document.createElement("table");
    table.className = "ranking";

    const head = document.createElement("tr");
    for (const columnName of ["#", "data item", "category", "score"]) {
      const cell = document.createElement("th");
      cell.textContent = columnName;
      head.appendChild(cell);
    }
    table.appendChild(head);

    for (const row of report.ranking) {
      const line = document.createElement("tr");
      line.className = "ranking-row";
      line.dataset.item = row.itemId;
      const meta = report.items[row.itemId];

      const rank = document.createElement("td");
      rank.textContent = String(row.rank);
      line.appendChild(rank);

      const name = document.createElement("td");
      name.textContent = meta ? meta.name : row.itemId;
      line.appendChild(name);

      const category = document.createElement("td");
      category.textContent = meta ? meta.category : "";
      line.appendChild(category);

      const score = document.createElement("td");
      score.className = "score";
      score.textContent = formatScore(row.score);
      line.appendChild(score);

      table.appendChild(line);
    }
    return table;
  }

  private renderProbePanel(): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "probe-panel";

    const heading = document.createElement("h4");
    heading.textContent = "Consistency probe";
    wrap.appendChild(heading);

    if (this.probeError) {
      const error = document.createElement("p");
      error.className = "probe-error";
      error.textContent = this.probeError;
      wrap.appendChild(error);
    }

    if (this.probeResult) {
      const line = document.createElement("p");
      line.className = this.probeResult.consistent ? "probe-pass" : "probe-flag";
      const mark = this.probeResult.consistent ? "✓" : "⚠";
      line.textContent = `${formatRatio(this.probeResult.ratio)} ${mark}`;
      wrap.appendChild(line);

      const detail = document.createElement("p");
      detail.className = "probe-detail";
      detail.textContent =
        `subset sum ${this.probeResult.subsetSum.toFixed(2)}` +
        ` vs target ${this.probeResult.targetValue.toFixed(2)}`;
      wrap.appendChild(detail);
    }

    return wrap;
  }
}
