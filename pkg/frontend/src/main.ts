/**
 * Page wiring: load a model, open a scenario, then hand the participant
 * a swing board per sibling group and a sticker board per process. The
 * facilitator can pop the live results panel from the same page.
 */

import { SwingGroup, WorkshopApi } from "./api.js";
import { ResultsPanel } from "./results.js";
import { StickerBoard, SupportSheet } from "./stickerBoard.js";
import { SwingBoard } from "./swingBoard.js";

interface WorkspaceContext {
  api: WorkshopApi;
  scenarioId: string;
  groups: SwingGroup[];
  groupNames: Record<string, string>;
}

function groupTitle(groupId: string): string {
  if (groupId === "vs") return "value streams";
  if (groupId.startsWith("vs:")) return `processes of ${groupId.slice(3)}`;
  if (groupId.startsWith("proc:")) return `decisions of ${groupId.slice(5)}`;
  return groupId;
}

function renderBoards(context: WorkspaceContext, assessorId: string, host: HTMLElement): void {
  host.textContent = "";
  const sheet = new SupportSheet();

  for (const group of context.groups) {
    const board = new SwingBoard({
      api: context.api,
      scenarioId: context.scenarioId,
      assessorId,
      group,
    });
    host.appendChild(board.render());
  }

  for (const group of context.groups) {
    if (!group.groupId.startsWith("proc:")) continue;
    const board = new StickerBoard({
      api: context.api,
      scenarioId: context.scenarioId,
      assessorId,
      title: groupTitle(group.groupId),
      decisions: group.members,
      sheet,
    });
    host.appendChild(board.render());
  }
}

export function buildWorkspace(context: WorkspaceContext, container: HTMLElement): void {
  container.textContent = "";

  const controls = document.createElement("div");
  controls.className = "workspace-controls";

  const nameLabel = document.createElement("label");
  nameLabel.textContent = "Your name: ";
  const nameInput = document.createElement("input");
  nameInput.type = "text";
  nameInput.className = "assessor-name";
  nameInput.placeholder = "e.g. maria";
  nameLabel.appendChild(nameInput);
  controls.appendChild(nameLabel);

  const startButton = document.createElement("button");
  startButton.className = "start-judging";
  startButton.textContent = "Start judging";
  controls.appendChild(startButton);

  const resultsButton = document.createElement("button");
  resultsButton.className = "toggle-results";
  resultsButton.textContent = "Show live results";
  controls.appendChild(resultsButton);

  container.appendChild(controls);

  const boardsHost = document.createElement("div");
  boardsHost.className = "boards";
  container.appendChild(boardsHost);

  const resultsHost = document.createElement("div");
  resultsHost.className = "results-host";
  resultsHost.hidden = true;
  container.appendChild(resultsHost);

  startButton.addEventListener("click", () => {
    const assessorId = nameInput.value.trim();
    if (!assessorId) {
      nameInput.focus();
      return;
    }
    renderBoards(context, assessorId, boardsHost);
  });

  const panel = new ResultsPanel({
    api: context.api,
    scenarioId: context.scenarioId,
    groupNames: context.groupNames,
  });
  resultsHost.appendChild(panel.render());

  resultsButton.addEventListener("click", () => {
    if (resultsHost.hidden) {
      resultsHost.hidden = false;
      resultsButton.textContent = "Hide live results";
      panel.start();
    } else {
      resultsHost.hidden = true;
      resultsButton.textContent = "Show live results";
      panel.stop();
    }
  });
}

export function buildSetupForm(api: WorkshopApi, container: HTMLElement): void {
  container.textContent = "";

  const heading = document.createElement("h2");
  heading.textContent = "Workshop setup";
  container.appendChild(heading);

  const modelInput = document.createElement("textarea");
  modelInput.className = "model-input";
  modelInput.placeholder = "paste the model document (JSON) here";
  modelInput.rows = 12;
  container.appendChild(modelInput);

  const scenarioLabel = document.createElement("label");
  scenarioLabel.textContent = "Scenario name (optional): ";
  const scenarioInput = document.createElement("input");
  scenarioInput.type = "text";
  scenarioInput.className = "scenario-name";
  scenarioLabel.appendChild(scenarioInput);
  container.appendChild(scenarioLabel);

  const loadButton = document.createElement("button");
  loadButton.className = "load-model";
  loadButton.textContent = "Load model and open scenario";
  container.appendChild(loadButton);

  const status = document.createElement("p");
  status.className = "setup-status";
  container.appendChild(status);

  loadButton.addEventListener("click", () => {
    void (async () => {
      status.textContent = "loading...";
      try {
        const uploaded = await api.uploadModel(modelInput.value);
        const catalog = await api.getGroups(uploaded.modelId);
        const scenario = await api.openScenario(
          uploaded.modelId,
          scenarioInput.value.trim() || undefined,
        );
        const groupNames: Record<string, string> = {};
        for (const group of catalog.groups) {
          groupNames[group.groupId] = groupTitle(group.groupId);
        }
        status.textContent = "";
        buildWorkspace(
          {
            api,
            scenarioId: scenario.scenarioId,
            groups: catalog.groups,
            groupNames,
          },
          container,
        );
      } catch (error) {
        status.textContent = error instanceof Error ? error.message : String(error);
      }
    })();
  });
}

const appRoot = typeof document !== "undefined" ? document.getElementById("workshop-app") : null;
if (appRoot) {
  buildSetupForm(new WorkshopApi(""), appRoot);
}
