/**
 * Typed client for the workshop service HTTP API.
 *
 * Every number the UI displays originates from one of these calls; the
 * client itself never computes weights or scores. Non-2xx responses are
 * turned into typed errors carrying the server's explanation so views
 * can render them next to the offending control.
 */

export interface GroupMember {
  id: string;
  name: string;
}

export interface SwingGroup {
  groupId: string;
  members: GroupMember[];
}

export interface ViolationInfo {
  code: string;
  location: string;
  message: string;
}

export interface RankRow {
  rank: number;
  itemId: string;
  score: number;
}

export interface ItemMeta {
  name: string;
  category: string;
}

export interface PriorityReportDoc {
  kind: "priority";
  scenario: string;
  totalWeightedSupport: number;
  unsupportedWeight: number;
  itemScores: Record<string, number>;
  ranking: RankRow[];
  items: Record<string, ItemMeta>;
}

export interface RankingResponse {
  revision: number;
  report: PriorityReportDoc;
}

export interface WeightsResponse {
  revision: number;
  groups: Record<string, Record<string, number>>;
  missingGroups: string[];
  decisionWeights: Record<string, number> | null;
}

export interface SwingWriteResponse {
  revision: number;
  groupId: string;
  normalized: Record<string, number>;
}

export interface SupportWriteResponse {
  revision: number;
  count: number;
}

export interface ProbeResponse {
  revision: number;
  subsetSum: number;
  targetValue: number;
  ratio: number;
  consistent: boolean;
}

export interface JudgmentsResponse {
  revision: number;
  judgments: unknown;
}

export interface ScenarioInfo {
  scenarioId: string;
  modelId: string;
  revision: number;
}

/** Scenario not finished yet: the server's 409 checklist. */
export class IncompleteScenario extends Error {
  readonly revision: number;
  readonly missingGroups: string[];
  readonly missingSupports: string[];

  constructor(revision: number, missingGroups: string[], missingSupports: string[]) {
    super("scenario is incomplete");
    this.revision = revision;
    this.missingGroups = missingGroups;
    this.missingSupports = missingSupports;
  }
}

/** Judgment rejected: the server's 422 violation list. */
export class JudgmentRejected extends Error {
  readonly violations: ViolationInfo[];

  constructor(violations: ViolationInfo[]) {
    super(violations.map((v) => v.message).join("; ") || "judgment rejected");
    this.violations = violations;
  }
}

/** Any other non-2xx answer (400/404/...), message straight from the server. */
export class RequestFailed extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function readError(response: Response): Promise<never> {
  let body: Record<string, unknown> = {};
  try {
    body = (await response.json()) as Record<string, unknown>;
  } catch {
    // non-JSON error body: fall through to the status line
  }
  if (response.status === 409 && Array.isArray(body.missingGroups)) {
    throw new IncompleteScenario(
      typeof body.revision === "number" ? body.revision : -1,
      body.missingGroups as string[],
      (body.missingSupports as string[] | undefined) ?? [],
    );
  }
  if (response.status === 422 && Array.isArray(body.violations)) {
    throw new JudgmentRejected(body.violations as ViolationInfo[]);
  }
  const message =
    typeof body.error === "string" ? body.error : `request failed with ${response.status}`;
  throw new RequestFailed(response.status, message);
}

export class WorkshopApi {
  readonly baseUrl: string;

  constructor(baseUrl: string = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await readError(response);
    }
    return (await response.json()) as T;
  }

  private put<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  uploadModel(modelDocument: string): Promise<{ modelId: string; name: string }> {
    return this.request(`/api/models`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: modelDocument,
    });
  }

  getGroups(modelId: string): Promise<{ modelId: string; groups: SwingGroup[] }> {
    return this.request(`/api/models/${encodeURIComponent(modelId)}/groups`);
  }

  openScenario(modelId: string, scenario?: string, anchor?: string): Promise<ScenarioInfo> {
    const body: Record<string, string> = {};
    if (scenario) body.scenario = scenario;
    if (anchor) body.anchor = anchor;
    return this.request(`/api/models/${encodeURIComponent(modelId)}/scenarios`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  submitSwings(
    scenarioId: string,
    assessorId: string,
    groupId: string,
    entries: Record<string, number>,
  ): Promise<SwingWriteResponse> {
    return this.put(
      `/api/scenarios/${encodeURIComponent(scenarioId)}/assessors/${encodeURIComponent(
        assessorId,
      )}/swings/${encodeURIComponent(groupId)}`,
      { entries },
    );
  }

  submitSupports(
    scenarioId: string,
    assessorId: string,
    supports: Record<string, string>,
  ): Promise<SupportWriteResponse> {
    return this.put(
      `/api/scenarios/${encodeURIComponent(scenarioId)}/assessors/${encodeURIComponent(
        assessorId,
      )}/support`,
      { supports },
    );
  }

  getWeights(scenarioId: string): Promise<WeightsResponse> {
    return this.request(`/api/scenarios/${encodeURIComponent(scenarioId)}/weights`);
  }

  getRanking(scenarioId: string, top?: number): Promise<RankingResponse> {
    const query = top !== undefined ? `?top=${top}` : "";
    return this.request(`/api/scenarios/${encodeURIComponent(scenarioId)}/ranking${query}`);
  }

  runProbe(
    scenarioId: string,
    assessorId: string,
    groupId: string,
    subset: string[],
    target: string,
  ): Promise<ProbeResponse> {
    const params = new URLSearchParams({
      assessor: assessorId,
      group: groupId,
      subset: subset.join(","),
      target,
    });
    return this.request(
      `/api/scenarios/${encodeURIComponent(scenarioId)}/consistency?${params}`,
    );
  }

  exportJudgments(scenarioId: string): Promise<JudgmentsResponse> {
    return this.request(`/api/scenarios/${encodeURIComponent(scenarioId)}/judgments`);
  }
}
