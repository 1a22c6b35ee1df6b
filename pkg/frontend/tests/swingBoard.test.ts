import { beforeEach, describe, expect, it, vi } from "vitest";

import { JudgmentRejected, SwingGroup, WorkshopApi } from "../src/api.js";
import { SwingBoard, violationTarget, violationText } from "../src/swingBoard.js";

const GROUP: SwingGroup = {
  groupId: "proc:p1",
  members: [
    { id: "jref", name: "Set the hiring bar" },
    { id: "j1", name: "Pick training budget" },
    { id: "j2", name: "Plan succession" },
  ],
};

function makeBoard(submitSwings: unknown, onSubmitted?: () => void) {
  const api = { submitSwings } as unknown as WorkshopApi;
  const board = new SwingBoard({
    api,
    scenarioId: "s1",
    assessorId: "maria",
    group: GROUP,
    ...(onSubmitted ? { onSubmitted } : {}),
  });
  const root = board.render();
  document.body.appendChild(root);
  return { board, root };
}

function cardOrder(root: HTMLElement): string[] {
  return [...root.querySelectorAll<HTMLElement>(".swing-card")].map(
    (card) => card.dataset.member ?? "",
  );
}

function card(root: HTMLElement, memberId: string): HTMLElement {
  const found = root.querySelector<HTMLElement>(`.swing-card[data-member="${memberId}"]`);
  if (!found) throw new Error(`no card for ${memberId}`);
  return found;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("card ordering", () => {
  it("keeps unrated cards in model order", () => {
    const { root } = makeBoard(vi.fn());
    expect(cardOrder(root)).toEqual(["jref", "j1", "j2"]);
  });

  it("sorts rated cards by percent with the reference on top", () => {
    const { board, root } = makeBoard(vi.fn());
    board.setPercent("j2", "67");
    board.setPercent("j1", "33");
    board.markReference("jref");
    expect(cardOrder(root)).toEqual(["jref", "j2", "j1"]);
    expect(card(root, "jref").classList.contains("reference")).toBe(true);
    expect(card(root, "j1").classList.contains("reference")).toBe(false);
  });

  it("moves a re-rated card past its neighbours", () => {
    const { board, root } = makeBoard(vi.fn());
    board.markReference("jref");
    board.setPercent("j1", "20");
    board.setPercent("j2", "10");
    expect(cardOrder(root)).toEqual(["jref", "j1", "j2"]);
    board.setPercent("j2", "90");
    expect(cardOrder(root)).toEqual(["jref", "j2", "j1"]);
  });
});

describe("percent entry", () => {
  it("rejects decimals until the advanced toggle is on", () => {
    const { board, root } = makeBoard(vi.fn());
    board.setPercent("j1", "66.7");
    expect(card(root, "j1").querySelector(".card-error")?.textContent).toBe(
      "enter a whole number from 1 to 100",
    );
    expect(board.entries()).toEqual({});

    board.setAllowDecimals(true);
    board.setPercent("j1", "66.7");
    expect(card(root, "j1").querySelector(".card-error")).toBeNull();
    expect(board.entries()).toEqual({ j1: 66.7 });
  });

  it("collects only rated cards into the submission", () => {
    const { board } = makeBoard(vi.fn());
    board.markReference("jref");
    board.setPercent("j1", "33");
    expect(board.entries()).toEqual({ jref: 100, j1: 33 });
  });
});

describe("submission", () => {
  it("shows the server's normalized weights, not a local computation", async () => {
    // deliberately skewed response: if the client computed 100/33/67
    // locally the readout could not show these numbers
    const submitSwings = vi.fn().mockResolvedValue({
      revision: 7,
      groupId: "proc:p1",
      normalized: { jref: 0.25, j1: 0.25, j2: 0.5 },
    });
    const done = vi.fn();
    const { board, root } = makeBoard(submitSwings, done);
    board.markReference("jref");
    board.setPercent("j1", "33");
    board.setPercent("j2", "67");
    await board.submit();

    expect(submitSwings).toHaveBeenCalledWith("s1", "maria", "proc:p1", {
      jref: 100,
      j1: 33,
      j2: 67,
    });
    expect(card(root, "jref").querySelector(".card-weight")?.textContent).toBe("25.0%");
    expect(card(root, "j1").querySelector(".card-weight")?.textContent).toBe("25.0%");
    expect(card(root, "j2").querySelector(".card-weight")?.textContent).toBe("50.0%");
    expect(root.querySelector(".revision")?.textContent).toBe("saved at revision 7");
    expect(done).toHaveBeenCalledOnce();
  });

  it("renders a readout that sums to 100 percent under display rounding", async () => {
    const submitSwings = vi.fn().mockResolvedValue({
      revision: 1,
      groupId: "proc:p1",
      normalized: { jref: 0.5, j1: 0.165, j2: 0.335 },
    });
    const { board, root } = makeBoard(submitSwings);
    board.markReference("jref");
    board.setPercent("j1", "33");
    board.setPercent("j2", "67");
    await board.submit();

    const shown = [...root.querySelectorAll(".card-weight")].map((el) =>
      parseFloat(el.textContent ?? "0"),
    );
    const total = shown.reduce((a, b) => a + b, 0);
    expect(Math.abs(total - 100)).toBeLessThanOrEqual(0.05 * shown.length);
  });

  it("submits when the button is clicked", async () => {
    const submitSwings = vi.fn().mockResolvedValue({
      revision: 2,
      groupId: "proc:p1",
      normalized: { jref: 1 },
    });
    const { board, root } = makeBoard(submitSwings);
    board.markReference("jref");
    root.querySelector<HTMLButtonElement>(".submit-swings")?.click();
    await vi.waitFor(() => {
      expect(submitSwings).toHaveBeenCalledOnce();
    });
  });
});

describe("rejection handling", () => {
  it("asks for a reference swing when none was given", async () => {
    const submitSwings = vi.fn().mockRejectedValue(
      new JudgmentRejected([
        {
          code: "no-reference-swing",
          location: "swing[maria/proc:p1]",
          message: "exactly one entry must be 100",
        },
      ]),
    );
    const { board, root } = makeBoard(submitSwings);
    board.setPercent("j1", "40");
    await board.submit();
    expect(root.querySelector(".board-error")?.textContent).toBe(
      "pick your most important swing first",
    );
  });

  it("pins a positivity complaint to the offending card", async () => {
    const submitSwings = vi.fn().mockRejectedValue(
      new JudgmentRejected([
        {
          code: "non-positive-swing",
          location: "swing[maria/proc:p1]",
          message: "entry for 'j1' must be > 0",
        },
      ]),
    );
    const { board, root } = makeBoard(submitSwings);
    board.markReference("jref");
    await board.submit();
    expect(card(root, "j1").querySelector(".card-error")?.textContent).toBe(
      "swing must be positive",
    );
    expect(root.querySelector(".board-error")).toBeNull();
  });

  it("shows other violations verbatim on the card they mention", async () => {
    const submitSwings = vi.fn().mockRejectedValue(
      new JudgmentRejected([
        {
          code: "unknown-member",
          location: "swing[maria/proc:p1]",
          message: "entry 'j2' is not a member of this group",
        },
      ]),
    );
    const { board, root } = makeBoard(submitSwings);
    board.markReference("jref");
    await board.submit();
    expect(card(root, "j2").querySelector(".card-error")?.textContent).toBe(
      "entry 'j2' is not a member of this group",
    );
  });

  it("keeps entries and offers a retry when the network fails", async () => {
    const submitSwings = vi
      .fn()
      .mockRejectedValueOnce(new TypeError("fetch failed"))
      .mockResolvedValueOnce({ revision: 3, groupId: "proc:p1", normalized: { jref: 1 } });
    const { board, root } = makeBoard(submitSwings);
    board.markReference("jref");
    await board.submit();

    const banner = root.querySelector<HTMLElement>(".retry-banner");
    expect(banner?.textContent).toContain("nothing was saved");
    expect(board.entries()).toEqual({ jref: 100 });

    banner?.querySelector("button")?.click();
    await vi.waitFor(() => {
      expect(submitSwings).toHaveBeenCalledTimes(2);
      expect(root.querySelector(".retry-banner")).toBeNull();
    });
    expect(root.querySelector(".revision")?.textContent).toBe("saved at revision 3");
  });
});

describe("violation routing helpers", () => {
  const members = ["jref", "j1", "j2"];

  it("routes member-specific messages by the quoted id", () => {
    expect(
      violationTarget(
        { code: "missing-member", location: "x", message: "no entry for member 'j2'" },
        members,
      ),
    ).toBe("j2");
  });

  it("routes board-level messages to null", () => {
    expect(
      violationTarget(
        { code: "no-reference-swing", location: "x", message: "exactly one entry must be 100" },
        members,
      ),
    ).toBeNull();
    expect(
      violationTarget(
        { code: "weird", location: "x", message: "mentions 'nobody' known" },
        members,
      ),
    ).toBeNull();
  });

  it("maps the two workshop phrasings and passes others through", () => {
    expect(
      violationText({ code: "no-reference-swing", location: "x", message: "anything" }),
    ).toBe("pick your most important swing first");
    expect(
      violationText({ code: "non-positive-swing", location: "x", message: "anything" }),
    ).toBe("swing must be positive");
    expect(violationText({ code: "other", location: "x", message: "server text" })).toBe(
      "server text",
    );
  });
});
