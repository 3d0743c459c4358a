import { describe, expect, it } from "vitest";

import recorded from "./fixtures/recorded.json";
import { buildView, nonCompliantCount, validateAnswer, warningCount } from "../src/state.js";
import type { BankInfo, PolicyDocument, SessionView } from "../src/types.js";

const bank = recorded.bank as unknown as BankInfo;
const steps = recorded.steps as Array<{
  answer: { qnum: string; value: unknown };
  session: SessionView;
  preview: PolicyDocument;
}>;

describe("buildView from recorded server responses", () => {
  it("derives the next question from the server, never locally", () => {
    // Table-3 flow: after Q2=YES the server says Q166.
    const afterQ2 = steps[2].session;
    const view = buildView(bank, afterQ2, steps[2].preview);
    expect(view.question?.qnum).toBe("Q166");
    expect(view.completed).toBe(false);
  });

  it("orders history by answer sequence with active flags", () => {
    const afterQ166 = steps[3].session;
    const view = buildView(bank, afterQ166, steps[3].preview);
    expect(view.history.map((row) => row.qnum)).toEqual(["Q104", "Q1", "Q2", "Q166"]);
    expect(view.history.every((row) => row.active)).toBe(true);
    expect(view.history[1].question).toContain("controller of personal data");
  });

  it("marks section progress using server counts", () => {
    const afterQ166 = steps[3].session;
    const view = buildView(bank, afterQ166, steps[3].preview);
    const sectionB = view.progress.find((row) => row.letter === "B");
    expect(sectionB?.answered).toBe(3); // Q1, Q2, Q166
    expect(sectionB?.current).toBe(true);
    const sectionA = view.progress.find((row) => row.letter === "A");
    expect(sectionA?.answered).toBe(1);
    expect(view.progress.map((row) => row.letter)).toEqual(
      ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"],
    );
  });

  it("greys an answer the server reports inactive after amendment", () => {
    const amended = recorded.amended as unknown as SessionView;
    const view = buildView(bank, amended, recorded.amended_preview as unknown as PolicyDocument);
    const q166 = view.history.find((row) => row.qnum === "Q166");
    expect(q166).toBeDefined();
    expect(q166?.active).toBe(false);
    const q2 = view.history.find((row) => row.qnum === "Q2");
    expect(q2?.active).toBe(true);
    expect(q2?.value).toBe("NO");
    // The amended flow moved to Q3, still per server data only.
    expect(view.question?.qnum).toBe("Q3");
  });

  it("counts preview badges", () => {
    const preview = recorded.completed_preview as unknown as PolicyDocument;
    expect(nonCompliantCount(preview)).toBe(2);
    expect(warningCount(preview)).toBe(1);
    expect(nonCompliantCount(null)).toBe(0);
  });

  it("completed sessions expose no current question", () => {
    const completed = recorded.completed_session as unknown as SessionView;
    const view = buildView(bank, completed, null);
    expect(view.completed).toBe(true);
    expect(view.question).toBeNull();
    expect(view.progress.every((row) => !row.current)).toBe(true);
  });
});

describe("validateAnswer", () => {
  it("accepts only YES/NO for closed questions", () => {
    expect(validateAnswer("BOOL", "YES")).toEqual({ ok: true, value: "YES" });
    expect(validateAnswer("BOOL", "maybe").ok).toBe(false);
  });

  it("rejects empty open answers without a request", () => {
    const result = validateAnswer("INFO", "   ");
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.message).toMatch(/required/i);
    }
  });

  it("trims open answers", () => {
    expect(validateAnswer("INFO", "  Acme  ")).toEqual({ ok: true, value: "Acme" });
  });

  it("requires a non-empty selection for multiple choice", () => {
    expect(validateAnswer("MTPC", []).ok).toBe(false);
    expect(validateAnswer("MTPC", ["To resolve disputes"]).ok).toBe(true);
  });
});
