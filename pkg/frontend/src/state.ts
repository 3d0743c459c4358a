/** Pure view-state derivation. Everything shown on screen is computed
 * from server responses (bank metadata, session view, preview document);
 * the client never decides which question comes next. */

import type {
  AnswerValue,
  BankInfo,
  PolicyDocument,
  QType,
  QuestionView,
  SessionView,
} from "./types.js";

export interface HistoryRow {
  qnum: string;
  question: string;
  value: AnswerValue;
  active: boolean;
}

export interface ProgressRow {
  letter: string;
  name: string;
  answered: number;
  expected: number | null;
  current: boolean;
}

export interface UiSessionView {
  sessionId: string;
  completed: boolean;
  question: QuestionView | null;
  progress: ProgressRow[];
  history: HistoryRow[];
  preview: PolicyDocument | null;
  error: string | null;
}

export function buildView(
  bank: BankInfo,
  session: SessionView,
  preview: PolicyDocument | null,
  error: string | null = null,
): UiSessionView {
  const questionText = new Map(bank.questions.map((q) => [q.qnum, q.text]));
  const active = new Set(session.active);
  const answered = Object.entries(session.snapshot.answers)
    .sort((a, b) => a[1].answered_at - b[1].answered_at)
    .map(([qnum, stored]) => ({
      qnum,
      question: questionText.get(qnum) ?? qnum,
      value: stored.value,
      active: active.has(qnum),
    }));
  const currentSection = session.question?.section ?? null;
  const progress = bank.sections.map((section) => ({
    letter: section.letter,
    name: section.name,
    answered: session.progress[section.letter]?.answered ?? 0,
    expected: section.expected_questions,
    current: section.letter === currentSection,
  }));
  return {
    sessionId: session.id,
    completed: session.completed,
    question: session.question,
    progress,
    history: answered,
    preview,
    error,
  };
}

export type Validation =
  | { ok: true; value: AnswerValue }
  | { ok: false; message: string };

/** Client-side shape check mirroring the input widgets; anything beyond
 * shape (flow, bindings) is the server's business. */
export function validateAnswer(qtype: QType, raw: AnswerValue): Validation {
  if (qtype === "BOOL") {
    if (raw === "YES" || raw === "NO") {
      return { ok: true, value: raw };
    }
    return { ok: false, message: "Choose yes or no." };
  }
  if (qtype === "INFO") {
    if (typeof raw !== "string") {
      return { ok: false, message: "Enter a text answer." };
    }
    const text = raw.trim();
    if (!text) {
      return { ok: false, message: "An answer is required." };
    }
    return { ok: true, value: text };
  }
  if (Array.isArray(raw) && raw.length > 0) {
    return { ok: true, value: raw };
  }
  return { ok: false, message: "Select at least one option." };
}

export function nonCompliantCount(preview: PolicyDocument | null): number {
  if (!preview) return 0;
  return preview.sections
    .flatMap((section) => section.items)
    .filter((item) => item.kind === "non_compliant").length;
}

export function warningCount(preview: PolicyDocument | null): number {
  if (!preview) return 0;
  return preview.sections
    .flatMap((section) => section.items)
    .filter((item) => item.kind === "warning").length;
}
