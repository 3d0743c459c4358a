/** Shared wire types for the policygen HTTP API. */

export type QType = "BOOL" | "INFO" | "MTPC";
export type ItemKind = "standard" | "non_compliant" | "warning";
export type AnswerValue = string | string[];

export interface QuestionView {
  qnum: string;
  section: string;
  text: string;
  qtype: QType;
  options?: string[];
  placeholder?: string;
}

export interface SectionInfo {
  letter: string;
  name: string;
  expected_questions: number | null;
}

export interface BankInfo {
  version: string;
  entry: string;
  sections: SectionInfo[];
  questions: QuestionView[];
}

export interface StoredAnswer {
  value: AnswerValue;
  answered_at: number;
}

export interface SessionSnapshot {
  schema: number;
  bank_version: string;
  answers: Record<string, StoredAnswer>;
  trail: string[];
  cursor: string;
  placeholder_values: Record<string, string>;
  selected_clauses: string[];
}

export interface SessionView {
  id: string;
  completed: boolean;
  question: QuestionView | null;
  active: string[];
  progress: Record<string, { name: string; answered: number }>;
  snapshot: SessionSnapshot;
  next?: QuestionView | null;
}

export interface DocumentItem {
  text: string;
  origin: string;
  kind: ItemKind;
}

export interface DocumentSection {
  index: number;
  heading: string;
  items: DocumentItem[];
}

export interface PolicyDocument {
  metadata: Record<string, unknown>;
  sections: DocumentSection[];
}

export interface ApiErrorBody {
  error: { code: string; message: string; detail?: string };
}
