/** Browser bootstrap: wires the API client and the pure view helpers to
 * the DOM. The only file that touches `document`. */

import { ApiError, PolicyApi } from "./api.js";
import { buildView, validateAnswer, type UiSessionView } from "./state.js";
import {
  renderError,
  renderHistory,
  renderPreview,
  renderProgress,
  renderQuestion,
} from "./render.js";
import type { AnswerValue, BankInfo, SessionView } from "./types.js";

interface Elements {
  progress: HTMLElement;
  question: HTMLElement;
  history: HTMLElement;
  preview: HTMLElement;
  error: HTMLElement;
}

function serviceBaseUrl(): string {
  const meta = document.querySelector('meta[name="policygen-service"]');
  const fromMeta = meta?.getAttribute("content");
  const fromWindow = (window as { POLICYGEN_SERVICE_URL?: string }).POLICYGEN_SERVICE_URL;
  return fromWindow ?? fromMeta ?? "";
}

class App {
  private readonly api: PolicyApi;
  private readonly elements: Elements;
  private bank!: BankInfo;
  private session!: SessionView;
  private editing: string | null = null;
  private busy = false;

  constructor(api: PolicyApi, elements: Elements) {
    this.api = api;
    this.elements = elements;
  }

  async start(): Promise<void> {
    this.bank = await this.api.bank();
    const stored = sessionStorage.getItem("policygen-session");
    if (stored) {
      try {
        this.session = await this.api.getSession(stored);
      } catch {
        this.session = await this.api.createSession();
      }
    } else {
      this.session = await this.api.createSession();
    }
    sessionStorage.setItem("policygen-session", this.session.id);
    await this.refresh();
  }

  private async refresh(error: string | null = null): Promise<void> {
    let preview = null;
    try {
      preview = await this.api.preview(this.session.id);
    } catch {
      // preview is cosmetic; keep the interview usable
    }
    const view = buildView(this.bank, this.session, preview, error);
    this.paint(view);
  }

  private paint(view: UiSessionView): void {
    this.elements.error.innerHTML = renderError(view.error);
    this.elements.progress.innerHTML = renderProgress(view);
    this.elements.history.innerHTML = renderHistory(view);
    this.elements.preview.innerHTML = renderPreview(view.preview);
    if (this.editing) {
      const question = this.bank.questions.find((q) => q.qnum === this.editing);
      this.elements.question.innerHTML = question
        ? renderQuestion(question, false)
        : renderQuestion(view.question, view.completed);
    } else {
      this.elements.question.innerHTML = renderQuestion(view.question, view.completed);
    }
    this.bindQuestionEvents();
    this.bindHistoryEvents();
  }

  private currentQnum(): string | null {
    if (this.editing) return this.editing;
    return this.session.question?.qnum ?? null;
  }

  private async send(value: AnswerValue): Promise<void> {
    if (this.busy) return;
    const qnum = this.currentQnum();
    if (!qnum) return;
    const question = this.bank.questions.find((q) => q.qnum === qnum);
    if (!question) return;
    const checked = validateAnswer(question.qtype, value);
    if (!checked.ok) {
      this.showFieldError(checked.message);
      return;
    }
    this.busy = true;
    try {
      this.session = this.editing
        ? await this.api.amendAnswer(this.session.id, qnum, checked.value)
        : await this.api.submitAnswer(this.session.id, qnum, checked.value);
      this.editing = null;
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError) {
        this.showFieldError(error.message);
      } else {
        await this.refresh(String(error));
      }
    } finally {
      this.busy = false;
    }
  }

  private showFieldError(message: string): void {
    const field = this.elements.question.querySelector(".field-error");
    if (field instanceof HTMLElement) {
      field.textContent = message;
      field.hidden = false;
    } else {
      this.elements.error.innerHTML = renderError(message);
    }
  }

  private bindQuestionEvents(): void {
    for (const button of this.elements.question.querySelectorAll("[data-action='answer-bool']")) {
      button.addEventListener("click", () => {
        void this.send((button as HTMLElement).dataset.value as AnswerValue);
      });
    }
    const infoForm = this.elements.question.querySelector("form[data-action='answer-info']");
    if (infoForm instanceof HTMLFormElement) {
      infoForm.addEventListener("submit", (event) => {
        event.preventDefault();
        const input = infoForm.querySelector("input[name='value']") as HTMLInputElement;
        void this.send(input.value);
      });
    }
    const mtpcForm = this.elements.question.querySelector("form[data-action='answer-mtpc']");
    if (mtpcForm instanceof HTMLFormElement) {
      mtpcForm.addEventListener("submit", (event) => {
        event.preventDefault();
        const picked = Array.from(
          mtpcForm.querySelectorAll("input[name='option']:checked"),
        ).map((box) => (box as HTMLInputElement).value);
        void this.send(picked);
      });
    }
    for (const button of this.elements.question.querySelectorAll("[data-action='download']")) {
      button.addEventListener("click", () => {
        void this.download((button as HTMLElement).dataset.format ?? "plain");
      });
    }
  }

  private bindHistoryEvents(): void {
    for (const button of this.elements.history.querySelectorAll("[data-action='edit']")) {
      button.addEventListener("click", () => {
        this.editing = (button as HTMLElement).dataset.qnum ?? null;
        void this.refresh();
      });
    }
  }

  private async download(format: string): Promise<void> {
    try {
      const text = await this.api.downloadPolicy(this.session.id, format);
      const extension = format === "plain" ? "txt" : format === "markdown" ? "md" : "html";
      const blob = new Blob([text], { type: "text/plain;charset=utf-8" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = `privacy-policy.${extension}`;
      link.click();
      URL.revokeObjectURL(link.href);
    } catch (error) {
      if (error instanceof ApiError) {
        await this.refresh(error.message);
      }
    }
  }
}

export function boot(): void {
  const elements: Elements = {
    progress: document.getElementById("progress")!,
    question: document.getElementById("question")!,
    history: document.getElementById("history")!,
    preview: document.getElementById("preview")!,
    error: document.getElementById("error")!,
  };
  const app = new App(new PolicyApi(serviceBaseUrl()), elements);
  void app.start();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
