/** HTML string builders, kept free of DOM access so they are testable in
 * plain node. app.ts assigns the results to innerHTML. */

import type { PolicyDocument, QuestionView } from "./types.js";
import type { UiSessionView } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderQuestion(question: QuestionView | null, completed: boolean): string {
  if (completed) {
    return [
      '<div class="question-card completed">',
      "<h2>Interview complete</h2>",
      "<p>Review the preview on the right, edit any answer below, or download the policy.</p>",
      '<div class="download-row">',
      '<button data-action="download" data-format="plain">Download (text)</button>',
      '<button data-action="download" data-format="markdown">Download (markdown)</button>',
      '<button data-action="download" data-format="html">Download (HTML)</button>',
      "</div>",
      "</div>",
    ].join("\n");
  }
  if (!question) {
    return '<div class="question-card"><p>Loading…</p></div>';
  }
  const parts: string[] = [
    '<div class="question-card">',
    `<p class="qnum">${escapeHtml(question.qnum)}</p>`,
    `<h2>${escapeHtml(question.text)}</h2>`,
  ];
  if (question.qtype === "BOOL") {
    parts.push(
      '<div class="answer-buttons">',
      '<button data-action="answer-bool" data-value="YES">Yes</button>',
      '<button data-action="answer-bool" data-value="NO">No</button>',
      "</div>",
    );
  } else if (question.qtype === "INFO") {
    parts.push(
      '<form data-action="answer-info">',
      '<input type="text" name="value" autocomplete="off" autofocus>',
      '<button type="submit">Continue</button>',
      '<p class="field-error" hidden></p>',
      "</form>",
    );
  } else {
    const boxes = (question.options ?? [])
      .map(
        (option, i) =>
          `<label><input type="checkbox" name="option" value="${escapeHtml(option)}" id="opt-${i}"> ${escapeHtml(option)}</label>`,
      )
      .join("\n");
    parts.push(
      '<form data-action="answer-mtpc">',
      boxes,
      '<button type="submit">Continue</button>',
      '<p class="field-error" hidden></p>',
      "</form>",
    );
  }
  parts.push("</div>");
  return parts.join("\n");
}

export function renderProgress(view: UiSessionView): string {
  const rows = view.progress
    .map((row) => {
      const classes = ["section-row"];
      if (row.current) classes.push("current");
      const expected = row.expected !== null ? ` / ${row.expected}` : "";
      return (
        `<li class="${classes.join(" ")}">` +
        `<span class="letter">${escapeHtml(row.letter)}</span>` +
        `<span class="name">${escapeHtml(row.name)}</span>` +
        `<span class="count">${row.answered}${expected}</span></li>`
      );
    })
    .join("\n");
  return `<ul class="sections">\n${rows}\n</ul>`;
}

function formatValue(value: string | string[]): string {
  return Array.isArray(value) ? value.join("; ") : value;
}

export function renderHistory(view: UiSessionView): string {
  if (view.history.length === 0) {
    return '<p class="empty">No answers yet.</p>';
  }
  const rows = view.history
    .map((row) => {
      const classes = ["history-row"];
      if (!row.active) classes.push("inactive");
      return (
        `<li class="${classes.join(" ")}" data-qnum="${escapeHtml(row.qnum)}">` +
        `<span class="qnum">${escapeHtml(row.qnum)}</span>` +
        `<span class="question">${escapeHtml(row.question)}</span>` +
        `<span class="value">${escapeHtml(formatValue(row.value))}</span>` +
        `<button data-action="edit" data-qnum="${escapeHtml(row.qnum)}">Edit</button></li>`
      );
    })
    .join("\n");
  return `<ul class="history">\n${rows}\n</ul>`;
}

const BADGES: Record<string, string> = {
  non_compliant: '<span class="badge non-compliant">NON-COMPLIANT</span>',
  warning: '<span class="badge warning">REVIEW</span>',
};

export function renderPreview(preview: PolicyDocument | null): string {
  if (!preview) {
    return '<p class="empty">The policy preview appears here.</p>';
  }
  const sections = preview.sections
    .map((section) => {
      const items = section.items
        .map((item) => {
          const badge = BADGES[item.kind] ?? "";
          const classes = item.kind === "standard" ? "item" : `item ${item.kind}`;
          const text = escapeHtml(item.text).replace(/\n/g, "<br>");
          return `<p class="${classes}" data-origin="${escapeHtml(item.origin)}">${badge}${text}</p>`;
        })
        .join("\n");
      return `<section><h3>${section.index}. ${escapeHtml(section.heading)}</h3>\n${items}</section>`;
    })
    .join("\n");
  return sections;
}

export function renderError(message: string | null): string {
  if (!message) return "";
  return `<div class="error-banner">${escapeHtml(message)}</div>`;
}
