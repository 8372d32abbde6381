/**
 * DOM construction for a TaskView. renderView rebuilds the app element from
 * the view on every transition; all interaction is routed through the
 * handlers so the page itself holds no state beyond what the view carries.
 */

import { exportUrl, type ExportSeed } from "./api.js";
import { renderPolicy, type Highlight } from "./render.js";
import type { TaskView } from "./view.js";

export interface Handlers {
  onSubmit: (present: boolean) => void;
  onAccept: (index: number) => void;
  onRetry: () => void;
  onExportPreview: (seed: ExportSeed) => void;
}

const EXCERPT_LIMIT = 80;

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className !== undefined) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function excerptOf(view: TaskView): string {
  if (view.pending === null) {
    return "";
  }
  const raw = view.policyBody.slice(view.pending.start, view.pending.end);
  return raw.length > EXCERPT_LIMIT ? `${raw.slice(0, EXCERPT_LIMIT)}…` : raw;
}

function highlightsOf(view: TaskView): Highlight[] {
  const highlights: Highlight[] = view.suggestions.map((item) => ({
    start: item.spanStart,
    end: item.spanEnd,
    kind: "suggestion",
  }));
  if (view.pending !== null) {
    highlights.push({ ...view.pending, kind: "pending" });
  }
  return highlights;
}

function errorBanner(doc: Document, text: string): HTMLElement {
  const banner = el(doc, "div", "banner error", text);
  banner.setAttribute("role", "alert");
  return banner;
}

function renderQuestion(doc: Document, view: TaskView, handlers: Handlers): HTMLElement {
  const section = el(doc, "section", "question");

  const progress = el(doc, "div", "progress");
  const bar = el(doc, "progress");
  bar.max = Math.max(view.total, 1);
  bar.value = view.cursor;
  progress.appendChild(bar);
  progress.appendChild(el(doc, "span", "progress-label", `${view.cursor} / ${view.total}`));
  section.appendChild(progress);

  section.appendChild(el(doc, "p", "prompt", view.prompt ?? ""));
  if (view.error !== null) {
    section.appendChild(errorBanner(doc, view.error));
  }
  if (view.notice !== null) {
    section.appendChild(el(doc, "p", "notice", view.notice));
  }
  if (view.pending !== null) {
    const label = `[${view.pending.start}, ${view.pending.end}) “${excerptOf(view)}”`;
    section.appendChild(el(doc, "p", "pending-span", label));
  }

  const controls = el(doc, "div", "controls");
  const present = el(doc, "button", "submit-present", "Present: submit marked span");
  present.addEventListener("click", () => handlers.onSubmit(true));
  const absent = el(doc, "button", "submit-absent", "Not in this policy");
  absent.addEventListener("click", () => handlers.onSubmit(false));
  controls.appendChild(present);
  controls.appendChild(absent);
  section.appendChild(controls);

  if (view.suggestions.length > 0) {
    const list = el(doc, "ul", "suggestions");
    view.suggestions.forEach((item, index) => {
      const entry = el(doc, "li", "suggestion");
      const text = view.policyBody.slice(item.spanStart, item.spanEnd);
      entry.appendChild(el(doc, "span", "suggestion-text", `“${text}” (${item.method})`));
      const accept = el(doc, "button", "accept", "Accept");
      accept.addEventListener("click", () => handlers.onAccept(index));
      entry.appendChild(accept);
      list.appendChild(entry);
    });
    section.appendChild(list);
  }
  return section;
}

function seedInput(doc: Document, name: string, placeholder: string): HTMLInputElement {
  const input = el(doc, "input", `seed-${name}`);
  input.name = name;
  input.placeholder = placeholder;
  return input;
}

function renderExport(doc: Document, view: TaskView, handlers: Handlers): HTMLElement {
  const section = el(doc, "section", "export-view");
  section.appendChild(el(doc, "h2", undefined, "All questions answered"));
  section.appendChild(
    el(doc, "p", undefined, "Export the gathered annotations as a transparency document."),
  );
  if (view.error !== null) {
    section.appendChild(errorBanner(doc, view.error));
  }

  const form = el(doc, "div", "export-seed");
  const inputs = {
    docId: seedInput(doc, "docId", "document id"),
    docName: seedInput(doc, "docName", "document name"),
    language: seedInput(doc, "language", "language (en)"),
    country: seedInput(doc, "country", "country (DE)"),
  };
  for (const input of Object.values(inputs)) {
    form.appendChild(input);
  }
  section.appendChild(form);

  const seedOf = (): ExportSeed => ({
    docId: inputs.docId.value || undefined,
    docName: inputs.docName.value || undefined,
    language: inputs.language.value || undefined,
    country: inputs.country.value || undefined,
  });

  const controls = el(doc, "div", "controls");
  const download = el(doc, "a", "download-tilt", "Download .tilt");
  download.setAttribute("href", exportUrl(view.taskId, {}));
  download.setAttribute("download", `${view.taskId}.tilt`);
  const refresh = () => download.setAttribute("href", exportUrl(view.taskId, seedOf()));
  for (const input of Object.values(inputs)) {
    input.addEventListener("input", refresh);
  }
  const preview = el(doc, "button", "export-preview", "Preview export");
  preview.addEventListener("click", () => handlers.onExportPreview(seedOf()));
  controls.appendChild(download);
  controls.appendChild(preview);
  section.appendChild(controls);

  section.appendChild(el(doc, "pre", "export-body"));
  return section;
}

export function renderView(root: HTMLElement, view: TaskView, handlers: Handlers): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  const header = el(doc, "header");
  header.appendChild(el(doc, "h1", undefined, "tilt annotator"));
  header.appendChild(el(doc, "span", "task-id", view.taskId));
  header.appendChild(el(doc, "span", "task-status", view.status));
  root.appendChild(header);

  if (view.policyBody === "") {
    if (view.error !== null) {
      root.appendChild(errorBanner(doc, view.error));
      const retry = el(doc, "button", "retry", "Retry");
      retry.addEventListener("click", handlers.onRetry);
      root.appendChild(retry);
    }
    return;
  }

  root.appendChild(view.done ? renderExport(doc, view, handlers) : renderQuestion(doc, view, handlers));

  const policySection = el(doc, "section", "policy");
  const body = el(doc, "div", "policy-body");
  body.id = "policy-body";
  renderPolicy(body, view.policyBody, highlightsOf(view));
  policySection.appendChild(body);
  root.appendChild(policySection);
}
