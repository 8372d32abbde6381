/**
 * Application entry point: resolves the task id from the URL, keeps the
 * current TaskView, and re-renders after every transition. Reloading the
 * page rebuilds the identical view from hub state alone.
 */

import { fetchExport, type ExportSeed } from "./api.js";
import { renderView, type Handlers } from "./page.js";
import {
  acceptSuggestion,
  loadTask,
  selectSpan,
  submitAndAdvance,
  type TaskView,
} from "./view.js";

function taskIdFromLocation(location: Location): string | null {
  const fromQuery = new URLSearchParams(location.search).get("task");
  if (fromQuery !== null && fromQuery !== "") {
    return fromQuery;
  }
  const fromHash = location.hash.replace(/^#/, "");
  return fromHash === "" ? null : fromHash;
}

function renderTaskPicker(root: HTMLElement): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  const form = doc.createElement("form");
  form.className = "task-picker";
  const label = doc.createElement("label");
  label.textContent = "Task id";
  const input = doc.createElement("input");
  input.name = "task";
  input.placeholder = "task-1";
  label.appendChild(input);
  form.appendChild(label);
  const open = doc.createElement("button");
  open.textContent = "Open task";
  form.appendChild(open);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input.value !== "") {
      window.location.hash = `#${input.value}`;
      window.location.reload();
    }
  });
  root.appendChild(form);
}

export function start(root: HTMLElement): void {
  const taskId = taskIdFromLocation(window.location);
  if (taskId === null) {
    renderTaskPicker(root);
    return;
  }

  let view: TaskView | null = null;

  const apply = (next: TaskView): void => {
    view = next;
    renderView(root, view, handlers);
  };

  const showExport = async (seed: ExportSeed): Promise<void> => {
    try {
      const tree = await fetchExport(taskId, seed);
      const target = root.querySelector(".export-body");
      if (target !== null) {
        target.textContent = JSON.stringify(tree, null, 2);
      }
    } catch (failure) {
      if (view !== null) {
        apply({ ...view, error: failure instanceof Error ? failure.message : String(failure) });
      }
    }
  };

  const handlers: Handlers = {
    onSubmit: (present) => {
      if (view !== null) {
        void submitAndAdvance(view, present).then(apply);
      }
    },
    onAccept: (index) => {
      if (view !== null) {
        apply(acceptSuggestion(view, index));
      }
    },
    onRetry: () => {
      void loadTask(taskId).then(apply);
    },
    onExportPreview: (seed) => {
      void showExport(seed);
    },
  };

  root.addEventListener("mouseup", () => {
    const body = root.querySelector<HTMLElement>("#policy-body");
    if (view === null || body === null) {
      return;
    }
    const next = selectSpan(view, body, window.getSelection());
    if (next !== view) {
      apply(next);
    }
  });

  void loadTask(taskId).then(apply);
}

const app = document.getElementById("app");
if (app !== null) {
  start(app);
}
