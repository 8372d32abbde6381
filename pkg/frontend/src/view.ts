/**
 * Task view state and transitions. Every transition is a pure function from
 * the previous view (plus server responses) to the next view; nothing here
 * touches the DOM except reading the selection passed in by the caller. The
 * server stays authoritative: a successful submission reloads the whole view
 * from the hub instead of patching state locally.
 */

import {
  HubError,
  getNext,
  getPolicy,
  getSuggestions,
  getTask,
  postSubmission,
  type SuggestionItem,
} from "./api.js";
import { selectionToSpan, type Span } from "./offsets.js";

export interface TaskView {
  taskId: string;
  status: string;
  cursor: number;
  total: number;
  policyBody: string;
  done: boolean;
  field: string | null;
  prompt: string | null;
  suggestions: SuggestionItem[];
  pending: Span | null;
  notice: string | null;
  error: string | null;
}

export function emptyView(taskId: string): TaskView {
  return {
    taskId,
    status: "unknown",
    cursor: 0,
    total: 0,
    policyBody: "",
    done: false,
    field: null,
    prompt: null,
    suggestions: [],
    pending: null,
    notice: null,
    error: null,
  };
}

/** Fraction of questions answered, in [0, 1]. */
export function progressOf(view: TaskView): number {
  return view.total > 0 ? view.cursor / view.total : 0;
}

function describeFailure(failure: unknown): string {
  if (failure instanceof HubError) {
    return failure.message;
  }
  return failure instanceof Error ? failure.message : String(failure);
}

/**
 * Fetch task state, policy body, the next question and its suggestions.
 * Failures come back as a view with the error banner set; the task id is
 * never dropped, so a retry can reload the same task.
 */
export async function loadTask(taskId: string): Promise<TaskView> {
  const view = emptyView(taskId);
  try {
    const task = await getTask(taskId);
    const policy = await getPolicy(task.policyId);
    const next = await getNext(taskId);
    const suggestions =
      !next.done && next.field !== undefined ? await getSuggestions(taskId, next.field) : [];
    return {
      ...view,
      status: task.status,
      cursor: next.cursor,
      total: next.total,
      policyBody: policy.body,
      done: next.done,
      field: next.field ?? null,
      prompt: next.prompt ?? null,
      suggestions,
    };
  } catch (failure) {
    return { ...view, error: describeFailure(failure) };
  }
}

/**
 * Turn the current DOM selection into a pending span. Collapsed selections
 * are ignored; a selection reaching outside the policy body leaves the
 * pending span alone and shows a hint instead.
 */
export function selectSpan(
  view: TaskView,
  root: HTMLElement,
  selection: Selection | null,
): TaskView {
  if (view.done || selection === null || selection.rangeCount === 0) {
    return view;
  }
  const range = selection.getRangeAt(0);
  if (range.collapsed) {
    return view;
  }
  if (!root.contains(range.startContainer) || !root.contains(range.endContainer)) {
    return { ...view, notice: "Select text inside the policy body." };
  }
  const span = selectionToSpan(root, selection);
  if (span === null) {
    return view;
  }
  return { ...view, pending: span, notice: null };
}

/** Adopt a suggestion's span as the pending span. */
export function acceptSuggestion(view: TaskView, index: number): TaskView {
  const suggestion = view.suggestions[index];
  if (suggestion === undefined) {
    return view;
  }
  return {
    ...view,
    pending: { start: suggestion.spanStart, end: suggestion.spanEnd },
    notice: null,
  };
}

/**
 * Post the answer for the current question and reload the view from the
 * hub. present=true without a pending span is rejected locally with an
 * inline notice and no request. Server errors keep the current state and
 * surface the hub's message verbatim.
 */
export async function submitAndAdvance(
  view: TaskView,
  present: boolean,
  annotator = "annotator",
): Promise<TaskView> {
  if (view.done || view.field === null) {
    return view;
  }
  if (present && view.pending === null) {
    return { ...view, notice: "Mark a text span first." };
  }
  const spans: [number, number][] =
    present && view.pending !== null ? [[view.pending.start, view.pending.end]] : [];
  try {
    await postSubmission(view.taskId, { field: view.field, present, spans, annotator });
  } catch (failure) {
    return { ...view, error: describeFailure(failure) };
  }
  return loadTask(view.taskId);
}
