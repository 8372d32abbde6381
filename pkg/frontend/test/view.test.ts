// @vitest-environment jsdom

/**
 * View transitions against a scripted hub: loading, submitting, error
 * passthrough, and the rendered DOM for each state. The hub is a fetch stub
 * keyed on "METHOD /path" so every test pins the exact wire traffic.
 */

import { afterEach, describe, expect, it, vi } from "vitest";

import { renderView, type Handlers } from "../src/page.js";
import {
  acceptSuggestion,
  loadTask,
  progressOf,
  selectSpan,
  submitAndAdvance,
  type TaskView,
} from "../src/view.js";
import { CONTROLLER_END, CONTROLLER_START, POLICY_BODY } from "./fixtures.js";

interface Reply {
  status?: number;
  body: unknown;
}

type Route = Reply | ((init?: RequestInit) => Reply);
type Routes = Record<string, Route>;

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function installHub(routes: Routes): string[] {
  const calls: string[] = [];
  const stub = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === "string" ? input : input.toString();
    const path = url.split("?")[0] as string;
    const key = `${init?.method ?? "GET"} ${path}`;
    calls.push(key);
    const route = routes[key];
    if (route === undefined) {
      return jsonResponse(404, { error: "NotFoundError", detail: `no route for ${key}` });
    }
    const reply = typeof route === "function" ? route(init) : route;
    return jsonResponse(reply.status ?? 200, reply.body);
  });
  vi.stubGlobal("fetch", stub);
  return calls;
}

function freshRoutes(): Routes {
  return {
    "GET /tasks/task-1": {
      body: { id: "task-1", policyId: "policy-1", cursor: 0, total: 15, status: "open" },
    },
    "GET /policies/policy-1": {
      body: { id: "policy-1", body: POLICY_BODY, length: POLICY_BODY.length },
    },
    "GET /tasks/task-1/next": {
      body: {
        done: false,
        field: "controllerIdentity",
        prompt: "Who is the data controller?",
        cursor: 0,
        total: 15,
      },
    },
    "GET /tasks/task-1/suggestions": {
      body: [
        {
          field: "controllerIdentity",
          spanStart: CONTROLLER_START,
          spanEnd: CONTROLLER_END,
          confidence: 0.4,
          method: "keyword",
        },
      ],
    },
  };
}

const noop: Handlers = {
  onSubmit() {},
  onAccept() {},
  onRetry() {},
  onExportPreview() {},
};

function mountView(view: TaskView, handlers: Handlers = noop): HTMLElement {
  const root = document.createElement("main");
  document.body.appendChild(root);
  renderView(root, view, handlers);
  return root;
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.textContent = "";
});

describe("loadTask", () => {
  it("shows the first question of a fresh task at progress zero", async () => {
    installHub(freshRoutes());
    const view = await loadTask("task-1");
    expect(view.error).toBeNull();
    expect(view.done).toBe(false);
    expect(view.field).toBe("controllerIdentity");
    expect(progressOf(view)).toBe(0);
    expect(view.suggestions).toHaveLength(1);

    const root = mountView(view);
    expect(root.querySelector(".prompt")?.textContent).toBe("Who is the data controller?");
    expect(root.querySelector(".progress-label")?.textContent).toBe("0 / 15");
    expect(root.querySelector("#policy-body")?.textContent).toBe(POLICY_BODY);
    expect(root.querySelector("mark.hl-suggestion")?.textContent).toBe("Example GmbH");
    expect(root.querySelector(".export-view")).toBeNull();
  });

  it("shows the export view once the task is done", async () => {
    const routes = freshRoutes();
    routes["GET /tasks/task-1/next"] = { body: { done: true, cursor: 15, total: 15 } };
    installHub(routes);
    const view = await loadTask("task-1");
    expect(view.done).toBe(true);

    const root = mountView(view);
    expect(root.querySelector(".question")).toBeNull();
    const download = root.querySelector("a.download-tilt");
    expect(download?.getAttribute("href")).toBe("/tasks/task-1/export");
  });

  it("keeps the task id and shows a retry banner when the hub is down", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        throw new TypeError("fetch failed");
      }),
    );
    const view = await loadTask("task-1");
    expect(view.taskId).toBe("task-1");
    expect(view.error).toBe("NetworkError: fetch failed");

    const onRetry = vi.fn();
    const root = mountView(view, { ...noop, onRetry });
    expect(root.querySelector(".banner.error")?.textContent).toBe("NetworkError: fetch failed");
    const retry = root.querySelector<HTMLButtonElement>("button.retry");
    expect(retry).not.toBeNull();
    retry?.click();
    expect(onRetry).toHaveBeenCalledOnce();
  });
});

describe("submitAndAdvance", () => {
  it("refuses present without a span locally, sending nothing", async () => {
    const calls = installHub(freshRoutes());
    const view = await loadTask("task-1");
    const before = calls.length;

    const next = await submitAndAdvance(view, true);
    expect(next.notice).toBe("Mark a text span first.");
    expect(calls.length).toBe(before);

    const root = mountView(next);
    expect(root.querySelector(".notice")?.textContent).toBe("Mark a text span first.");
  });

  it("surfaces server rejections verbatim without moving the cursor", async () => {
    const routes = freshRoutes();
    routes["POST /tasks/task-1/submissions"] = {
      status: 400,
      body: { error: "SpanBoundsError", detail: "span [0, 999) exceeds policy length" },
    };
    installHub(routes);
    const view = acceptSuggestion(await loadTask("task-1"), 0);

    const next = await submitAndAdvance(view, true);
    expect(next.error).toBe("SpanBoundsError: span [0, 999) exceeds policy length");
    expect(next.cursor).toBe(view.cursor);
    expect(next.pending).toEqual(view.pending);

    const root = mountView(next);
    expect(root.querySelector(".question .banner.error")?.textContent).toBe(
      "SpanBoundsError: span [0, 999) exceeds policy length",
    );
  });

  it("posts the pending span and reloads state from the hub", async () => {
    const routes = freshRoutes();
    let posted: unknown = null;
    routes["POST /tasks/task-1/submissions"] = (init) => {
      posted = JSON.parse(String(init?.body));
      routes["GET /tasks/task-1/next"] = {
        body: {
          done: false,
          field: "dataDisclosedCategories",
          prompt: "Which categories of data are processed?",
          cursor: 1,
          total: 15,
        },
      };
      routes["GET /tasks/task-1/suggestions"] = { body: [] };
      return { body: { id: "task-1", cursor: 1, total: 15, status: "open", progress: 1 / 15 } };
    };
    const calls = installHub(routes);

    const view = acceptSuggestion(await loadTask("task-1"), 0);
    const next = await submitAndAdvance(view, true);

    expect(posted).toEqual({
      field: "controllerIdentity",
      present: true,
      spans: [[CONTROLLER_START, CONTROLLER_END]],
      annotator: "annotator",
    });
    expect(next.cursor).toBe(1);
    expect(next.field).toBe("dataDisclosedCategories");
    expect(next.pending).toBeNull();
    const postAt = calls.indexOf("POST /tasks/task-1/submissions");
    const reloadAt = calls.lastIndexOf("GET /tasks/task-1");
    expect(postAt).toBeGreaterThan(-1);
    expect(reloadAt).toBeGreaterThan(postAt);
  });
});

describe("span selection", () => {
  it("adopts an accepted suggestion as the pending span", async () => {
    installHub(freshRoutes());
    const view = acceptSuggestion(await loadTask("task-1"), 0);
    expect(view.pending).toEqual({ start: CONTROLLER_START, end: CONTROLLER_END });

    const root = mountView(view);
    expect(root.querySelector(".pending-span")?.textContent).toContain("Example GmbH");
    expect(root.querySelector("mark.hl-pending")).not.toBeNull();
  });

  it("hints when the selection reaches outside the policy body", async () => {
    installHub(freshRoutes());
    const view = await loadTask("task-1");
    const root = mountView(view);
    const body = root.querySelector<HTMLElement>("#policy-body") as HTMLElement;

    const outside = document.createElement("p");
    outside.textContent = "unrelated page chrome";
    document.body.appendChild(outside);
    const range = document.createRange();
    range.setStart(outside.firstChild as Text, 0);
    range.setEnd(outside.firstChild as Text, 9);
    const selection = window.getSelection() as Selection;
    selection.removeAllRanges();
    selection.addRange(range);

    const next = selectSpan(view, body, selection);
    expect(next.pending).toBeNull();
    expect(next.notice).toBe("Select text inside the policy body.");
  });

  it("turns an in-body selection into pending offsets", async () => {
    installHub(freshRoutes());
    const view = await loadTask("task-1");
    const root = mountView(view);
    const body = root.querySelector<HTMLElement>("#policy-body") as HTMLElement;

    const textNode = body.firstChild as Text;
    const range = document.createRange();
    range.setStart(textNode, 4);
    range.setEnd(textNode, 19);
    const selection = window.getSelection() as Selection;
    selection.removeAllRanges();
    selection.addRange(range);

    const next = selectSpan(view, body, selection);
    expect(next.pending).toEqual({ start: 4, end: 19 });
    expect(POLICY_BODY.slice(4, 19)).toBe("data controller");
  });
});
