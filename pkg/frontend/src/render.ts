/**
 * Whitespace-preserving rendering of the policy body with highlight marks.
 *
 * The body is split at highlight boundaries; plain stretches become text
 * nodes and highlighted stretches become <mark> elements that wrap only
 * text. No characters are added or removed, so the DOM text content equals
 * the raw body and offset arithmetic stays exact.
 */

import type { Span } from "./offsets.js";

export interface Highlight extends Span {
  kind: "suggestion" | "pending";
}

function clampedHighlights(highlights: Highlight[], length: number): Highlight[] {
  const kept: Highlight[] = [];
  for (const item of highlights) {
    const start = Math.max(0, Math.min(item.start, length));
    const end = Math.max(0, Math.min(item.end, length));
    if (end > start) {
      kept.push({ start, end, kind: item.kind });
    }
  }
  return kept;
}

/** Cut points of the body: every highlight boundary plus both ends. */
function boundaries(highlights: Highlight[], length: number): number[] {
  const points = new Set<number>([0, length]);
  for (const item of highlights) {
    points.add(item.start);
    points.add(item.end);
  }
  return [...points].sort((a, b) => a - b);
}

export function renderPolicy(
  container: HTMLElement,
  body: string,
  highlights: Highlight[],
): void {
  const kept = clampedHighlights(highlights, body.length);
  container.textContent = "";
  const points = boundaries(kept, body.length);
  for (let i = 0; i + 1 < points.length; i += 1) {
    const start = points[i]!;
    const end = points[i + 1]!;
    const piece = body.slice(start, end);
    const kinds = new Set<string>();
    for (const item of kept) {
      if (item.start <= start && end <= item.end) {
        kinds.add(item.kind);
      }
    }
    if (kinds.size === 0) {
      container.appendChild(container.ownerDocument.createTextNode(piece));
    } else {
      const mark = container.ownerDocument.createElement("mark");
      mark.className = [...kinds].sort().map((kind) => `hl-${kind}`).join(" ");
      mark.textContent = piece;
      container.appendChild(mark);
    }
  }
}
