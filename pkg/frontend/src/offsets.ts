/**
 * Conversion between DOM selections and character offsets in the raw policy
 * body. The policy container renders the body as text nodes optionally
 * wrapped in <mark> elements, so concatenating its text nodes in document
 * order reproduces the raw text and an offset is simply the number of
 * characters before a boundary.
 */

export interface Span {
  start: number;
  end: number;
}

function textNodesOf(root: Node): Text[] {
  const walker = root.ownerDocument!.createTreeWalker(root, NodeFilter.SHOW_TEXT);
  const nodes: Text[] = [];
  let current = walker.nextNode();
  while (current !== null) {
    nodes.push(current as Text);
    current = walker.nextNode();
  }
  return nodes;
}

/** Number of raw characters rendered under root. */
export function textLength(root: Node): number {
  let length = 0;
  for (const node of textNodesOf(root)) {
    length += node.length;
  }
  return length;
}

/**
 * Characters preceding a Range boundary inside root. The boundary is either
 * (text node, character offset) or (element, child index); both count the
 * text nodes that lie wholly before the boundary in document order.
 */
export function absoluteOffset(root: Node, container: Node, offset: number): number {
  let boundary: Node | null;
  let within = 0;
  if (container.nodeType === Node.TEXT_NODE) {
    boundary = container;
    within = offset;
  } else {
    boundary = container.childNodes[offset] ?? null;
  }
  if (boundary === null) {
    if (container === root) {
      return textLength(root);
    }
    boundary = container.nextSibling;
    while (boundary === null && container.parentNode !== null && container !== root) {
      container = container.parentNode;
      boundary = container.nextSibling;
    }
    if (boundary === null) {
      return textLength(root);
    }
  }
  let total = 0;
  for (const node of textNodesOf(root)) {
    if (node === boundary || boundary.contains(node)) {
      break;
    }
    const relation = node.compareDocumentPosition(boundary);
    if ((relation & Node.DOCUMENT_POSITION_FOLLOWING) === 0) {
      break;
    }
    total += node.length;
  }
  return total + within;
}

/**
 * Resolve the active selection to a [start, end) span over the raw body, or
 * null when there is nothing usable: no range, a collapsed range, or a range
 * that reaches outside the policy container.
 */
export function selectionToSpan(root: HTMLElement, selection: Selection | null): Span | null {
  if (selection === null || selection.rangeCount === 0) {
    return null;
  }
  const range = selection.getRangeAt(0);
  if (!root.contains(range.startContainer) || !root.contains(range.endContainer)) {
    return null;
  }
  const start = absoluteOffset(root, range.startContainer, range.startOffset);
  const end = absoluteOffset(root, range.endContainer, range.endOffset);
  if (end <= start) {
    return null;
  }
  return { start, end };
}
