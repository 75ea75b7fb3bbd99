/** Plain element trees. Views build these; `apply` mounts them onto real DOM.
 *
 * There is no diffing: every render rebuilds the tree and replaces the mount
 * point's children. At desk scale (a few thousand SVG nodes) that is fast
 * enough, and it keeps views trivially testable as data.
 */

export type EventHandler = (ev: Event) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, EventHandler>;
  children: (VNode | string)[];
}

type AttrValue = string | number | boolean | EventHandler | null | undefined;
export type Props = Record<string, AttrValue>;
type ChildInput = VNode | string | number | null | undefined | false | ChildInput[];

/** Hyperscript: `on*` props become event listeners, the rest attributes.
 * `false`/`null`/`undefined` props and children are skipped, so conditional
 * markup can be written inline. */
export function h(tag: string, props: Props = {}, ...children: ChildInput[]): VNode {
  const attrs: Record<string, string> = {};
  const on: Record<string, EventHandler> = {};
  for (const [key, value] of Object.entries(props)) {
    if (value === null || value === undefined || value === false) continue;
    if (key.startsWith("on") && typeof value === "function") {
      on[key.slice(2)] = value;
    } else if (value === true) {
      attrs[key] = "";
    } else {
      attrs[key] = String(value);
    }
  }
  const flat: (VNode | string)[] = [];
  const push = (c: ChildInput): void => {
    if (c === null || c === undefined || c === false) return;
    if (Array.isArray(c)) {
      for (const item of c) push(item);
    } else if (typeof c === "number") {
      flat.push(String(c));
    } else {
      flat.push(c);
    }
  };
  push(children);
  return { tag, attrs, on, children: flat };
}

/** Concatenated text content of a subtree. */
export function text(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(text).join("");
}

/** All nodes (depth-first, including the root) satisfying `pred`. */
export function findAll(node: VNode, pred: (v: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const visit = (v: VNode): void => {
    if (pred(v)) out.push(v);
    for (const c of v.children) {
      if (typeof c !== "string") visit(c);
    }
  };
  visit(node);
  return out;
}

export function findFirst(node: VNode, pred: (v: VNode) => boolean): VNode | null {
  return findAll(node, pred)[0] ?? null;
}

/** Nodes with a CSS class (exact token match on the `class` attribute). */
export function byClass(node: VNode, cls: string): VNode[] {
  return findAll(node, (v) => (v.attrs["class"] ?? "").split(/\s+/).includes(cls));
}

export function byTag(node: VNode, tag: string): VNode[] {
  return findAll(node, (v) => v.tag === tag);
}

const SVG_NS = "http://www.w3.org/2000/svg";
const SVG_TAGS = new Set([
  "svg", "g", "rect", "circle", "line", "polyline", "path", "text", "title",
]);

function build(node: VNode | string, doc: Document): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = SVG_TAGS.has(node.tag)
    ? doc.createElementNS(SVG_NS, node.tag)
    : doc.createElement(node.tag);
  for (const [name, value] of Object.entries(node.attrs)) {
    el.setAttribute(name, value);
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, handler);
  }
  for (const child of node.children) {
    el.appendChild(build(child, doc));
  }
  return el;
}

/** Replace `root`'s children with the rendered tree. */
export function apply(root: Element, node: VNode, doc: Document = document): void {
  root.replaceChildren(build(node, doc));
}
