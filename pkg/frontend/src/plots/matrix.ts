import { h, type VNode } from "../vdom.js";

export interface MatrixPoint {
  values: number[];
  color: string;
}

const PANEL = 110;
const GAP = 10;
const PAD = 6;

interface Scale {
  lo: number;
  span: number;
}

function scaleOf(points: MatrixPoint[], dim: number): Scale {
  let lo = Infinity;
  let hi = -Infinity;
  for (const p of points) {
    const v = p.values[dim];
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo)) return { lo: 0, span: 1 };
  return { lo, span: hi - lo || 1 };
}

function toPanel(value: number, scale: Scale): number {
  return PAD + ((value - scale.lo) / scale.span) * (PANEL - 2 * PAD);
}

/** Scatterplot matrix: one panel per ordered variable pair, variable names
 * on the diagonal. Points are drawn in the order given, so callers place
 * de-emphasized points first to keep them beneath the rest. */
export function matrixPlot(vars: string[], points: MatrixPoint[]): VNode {
  const k = vars.length;
  const size = k * PANEL + (k + 1) * GAP;
  const scales = vars.map((_, dim) => scaleOf(points, dim));
  const panels: VNode[] = [];
  for (let row = 0; row < k; row++) {
    for (let col = 0; col < k; col++) {
      const x = GAP + col * (PANEL + GAP);
      const y = GAP + row * (PANEL + GAP);
      const frame = h("rect", {
        width: PANEL,
        height: PANEL,
        class: "frame",
      });
      let body: (VNode | string)[];
      if (row === col) {
        body = [
          frame,
          h(
            "text",
            { x: PANEL / 2, y: PANEL / 2, class: "varlabel", "text-anchor": "middle" },
            vars[row],
          ),
        ];
      } else {
        body = [frame];
        for (const p of points) {
          body.push(
            h("circle", {
              cx: toPanel(p.values[col], scales[col]).toFixed(2),
              cy: (PANEL - toPanel(p.values[row], scales[row])).toFixed(2),
              r: 3,
              fill: p.color,
              class: "pt",
            }),
          );
        }
      }
      panels.push(
        h(
          "g",
          {
            class: "panel",
            transform: `translate(${x},${y})`,
            "data-x": vars[col],
            "data-y": vars[row],
          },
          body,
        ),
      );
    }
  }
  return h(
    "svg",
    { class: "matrix-plot", viewBox: `0 0 ${size} ${size}`, width: Math.min(size, 720) },
    panels,
  );
}
