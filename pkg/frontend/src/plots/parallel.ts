import { h, type VNode } from "../vdom.js";
import { DIM, colorFor } from "../palette.js";
import type { ParallelLine } from "../types.js";

const AXIS_GAP = 90;
const PLOT_H = 220;
const TOP = 26;
const BOTTOM = 12;

/** Parallel-coordinates plot: one polyline per observation across one axis
 * per variable, in the given variable order. Dimmed lines are drawn first
 * so highlighted clusters always sit on top. */
export function parallelPlot(vars: string[], lines: ParallelLine[]): VNode {
  const width = 30 + (vars.length - 1) * AXIS_GAP + 30;
  const xs = vars.map((_, i) => 30 + i * AXIS_GAP);
  const scales = vars.map((_, dim) => {
    let lo = Infinity;
    let hi = -Infinity;
    for (const line of lines) {
      const v = line.values[dim];
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (!isFinite(lo)) return { lo: 0, span: 1 };
    return { lo, span: hi - lo || 1 };
  });
  const yOf = (value: number, dim: number): number =>
    TOP + PLOT_H - ((value - scales[dim].lo) / scales[dim].span) * PLOT_H;

  const axes: VNode[] = vars.map((name, i) =>
    h(
      "g",
      { class: "axis", "data-var": name },
      h("line", { x1: xs[i], y1: TOP, x2: xs[i], y2: TOP + PLOT_H }),
      h("text", { x: xs[i], y: TOP - 10, "text-anchor": "middle" }, name),
    ),
  );

  const lineNode = (line: ParallelLine): VNode =>
    h("polyline", {
      class: line.dimmed ? "line dimmed" : "line",
      points: line.values.map((v, i) => `${xs[i]},${yOf(v, i).toFixed(2)}`).join(" "),
      fill: "none",
      stroke: line.dimmed ? DIM : colorFor(line.cluster),
      "stroke-width": line.dimmed ? 1 : 1.6,
      "data-cluster": line.cluster,
      "data-row": line.row_id,
    });

  const dimmed = lines.filter((l) => l.dimmed).map(lineNode);
  const bright = lines.filter((l) => !l.dimmed).map(lineNode);

  return h(
    "svg",
    {
      class: "parallel-plot",
      viewBox: `0 0 ${width} ${TOP + PLOT_H + BOTTOM}`,
      width: Math.min(width, 900),
    },
    axes,
    dimmed,
    bright,
  );
}
