import { h, type VNode } from "../vdom.js";
import { colorFor } from "../palette.js";

const BAR_W = 36;
const SLOT = 56;
const PLOT_H = 180;
const TOP = 20;
const BOTTOM = 28;

function barHeight(count: number, maxCount: number): number {
  return maxCount > 0 ? (count / maxCount) * PLOT_H : 0;
}

/** One bar per label; bar heights are the observation counts. */
export function barPlot(
  labels: (string | number)[],
  counts: number[],
  colorOf: (index: number) => string,
): VNode {
  const maxCount = Math.max(0, ...counts);
  const width = Math.max(240, labels.length * SLOT + 20);
  const bars: VNode[] = [];
  labels.forEach((label, i) => {
    const hgt = barHeight(counts[i], maxCount);
    const x = 10 + i * SLOT + (SLOT - BAR_W) / 2;
    const y = TOP + PLOT_H - hgt;
    bars.push(
      h("rect", {
        class: "bar",
        x,
        y: y.toFixed(2),
        width: BAR_W,
        height: hgt.toFixed(2),
        fill: colorOf(i),
        "data-label": label,
        "data-count": counts[i],
      }),
      h(
        "text",
        { x: x + BAR_W / 2, y: (y - 4).toFixed(2), class: "count", "text-anchor": "middle" },
        counts[i],
      ),
      h(
        "text",
        {
          x: x + BAR_W / 2,
          y: TOP + PLOT_H + 16,
          class: "barlabel",
          "text-anchor": "middle",
        },
        String(label),
      ),
    );
  });
  return h(
    "svg",
    {
      class: "bar-plot",
      viewBox: `0 0 ${width} ${TOP + PLOT_H + BOTTOM}`,
      width: Math.min(width, 720),
    },
    bars,
  );
}

/** Counts conditional on both sub-domain and cluster: for each sub-domain,
 * one bar per cluster, colored with the shared cluster palette. */
export function groupedBarPlot(groups: string[], clusters: number[], table: number[][]): VNode {
  const cellW = 22;
  const groupGap = 26;
  const groupW = clusters.length * cellW;
  const width = 10 + groups.length * (groupW + groupGap) + 10;
  const maxCount = Math.max(0, ...table.flat());
  const marks: VNode[] = [];
  groups.forEach((group, gi) => {
    const gx = 10 + gi * (groupW + groupGap);
    clusters.forEach((cluster, ci) => {
      const count = table[gi][ci];
      const hgt = barHeight(count, maxCount);
      marks.push(
        h("rect", {
          class: "bar cell",
          x: gx + ci * cellW + 2,
          y: (TOP + PLOT_H - hgt).toFixed(2),
          width: cellW - 4,
          height: hgt.toFixed(2),
          fill: colorFor(cluster),
          "data-group": group,
          "data-cluster": cluster,
          "data-count": count,
        }),
      );
    });
    marks.push(
      h(
        "text",
        {
          x: gx + groupW / 2,
          y: TOP + PLOT_H + 16,
          class: "barlabel",
          "text-anchor": "middle",
        },
        group,
      ),
    );
  });
  return h(
    "svg",
    {
      class: "bar-plot grouped",
      viewBox: `0 0 ${width} ${TOP + PLOT_H + BOTTOM}`,
      width: Math.min(width, 720),
    },
    marks,
  );
}
