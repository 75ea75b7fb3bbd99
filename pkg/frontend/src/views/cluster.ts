import { h, type VNode } from "../vdom.js";
import { NEUTRAL, colorFor } from "../palette.js";
import { barPlot, groupedBarPlot } from "../plots/bars.js";
import type { Session, SelectionMethod, Store } from "../state.js";
import type { CountsBy } from "../types.js";
import { NO_DATA_NOTICE } from "./notices.js";

const METHODS: { value: SelectionMethod; label: string }[] = [
  { value: "cv", label: "cross-validation" },
  { value: "silhouette", label: "silhouette" },
  { value: "calinski_harabasz", label: "calinski-harabasz" },
];

function numberInput(
  cls: string,
  label: string,
  value: number,
  onValue: (v: number) => void,
): VNode {
  return h(
    "label",
    { class: `num ${cls}` },
    label,
    h("input", {
      type: "number",
      value,
      onchange: (ev) => onValue(Number((ev.target as HTMLInputElement).value)),
    }),
  );
}

function selectionControls(s: Session, store: Store): VNode {
  return h(
    "div",
    { class: "selection-controls" },
    h(
      "label",
      { class: "method" },
      "Selection method ",
      h(
        "select",
        {
          class: "method-pick",
          onchange: (ev) =>
            store.setMethod((ev.target as HTMLSelectElement).value as SelectionMethod),
        },
        METHODS.map((m) =>
          h("option", { value: m.value, selected: s.method === m.value }, m.label),
        ),
      ),
    ),
    numberInput("max-clusters", "Max clusters ", s.maxClusters, (v) =>
      store.setMaxClusters(v),
    ),
    h(
      "div",
      { class: "grid-inputs" },
      "Penalty grid ",
      numberInput("grid-lo", "from ", s.grid.lo, (v) =>
        store.setGrid(v, store.session.grid.hi, store.session.grid.steps),
      ),
      numberInput("grid-hi", "to ", s.grid.hi, (v) =>
        store.setGrid(store.session.grid.lo, v, store.session.grid.steps),
      ),
      numberInput("grid-steps", "steps ", s.grid.steps, (v) =>
        store.setGrid(store.session.grid.lo, store.session.grid.hi, v),
      ),
    ),
  );
}

function hierControls(s: Session, store: Store): VNode {
  return h(
    "div",
    { class: "hier-controls" },
    numberInput("lambda-global", "Global penalty ", s.lambdaGlobal, (v) =>
      store.setLambdas(v, store.session.lambdaLocal),
    ),
    numberInput("lambda-local", "Local penalty ", s.lambdaLocal, (v) =>
      store.setLambdas(store.session.lambdaGlobal, v),
    ),
  );
}

function jobStatus(s: Session): VNode | null {
  const job = s.job;
  if (!job) return null;
  if (job.state === "queued" || job.state === "running") {
    return h(
      "div",
      { class: "jobstate running" },
      `job ${job.state}`,
      h("progress", { value: job.progress, max: 1 }),
    );
  }
  if (job.state === "failed") {
    return h("div", { class: "jobstate failed" }, "job failed");
  }
  return h("div", { class: "jobstate done" }, "job done");
}

function countsToggle(s: Session, store: Store): VNode {
  const choice = (value: CountsBy, label: string): VNode =>
    h(
      "label",
      { class: "counts-choice" },
      h("input", {
        type: "radio",
        name: "counts-by",
        value,
        checked: s.countsBy === value,
        onchange: () => void store.setCountsBy(value),
      }),
      label,
    );
  return h(
    "fieldset",
    { class: "counts-toggle" },
    h("legend", {}, "Counts conditional on"),
    choice("cluster", "cluster"),
    choice("group", "sub-domain"),
    choice("cluster_x_group", "cluster and sub-domain"),
  );
}

function countsSection(s: Session, store: Store): VNode {
  const counts = s.counts!;
  const summary =
    s.result?.selection_report != null
      ? h(
          "p",
          { class: "summary" },
          `chose lambda ${s.result.selection_report.chosen_lambda} by ` +
            `${s.result.selection_report.method}; K = ${s.resultK}`,
        )
      : h("p", { class: "summary" }, `K = ${s.resultK} clusters`);
  let plot: VNode;
  if (counts.by === "cluster_x_group") {
    plot = groupedBarPlot(counts.groups, counts.clusters, counts.table);
  } else if (counts.by === "cluster") {
    plot = barPlot(counts.labels, counts.counts, (i) => colorFor(counts.labels[i] as number));
  } else {
    plot = barPlot(counts.labels, counts.counts, () => NEUTRAL);
  }
  return h(
    "div",
    { class: "counts-section" },
    summary,
    store.hierResult() ? countsToggle(s, store) : null,
    plot,
  );
}

export function clusterView(s: Session, store: Store): VNode {
  if (!s.dataset) {
    return h(
      "section",
      { class: "tab-body cluster" },
      h("h2", {}, "Cluster"),
      h("p", { class: "empty" }, NO_DATA_NOTICE),
    );
  }
  const hier = s.dataset.grouped && s.hierMode;
  return h(
    "section",
    { class: "tab-body cluster" },
    h("h2", {}, "Cluster"),
    s.dataset.grouped
      ? h(
          "label",
          { class: "hier-mode" },
          h("input", {
            type: "checkbox",
            checked: s.hierMode,
            onchange: (ev) => store.setHierMode((ev.target as HTMLInputElement).checked),
          }),
          "Hierarchical (per sub-domain)",
        )
      : null,
    hier ? hierControls(s, store) : selectionControls(s, store),
    h(
      "button",
      {
        class: "run",
        disabled: store.inFlight(),
        onclick: () => void store.runCluster(),
      },
      "Run clustering",
    ),
    jobStatus(s),
    s.counts ? countsSection(s, store) : null,
  );
}
