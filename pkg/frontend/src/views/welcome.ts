import { h, type VNode } from "../vdom.js";

export function welcomeView(): VNode {
  return h(
    "section",
    { class: "tab-body welcome" },
    h("h2", {}, "Welcome"),
    h(
      "p",
      {},
      "penclust clusters data without fixing the number of clusters in advance: ",
      "a per-cluster penalty decides how many clusters the data can support. ",
      "Work through the tabs left to right.",
    ),
    h(
      "ul",
      { class: "tab-guide" },
      h(
        "li",
        {},
        h("strong", {}, "Load Data"),
        ": upload a CSV or pick a dataset from the workspace, preview the rows, ",
        "and draw a matrix plot of the variables you choose.",
      ),
      h(
        "li",
        {},
        h("strong", {}, "Cluster"),
        ": pick a selection method and a penalty grid, run the job, and see ",
        "how many observations land in each cluster.",
      ),
      h(
        "li",
        {},
        h("strong", {}, "Scatter Plot"),
        ": the same matrix plot, now with points colored by cluster membership.",
      ),
      h(
        "li",
        {},
        h("strong", {}, "Parallel Plot"),
        ": each observation drawn as a polyline across parallel axes, with ",
        "single-cluster highlighting.",
      ),
    ),
  );
}
