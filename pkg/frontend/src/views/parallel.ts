import { h, type VNode } from "../vdom.js";
import { parallelPlot } from "../plots/parallel.js";
import type { Session, Store } from "../state.js";
import { NO_RESULT_NOTICE } from "./notices.js";

function highlightPicker(s: Session, store: Store): VNode {
  const options = [
    h("option", { value: "all", selected: s.highlight === "all" }, "all clusters"),
  ];
  for (let k = 0; k < s.resultK; k++) {
    options.push(
      h("option", { value: String(k), selected: s.highlight === k }, `cluster ${k}`),
    );
  }
  return h(
    "label",
    { class: "highlight-pick" },
    "Highlight ",
    h(
      "select",
      {
        onchange: (ev) => {
          const value = (ev.target as HTMLSelectElement).value;
          void store.setHighlight(value === "all" ? "all" : Number(value));
        },
      },
      options,
    ),
  );
}

export function parallelView(s: Session, store: Store): VNode {
  if (!s.parallel) {
    return h(
      "section",
      { class: "tab-body parallel" },
      h("h2", {}, "Parallel Plot"),
      h("p", { class: "empty" }, NO_RESULT_NOTICE),
    );
  }
  return h(
    "section",
    { class: "tab-body parallel" },
    h("h2", {}, "Parallel Plot"),
    highlightPicker(s, store),
    parallelPlot(s.parallel.vars, s.parallel.lines),
  );
}
