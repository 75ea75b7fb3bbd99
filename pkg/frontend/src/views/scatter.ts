import { h, type VNode } from "../vdom.js";
import { colorFor } from "../palette.js";
import { matrixPlot, type MatrixPoint } from "../plots/matrix.js";
import type { Session, Store } from "../state.js";
import { NO_RESULT_NOTICE } from "./notices.js";

function viewVarPicker(s: Session, store: Store): VNode {
  const names = s.dataset?.var_names ?? [];
  return h(
    "fieldset",
    { class: "varpick" },
    h("legend", {}, "Variables"),
    names.map((name) =>
      h(
        "label",
        { class: "var-choice" },
        h("input", {
          type: "checkbox",
          value: name,
          checked: s.viewVars.includes(name),
          onchange: () => void store.toggleViewVar(name),
        }),
        name,
      ),
    ),
  );
}

function groupFilter(s: Session, store: Store): VNode {
  const names = s.dataset?.group_names ?? [];
  return h(
    "label",
    { class: "group-filter" },
    "Sub-domain ",
    h(
      "select",
      {
        onchange: (ev) => {
          const value = (ev.target as HTMLSelectElement).value;
          store.setGroupFilter(value === "" ? "all" : value);
        },
      },
      h("option", { value: "", selected: s.groupFilter === "all" }, "all sub-domains"),
      names.map((g) => h("option", { value: g, selected: s.groupFilter === g }, g)),
    ),
  );
}

export function scatterView(s: Session, store: Store): VNode {
  if (!s.scatter) {
    return h(
      "section",
      { class: "tab-body scatter" },
      h("h2", {}, "Scatter Plot"),
      h("p", { class: "empty" }, NO_RESULT_NOTICE),
    );
  }
  const payload = s.scatter;
  const hier = store.hierResult();
  const points: MatrixPoint[] = [];
  payload.values.forEach((row, i) => {
    if (hier && s.groupFilter !== "all" && payload.group?.[i] !== s.groupFilter) return;
    points.push({ values: row, color: colorFor(payload.cluster[i]) });
  });
  return h(
    "section",
    { class: "tab-body scatter" },
    h("h2", {}, "Scatter Plot"),
    viewVarPicker(s, store),
    hier && payload.group ? groupFilter(s, store) : null,
    matrixPlot(payload.vars, points),
  );
}
