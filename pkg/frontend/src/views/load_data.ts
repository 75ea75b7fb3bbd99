import { h, type VNode } from "../vdom.js";
import { DIM, NEUTRAL, SUBDOMAIN_ACCENT } from "../palette.js";
import { matrixPlot, type MatrixPoint } from "../plots/matrix.js";
import type { Session, Store } from "../state.js";
import { NO_CLUSTERING_YET } from "./notices.js";

const PREVIEW_ROWS = 10;

function sourcePicker(s: Session, store: Store): VNode {
  const radio = (value: "workspace" | "upload", label: string): VNode =>
    h(
      "label",
      { class: "source-choice" },
      h("input", {
        type: "radio",
        name: "source",
        value,
        checked: s.source === value,
        onchange: () => store.setSource(value),
      }),
      label,
    );
  return h(
    "fieldset",
    { class: "source" },
    h("legend", {}, "Data source"),
    radio("workspace", "From the workspace"),
    radio("upload", "Upload a file"),
    s.source === "workspace" ? workspacePicker(s, store) : uploadPicker(store),
  );
}

function workspacePicker(s: Session, store: Store): VNode {
  return h(
    "select",
    {
      class: "dataset-pick",
      onchange: (ev) => {
        const value = (ev.target as HTMLSelectElement).value;
        if (value) void store.openDataset(value);
      },
    },
    h("option", { value: "" }, "choose a dataset"),
    s.datasets.map((e) =>
      h(
        "option",
        { value: e.id, selected: s.dataset?.id === e.id },
        `${e.id} (${e.n} rows, ${e.d} vars)`,
      ),
    ),
  );
}

function uploadPicker(store: Store): VNode {
  return h("input", {
    class: "dataset-upload",
    type: "file",
    accept: ".csv,text/csv",
    onchange: (ev) => {
      const file = (ev.target as HTMLInputElement).files?.[0];
      if (file) void store.uploadDataset(file.name, file);
    },
  });
}

function previewTable(s: Session): VNode {
  const data = s.dataset!;
  const head = ["id", ...(data.grouped ? ["group"] : []), ...data.var_names];
  const rows = data.rows.slice(0, PREVIEW_ROWS).map((row, i) =>
    h(
      "tr",
      {},
      h("td", {}, data.row_ids[i]),
      data.grouped ? h("td", {}, data.group?.[i] ?? "") : null,
      row.map((v) => h("td", {}, String(v))),
    ),
  );
  return h(
    "table",
    { class: "preview" },
    h("thead", {}, h("tr", {}, head.map((name) => h("th", {}, name)))),
    h("tbody", {}, rows),
  );
}

function varPicker(s: Session, store: Store): VNode {
  const data = s.dataset!;
  return h(
    "fieldset",
    { class: "varpick" },
    h("legend", {}, "Variables"),
    data.var_names.map((name) =>
      h(
        "label",
        { class: "var-choice" },
        h("input", {
          type: "checkbox",
          value: name,
          checked: s.selectedVars.includes(name),
          onchange: () => store.toggleVar(name),
        }),
        name,
      ),
    ),
  );
}

function subdomainPicker(s: Session, store: Store): VNode {
  const names = s.dataset?.group_names ?? [];
  return h(
    "label",
    { class: "subdomain-pick" },
    "Highlight sub-domain ",
    h(
      "select",
      {
        onchange: (ev) => {
          const value = (ev.target as HTMLSelectElement).value;
          store.setSubdomainHighlight(value || null);
        },
      },
      h("option", { value: "", selected: s.subdomainHighlight === null }, "(none)"),
      names.map((g) =>
        h("option", { value: g, selected: s.subdomainHighlight === g }, g),
      ),
    ),
  );
}

function matrixSection(s: Session): VNode {
  const data = s.dataset!;
  const idx = s.selectedVars.map((name) => data.var_names.indexOf(name));
  const pick = (row: number[]): number[] => idx.map((i) => row[i]);
  const points: MatrixPoint[] = [];
  if (s.subdomainHighlight !== null && data.group) {
    // dimmed rows first so the highlighted sub-domain stays on top
    data.rows.forEach((row, i) => {
      if (data.group![i] !== s.subdomainHighlight)
        points.push({ values: pick(row), color: DIM });
    });
    data.rows.forEach((row, i) => {
      if (data.group![i] === s.subdomainHighlight)
        points.push({ values: pick(row), color: SUBDOMAIN_ACCENT });
    });
  } else {
    for (const row of data.rows) points.push({ values: pick(row), color: NEUTRAL });
  }
  return h(
    "div",
    { class: "matrix-section" },
    h("p", { class: "notice" }, NO_CLUSTERING_YET),
    matrixPlot(s.selectedVars, points),
  );
}

export function loadDataView(s: Session, store: Store): VNode {
  return h(
    "section",
    { class: "tab-body load-data" },
    h("h2", {}, "Load Data"),
    sourcePicker(s, store),
    s.dataset === null
      ? h("p", { class: "empty" }, "Nothing loaded yet.")
      : h(
          "div",
          { class: "loaded" },
          h(
            "p",
            { class: "dataset-line" },
            `Dataset ${s.dataset.id}: ${s.dataset.n} rows, ${s.dataset.d} variables` +
              (s.dataset.grouped ? `, sub-domains ${s.dataset.group_names?.join(", ")}` : ""),
          ),
          previewTable(s),
          varPicker(s, store),
          s.dataset.grouped ? subdomainPicker(s, store) : null,
          h(
            "button",
            { class: "produce", onclick: () => store.produceMatrix() },
            "Produce Matrix Plot",
          ),
          s.matrixShown && s.selectedVars.length > 0 ? matrixSection(s) : null,
        ),
  );
}
