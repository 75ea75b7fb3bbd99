import { h, type VNode } from "../vdom.js";
import { TAB_LABELS, TAB_ORDER, type Session, type Store, type Tab } from "../state.js";
import { welcomeView } from "./welcome.js";
import { loadDataView } from "./load_data.js";
import { clusterView } from "./cluster.js";
import { scatterView } from "./scatter.js";
import { parallelView } from "./parallel.js";

function body(s: Session, store: Store): VNode {
  switch (s.tab) {
    case "welcome":
      return welcomeView();
    case "load":
      return loadDataView(s, store);
    case "cluster":
      return clusterView(s, store);
    case "scatter":
      return scatterView(s, store);
    case "parallel":
      return parallelView(s, store);
  }
}

function navButton(s: Session, store: Store, tab: Tab): VNode {
  return h(
    "button",
    {
      class: s.tab === tab ? "tab active" : "tab",
      "data-tab": tab,
      onclick: () => store.setTab(tab),
    },
    TAB_LABELS[tab],
  );
}

export function appView(s: Session, store: Store): VNode {
  return h(
    "div",
    { class: "app" },
    h(
      "header",
      {},
      h("h1", {}, "penclust"),
      h("nav", { class: "tabs" }, TAB_ORDER.map((tab) => navButton(s, store, tab))),
    ),
    s.banner ? h("div", { class: "banner", role: "alert" }, s.banner) : null,
    s.note ? h("div", { class: "note" }, s.note) : null,
    h("main", {}, body(s, store)),
  );
}
