import { HttpApi } from "./api.js";
import { Store } from "./state.js";
import { apply } from "./vdom.js";
import { appView } from "./views/app.js";

// API base URL: <meta name="api-base"> wins, then a global override,
// then same-origin.
const meta = document.querySelector('meta[name="api-base"]') as HTMLMetaElement | null;
const override = (globalThis as { PENCLUST_API_BASE?: string }).PENCLUST_API_BASE;
const base = meta?.content || override || "";

const store = new Store(new HttpApi(base));
const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const rerender = (): void => apply(root, appView(store.session, store));
store.subscribe(rerender);
rerender();
void store.refreshDatasets();
