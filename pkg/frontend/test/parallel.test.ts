import { describe, expect, it } from "vitest";
import { DIM, colorFor } from "../src/palette.js";
import { byClass, byTag, text, type VNode } from "../src/vdom.js";
import { appView } from "../src/views/app.js";
import { FakeApi, makeStore, runToDone, singleFixture } from "./fakes.js";

function render(store: ReturnType<typeof makeStore>): VNode {
  store.session.tab = "parallel";
  return appView(store.session, store);
}

async function readyStore(): Promise<{
  api: FakeApi;
  store: ReturnType<typeof makeStore>;
  labels: number[];
}> {
  const api = new FakeApi();
  const { datasetId, resultId } = singleFixture(api);
  const store = makeStore(api);
  await store.openDataset(datasetId);
  await runToDone(store, api, resultId);
  return { api, store, labels: api.fixtures.get(resultId)!.labels };
}

describe("parallel tab", () => {
  it("draws one polyline per observation in cluster colors", async () => {
    const { store, labels } = await readyStore();
    const tree = render(store);
    const lines = byTag(tree, "polyline");
    expect(lines).toHaveLength(9);
    expect(lines.map((l) => l.attrs["stroke"])).toEqual(labels.map(colorFor));
    expect(lines.every((l) => l.attrs["class"] === "line")).toBe(true);
  });

  it("axes follow the selected-variable order", async () => {
    const { store } = await readyStore();
    await store.toggleViewVar("w"); // drop w, axes become x, y, z
    const axes = byClass(render(store), "axis");
    expect(axes.map((a) => a.attrs["data-var"])).toEqual(["x", "y", "z"]);
  });

  it("highlighting one cluster grays the others and draws them beneath", async () => {
    const { store, labels } = await readyStore();
    await store.setHighlight(0);
    const lines = byTag(render(store), "polyline");
    expect(lines).toHaveLength(9);
    const dimmed = lines.filter((l) => l.attrs["class"] === "line dimmed");
    const bright = lines.filter((l) => l.attrs["class"] === "line");
    expect(dimmed).toHaveLength(labels.filter((l) => l !== 0).length);
    expect(dimmed.every((l) => l.attrs["stroke"] === DIM)).toBe(true);
    expect(bright.every((l) => l.attrs["stroke"] === colorFor(0))).toBe(true);
    // dimmed lines first in document order, so highlights render on top
    const classes = lines.map((l) => l.attrs["class"]);
    expect(classes.lastIndexOf("line dimmed")).toBeLessThan(classes.indexOf("line"));
  });

  it("highlight 'all' restores the full palette", async () => {
    const { store, labels } = await readyStore();
    await store.setHighlight(1);
    await store.setHighlight("all");
    const lines = byTag(render(store), "polyline");
    expect(lines.map((l) => l.attrs["stroke"])).toEqual(labels.map(colorFor));
  });

  it("offers all-clusters plus each cluster in the highlight picker", async () => {
    const { store } = await readyStore();
    const pick = byClass(render(store), "highlight-pick")[0];
    expect(byTag(pick, "option").map(text)).toEqual([
      "all clusters",
      "cluster 0",
      "cluster 1",
      "cluster 2",
    ]);
  });

  it("keeps the previous highlight when the service rejects it", async () => {
    const { store } = await readyStore();
    await store.setHighlight(7);
    expect(store.session.banner).toContain("out of range");
    expect(store.session.highlight).toBe("all");
  });
});
