/** Wires the panels together: forms, metrics, charts, 3D view, undo/redo. */

import { ApiClient } from "./api";
import { availabilitySvg, histogramSvg } from "./charts";
import { buildOpsPanel } from "./forms";
import { buildScene } from "./scene";
import { SessionStore } from "./session";
import { LayoutViewer } from "./viewer";
import type { ViewState } from "./session";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function toast(message: string): void {
  const node = el<HTMLDivElement>("toast");
  node.textContent = message;
  node.classList.add("visible");
  setTimeout(() => node.classList.remove("visible"), 4000);
}

export async function start(baseUrl: string): Promise<void> {
  const api = new ApiClient(baseUrl);
  const store = new SessionStore(api);
  let pendingRail: number | null = null;

  const viewer = new LayoutViewer(el<HTMLCanvasElement>("scene"), {
    onHover: (label) => {
      el("hover-info").textContent = label ?? "";
    },
    onRailClick: (track) => {
      if (pendingRail === null) {
        pendingRail = track;
        el("swap-info").textContent = `rail ${track} selected; click another rail to swap`;
        return;
      }
      const first = pendingRail;
      pendingRail = null;
      el("swap-info").textContent = "";
      if (first === track) return; // same rail twice: no request
      store.swapByClick(first, track).catch((err) => toast(`swap failed: ${err.message}`));
    },
  });

  const render = (state: ViewState) => {
    el("status").textContent = state.busy ? "working..." : state.error ?? "ready";
    el("metrics").textContent = state.metrics
      ? Object.entries(state.metrics)
          .map(([key, value]) => `${key}: ${value ?? "-"}`)
          .join("\n")
      : "no circuit yet";
    if (state.report) {
      el("histogram").innerHTML = histogramSvg(state.report);
      el("availability").innerHTML = availabilitySvg(state.report);
    }
    if (state.layout) {
      viewer.load(buildScene(state.layout));
      el("estimate").textContent = Object.entries(state.layout.estimate)
        .map(([key, value]) => `${key}: ${value}`)
        .join("\n");
      el("layout-digest").textContent = `layout ${state.layoutDigest}`;
    }
    (el<HTMLButtonElement>("undo")).disabled = !store.canUndo;
    (el<HTMLButtonElement>("redo")).disabled = !store.canRedo;
  };
  store.subscribe(render);

  el<HTMLButtonElement>("undo").addEventListener("click", () => {
    store.undoAction().catch((err) => toast(`undo failed: ${err.message}`));
  });
  el<HTMLButtonElement>("redo").addEventListener("click", () => {
    store.redoAction().catch((err) => toast(`redo failed: ${err.message}`));
  });
  el<HTMLInputElement>("show-boxes").addEventListener("change", (event) => {
    viewer.setBoxesVisible((event.target as HTMLInputElement).checked);
  });

  const resize = () => {
    const canvas = el<HTMLCanvasElement>("scene");
    viewer.resize(canvas.clientWidth, canvas.clientHeight);
  };
  window.addEventListener("resize", resize);

  const ops = await api.ops();
  el("ops").append(
    buildOpsPanel(ops, (stage) => {
      store.performAction([stage]).catch((err) => toast(`${stage.name} failed: ${err.message}`));
    }),
  );

  await store.open();
  resize();
  el("session-id").textContent = `session ${store.id}`;
}
