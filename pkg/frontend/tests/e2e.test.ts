/**
 * Interactive loop against the real service: the UI talks to a spawned
 * `python -m qplumb serve` exactly as a browser would.
 *
 * Acceptance: on the fixture session a wire-swap click round-trips
 * (request -> re-render with updated estimate) in under 2 s, and undo
 * restores the prior layout digest exactly.
 */
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { buildScene } from "../src/scene";
import { SessionStore } from "../src/session";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

function pythonExe(): string | null {
  for (const exe of ["python3", "python"]) {
    const probe = spawnSync(exe, ["-c", "import qplumb"], { timeout: 30000 });
    if (probe.status === 0) return exe;
  }
  return null;
}

let server: ChildProcess | null = null;

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/v1/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const exe = pythonExe();
  if (!exe) throw new Error("python with the qplumb package is required for e2e");
  server = spawn(exe, ["-m", "qplumb", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

describe("interactive loop against the live service", () => {
  it("serves stage schemas the forms can render", async () => {
    const api = new ApiClient(BASE);
    const ops = await api.ops();
    const adder = ops.find((op) => op.name === "generate.adder");
    expect(adder).toBeDefined();
    expect(adder!.params[0]).toMatchObject({ name: "n", kind: "int", default: "4" });
  });

  it("form submission round-trips into fresh metrics", async () => {
    const api = new ApiClient(BASE);
    const store = new SessionStore(api);
    await store.open();
    await store.performAction([{ name: "generate.adder", params: { n: "2" } }]);
    expect(store.state.metrics).not.toBeNull();
    expect(store.state.metrics!.wire_count).toBe(6); // 2n + 2
  });

  it("wire-swap click round-trips in under 2 s and undo restores the layout digest", async () => {
    const api = new ApiClient(BASE);
    const store = new SessionStore(api);
    await store.open();

    // fixture session: a small circuit with a layout on screen
    await store.performAction([
      { name: "generate.random-cliffordt", params: { n: "6", m: "40", seed: "5" } },
      { name: "icm", params: {} },
      { name: "schedule.asap", params: {} },
    ]);
    await store.performAction([{ name: "layout.build", params: {} }]);
    const digestBefore = store.state.layoutDigest;
    const estimateBefore = store.state.layout!.estimate;
    expect(digestBefore).not.toBeNull();

    const start = performance.now();
    const swapped = await store.swapByClick(0, 1);
    const elapsed = performance.now() - start;
    expect(swapped).toBe(true);
    expect(elapsed).toBeLessThan(2000);

    // the view now renders a different layout with a live estimate
    expect(store.state.layoutDigest).not.toBe(digestBefore);
    expect(store.state.layout!.estimate.bounding_volume).toBeGreaterThan(0);
    const scene = buildScene(store.state.layout!);
    expect(scene.blocks.length).toBeGreaterThan(0);

    await store.undoAction();
    expect(store.state.layoutDigest).toBe(digestBefore);
    expect(store.state.layout!.estimate).toEqual(estimateBefore);
  });

  it("same-rail double click issues no request", async () => {
    const api = new ApiClient(BASE);
    const store = new SessionStore(api);
    await store.open();
    await store.performAction([{ name: "generate.cnot-ladder", params: { n: "3" } }]);
    const digest = store.state.summary!.digest;
    const swapped = await store.swapByClick(2, 2);
    expect(swapped).toBe(false);
    expect(store.state.summary!.digest).toBe(digest);
  });

  it("refresh rebuilds the identical view from session GETs alone", async () => {
    const api = new ApiClient(BASE);
    const store = new SessionStore(api);
    const sid = await store.open();
    await store.performAction([
      { name: "generate.adder", params: { n: "2" } },
      { name: "icm", params: {} },
      { name: "schedule.asap", params: {} },
      { name: "layout.build", params: {} },
    ]);
    const digest = store.state.layoutDigest;

    // a second client (page reload) sees the same truth via GETs only
    const reloaded = await api.layout(sid);
    const { digestOf } = await import("../src/session");
    expect(digestOf(reloaded)).toBe(digest);
  });
});
