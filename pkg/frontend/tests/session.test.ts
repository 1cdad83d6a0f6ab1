import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { SessionStore, digestOf } from "../src/session";

/** In-memory stand-in for the service, good enough for store semantics. */
function fakeService() {
  const timeline: { circuit: string | null; layout: object | null }[] = [
    { circuit: null, layout: null },
  ];
  let cursor = 0;
  let applyDelay = 0;

  const fetchImpl = vi.fn(async (url: string | URL | Request, init?: RequestInit) => {
    const path = String(url).replace("http://fake", "");
    const body = init?.body ? JSON.parse(String(init.body)) : {};
    const respond = (doc: unknown, status = 200) =>
      new Response(JSON.stringify(doc), { status });

    const summary = () => ({
      id: "s1",
      digest: digestOf(timeline[cursor]),
      has_circuit: timeline[cursor].circuit !== null,
      has_layout: timeline[cursor].layout !== null,
      has_report: false,
      undo_depth: cursor,
      redo_depth: timeline.length - cursor - 1,
    });

    if (path === "/v1/session") return respond({ id: "s1" });
    if (path === "/v1/session/s1/apply") {
      if (applyDelay) await new Promise((resolve) => setTimeout(resolve, applyDelay));
      const stage = body.stage;
      const prev = timeline[cursor];
      timeline.splice(cursor + 1);
      if (stage.name === "layout.build") {
        timeline.push({ ...prev, layout: { built_from: prev.circuit, stamp: timeline.length } });
      } else {
        timeline.push({ ...prev, circuit: `${stage.name}(${prev.circuit ?? ""})` });
      }
      cursor++;
      return respond(summary());
    }
    if (path === "/v1/session/s1/undo") {
      if (cursor === 0) return respond({ error: { type: "NotFound", message: "nothing" } }, 404);
      cursor--;
      return respond(summary());
    }
    if (path === "/v1/session/s1/redo") {
      if (cursor + 1 >= timeline.length)
        return respond({ error: { type: "NotFound", message: "nothing" } }, 404);
      cursor++;
      return respond(summary());
    }
    if (path === "/v1/session/s1/circuit") {
      const circuit = timeline[cursor].circuit;
      if (circuit === null) return respond({ error: { type: "NotFound", message: "no circuit" } }, 404);
      return respond({ lines: [circuit], digest: digestOf(circuit) });
    }
    if (path === "/v1/session/s1/layout") {
      const layout = timeline[cursor].layout;
      if (layout === null) return respond({ error: { type: "NotFound", message: "no layout" } }, 404);
      return respond(layout);
    }
    if (path === "/v1/pipeline") {
      // metrics stage: derive a fake count from the circuit text
      const text = (body.input as string[]).join("");
      return respond({ output: [JSON.stringify({ gate_count: text.length })] });
    }
    return respond({ error: { type: "NotFound", message: path } }, 404);
  });

  return {
    fetchImpl: fetchImpl as unknown as typeof fetch,
    setApplyDelay(ms: number) {
      applyDelay = ms;
    },
  };
}

describe("SessionStore", () => {
  let store: SessionStore;
  let service: ReturnType<typeof fakeService>;

  beforeEach(async () => {
    service = fakeService();
    store = new SessionStore(new ApiClient("http://fake", service.fetchImpl));
    await store.open();
  });

  it("applies a stage and reflects the summary", async () => {
    const summary = await store.performAction([{ name: "generate", params: {} }]);
    expect(summary!.has_circuit).toBe(true);
    expect(store.state.summary!.digest).toBe(summary!.digest);
  });

  it("undoAction reverses a whole action group", async () => {
    await store.performAction([{ name: "generate", params: {} }]);
    const before = store.state.summary!.digest;
    await store.performAction([
      { name: "schedule.swap", params: { i: "0", j: "1" } },
      { name: "layout.build", params: {} },
    ]);
    expect(store.state.summary!.digest).not.toBe(before);
    await store.undoAction(); // one undo click reverses both stages
    expect(store.state.summary!.digest).toBe(before);
    expect(store.canRedo).toBe(true);
    await store.redoAction();
    expect(store.state.layout).not.toBeNull();
  });

  it("swapByClick suppresses same-rail no-ops", async () => {
    await store.performAction([{ name: "generate", params: {} }]);
    const calls = (service.fetchImpl as unknown as ReturnType<typeof vi.fn>).mock.calls.length;
    const swapped = await store.swapByClick(1, 1);
    expect(swapped).toBe(false);
    expect(
      (service.fetchImpl as unknown as ReturnType<typeof vi.fn>).mock.calls.length,
    ).toBe(calls);
  });

  it("swapByClick runs swap and rebuild as one group", async () => {
    await store.performAction([{ name: "generate", params: {} }]);
    await store.performAction([{ name: "layout.build", params: {} }]);
    const initialLayoutDigest = store.state.layoutDigest;
    expect(initialLayoutDigest).not.toBeNull();

    await store.swapByClick(0, 1);
    expect(store.state.layoutDigest).not.toBe(initialLayoutDigest);

    await store.undoAction();
    expect(store.state.layoutDigest).toBe(initialLayoutDigest);
  });

  it("discards stale refreshes once a newer action landed", async () => {
    await store.performAction([{ name: "generate", params: {} }]);
    // fire a slow refresh for an old action, then a fast newer action
    const staleRefresh = store.refresh(0);
    await store.performAction([{ name: "another", params: {} }]);
    const digest = store.state.summary!.digest;
    await staleRefresh;
    expect(store.state.summary!.digest).toBe(digest); // stale result dropped
  });

  it("surfaces errors without corrupting state", async () => {
    await store.performAction([{ name: "generate", params: {} }]);
    await store.undoAction();
    await expect(store.undoAction()).resolves.toBeUndefined(); // empty group stack: no-op
    expect(store.state.error).toBeNull();
  });
});
