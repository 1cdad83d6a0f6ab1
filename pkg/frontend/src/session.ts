/**
 * Session store: the single source of truth the panels render from.
 *
 * Every server mutation goes through performAction(), which stamps a
 * monotonically increasing action counter; refreshes triggered by an
 * older action are discarded when a newer one has already landed, so the
 * view always reflects the latest completed response.  Stages applied in
 * one action form an undo group (a wire swap is swap + layout rebuild,
 * one click, one undo).
 */

import type { ApiClient } from "./api";
import type { LayoutDoc, Metrics, ReportDoc, SessionSummary, StageRequest } from "./types";

export interface ViewState {
  summary: SessionSummary | null;
  metrics: Metrics | null;
  layout: LayoutDoc | null;
  layoutDigest: string | null;
  report: ReportDoc | null;
  busy: boolean;
  error: string | null;
}

export type Listener = (state: ViewState) => void;

/** FNV-1a over the canonical JSON text; stable tag for change detection. */
export function digestOf(doc: unknown): string {
  const text = JSON.stringify(doc);
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash.toString(16).padStart(8, "0");
}

export class SessionStore {
  private sessionId: string | null = null;
  private actionCounter = 0;
  private appliedAction = 0;
  private undoGroups: number[] = [];
  private redoGroups: number[] = [];
  private listeners: Listener[] = [];

  state: ViewState = {
    summary: null,
    metrics: null,
    layout: null,
    layoutDigest: null,
    report: null,
    busy: false,
    error: null,
  };

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async open(): Promise<string> {
    this.sessionId = await this.api.createSession();
    this.undoGroups = [];
    this.redoGroups = [];
    await this.refresh(this.nextAction());
    return this.sessionId;
  }

  get id(): string {
    if (!this.sessionId) throw new Error("session not opened");
    return this.sessionId;
  }

  private nextAction(): number {
    return ++this.actionCounter;
  }

  private stale(action: number): boolean {
    return action < this.appliedAction;
  }

  /** Apply stages as one undoable group, then refresh the view. */
  async performAction(stages: StageRequest[]): Promise<SessionSummary | null> {
    const action = this.nextAction();
    this.emit({ busy: true, error: null });
    try {
      let summary: SessionSummary | null = null;
      for (const stage of stages) {
        summary = await this.api.apply(this.id, stage);
      }
      this.undoGroups.push(stages.length);
      this.redoGroups = [];
      await this.refresh(action, summary);
      return summary;
    } catch (err) {
      if (!this.stale(action)) {
        this.emit({ busy: false, error: err instanceof Error ? err.message : String(err) });
      }
      throw err;
    }
  }

  async undoAction(): Promise<void> {
    const size = this.undoGroups.pop();
    if (!size) return;
    const action = this.nextAction();
    this.emit({ busy: true, error: null });
    let summary: SessionSummary | null = null;
    for (let i = 0; i < size; i++) {
      summary = await this.api.undo(this.id);
    }
    this.redoGroups.push(size);
    await this.refresh(action, summary);
  }

  async redoAction(): Promise<void> {
    const size = this.redoGroups.pop();
    if (!size) return;
    const action = this.nextAction();
    this.emit({ busy: true, error: null });
    let summary: SessionSummary | null = null;
    for (let i = 0; i < size; i++) {
      summary = await this.api.redo(this.id);
    }
    this.undoGroups.push(size);
    await this.refresh(action, summary);
  }

  get canUndo(): boolean {
    return this.undoGroups.length > 0;
  }

  get canRedo(): boolean {
    return this.redoGroups.length > 0;
  }

  /** Re-pull artifacts; drop the response if a newer action superseded it. */
  async refresh(action: number, summary: SessionSummary | null = null): Promise<void> {
    const id = this.id;
    if (!summary) {
      summary = this.state.summary;
    }
    const [metrics, layout, report] = await Promise.all([
      summary?.has_circuit ? this.fetchMetrics() : Promise.resolve(null),
      summary?.has_layout ? this.api.layout(id).catch(() => null) : Promise.resolve(null),
      summary?.has_report ? this.api.report(id).catch(() => null) : Promise.resolve(null),
    ]);
    if (this.stale(action)) return; // superseded by a newer action
    this.appliedAction = action;
    this.emit({
      summary,
      metrics,
      layout,
      layoutDigest: layout ? digestOf(layout) : null,
      report,
      busy: false,
      error: null,
    });
  }

  private async fetchMetrics(): Promise<Metrics | null> {
    // metrics are recomputed server-side from the current circuit
    try {
      const circuit = await this.api.circuit(this.id);
      const lines = await this.api.runPipeline([{ name: "metrics", params: {} }], circuit.lines);
      return JSON.parse(lines[0]) as Metrics;
    } catch {
      return null;
    }
  }

  /**
   * Wire-swap by clicking two rails: one undo group of swap + rebuild.
   * Clicking the same rail twice is suppressed (no request).
   */
  async swapByClick(trackA: number, trackB: number): Promise<boolean> {
    if (trackA === trackB) return false;
    await this.performAction([
      { name: "schedule.swap", params: { i: String(trackA), j: String(trackB) } },
      { name: "layout.build", params: {} },
    ]);
    return true;
  }
}
