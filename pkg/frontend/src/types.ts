/** Shared document shapes exchanged with the qplumb HTTP API. */

export interface ParamSchema {
  name: string;
  kind: "int" | "seed" | "enum" | "str";
  default: string;
  choices?: string[];
}

export interface OpSchema {
  name: string;
  kind: "transformation" | "analysis" | "export";
  description: string;
  params: ParamSchema[];
}

export interface StageRequest {
  name: string;
  params: Record<string, string>;
}

export interface SessionSummary {
  id: string;
  digest: string;
  has_circuit: boolean;
  has_layout: boolean;
  has_report: boolean;
  undo_depth: number;
  redo_depth: number;
}

export interface Metrics {
  gate_count: number;
  t_count: number;
  cnot_count: number;
  wire_count: number;
  depth: number | null;
}

export interface TrackDoc {
  id: number;
  x: number;
  t0: number;
  t1: number;
}

export interface BraidDoc {
  time: number;
  from_track: number;
  to_track: number;
  cells: [number, number, number][];
}

export interface BoxDoc {
  index: number;
  start: number;
  x: number;
  dims: [number, number, number];
}

export interface EstimateDoc {
  bounding_volume: number;
  occupied_volume: number;
  box_count: number;
  track_count: number;
  duration: number;
  footprint: number;
}

export interface LayoutDoc {
  bounding_box: [number, number, number];
  config: {
    pitch: number;
    qubit_depth: number;
    pieces_per_step: number;
    box_dims: [number, number, number];
  };
  tracks: TrackDoc[];
  braids: BraidDoc[];
  boxes: BoxDoc[];
  estimate: EstimateDoc;
}

export interface ReportDoc {
  metrics: Metrics;
  histogram?: { window: number; bins: [number, number][] };
  availability?: {
    duration: number;
    concurrent: number;
    warmup: boolean;
    series: { produced: number[]; consumed: number[]; available: number[] };
  };
  delays_applied?: [number, number][];
}
