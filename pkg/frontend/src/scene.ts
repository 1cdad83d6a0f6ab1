/**
 * Layout document -> renderable scene model.
 *
 * Pure data (no three.js), so geometry placement is unit-testable: every
 * element becomes an axis-aligned block {origin, size} in plumbing-piece
 * coordinates (x, y, t), later mapped to world (x, y, z).  Rails are red,
 * braids blue, boxes green, the bounding box a black wireframe.
 */

import type { LayoutDoc } from "./types";

export type ElementKind = "rail" | "braid" | "box";

export interface SceneBlock {
  kind: ElementKind;
  /** stable id for hit-testing, e.g. "rail:3" */
  id: string;
  origin: [number, number, number];
  size: [number, number, number];
  color: number;
  /** human-readable hover description with coordinates */
  label: string;
}

export interface SceneModel {
  boundingBox: [number, number, number];
  blocks: SceneBlock[];
}

export const COLORS: Record<ElementKind, number> = {
  rail: 0xc0392b,
  braid: 0x2e6fd8,
  box: 0x27a05d,
};

export function buildScene(doc: LayoutDoc): SceneModel {
  const blocks: SceneBlock[] = [];
  const pitch = doc.config.pitch;
  const pps = doc.config.pieces_per_step;

  for (const track of doc.tracks) {
    if (track.t1 <= track.t0) continue;
    blocks.push({
      kind: "rail",
      id: `rail:${track.id}`,
      origin: [track.x, 0, track.t0],
      size: [1, 2, track.t1 - track.t0],
      color: COLORS.rail,
      label: `qubit track ${track.id} at x=${track.x}, t=[${track.t0}, ${track.t1})`,
    });
  }

  doc.braids.forEach((braid, index) => {
    const lo = Math.min(braid.from_track, braid.to_track) * pitch;
    const hi = Math.max(braid.from_track, braid.to_track) * pitch;
    const t = (braid.time - 1) * pps;
    blocks.push({
      kind: "braid",
      id: `braid:${index}`,
      origin: [lo, 0, t],
      size: [hi - lo + 1, 2, 1],
      color: COLORS.braid,
      label: `cnot braid ${braid.from_track} -> ${braid.to_track} at t=${braid.time}`,
    });
  });

  for (const box of doc.boxes) {
    const [dx, dy, dz] = box.dims;
    blocks.push({
      kind: "box",
      id: `box:${box.index}`,
      origin: [box.x, doc.config.qubit_depth, box.start],
      size: [dx, dy, dz],
      color: COLORS.box,
      label: `distillation box ${box.index} at x=${box.x}, t=[${box.start}, ${box.start + dz})`,
    });
  }

  return { boundingBox: doc.bounding_box, blocks };
}

/** Every block must sit inside the bounding box (document sanity check). */
export function blocksInsideBounds(model: SceneModel): boolean {
  const [bx, by, bt] = model.boundingBox;
  return model.blocks.every(
    ({ origin: [x, y, t], size: [sx, sy, st] }) =>
      x >= 0 && y >= 0 && t >= 0 && x + sx <= bx && y + sy <= by && t + st <= bt,
  );
}
