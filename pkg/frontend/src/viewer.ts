/**
 * Three.js view of the scene model: orbit/zoom camera, hover tooltips
 * with element coordinates, box visibility toggle, and rail clicks for
 * wire swaps.  All scene state is rebuilt from the latest layout
 * document; nothing here mutates server truth.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import type { SceneBlock, SceneModel } from "./scene";

export interface ViewerCallbacks {
  onRailClick?: (trackId: number) => void;
  onHover?: (label: string | null) => void;
}

export class LayoutViewer {
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene = new THREE.Scene();
  private readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private readonly raycaster = new THREE.Raycaster();
  private readonly pointer = new THREE.Vector2();
  private readonly boxGroup = new THREE.Group();
  private readonly structureGroup = new THREE.Group();
  private blockByMesh = new Map<THREE.Object3D, SceneBlock>();
  private hovered: string | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly callbacks: ViewerCallbacks = {},
  ) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(50, 1, 0.1, 5000);
    this.controls = new OrbitControls(this.camera, canvas);
    this.controls.enableDamping = true;
    this.scene.background = new THREE.Color(0xffffff);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(1, 2, 1.5);
    this.scene.add(sun);
    this.scene.add(this.structureGroup, this.boxGroup);

    canvas.addEventListener("pointermove", (event) => this.trackPointer(event));
    canvas.addEventListener("click", () => this.handleClick());
    this.animate();
  }

  get boxesVisible(): boolean {
    return this.boxGroup.visible;
  }

  /** Reproduces the with/without-distillation views. */
  setBoxesVisible(visible: boolean): void {
    this.boxGroup.visible = visible;
  }

  load(model: SceneModel): void {
    this.structureGroup.clear();
    this.boxGroup.clear();
    this.blockByMesh.clear();

    for (const block of model.blocks) {
      const [sx, sy, st] = block.size;
      const geometry = new THREE.BoxGeometry(sx, sy, st);
      const material = new THREE.MeshLambertMaterial({
        color: block.color,
        transparent: block.kind === "box",
        opacity: block.kind === "box" ? 0.75 : 1.0,
      });
      const mesh = new THREE.Mesh(geometry, material);
      const [x, y, t] = block.origin;
      mesh.position.set(x + sx / 2, y + sy / 2, t + st / 2);
      this.blockByMesh.set(mesh, block);
      (block.kind === "box" ? this.boxGroup : this.structureGroup).add(mesh);
    }

    const [bx, by, bt] = model.boundingBox;
    if (bx * by * bt > 0) {
      const frame = new THREE.LineSegments(
        new THREE.EdgesGeometry(new THREE.BoxGeometry(bx, by, bt)),
        new THREE.LineBasicMaterial({ color: 0x000000 }),
      );
      frame.position.set(bx / 2, by / 2, bt / 2);
      this.structureGroup.add(frame);
      this.frameCamera(bx, by, bt);
    }
  }

  private frameCamera(bx: number, by: number, bt: number): void {
    const radius = Math.max(bx, by, bt);
    this.camera.position.set(bx / 2 + radius, by + radius * 0.8, bt / 2 + radius);
    this.controls.target.set(bx / 2, by / 2, bt / 2);
    this.controls.update();
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / Math.max(1, height);
    this.camera.updateProjectionMatrix();
  }

  private trackPointer(event: PointerEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    this.pointer.x = ((event.clientX - rect.left) / rect.width) * 2 - 1;
    this.pointer.y = -((event.clientY - rect.top) / rect.height) * 2 + 1;
    const block = this.pick();
    const label = block ? block.label : null;
    if (label !== this.hovered) {
      this.hovered = label;
      this.callbacks.onHover?.(label);
    }
  }

  private pick(): SceneBlock | null {
    this.raycaster.setFromCamera(this.pointer, this.camera);
    const candidates = [
      ...this.structureGroup.children,
      ...(this.boxGroup.visible ? this.boxGroup.children : []),
    ];
    const hits = this.raycaster.intersectObjects(candidates, false);
    for (const hit of hits) {
      const block = this.blockByMesh.get(hit.object);
      if (block) return block;
    }
    return null;
  }

  private handleClick(): void {
    const block = this.pick();
    if (block?.kind === "rail") {
      this.callbacks.onRailClick?.(parseInt(block.id.split(":")[1], 10));
    }
  }

  private animate = (): void => {
    requestAnimationFrame(this.animate);
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  };
}
