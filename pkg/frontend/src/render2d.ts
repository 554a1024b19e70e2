// Top-down 2D rendering of the scene, trajectory, and current pose.
// Drawing goes through the narrow Ctx2D interface so tests can substitute a
// recording stub; only the subset of CanvasRenderingContext2D we use.

import type { AnnotationRecord, MotionDoc, SceneDoc } from "./types.js";
import type { OverlayToggles } from "./state.js";

export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Viewport {
  width: number;
  height: number;
}

export interface WorldTransform {
  toX(x: number): number;
  toY(y: number): number;
  scale: number;
}

/** Fit the scene's xy bounding box into the viewport with a margin. */
export function worldTransform(scene: SceneDoc, viewport: Viewport, margin = 24): WorldTransform {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const obj of scene.objects) {
    const [cx, cy] = obj.box.center;
    const [sx, sy] = obj.box.size;
    minX = Math.min(minX, cx - sx / 2);
    maxX = Math.max(maxX, cx + sx / 2);
    minY = Math.min(minY, cy - sy / 2);
    maxY = Math.max(maxY, cy + sy / 2);
  }
  const spanX = Math.max(maxX - minX, 1e-6);
  const spanY = Math.max(maxY - minY, 1e-6);
  const scale = Math.min(
    (viewport.width - 2 * margin) / spanX,
    (viewport.height - 2 * margin) / spanY,
  );
  const offsetX = margin + (viewport.width - 2 * margin - spanX * scale) / 2;
  const offsetY = margin + (viewport.height - 2 * margin - spanY * scale) / 2;
  return {
    // +y in the scene points "up" on screen, so the y axis flips.
    toX: (x: number) => offsetX + (x - minX) * scale,
    toY: (y: number) => viewport.height - (offsetY + (y - minY) * scale),
    scale,
  };
}

const JOINT_NAMES = [
  "pelvis", "left hip", "right hip", "lower spine", "left knee", "right knee",
  "middle spine", "left ankle", "right ankle", "upper spine", "left foot",
  "right foot", "neck", "left collar", "right collar", "head",
  "left shoulder", "right shoulder", "left elbow", "right elbow",
  "left wrist", "right wrist",
];

export function drawScene(
  ctx: Ctx2D,
  viewport: Viewport,
  scene: SceneDoc,
  motion: MotionDoc,
  annotation: AnnotationRecord | null,
  frameIndex: number,
  overlays: OverlayToggles,
): void {
  const world = worldTransform(scene, viewport);
  ctx.clearRect(0, 0, viewport.width, viewport.height);

  // Object footprints with labels.
  for (const obj of scene.objects) {
    const [cx, cy] = obj.box.center;
    const [sx, sy] = obj.box.size;
    const left = world.toX(cx - sx / 2);
    const top = world.toY(cy + sy / 2);
    const width = sx * world.scale;
    const height = sy * world.scale;
    ctx.fillStyle = "#e8e8ee";
    ctx.fillRect(left, top, width, height);
    ctx.strokeStyle = "#555566";
    ctx.lineWidth = 1;
    ctx.strokeRect(left, top, width, height);
    ctx.fillStyle = "#333344";
    ctx.font = "11px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(obj.label, world.toX(cx), world.toY(cy));
  }

  // Pelvis trajectory polyline.
  if (overlays.trajectory && motion.joints.length > 1) {
    ctx.strokeStyle = "#4878b0";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    motion.joints.forEach((frame, index) => {
      const [x, y] = frame[0];
      if (index === 0) ctx.moveTo(world.toX(x), world.toY(y));
      else ctx.lineTo(world.toX(x), world.toY(y));
    });
    ctx.stroke();
  }

  // Current-frame joints.
  const clamped = Math.min(Math.max(Math.round(frameIndex), 0), motion.joints.length - 1);
  const joints = motion.joints[clamped];
  ctx.fillStyle = "#2a6f4e";
  for (const [x, y] of joints) {
    ctx.beginPath();
    ctx.arc(world.toX(x), world.toY(y), 2.5, 0, Math.PI * 2);
    ctx.fill();
  }

  if (annotation === null) return;

  // Contact markers on the contacting joints.
  if (overlays.contacts) {
    ctx.strokeStyle = "#d2543c";
    ctx.lineWidth = 2;
    for (const contact of annotation.contacts) {
      const jointIndex = JOINT_NAMES.indexOf(contact.joint);
      if (jointIndex < 0) continue;
      const [x, y] = joints[jointIndex];
      ctx.beginPath();
      ctx.arc(world.toX(x), world.toY(y), 6, 0, Math.PI * 2);
      ctx.stroke();
    }
  }

  // Orientation category per object, next to its label.
  if (overlays.orientations) {
    ctx.fillStyle = "#8a4f9e";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    for (const position of annotation.positions) {
      const obj = scene.objects.find((o) => o.id === position.object);
      if (obj === undefined) continue;
      const [cx, cy] = obj.box.center;
      ctx.fillText(
        position.orientation.replace(/_/g, " "),
        world.toX(cx),
        world.toY(cy) + 12,
      );
    }
  }
}
