// 3D viewport math: camera projection, joint picking, and dragging with
// fixed bone lengths. Dragging a joint rotates its parent bone toward the
// pick ray and translates the joint's subtree rigidly, so every bone length
// is preserved exactly.

import { add, clonePose, normalize, norm, parentOf, Pose, scale, sub, subtree, Vec3 } from "./skeleton.js";

export interface Camera {
  yaw: number; // radians around the y axis
  pitch: number; // radians around the x axis
  distance: number;
  cx: number; // canvas center x
  cy: number; // canvas center y
  zoom: number; // pixels per world unit
}

export function defaultCamera(width: number, height: number): Camera {
  return { yaw: 0.35, pitch: 0.15, distance: 4, cx: width / 2, cy: height / 2, zoom: height * 0.55 };
}

function rotate(p: Vec3, cam: Camera): Vec3 {
  const [x, y, z] = p;
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const x1 = x * cy + z * sy;
  const z1 = -x * sy + z * cy;
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  const y2 = y * cp - z1 * sp;
  const z2 = y * sp + z1 * cp;
  return [x1, y2, z2];
}

function unrotate(p: Vec3, cam: Camera): Vec3 {
  const [x, y, z] = p;
  const cp = Math.cos(-cam.pitch);
  const sp = Math.sin(-cam.pitch);
  const y1 = y * cp - z * sp;
  const z1 = y * sp + z * cp;
  const cy = Math.cos(-cam.yaw);
  const sy = Math.sin(-cam.yaw);
  const x2 = x * cy + z1 * sy;
  const z2 = -x * sy + z1 * cy;
  return [x2, y1, z2];
}

export function project(p: Vec3, cam: Camera): { x: number; y: number; depth: number } {
  const r = rotate(p, cam);
  return { x: cam.cx + r[0] * cam.zoom, y: cam.cy - r[1] * cam.zoom, depth: r[2] };
}

/** Screen point back to world coordinates on the camera-facing plane of `anchor`. */
export function unproject(x: number, y: number, anchor: Vec3, cam: Camera): Vec3 {
  const depth = rotate(anchor, cam)[2];
  return unrotate([(x - cam.cx) / cam.zoom, (cam.cy - y) / cam.zoom, depth], cam);
}

export function pickJoint(pose: Pose, x: number, y: number, cam: Camera, radius = 12): number | null {
  let best: number | null = null;
  let bestDist = radius;
  pose.forEach((joint, i) => {
    const pt = project(joint, cam);
    const d = Math.hypot(pt.x - x, pt.y - y);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}

/**
 * Move `joint` toward the screen point; bone lengths stay fixed: the joint
 * is re-placed on the sphere around its parent and its subtree follows
 * rigidly. Dragging the root is a no-op (poses are root-relative).
 */
export function dragJoint(pose: Pose, joint: number, x: number, y: number, cam: Camera): Pose {
  const parent = parentOf(joint);
  if (parent === null) return clonePose(pose);
  const out = clonePose(pose);
  const target = unproject(x, y, pose[joint], cam);
  const length = norm(sub(pose[joint], pose[parent]));
  const dir = normalize(sub(target, out[parent]));
  const moved = add(out[parent], scale(dir, length));
  const delta = sub(moved, pose[joint]);
  for (const j of subtree(joint)) {
    out[j] = add(pose[j], delta);
  }
  return out;
}

export interface DrawOptions {
  color?: string;
  jointRadius?: number;
  highlight?: number | null;
}

/** Render a pose into a 2D canvas context (no state kept). */
export function drawPose(
  ctx: CanvasRenderingContext2D,
  pose: Pose,
  cam: Camera,
  bones: ReadonlyArray<readonly [number, number]>,
  opts: DrawOptions = {},
): void {
  const color = opts.color ?? "#3cc";
  ctx.strokeStyle = color;
  ctx.lineWidth = 3;
  for (const [p, c] of bones) {
    const a = project(pose[p], cam);
    const b = project(pose[c], cam);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  pose.forEach((joint, i) => {
    const pt = project(joint, cam);
    ctx.beginPath();
    ctx.arc(pt.x, pt.y, i === opts.highlight ? (opts.jointRadius ?? 5) + 2 : opts.jointRadius ?? 5, 0, Math.PI * 2);
    ctx.fillStyle = i === opts.highlight ? "#fc3" : color;
    ctx.fill();
  });
}
