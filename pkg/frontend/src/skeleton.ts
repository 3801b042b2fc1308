// Skeleton constants mirroring the service's motion JSON.

export const JOINTS = [
  "nose",
  "head_top",
  "neck",
  "spine",
  "r_shoulder",
  "l_shoulder",
  "r_elbow",
  "l_elbow",
  "r_wrist",
  "l_wrist",
] as const;

// (parent, child) pairs; parents precede children.
export const BONES: ReadonlyArray<readonly [number, number]> = [
  [3, 2],
  [2, 0],
  [0, 1],
  [2, 4],
  [2, 5],
  [4, 6],
  [5, 7],
  [6, 8],
  [7, 9],
];

export type Vec3 = [number, number, number];
export type Pose = Vec3[]; // 10 joints

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  return n > 0 ? scale(a, 1 / n) : [0, 1, 0];
}

export function boneLengths(pose: Pose): number[] {
  return BONES.map(([p, c]) => norm(sub(pose[c], pose[p])));
}

export function clonePose(pose: Pose): Pose {
  return pose.map((j) => [...j] as Vec3);
}

/** Indices of all joints in the subtree rooted at `joint` (inclusive). */
export function subtree(joint: number): number[] {
  const out = [joint];
  for (const [p, c] of BONES) {
    if (out.includes(p) && !out.includes(c)) out.push(c);
  }
  return out;
}

export function parentOf(joint: number): number | null {
  for (const [p, c] of BONES) {
    if (c === joint) return p;
  }
  return null;
}
