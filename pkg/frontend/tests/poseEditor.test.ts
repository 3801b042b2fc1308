import { describe, expect, it } from "vitest";

import { defaultCamera, dragJoint, pickJoint, project, unproject } from "../src/poseEditor.js";
import { boneLengths, Pose } from "../src/skeleton.js";

const POSE: Pose = [
  [0, 0.62, 0.09],
  [0, 0.73, 0.06],
  [0, 0.5, 0],
  [0, 0, 0],
  [-0.2, 0.5, 0],
  [0.2, 0.5, 0],
  [-0.23, 0.22, 0],
  [0.23, 0.22, 0],
  [-0.26, -0.03, 0.02],
  [0.26, -0.03, 0.02],
];

describe("pose editor", () => {
  it("unproject inverts project on the anchor plane", () => {
    const cam = defaultCamera(460, 420);
    for (const joint of POSE) {
      const pt = project(joint, cam);
      const back = unproject(pt.x, pt.y, joint, cam);
      expect(Math.hypot(back[0] - joint[0], back[1] - joint[1], back[2] - joint[2])).toBeLessThan(1e-9);
    }
  });

  it("picks the joint under the cursor", () => {
    const cam = defaultCamera(460, 420);
    const pt = project(POSE[8], cam);
    expect(pickJoint(POSE, pt.x, pt.y, cam)).toBe(8);
    expect(pickJoint(POSE, -1000, -1000, cam)).toBeNull();
  });

  it("dragging preserves every bone length exactly", () => {
    const cam = defaultCamera(460, 420);
    const before = boneLengths(POSE);
    let pose = POSE;
    const targets: Array<[number, number, number]> = [
      [8, 120, 90],
      [9, 380, 120],
      [6, 150, 260],
      [0, 230, 60],
    ];
    for (const [joint, x, y] of targets) {
      pose = dragJoint(pose, joint, x, y, cam);
      const after = boneLengths(pose);
      after.forEach((len, b) => expect(Math.abs(len - before[b])).toBeLessThan(1e-9));
    }
  });

  it("dragging a joint moves it toward the cursor", () => {
    const cam = defaultCamera(460, 420);
    const start = project(POSE[8], cam);
    const moved = dragJoint(POSE, 8, start.x + 40, start.y - 30, cam);
    const end = project(moved[8], cam);
    const d0 = Math.hypot(start.x + 40 - start.x, start.y - 30 - start.y);
    const d1 = Math.hypot(start.x + 40 - end.x, start.y - 30 - end.y);
    expect(d1).toBeLessThan(d0);
  });

  it("dragging the wrist leaves unrelated joints untouched, dragging the elbow carries the wrist", () => {
    const cam = defaultCamera(460, 420);
    const wristDrag = dragJoint(POSE, 8, 100, 100, cam);
    for (const j of [0, 1, 2, 3, 4, 5, 6, 7, 9]) {
      expect(wristDrag[j]).toEqual(POSE[j]);
    }
    const elbowDrag = dragJoint(POSE, 6, 140, 250, cam);
    expect(elbowDrag[8]).not.toEqual(POSE[8]); // subtree follows
    expect(elbowDrag[9]).toEqual(POSE[9]); // other arm untouched
  });

  it("dragging the root is a no-op", () => {
    const cam = defaultCamera(460, 420);
    expect(dragJoint(POSE, 3, 0, 0, cam)).toEqual(POSE);
  });
});
