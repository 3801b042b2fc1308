// Scripted interaction sequences against the store; every emitted controls
// JSON is validated against the shared schema, and the undo round trip must
// restore the previous controls byte-identically through the history
// endpoints.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { EditorStore } from "../src/editorState.js";
import { Schema, validate } from "../src/schema.js";
import { FakeService } from "./fakeService.js";

const here = dirname(fileURLToPath(import.meta.url));
const schema = JSON.parse(
  readFileSync(join(here, "..", "..", "src", "sgt", "data", "schemas", "controls.schema.json"), "utf-8"),
) as Schema;

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomPoseRow(rand: () => number): number[] {
  const row: number[] = [];
  for (let b = 0; b < 9; b++) {
    const v = [rand() - 0.5, rand() - 0.5, rand() - 0.5];
    const n = Math.hypot(v[0], v[1], v[2]) || 1;
    row.push(v[0] / n, v[1] / n, v[2] / n);
  }
  return row;
}

describe("editor store", () => {
  let service: FakeService;
  let store: EditorStore;

  beforeEach(async () => {
    service = new FakeService();
    store = new EditorStore(new ApiClient(service.transport), schema);
    await store.loadSpeech("welcome to the great hall today");
  });

  it("loads speech and creates a project", () => {
    expect(store.nFrames).toBe(36);
    expect(store.projectId).not.toBeNull();
    expect(store.envelope).toHaveLength(36);
  });

  it("emits schema-valid controls for pose and style edits", () => {
    store.addPoseControl(4, [randomPoseRow(mulberry32(1))]);
    store.setStyle("speed", 1.5);
    expect(validate(store.emitControls(), schema)).toEqual([]);
  });

  it("dragging a control equals editing its start index", () => {
    const rand = mulberry32(2);
    store.addPoseControl(0, [randomPoseRow(rand), randomPoseRow(rand)]);
    store.movePoseControl(0, 9);
    const dragged = JSON.stringify(store.controls);
    const manual = {
      pose_controls: [{ start: 9, frames: store.controls.pose_controls[0].frames }],
      style_controls: [],
    };
    expect(dragged).toBe(JSON.stringify(manual));
  });

  it("selecting a range then inserting a library gesture posts pose controls there", async () => {
    store.selectRange(6, 20);
    await store.addLibraryGesture("beat", 1, false, store.selection!.start);
    expect(store.controls.pose_controls).toHaveLength(1);
    expect(store.controls.pose_controls[0].start).toBe(6);
    expect(validate(store.emitControls(), schema)).toEqual([]);
  });

  it("touching a slider activates exactly that element", () => {
    store.selectRange(0, 35);
    store.setStyle("space", -1.2);
    const seg = store.controls.style_controls[0];
    expect(seg.space).toBe(-1.2);
    expect(seg.speed).toBeUndefined();
    expect(seg.handedness).toBeUndefined();
  });

  it("presets set the published style values", () => {
    store.selectRange(0, 35);
    store.applyPreset("happy");
    expect(store.controls.style_controls[0].speed).toBe(2.5);
    store.applyPreset("sad");
    expect(store.controls.style_controls[0].speed).toBe(-2.5);
  });

  it("regenerate commits controls and adopts the service motion (single source of truth)", async () => {
    store.addPoseControl(2, [randomPoseRow(mulberry32(3))]);
    await store.regenerate();
    expect(store.motion).not.toBeNull();
    expect(store.motion!.frames).toHaveLength(30);
    const stored = service.projects.get(store.projectId!)!;
    expect(JSON.stringify(stored.controls)).toBe(JSON.stringify(store.controls));
  });

  it("undo after regenerate restores the prior controls byte-identically", async () => {
    store.addPoseControl(2, [randomPoseRow(mulberry32(4))]);
    await store.regenerate();
    const before = JSON.stringify(store.controls);
    store.addPoseControl(10, [randomPoseRow(mulberry32(5))]);
    await store.regenerate();
    await store.undo();
    expect(JSON.stringify(store.controls)).toBe(before);
    await store.redo();
    expect(store.controls.pose_controls).toHaveLength(2);
  });

  it("only one generate request is in flight; later requests queue behind it", async () => {
    const first = store.regenerate();
    const second = store.regenerate(); // queued
    const third = store.regenerate(); // collapses into the queued rerun
    await Promise.all([first, second, third]);
    expect(service.generateCalls).toBe(2);
  });

  it("20 scripted interaction sequences keep controls schema-valid and undo-consistent", async () => {
    for (let seq = 0; seq < 20; seq++) {
      const rand = mulberry32(1000 + seq);
      const svc = new FakeService();
      const st = new EditorStore(new ApiClient(svc.transport), schema);
      await st.loadSpeech("alpha beta gamma delta epsilon zeta eta");
      const snapshots: string[] = [JSON.stringify(st.controls)];
      const ops = 6 + Math.floor(rand() * 6);
      for (let k = 0; k < ops; k++) {
        const dice = rand();
        if (dice < 0.3) {
          const len = 1 + Math.floor(rand() * 4);
          const start = Math.floor(rand() * (st.nFrames - len));
          st.addPoseControl(start, Array.from({ length: len }, () => randomPoseRow(rand)));
        } else if (dice < 0.5) {
          st.selectRange(Math.floor(rand() * 10), 10 + Math.floor(rand() * 20));
          st.setStyle(["speed", "space", "handedness"][Math.floor(rand() * 3)] as never, rand() * 6 - 3);
        } else if (dice < 0.65 && st.controls.pose_controls.length > 0) {
          st.movePoseControl(Math.floor(rand() * st.controls.pose_controls.length), Math.floor(rand() * 20));
        } else if (dice < 0.8) {
          st.applyPreset(rand() < 0.5 ? "happy" : "sad");
        } else {
          await st.regenerate();
          snapshots.push(JSON.stringify(st.controls));
        }
        expect(validate(st.controls, schema)).toEqual([]);
      }
      // walk the whole history back and compare byte-for-byte
      await st.regenerate();
      snapshots.push(JSON.stringify(st.controls));
      for (let back = snapshots.length - 2; back >= 0; back--) {
        await st.undo();
        expect(JSON.stringify(st.controls)).toBe(snapshots[back]);
      }
    }
  });
});
