// Editor store: the single source of truth on the client. Motion is never
// mutated locally; every displayed motion is a service response. Controls
// edits are committed to the project (which drives the service-side history)
// when the user regenerates.

import { ApiClient } from "./api.js";
import { assertValid, Schema } from "./schema.js";
import type { ControlsJson, MotionJson, SpeechResponse, StyleElement, WordTiming } from "./types.js";
import { emptyControls } from "./types.js";

export interface Selection {
  start: number; // inclusive frame
  end: number; // exclusive frame
}

export const STYLE_PRESETS: Record<string, Partial<Record<StyleElement, number>>> = {
  happy: { speed: 2.5 },
  sad: { speed: -2.5 },
};

export type Listener = () => void;

export class EditorStore {
  projectId: string | null = null;
  audioId: string | null = null;
  text = "";
  nFrames = 0;
  timings: WordTiming[] = [];
  envelope: number[] = [];
  controls: ControlsJson = emptyControls();
  motion: MotionJson | null = null;
  playhead = 0;
  selection: Selection | null = null;
  mode: "model" | "keyframe" = "model";
  busy = false;

  private pendingRegenerate = false;
  private listeners: Listener[] = [];

  constructor(private api: ApiClient, private schema: Schema) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    this.listeners.forEach((fn) => fn());
  }

  /** Validate against the shared schema before anything leaves the store. */
  emitControls(): ControlsJson {
    assertValid(this.controls, this.schema);
    return this.controls;
  }

  async loadSpeech(text: string): Promise<SpeechResponse> {
    const resp = await this.api.speech(text);
    this.text = text;
    this.audioId = resp.audio_id;
    this.nFrames = resp.n_frames;
    this.timings = resp.timings;
    this.envelope = resp.envelope;
    this.controls = emptyControls();
    this.motion = null;
    this.selection = null;
    if (this.projectId === null) {
      const project = await this.api.createProject({ text, controls: this.controls });
      this.projectId = project.id;
    } else {
      await this.api.updateProject(this.projectId, { text, audio_id: resp.audio_id } as never);
    }
    this.emit();
    return resp;
  }

  selectFrame(frame: number): void {
    const f = Math.max(0, Math.min(this.nFrames - 1, Math.round(frame)));
    this.selection = { start: f, end: f + 1 };
    this.playhead = f;
    this.emit();
  }

  selectRange(a: number, b: number): void {
    const lo = Math.max(0, Math.min(a, b));
    const hi = Math.min(this.nFrames, Math.max(a, b) + 1);
    this.selection = { start: lo, end: hi };
    this.emit();
  }

  addPoseControl(start: number, frames: number[][] | number[][][]): void {
    if (start < 0 || start + frames.length > this.nFrames) {
      throw new Error(`pose control [${start}, ${start + frames.length}) outside [0, ${this.nFrames})`);
    }
    this.controls.pose_controls.push({ start, frames });
    this.emitControls();
    this.emit();
  }

  movePoseControl(index: number, newStart: number): void {
    const seg = this.controls.pose_controls[index];
    if (!seg) throw new Error(`no pose control at ${index}`);
    const clamped = Math.max(0, Math.min(this.nFrames - seg.frames.length, Math.round(newStart)));
    seg.start = clamped;
    this.emitControls();
    this.emit();
  }

  removePoseControl(index: number): void {
    this.controls.pose_controls.splice(index, 1);
    this.emit();
  }

  /** Touching a slider activates that element's mask on the selection. */
  setStyle(element: StyleElement, value: number): void {
    const sel = this.selection ?? { start: 0, end: this.nFrames };
    const seg = this.controls.style_controls.find((s) => s.start === sel.start && s.end === sel.end);
    const clamped = Math.max(-3, Math.min(3, value));
    if (seg) {
      seg[element] = clamped;
    } else {
      this.controls.style_controls.push({ start: sel.start, end: sel.end, [element]: clamped });
    }
    this.emitControls();
    this.emit();
  }

  moveStyleControl(index: number, newStart: number): void {
    const seg = this.controls.style_controls[index];
    if (!seg) throw new Error(`no style control at ${index}`);
    const length = seg.end - seg.start;
    const clamped = Math.max(0, Math.min(this.nFrames - length, Math.round(newStart)));
    seg.start = clamped;
    seg.end = clamped + length;
    this.emitControls();
    this.emit();
  }

  applyPreset(name: keyof typeof STYLE_PRESETS): void {
    for (const [element, value] of Object.entries(STYLE_PRESETS[name])) {
      this.setStyle(element as StyleElement, value as number);
    }
  }

  async addLibraryGesture(id: string, speed: number, flip: boolean, atFrame: number): Promise<void> {
    const motion = await this.api.gestureMotion(id, speed, flip);
    const room = this.nFrames - atFrame;
    this.addPoseControl(atFrame, motion.frames.slice(0, room));
  }

  /**
   * Commit controls to the project history and request a new generation.
   * Only one request is in flight; a request made while busy re-runs once
   * the current one finishes (latest state wins).
   */
  async regenerate(): Promise<void> {
    if (!this.audioId || !this.projectId) throw new Error("load speech first");
    if (this.busy) {
      this.pendingRegenerate = true;
      return;
    }
    this.busy = true;
    this.emit();
    try {
      const controls = this.emitControls();
      await this.api.updateProject(this.projectId, { controls } as never);
      const motion = await this.api.generate(this.audioId, controls, this.mode);
      this.motion = motion;
    } finally {
      this.busy = false;
      this.emit();
      if (this.pendingRegenerate) {
        this.pendingRegenerate = false;
        await this.regenerate();
      }
    }
  }

  async undo(): Promise<void> {
    if (!this.projectId) return;
    const project = await this.api.undo(this.projectId);
    this.controls = project.controls;
    this.emit();
  }

  async redo(): Promise<void> {
    if (!this.projectId) return;
    const project = await this.api.redo(this.projectId);
    this.controls = project.controls;
    this.emit();
  }
}
