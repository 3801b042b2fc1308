// Timeline layout math and canvas rendering: waveform, word labels, pose
// control markers, and style segments on a shared frame axis at 15 fps.

import type { ControlsJson, WordTiming } from "./types.js";

export const FPS = 15;

export interface TimelineLayout {
  pxPerFrame: number;
  leftPad: number;
}

export function frameToX(frame: number, layout: TimelineLayout): number {
  return layout.leftPad + frame * layout.pxPerFrame;
}

export function xToFrame(x: number, layout: TimelineLayout, nFrames: number): number {
  const f = Math.round((x - layout.leftPad) / layout.pxPerFrame);
  return Math.max(0, Math.min(nFrames - 1, f));
}

/** One tick per frame; the ruler renders exactly n_frames of them. */
export function frameTicks(nFrames: number): number[] {
  return Array.from({ length: nFrames }, (_, i) => i);
}

export interface WordLabel {
  word: string;
  startFrame: number;
  endFrame: number;
}

export function wordLabels(timings: WordTiming[], nFrames: number): WordLabel[] {
  return timings.map((t) => ({
    word: t.word,
    startFrame: Math.min(nFrames - 1, Math.round(t.start * FPS)),
    endFrame: Math.min(nFrames, Math.round(t.end * FPS)),
  }));
}

export interface TrackBar {
  index: number; // control index in the controls JSON
  startFrame: number;
  endFrame: number;
  label: string;
}

export function poseBars(controls: ControlsJson): TrackBar[] {
  return controls.pose_controls.map((seg, index) => ({
    index,
    startFrame: seg.start,
    endFrame: seg.start + seg.frames.length,
    label: `pose x${seg.frames.length}`,
  }));
}

export function styleBars(controls: ControlsJson): TrackBar[] {
  return controls.style_controls.map((seg, index) => {
    const parts: string[] = [];
    if (seg.speed !== undefined && seg.speed !== null) parts.push(`spd ${seg.speed}`);
    if (seg.space !== undefined && seg.space !== null) parts.push(`spc ${seg.space}`);
    if (seg.handedness !== undefined && seg.handedness !== null) parts.push(`hnd ${seg.handedness}`);
    return { index, startFrame: seg.start, endFrame: seg.end, label: parts.join(" ") || "style" };
  });
}

/** Hit-test a bar row; returns the control index or null. */
export function barAt(bars: TrackBar[], x: number, layout: TimelineLayout): number | null {
  for (const bar of bars) {
    if (x >= frameToX(bar.startFrame, layout) && x < frameToX(bar.endFrame, layout)) {
      return bar.index;
    }
  }
  return null;
}

const ROWS = { waveform: 0, words: 1, pose: 2, style: 3 } as const;
export const ROW_HEIGHT = 34;

export function rowOfY(y: number): keyof typeof ROWS | null {
  const row = Math.floor(y / ROW_HEIGHT);
  return (Object.keys(ROWS) as (keyof typeof ROWS)[]).find((k) => ROWS[k] === row) ?? null;
}

export function drawTimeline(
  ctx: CanvasRenderingContext2D,
  width: number,
  state: {
    nFrames: number;
    envelope: number[];
    timings: WordTiming[];
    controls: ControlsJson;
    playhead: number;
    selection: { start: number; end: number } | null;
  },
  layout: TimelineLayout,
): void {
  ctx.clearRect(0, 0, width, ROW_HEIGHT * 4 + 14);
  if (state.selection) {
    ctx.fillStyle = "rgba(80,140,255,0.18)";
    const x0 = frameToX(state.selection.start, layout);
    const x1 = frameToX(state.selection.end, layout);
    ctx.fillRect(x0, 0, x1 - x0, ROW_HEIGHT * 4);
  }
  // waveform envelope
  ctx.strokeStyle = "#7a7";
  ctx.beginPath();
  state.envelope.forEach((v, i) => {
    const x = frameToX(i, layout);
    const mid = ROWS.waveform * ROW_HEIGHT + ROW_HEIGHT / 2;
    ctx.moveTo(x, mid - v * 14);
    ctx.lineTo(x, mid + v * 14);
  });
  ctx.stroke();
  // word labels
  ctx.fillStyle = "#ccc";
  ctx.font = "11px sans-serif";
  for (const label of wordLabels(state.timings, state.nFrames)) {
    ctx.fillText(label.word, frameToX(label.startFrame, layout) + 2, ROWS.words * ROW_HEIGHT + 20);
    ctx.strokeStyle = "#555";
    ctx.strokeRect(
      frameToX(label.startFrame, layout),
      ROWS.words * ROW_HEIGHT + 6,
      (label.endFrame - label.startFrame) * layout.pxPerFrame,
      ROW_HEIGHT - 10,
    );
  }
  // control bars
  const drawBars = (bars: TrackBar[], row: number, fill: string) => {
    for (const bar of bars) {
      const x = frameToX(bar.startFrame, layout);
      const w = Math.max(layout.pxPerFrame, (bar.endFrame - bar.startFrame) * layout.pxPerFrame);
      ctx.fillStyle = fill;
      ctx.fillRect(x, row * ROW_HEIGHT + 6, w, ROW_HEIGHT - 10);
      ctx.fillStyle = "#111";
      ctx.fillText(bar.label, x + 3, row * ROW_HEIGHT + 21);
    }
  };
  drawBars(poseBars(state.controls), ROWS.pose, "#6c6");
  drawBars(styleBars(state.controls), ROWS.style, "#c66");
  // frame ruler (one tick per frame) and playhead
  ctx.strokeStyle = "#444";
  for (const f of frameTicks(state.nFrames)) {
    const x = frameToX(f, layout);
    ctx.beginPath();
    ctx.moveTo(x, ROW_HEIGHT * 4);
    ctx.lineTo(x, ROW_HEIGHT * 4 + (f % FPS === 0 ? 10 : 4));
    ctx.stroke();
  }
  ctx.strokeStyle = "#fc3";
  const px = frameToX(state.playhead, layout);
  ctx.beginPath();
  ctx.moveTo(px, 0);
  ctx.lineTo(px, ROW_HEIGHT * 4 + 12);
  ctx.stroke();
}
