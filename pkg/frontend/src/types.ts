// Wire types shared with the generation service.

export interface WordTiming {
  word: string;
  start: number;
  end: number;
}

export interface PoseControlSegment {
  start: number;
  // each row: 27 flat bone-direction values or 10 [x,y,z] joint positions
  frames: number[][] | number[][][];
}

export interface StyleControlSegment {
  start: number;
  end: number;
  speed?: number | null;
  space?: number | null;
  handedness?: number | null;
}

export interface ControlsJson {
  pose_controls: PoseControlSegment[];
  style_controls: StyleControlSegment[];
}

export interface MotionJson {
  fps: number;
  joints: string[];
  frames: number[][][]; // (T, 10, 3)
  style_track?: number[][];
  style_normalized?: boolean;
}

export interface SpeechResponse {
  audio_id: string;
  n_frames: number;
  timings: WordTiming[];
  envelope: number[];
}

export interface ProjectJson {
  id: string;
  name: string;
  text: string;
  audio_id: string | null;
  controls: ControlsJson;
  motion: MotionJson | null;
  created_at: number;
  updated_at: number;
  undo: ControlsJson[];
  redo: ControlsJson[];
}

export interface GestureMeta {
  id: string;
  name: string;
  tags: string[];
  frames: number;
}

export const STYLE_ELEMENTS = ["speed", "space", "handedness"] as const;
export type StyleElement = (typeof STYLE_ELEMENTS)[number];

export function emptyControls(): ControlsJson {
  return { pose_controls: [], style_controls: [] };
}
