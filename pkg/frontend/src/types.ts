// Wire types for the annotation server API. Field names mirror the JSON
// documents exactly; the UI never derives geometry itself.

export interface BoxDoc {
  center: [number, number, number];
  size: [number, number, number];
}

export interface SceneObjectDoc {
  id: string;
  label: string;
  box: BoxDoc;
  points: number[][];
  colors?: number[][];
}

export interface SceneDoc {
  id: string;
  objects: SceneObjectDoc[];
}

export interface MotionDoc {
  id: string;
  fps: number;
  joints: number[][][]; // T x 22 x 3
}

export interface ContactDoc {
  joint: string;
  object: string;
  distance: number;
}

export interface PositionDoc {
  object: string;
  orientation: string;
  distance: number;
}

export interface BetweenDoc {
  left: string;
  right: string;
}

export interface AnnotationRecord {
  scene: string;
  motion: string;
  frame: number;
  contacts: ContactDoc[];
  positions: PositionDoc[];
  betweens: BetweenDoc[];
  config_hash: string;
}

export interface AnnotationsDoc {
  scene: string;
  motion: string;
  config_hash: string;
  num_frames: number;
  key_frames: number[];
  annotations: AnnotationRecord[];
}

export interface Listing {
  scenes: string[];
  motions: string[];
}

export interface QaSubmission {
  question: string;
  answer: string;
  subtask: string;
  scene: string;
  motion: string;
  start_frame: number;
  end_frame: number;
}

export interface StoredQaRecord extends QaSubmission {
  id: string;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
