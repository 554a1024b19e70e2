// View state for the review screen: current position in the sequence,
// playback, and overlay toggles. Frame index always stays inside
// [0, numFrames - 1]; out-of-range scrubs clamp and report a warning.

export interface OverlayToggles {
  contacts: boolean;
  orientations: boolean;
  trajectory: boolean;
}

export interface ViewState {
  sceneId: string | null;
  motionId: string | null;
  frameIndex: number;
  numFrames: number;
  playing: boolean;
  playbackRate: number;
  overlays: OverlayToggles;
}

export function initialViewState(): ViewState {
  return {
    sceneId: null,
    motionId: null,
    frameIndex: 0,
    numFrames: 1,
    playing: false,
    playbackRate: 1.0,
    overlays: { contacts: true, orientations: true, trajectory: true },
  };
}

export interface ScrubResult {
  state: ViewState;
  warning: string | null;
}

export function scrub(state: ViewState, frameIndex: number): ScrubResult {
  const last = state.numFrames - 1;
  const clamped = Math.min(Math.max(Math.round(frameIndex), 0), last);
  const warning =
    clamped === Math.round(frameIndex)
      ? null
      : `frame ${frameIndex} is outside 0..${last}; clamped to ${clamped}`;
  return { state: { ...state, frameIndex: clamped }, warning };
}

export function loadSequence(
  state: ViewState,
  sceneId: string,
  motionId: string,
  numFrames: number,
): ViewState {
  return {
    ...state,
    sceneId,
    motionId,
    numFrames: Math.max(1, numFrames),
    frameIndex: 0,
    playing: false,
  };
}

export function toggleOverlay(state: ViewState, name: keyof OverlayToggles): ViewState {
  return {
    ...state,
    overlays: { ...state.overlays, [name]: !state.overlays[name] },
  };
}

/** Advance playback by wall-clock milliseconds; stops at the last frame. */
export function tick(state: ViewState, elapsedMs: number, fps: number): ViewState {
  if (!state.playing) return state;
  const advanced =
    state.frameIndex + (elapsedMs / 1000) * fps * state.playbackRate;
  const last = state.numFrames - 1;
  if (advanced >= last) {
    return { ...state, frameIndex: last, playing: false };
  }
  return { ...state, frameIndex: advanced };
}

/** Key frame closest to the given index; ties resolve to the earlier frame. */
export function nearestKeyFrame(keyFrames: number[], frameIndex: number): number {
  if (keyFrames.length === 0) throw new Error("no key frames");
  let best = keyFrames[0];
  let bestGap = Math.abs(frameIndex - best);
  for (const candidate of keyFrames) {
    const gap = Math.abs(frameIndex - candidate);
    if (gap < bestGap) {
      best = candidate;
      bestGap = gap;
    }
  }
  return best;
}
