import { describe, expect, it } from "vitest";

import {
  initialViewState,
  loadSequence,
  nearestKeyFrame,
  scrub,
  tick,
  toggleOverlay,
} from "./state.js";

describe("scrub", () => {
  const base = loadSequence(initialViewState(), "s", "m", 40);

  it("moves to an in-range frame without warning", () => {
    const { state, warning } = scrub(base, 17);
    expect(state.frameIndex).toBe(17);
    expect(warning).toBeNull();
  });

  it("scrub to 0 shows the first frame", () => {
    const { state, warning } = scrub({ ...base, frameIndex: 20 }, 0);
    expect(state.frameIndex).toBe(0);
    expect(warning).toBeNull();
  });

  it("clamps past the end with a warning", () => {
    const { state, warning } = scrub(base, 99);
    expect(state.frameIndex).toBe(39);
    expect(warning).toContain("clamped to 39");
  });

  it("clamps below zero with a warning", () => {
    const { state, warning } = scrub(base, -5);
    expect(state.frameIndex).toBe(0);
    expect(warning).not.toBeNull();
  });
});

describe("playback tick", () => {
  it("advances by rate and stops at the last frame", () => {
    let state = { ...loadSequence(initialViewState(), "s", "m", 10), playing: true };
    state = tick(state, 100, 30); // 0.1 s at 30 fps -> 3 frames
    expect(state.frameIndex).toBeCloseTo(3, 6);
    state = tick(state, 10_000, 30);
    expect(state.frameIndex).toBe(9);
    expect(state.playing).toBe(false);
  });

  it("does nothing while paused", () => {
    const state = loadSequence(initialViewState(), "s", "m", 10);
    expect(tick(state, 1000, 30)).toEqual(state);
  });

  it("honors the playback rate", () => {
    let state = {
      ...loadSequence(initialViewState(), "s", "m", 100),
      playing: true,
      playbackRate: 2,
    };
    state = tick(state, 100, 30);
    expect(state.frameIndex).toBeCloseTo(6, 6);
  });
});

describe("overlay toggles", () => {
  it("flips a single overlay", () => {
    const state = initialViewState();
    const toggled = toggleOverlay(state, "contacts");
    expect(toggled.overlays.contacts).toBe(false);
    expect(toggled.overlays.trajectory).toBe(true);
    expect(toggleOverlay(toggled, "contacts").overlays.contacts).toBe(true);
  });
});

describe("nearestKeyFrame", () => {
  it("snaps to the closest key frame, earlier on ties", () => {
    const keys = [0, 30, 39];
    expect(nearestKeyFrame(keys, 0)).toBe(0);
    expect(nearestKeyFrame(keys, 14)).toBe(0);
    expect(nearestKeyFrame(keys, 15)).toBe(0); // tie 0 vs 30 -> earlier
    expect(nearestKeyFrame(keys, 16)).toBe(30);
    expect(nearestKeyFrame(keys, 34)).toBe(30);
    expect(nearestKeyFrame(keys, 38)).toBe(39);
  });

  it("rejects an empty key frame list", () => {
    expect(() => nearestKeyFrame([], 3)).toThrow();
  });
});
