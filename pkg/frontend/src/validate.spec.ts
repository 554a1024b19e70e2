import { describe, expect, it } from "vitest";

import { ALL_SUBTASKS, HUMAN_SUBTASKS, isValid, validateQaForm } from "./validate.js";

const valid = {
  question: "Where can the person sit?",
  answer: "On the chair in front of them.",
  subtask: "situated_analysis",
  startFrame: 0,
  endFrame: 10,
};

describe("validateQaForm", () => {
  it("accepts a well-formed submission", () => {
    expect(isValid(validateQaForm(valid, 40))).toBe(true);
  });

  it("blocks an empty question", () => {
    const errors = validateQaForm({ ...valid, question: "   " }, 40);
    expect(errors.question).toBeDefined();
  });

  it("blocks an empty answer", () => {
    expect(validateQaForm({ ...valid, answer: "" }, 40).answer).toBeDefined();
  });

  it("blocks start after end", () => {
    const errors = validateQaForm({ ...valid, startFrame: 11, endFrame: 3 }, 40);
    expect(errors.startFrame).toContain("must not exceed");
  });

  it("blocks an end frame beyond the sequence", () => {
    expect(validateQaForm({ ...valid, endFrame: 40 }, 40).endFrame).toBeDefined();
  });

  it("blocks negative and non-integer frames", () => {
    expect(validateQaForm({ ...valid, startFrame: -1 }, 40).startFrame).toBeDefined();
    expect(validateQaForm({ ...valid, endFrame: 3.5 }, 40).endFrame).toBeDefined();
  });

  it("blocks unknown sub-task tags", () => {
    expect(validateQaForm({ ...valid, subtask: "bogus" }, 40).subtask).toBeDefined();
  });

  it("accepts every known tag", () => {
    for (const tag of ALL_SUBTASKS) {
      expect(isValid(validateQaForm({ ...valid, subtask: tag }, 40))).toBe(true);
    }
  });

  it("exposes the three human-annotated tags", () => {
    expect(HUMAN_SUBTASKS).toEqual(["focus_analysis", "situated_analysis", "navigation"]);
    for (const tag of HUMAN_SUBTASKS) {
      expect(ALL_SUBTASKS).toContain(tag);
    }
  });
});
