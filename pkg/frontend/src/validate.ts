// Client-side validation for the QA form. Mirrors the server's record
// invariants so bad submissions are blocked before any request is sent;
// the server remains the final authority (422 on violation).

// The three sub-tasks authored by humans in this interface.
export const HUMAN_SUBTASKS = ["focus_analysis", "situated_analysis", "navigation"] as const;

// The full tag set, selectable through the "other" escape hatch.
export const ALL_SUBTASKS = [
  "single_activity",
  "sequential_activity",
  "human_position",
  "body_orientation",
  "object_orientation",
  "interaction_type",
  "interacting_object",
  "contact_part",
  "focus_analysis",
  "situated_analysis",
  "intent_prediction",
  "movement_prediction",
  "situated_dialogue",
  "high_level_task",
  "low_level_task",
  "navigation",
] as const;

export interface QaForm {
  question: string;
  answer: string;
  subtask: string;
  startFrame: number;
  endFrame: number;
}

export type FieldErrors = Partial<Record<keyof QaForm, string>>;

export function validateQaForm(form: QaForm, numFrames: number): FieldErrors {
  const errors: FieldErrors = {};
  if (!form.question.trim()) {
    errors.question = "question must not be empty";
  }
  if (!form.answer.trim()) {
    errors.answer = "answer must not be empty";
  }
  if (!(ALL_SUBTASKS as readonly string[]).includes(form.subtask)) {
    errors.subtask = `unknown sub-task tag: ${form.subtask}`;
  }
  if (!Number.isInteger(form.startFrame) || form.startFrame < 0) {
    errors.startFrame = "start frame must be a non-negative integer";
  }
  if (!Number.isInteger(form.endFrame)) {
    errors.endFrame = "end frame must be an integer";
  } else if (form.endFrame >= numFrames) {
    errors.endFrame = `end frame must be below ${numFrames}`;
  }
  if (
    errors.startFrame === undefined &&
    errors.endFrame === undefined &&
    form.startFrame > form.endFrame
  ) {
    errors.startFrame = "start frame must not exceed end frame";
  }
  return errors;
}

export function isValid(errors: FieldErrors): boolean {
  return Object.keys(errors).length === 0;
}
