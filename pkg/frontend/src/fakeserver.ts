// In-memory stand-in for the annotation server, mirroring its validation
// semantics and error body shape. Used by the vitest suites only.

import type { AnnotationsDoc, QaSubmission, StoredQaRecord } from "./types.js";
import { ALL_SUBTASKS } from "./validate.js";

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function error(status: number, code: string, message: string): Response {
  return json(status, { code, message, detail: null });
}

export class FakeServer {
  records: StoredQaRecord[] = [];

  constructor(
    public readonly annotations: AnnotationsDoc,
    public readonly numFrames: number,
  ) {}

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://fake");
    if (url.pathname === "/api/qa" && init?.method === "POST") {
      return this.postQa(JSON.parse(String(init.body)) as QaSubmission);
    }
    if (url.pathname === "/api/qa") {
      const scene = url.searchParams.get("scene");
      const motion = url.searchParams.get("motion");
      const records = this.records.filter(
        (r) =>
          (scene === null || r.scene === scene) &&
          (motion === null || r.motion === motion),
      );
      return json(200, { records });
    }
    if (url.pathname.startsWith("/api/annotations/")) {
      return json(200, this.annotations);
    }
    if (url.pathname === "/api/scenes") {
      return json(200, { scenes: [this.annotations.scene], motions: [this.annotations.motion] });
    }
    return error(404, "not_found", `no route ${url.pathname}`);
  };

  private postQa(body: QaSubmission): Response {
    if (!(ALL_SUBTASKS as readonly string[]).includes(body.subtask)) {
      return error(422, "invalid_record", `unknown subtask tag '${body.subtask}'`);
    }
    if (!body.question.trim() || !body.answer.trim()) {
      return error(422, "invalid_record", "question and answer must be non-empty");
    }
    if (!(body.start_frame >= 0 && body.start_frame <= body.end_frame)) {
      return error(
        422,
        "invalid_record",
        `need 0 <= start_frame <= end_frame, got ${body.start_frame}..${body.end_frame}`,
      );
    }
    if (body.end_frame >= this.numFrames) {
      return error(
        422,
        "invalid_record",
        `end_frame ${body.end_frame} outside motion of ${this.numFrames} frames`,
      );
    }
    if (body.motion !== this.annotations.motion) {
      return error(404, "not_found", `no motion '${body.motion}'`);
    }
    const stored: StoredQaRecord = {
      id: `qa-${String(this.records.length + 1).padStart(6, "0")}`,
      ...body,
    };
    this.records.push(stored);
    return json(201, stored);
  }
}

export function fixtureAnnotations(): AnnotationsDoc {
  return {
    scene: "demo_room",
    motion: "demo_walk_sit",
    config_hash: "6543b9d7fca12c98",
    num_frames: 40,
    key_frames: [0, 30, 39],
    annotations: [
      {
        scene: "demo_room",
        motion: "demo_walk_sit",
        frame: 0,
        contacts: [],
        positions: [
          { object: "chair1", orientation: "facing_towards", distance: 1.8 },
          { object: "lamp1", orientation: "on_right", distance: 1.019803902718557 },
        ],
        betweens: [{ left: "shelf1", right: "lamp1" }],
        config_hash: "6543b9d7fca12c98",
      },
      {
        scene: "demo_room",
        motion: "demo_walk_sit",
        frame: 30,
        contacts: [
          { joint: "pelvis", object: "chair1", distance: 0.04942883648785599 },
          { joint: "left hip", object: "chair1", distance: 0.03807075933113731 },
          { joint: "right hip", object: "chair1", distance: 0.0380707593311373 },
        ],
        positions: [{ object: "chair1", orientation: "at", distance: 0.0 }],
        betweens: [],
        config_hash: "6543b9d7fca12c98",
      },
      {
        scene: "demo_room",
        motion: "demo_walk_sit",
        frame: 39,
        contacts: [
          { joint: "pelvis", object: "chair1", distance: 0.04942883648785599 },
          { joint: "left wrist", object: "table1", distance: 0.040000000000000036 },
        ],
        positions: [{ object: "table1", orientation: "on_left", distance: 1.2165525060596438 }],
        betweens: [],
        config_hash: "6543b9d7fca12c98",
      },
    ],
  };
}
