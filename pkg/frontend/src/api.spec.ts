import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "./api.js";
import { FakeServer, fixtureAnnotations } from "./fakeserver.js";
import { isValid, validateQaForm } from "./validate.js";
import type { QaSubmission } from "./types.js";

function makeClient(): { client: ApiClient; server: FakeServer } {
  const server = new FakeServer(fixtureAnnotations(), 40);
  return { client: new ApiClient("", server.fetch), server };
}

const submission: QaSubmission = {
  question: "Which object is the person between at the start?",
  answer: "The shelf and the lamp.",
  subtask: "situated_analysis",
  scene: "demo_room",
  motion: "demo_walk_sit",
  start_frame: 0,
  end_frame: 5,
};

describe("submit_qa happy path", () => {
  it("persists and re-renders the exact submitted values", async () => {
    const { client } = makeClient();
    const stored = await client.postQa(submission);
    expect(stored.id).toBe("qa-000001");

    // Round-trip: the list view renders whatever the server persisted.
    const listed = await client.listQa("demo_room", "demo_walk_sit");
    expect(listed).toHaveLength(1);
    expect(listed[0].question).toBe(submission.question);
    expect(listed[0].answer).toBe(submission.answer);
    expect(listed[0].subtask).toBe(submission.subtask);
    expect(listed[0].start_frame).toBe(submission.start_frame);
    expect(listed[0].end_frame).toBe(submission.end_frame);
  });

  it("filters the list by scene and motion", async () => {
    const { client } = makeClient();
    await client.postQa(submission);
    expect(await client.listQa("other_scene", "demo_walk_sit")).toHaveLength(0);
  });
});

describe("start > end rejection", () => {
  const inverted = { ...submission, start_frame: 9, end_frame: 2 };

  it("is blocked client-side before any request", () => {
    const errors = validateQaForm(
      {
        question: inverted.question,
        answer: inverted.answer,
        subtask: inverted.subtask,
        startFrame: inverted.start_frame,
        endFrame: inverted.end_frame,
      },
      40,
    );
    expect(isValid(errors)).toBe(false);
    expect(errors.startFrame).toContain("must not exceed");
  });

  it("is rejected server-side with 422 when forced through", async () => {
    const { client, server } = makeClient();
    await expect(client.postQa(inverted)).rejects.toMatchObject({
      status: 422,
      body: { code: "invalid_record" },
    });
    expect(server.records).toHaveLength(0); // nothing persisted
  });
});

describe("error surfaces", () => {
  it("wraps structured error bodies", async () => {
    const { client } = makeClient();
    try {
      await client.postQa({ ...submission, subtask: "bogus" });
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      const apiError = error as ApiError;
      expect(apiError.status).toBe(422);
      expect(apiError.body.message).toContain("bogus");
    }
  });

  it("maps unknown motion to 404", async () => {
    const { client } = makeClient();
    await expect(client.postQa({ ...submission, motion: "ghost" })).rejects.toMatchObject({
      status: 404,
    });
  });

  it("rejects an end frame beyond the sequence", async () => {
    const { client } = makeClient();
    await expect(client.postQa({ ...submission, end_frame: 40 })).rejects.toMatchObject({
      status: 422,
    });
  });

  it("fetches listings and annotations", async () => {
    const { client } = makeClient();
    const listing = await client.listScenes();
    expect(listing.scenes).toEqual(["demo_room"]);
    const annotations = await client.getAnnotations("demo_room", "demo_walk_sit");
    expect(annotations.key_frames).toEqual([0, 30, 39]);
  });
});
