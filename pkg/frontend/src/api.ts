// Thin typed client over the annotation server. All reads are GETs; the
// only write the UI ever performs is POST /api/qa.

import type {
  AnnotationsDoc,
  ErrorBody,
  Listing,
  MotionDoc,
  QaSubmission,
  SceneDoc,
  StoredQaRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<ApiError> {
  let body: ErrorBody;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    body = { code: "http_error", message: response.statusText, detail: null };
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  listScenes(): Promise<Listing> {
    return this.getJson<Listing>("/api/scenes");
  }

  getScene(id: string): Promise<SceneDoc> {
    return this.getJson<SceneDoc>(`/api/scene/${encodeURIComponent(id)}`);
  }

  getMotion(id: string): Promise<MotionDoc> {
    return this.getJson<MotionDoc>(`/api/motion/${encodeURIComponent(id)}`);
  }

  getAnnotations(scene: string, motion: string): Promise<AnnotationsDoc> {
    return this.getJson<AnnotationsDoc>(
      `/api/annotations/${encodeURIComponent(scene)}/${encodeURIComponent(motion)}`,
    );
  }

  async listQa(scene: string, motion: string): Promise<StoredQaRecord[]> {
    const payload = await this.getJson<{ records: StoredQaRecord[] }>(
      `/api/qa?scene=${encodeURIComponent(scene)}&motion=${encodeURIComponent(motion)}`,
    );
    return payload.records;
  }

  async postQa(submission: QaSubmission): Promise<StoredQaRecord> {
    const response = await this.fetchFn("/api/qa", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(submission),
    });
    if (response.status !== 201) throw await parseError(response);
    return (await response.json()) as StoredQaRecord;
  }
}
