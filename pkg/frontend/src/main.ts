// DOM glue: wires the API client, view state, canvas renderer, and QA form
// together. All logic with behavior worth testing lives in the imported
// modules; this file only moves data between them and the document.

import { ApiClient, ApiError } from "./api.js";
import { contactsForFrame, describeContact, recordForFrame } from "./annotations.js";
import { drawScene } from "./render2d.js";
import {
  initialViewState,
  loadSequence,
  nearestKeyFrame,
  scrub,
  tick,
  toggleOverlay,
  type ViewState,
} from "./state.js";
import type { AnnotationsDoc, MotionDoc, SceneDoc, StoredQaRecord } from "./types.js";
import { HUMAN_SUBTASKS, ALL_SUBTASKS, isValid, validateQaForm, type QaForm } from "./validate.js";

const api = new ApiClient();

let view: ViewState = initialViewState();
let scene: SceneDoc | null = null;
let motion: MotionDoc | null = null;
let annotations: AnnotationsDoc | null = null;

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) throw new Error(`missing element #${id}`);
  return element as T;
}

const sceneSelect = byId<HTMLSelectElement>("scene-select");
const motionSelect = byId<HTMLSelectElement>("motion-select");
const loadButton = byId<HTMLButtonElement>("load-button");
const scrubber = byId<HTMLInputElement>("scrubber");
const frameLabel = byId<HTMLSpanElement>("frame-label");
const warningLabel = byId<HTMLSpanElement>("scrub-warning");
const playButton = byId<HTMLButtonElement>("play-button");
const rateSelect = byId<HTMLSelectElement>("rate-select");
const canvas = byId<HTMLCanvasElement>("scene-canvas");
const contactList = byId<HTMLUListElement>("contact-list");
const qaList = byId<HTMLTableSectionElement>("qa-rows");
const form = byId<HTMLFormElement>("qa-form");
const formError = byId<HTMLDivElement>("form-error");
const subtaskSelect = byId<HTMLSelectElement>("subtask");
const otherSubtaskSelect = byId<HTMLSelectElement>("subtask-other");

function populateSubtasks(): void {
  for (const tag of HUMAN_SUBTASKS) {
    subtaskSelect.add(new Option(tag, tag));
  }
  subtaskSelect.add(new Option("other…", "__other__"));
  for (const tag of ALL_SUBTASKS) {
    otherSubtaskSelect.add(new Option(tag, tag));
  }
  otherSubtaskSelect.hidden = true;
  subtaskSelect.addEventListener("change", () => {
    otherSubtaskSelect.hidden = subtaskSelect.value !== "__other__";
  });
}

function currentSubtask(): string {
  return subtaskSelect.value === "__other__" ? otherSubtaskSelect.value : subtaskSelect.value;
}

function redraw(): void {
  if (scene === null || motion === null) return;
  const ctx = canvas.getContext("2d");
  if (ctx === null) return;
  const record =
    annotations === null ? null : recordForFrame(annotations, Math.round(view.frameIndex));
  drawScene(
    ctx,
    { width: canvas.width, height: canvas.height },
    scene,
    motion,
    record,
    view.frameIndex,
    view.overlays,
  );
  frameLabel.textContent = `frame ${Math.round(view.frameIndex)} / ${view.numFrames - 1}`;
  renderContacts();
}

function renderContacts(): void {
  contactList.replaceChildren();
  if (annotations === null || !view.overlays.contacts) return;
  const key = nearestKeyFrame(annotations.key_frames, Math.round(view.frameIndex));
  const contacts = contactsForFrame(annotations, Math.round(view.frameIndex));
  const header = document.createElement("li");
  header.className = "contact-header";
  header.textContent = `contacts at key frame ${key}`;
  contactList.appendChild(header);
  for (const contact of contacts) {
    const item = document.createElement("li");
    item.textContent = describeContact(contact);
    contactList.appendChild(item);
  }
}

function renderQaRecords(records: StoredQaRecord[]): void {
  qaList.replaceChildren();
  for (const record of records) {
    const row = document.createElement("tr");
    for (const value of [
      record.id,
      record.subtask,
      record.question,
      record.answer,
      `${record.start_frame}–${record.end_frame}`,
    ]) {
      const cell = document.createElement("td");
      cell.textContent = value;
      row.appendChild(cell);
    }
    qaList.appendChild(row);
  }
}

async function refreshQaList(): Promise<void> {
  if (view.sceneId === null || view.motionId === null) return;
  renderQaRecords(await api.listQa(view.sceneId, view.motionId));
}

async function loadSelected(): Promise<void> {
  const sceneId = sceneSelect.value;
  const motionId = motionSelect.value;
  [scene, motion, annotations] = await Promise.all([
    api.getScene(sceneId),
    api.getMotion(motionId),
    api.getAnnotations(sceneId, motionId),
  ]);
  view = loadSequence(view, sceneId, motionId, motion.joints.length);
  scrubber.max = String(view.numFrames - 1);
  scrubber.value = "0";
  warningLabel.textContent = "";
  await refreshQaList();
  redraw();
}

function onScrub(raw: number): void {
  const result = scrub(view, raw);
  view = result.state;
  warningLabel.textContent = result.warning ?? "";
  scrubber.value = String(Math.round(view.frameIndex));
  redraw();
}

function clearFieldErrors(): void {
  formError.textContent = "";
  for (const name of ["question", "answer", "subtask", "start-frame", "end-frame"]) {
    byId<HTMLElement>(`error-${name}`).textContent = "";
  }
}

function showFieldError(field: string, message: string): void {
  byId<HTMLElement>(`error-${field}`).textContent = message;
}

async function submitQa(event: Event): Promise<void> {
  event.preventDefault();
  if (view.sceneId === null || view.motionId === null || motion === null) {
    formError.textContent = "load a scene and motion first";
    return;
  }
  clearFieldErrors();
  const qaForm: QaForm = {
    question: byId<HTMLInputElement>("question").value,
    answer: byId<HTMLInputElement>("answer").value,
    subtask: currentSubtask(),
    startFrame: Number(byId<HTMLInputElement>("start-frame").value),
    endFrame: Number(byId<HTMLInputElement>("end-frame").value),
  };
  const errors = validateQaForm(qaForm, motion.joints.length);
  if (!isValid(errors)) {
    if (errors.question) showFieldError("question", errors.question);
    if (errors.answer) showFieldError("answer", errors.answer);
    if (errors.subtask) showFieldError("subtask", errors.subtask);
    if (errors.startFrame) showFieldError("start-frame", errors.startFrame);
    if (errors.endFrame) showFieldError("end-frame", errors.endFrame);
    return;  // blocked client-side; no request is sent
  }
  try {
    await api.postQa({
      question: qaForm.question,
      answer: qaForm.answer,
      subtask: qaForm.subtask,
      scene: view.sceneId,
      motion: view.motionId,
      start_frame: qaForm.startFrame,
      end_frame: qaForm.endFrame,
    });
    form.reset();
    await refreshQaList();
  } catch (error) {
    if (error instanceof ApiError) {
      formError.textContent = `${error.status}: ${error.body.message}`;
    } else {
      formError.textContent = String(error);
    }
  }
}

async function boot(): Promise<void> {
  populateSubtasks();
  const listing = await api.listScenes();
  for (const id of listing.scenes) sceneSelect.add(new Option(id, id));
  for (const id of listing.motions) motionSelect.add(new Option(id, id));

  loadButton.addEventListener("click", () => void loadSelected());
  scrubber.addEventListener("input", () => onScrub(Number(scrubber.value)));
  playButton.addEventListener("click", () => {
    view = { ...view, playing: !view.playing, playbackRate: Number(rateSelect.value) };
    playButton.textContent = view.playing ? "pause" : "play";
  });
  for (const name of ["contacts", "orientations", "trajectory"] as const) {
    byId<HTMLInputElement>(`overlay-${name}`).addEventListener("change", () => {
      view = toggleOverlay(view, name);
      redraw();
    });
  }
  form.addEventListener("submit", (event) => void submitQa(event));

  const guidance = await fetch("guidance.html");
  if (guidance.ok) {
    byId<HTMLDivElement>("guidance").innerHTML = await guidance.text();
  }

  let last = performance.now();
  const loop = (now: number) => {
    const wasPlaying = view.playing;
    view = tick(view, now - last, motion?.fps ?? 30);
    last = now;
    if (wasPlaying) {
      if (!view.playing) playButton.textContent = "play";
      scrubber.value = String(Math.round(view.frameIndex));
      redraw();
    }
    requestAnimationFrame(loop);
  };
  requestAnimationFrame(loop);
}

void boot();
