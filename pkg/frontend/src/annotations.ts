// Selection helpers over the server's annotation document. The UI displays
// server-computed tuples verbatim; nothing is recomputed client-side.

import { nearestKeyFrame } from "./state.js";
import type { AnnotationRecord, AnnotationsDoc, ContactDoc } from "./types.js";

/** The annotation record shown while the scrubber sits at `frameIndex`. */
export function recordForFrame(
  doc: AnnotationsDoc,
  frameIndex: number,
): AnnotationRecord {
  const key = nearestKeyFrame(doc.key_frames, frameIndex);
  const record = doc.annotations.find((a) => a.frame === key);
  if (record === undefined) {
    throw new Error(`annotation document has no record for key frame ${key}`);
  }
  return record;
}

export function contactsForFrame(doc: AnnotationsDoc, frameIndex: number): ContactDoc[] {
  return recordForFrame(doc, frameIndex).contacts;
}

export function describeContact(contact: ContactDoc): string {
  return `${contact.joint} — ${contact.object} (${contact.distance.toFixed(3)} m)`;
}

export function describePosition(orientation: string): string {
  return orientation.replace(/_/g, " ");
}
