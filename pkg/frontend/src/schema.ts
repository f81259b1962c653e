import { writeFileSync } from "node:fs";

import { SchemaError } from "./errors.js";

/** Field order of the annotation JSONL contract consumed by the analytics
 * pipeline. Every output line carries exactly these keys in this order. */
export const ANNOTATION_FIELDS = [
  "doc_id",
  "sentence_index",
  "start",
  "end",
  "surface",
  "entity_type",
  "kb_id",
  "link_log_likelihood",
  "p_negative",
  "p_neutral",
  "p_positive",
] as const;

export const DISTRIBUTION_TOLERANCE = 1e-6;

export interface MentionRecord {
  doc_id: string;
  sentence_index: number;
  start: number;
  end: number;
  surface: string;
  entity_type: "person";
  kb_id: string | null;
  link_log_likelihood: number | null;
  p_negative: number;
  p_neutral: number;
  p_positive: number;
}

export function validateRecord(record: MentionRecord): void {
  if (!Number.isInteger(record.sentence_index) || record.sentence_index < 0) {
    throw new SchemaError(`invalid sentence_index ${record.sentence_index}`);
  }
  if (!Number.isInteger(record.start) || !Number.isInteger(record.end)) {
    throw new SchemaError(`span (${record.start}, ${record.end}) must be integers`);
  }
  if (!(record.start >= 0 && record.start < record.end)) {
    throw new SchemaError(`invalid span (${record.start}, ${record.end})`);
  }
  if ((record.kb_id === null) !== (record.link_log_likelihood === null)) {
    throw new SchemaError("kb_id and link_log_likelihood must be both set or both null");
  }
  if (record.link_log_likelihood !== null && record.link_log_likelihood > 0) {
    throw new SchemaError(`link log-likelihood ${record.link_log_likelihood} must be <= 0`);
  }
  const probs = [record.p_negative, record.p_neutral, record.p_positive];
  for (const p of probs) {
    if (!(p >= 0 && p <= 1)) throw new SchemaError(`class probability ${p} outside [0, 1]`);
  }
  const total = probs.reduce((a, b) => a + b, 0);
  if (Math.abs(total - 1) > DISTRIBUTION_TOLERANCE) {
    throw new SchemaError(`class probabilities sum to ${total}, expected 1`);
  }
}

export function recordToLine(record: MentionRecord): string {
  validateRecord(record);
  const ordered: Record<string, unknown> = {};
  for (const field of ANNOTATION_FIELDS) ordered[field] = record[field];
  return JSON.stringify(ordered);
}

export function annotationsToText(records: MentionRecord[]): string {
  return records.map((r) => recordToLine(r) + "\n").join("");
}

export function writeAnnotations(records: MentionRecord[], path: string): void {
  writeFileSync(path, annotationsToText(records), "utf-8");
}
