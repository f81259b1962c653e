import { readFileSync } from "node:fs";

import { SchemaError } from "./errors.js";

export const CORPUS_FIELDS = [
  "doc_id",
  "url",
  "domain",
  "outlet",
  "published_at",
  "title",
  "body",
] as const;

export interface CorpusDocument {
  doc_id: string;
  url: string;
  domain: string;
  outlet: string;
  published_at: string;
  title: string;
  body: string;
}

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

export function parseDocument(raw: unknown, line: number): CorpusDocument {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new SchemaError("record is not a JSON object", line);
  }
  const record = raw as Record<string, unknown>;
  for (const field of CORPUS_FIELDS) {
    if (!(field in record)) throw new SchemaError(`missing field ${field}`, line);
    if (typeof record[field] !== "string") {
      throw new SchemaError(`field ${field} must be a string`, line);
    }
  }
  for (const key of Object.keys(record)) {
    if (!(CORPUS_FIELDS as readonly string[]).includes(key)) {
      throw new SchemaError(`unexpected field ${key}`, line);
    }
  }
  const published = record.published_at as string;
  if (!ISO_DATE.test(published) || Number.isNaN(Date.parse(published))) {
    throw new SchemaError(`published_at ${published} is not an ISO date`, line);
  }
  return record as unknown as CorpusDocument;
}

/** Read a corpus JSONL file. The input is expected to be a valid, already
 * cleaned corpus; any malformed line is an error, never skipped silently. */
export function readCorpus(path: string): CorpusDocument[] {
  const text = readFileSync(path, "utf-8");
  const docs: CorpusDocument[] = [];
  const seen = new Set<string>();
  text.split("\n").forEach((lineText, idx) => {
    if (lineText.trim() === "") return;
    let raw: unknown;
    try {
      raw = JSON.parse(lineText);
    } catch {
      throw new SchemaError("invalid JSON", idx + 1);
    }
    const doc = parseDocument(raw, idx + 1);
    if (seen.has(doc.doc_id)) throw new SchemaError(`duplicate doc_id ${doc.doc_id}`, idx + 1);
    seen.add(doc.doc_id);
    docs.push(doc);
  });
  return docs;
}
