import type { Sentence, SentenceSplitter } from "./registry.js";

/* Sentence boundary: terminal punctuation followed by whitespace. Periods
 * inside tokens ("v1.2") never split because no whitespace follows. */
const SENTENCE_BREAK = /(?<=[.!?])\s+/u;

export class RuleSplitter implements SentenceSplitter {
  split(body: string): Sentence[] {
    if (body.trim() === "") return [];
    return body
      .split(SENTENCE_BREAK)
      .filter((text) => text !== "")
      .map((text, index) => ({ text, index }));
  }
}
