import type { DetectedSpan, NerModel } from "./registry.js";

const WORD_CHAR = /[\p{L}\p{N}]/u;

/* Runs of two or more capitalized words: candidate person names outside the
 * gazetteer. Single capitalized words are skipped (sentence starts). */
const CAP_RUN = /\p{Lu}[\p{L}'’-]+(?:\s\p{Lu}[\p{L}'’-]+)+/gu;

function boundaryOk(sentence: string, start: number, end: number): boolean {
  const before = start === 0 ? "" : sentence[start - 1]!;
  const after = end === sentence.length ? "" : sentence[end]!;
  return !(before && WORD_CHAR.test(before)) && !(after && WORD_CHAR.test(after));
}

/** Gazetteer matching plus a capitalization heuristic.
 *
 * Capitalization guesses overlapping a gazetteer hit are discarded: known
 * names beat guesses, so a sentence-initial word never swallows one.
 * Remaining overlapping or nested spans are resolved by keeping the longest
 * span, leftmost first; the survivors never overlap.
 */
export class GazetteerNer implements NerModel {
  private surfaces: string[];

  constructor(surfaces: string[]) {
    // longest first so nested gazetteer names resolve to the longer surface
    this.surfaces = [...surfaces].sort((a, b) => b.length - a.length || (a < b ? -1 : 1));
  }

  detect(sentence: string): DetectedSpan[] {
    const candidates: DetectedSpan[] = [];
    for (const surface of this.surfaces) {
      let from = 0;
      while (true) {
        const start = sentence.indexOf(surface, from);
        if (start === -1) break;
        const end = start + surface.length;
        if (boundaryOk(sentence, start, end)) candidates.push({ start, end, surface });
        from = start + 1;
      }
    }
    const known = [...candidates];
    for (const match of sentence.matchAll(CAP_RUN)) {
      const start = match.index;
      const end = start + match[0].length;
      if (!boundaryOk(sentence, start, end)) continue;
      if (known.some((hit) => hit.start < end && start < hit.end)) continue;
      candidates.push({ start, end, surface: match[0] });
    }
    candidates.sort((a, b) => a.start - b.start || b.end - a.end || (a.surface < b.surface ? -1 : 1));
    const taken: DetectedSpan[] = [];
    let takenUntil = -1;
    for (const span of candidates) {
      if (span.start > takenUntil) {
        taken.push(span);
        takenUntil = span.end - 1;
      }
    }
    return taken;
  }
}
