import { readFileSync } from "node:fs";

import { ModelLoadError } from "./errors.js";
import type { DetectedSpan, Distribution, SentimentClassifier } from "./registry.js";

export interface CueLexicon {
  positive: string[];
  negative: string[];
}

const TOKEN = /[\p{L}\p{N}][\p{L}\p{N}'’-]*/gu;

/* Cue tokens this close to the target span count double. */
const NEAR_WINDOW = 40;

export function loadLexicon(path: string): CueLexicon {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch {
    throw new ModelLoadError(`cue lexicon ${path} is missing or not valid JSON`);
  }
  const lexicon = raw as CueLexicon;
  for (const name of ["positive", "negative"] as const) {
    if (!Array.isArray(lexicon[name]) || lexicon[name].some((w) => typeof w !== "string")) {
      throw new ModelLoadError(`cue lexicon ${path} must list ${name} cue words`);
    }
  }
  return lexicon;
}

/** Target-dependent cue counting over the mention's sentence.
 *
 * Cue words vote for their class, with double weight near the target span;
 * a fixed neutral mass keeps cue-free sentences neutral. p_neutral is the
 * exact complement so the distribution sums to 1.
 */
export class CueLexiconTsc implements SentimentClassifier {
  private positive: Set<string>;
  private negative: Set<string>;

  constructor(lexicon: CueLexicon) {
    this.positive = new Set(lexicon.positive.map((w) => w.toLowerCase()));
    this.negative = new Set(lexicon.negative.map((w) => w.toLowerCase()));
  }

  classify(sentence: string, span: DetectedSpan): Distribution {
    let positiveVotes = 0;
    let negativeVotes = 0;
    for (const match of sentence.matchAll(TOKEN)) {
      const word = match[0].toLowerCase();
      const near = match.index >= span.start - NEAR_WINDOW && match.index <= span.end + NEAR_WINDOW;
      const weight = near ? 2 : 1;
      if (this.positive.has(word)) positiveVotes += weight;
      else if (this.negative.has(word)) negativeVotes += weight;
    }
    const negativeScore = 1 + 2 * negativeVotes;
    const positiveScore = 1 + 2 * positiveVotes;
    const neutralScore = 2;
    const total = negativeScore + neutralScore + positiveScore;
    const pNegative = negativeScore / total;
    const pPositive = positiveScore / total;
    return { pNegative, pNeutral: 1 - pNegative - pPositive, pPositive };
  }
}
