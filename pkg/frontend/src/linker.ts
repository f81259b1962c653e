import { readFileSync } from "node:fs";

import { ModelLoadError } from "./errors.js";
import type { EntityLinker, LinkResult } from "./registry.js";

export interface SnapshotCandidate {
  kb_id: string;
  frequency: number;
}

export interface PersonSnapshot {
  surfaces: Record<string, SnapshotCandidate[]>;
}

export function loadSnapshot(path: string): PersonSnapshot {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch {
    throw new ModelLoadError(`person snapshot ${path} is missing or not valid JSON`);
  }
  const snapshot = raw as PersonSnapshot;
  if (typeof snapshot !== "object" || snapshot === null || typeof snapshot.surfaces !== "object") {
    throw new ModelLoadError(`person snapshot ${path} must hold a "surfaces" object`);
  }
  for (const [surface, candidates] of Object.entries(snapshot.surfaces)) {
    if (!Array.isArray(candidates) || candidates.length === 0) {
      throw new ModelLoadError(`surface ${surface} has no candidates`);
    }
    for (const c of candidates) {
      if (typeof c.kb_id !== "string" || typeof c.frequency !== "number" || c.frequency <= 0) {
        throw new ModelLoadError(`surface ${surface} has an invalid candidate`);
      }
    }
  }
  return snapshot;
}

/** Candidate selection over a frozen person snapshot.
 *
 * The best candidate is the most frequent one (ties by kb_id); its
 * log-likelihood is the log of its frequency share among all candidates for
 * the surface, so unambiguous surfaces score exactly 0.
 */
export class SnapshotLinker implements EntityLinker {
  constructor(private snapshot: PersonSnapshot) {}

  link(surface: string): LinkResult | null {
    const candidates = this.snapshot.surfaces[surface];
    if (!candidates) return null;
    const total = candidates.reduce((acc, c) => acc + c.frequency, 0);
    const best = [...candidates].sort(
      (a, b) => b.frequency - a.frequency || (a.kb_id < b.kb_id ? -1 : 1)
    )[0]!;
    return { kbId: best.kb_id, logLikelihood: Math.log(best.frequency / total) };
  }

  surfaces(): string[] {
    return Object.keys(this.snapshot.surfaces);
  }
}
