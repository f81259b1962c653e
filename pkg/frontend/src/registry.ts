import type { AdapterConfig } from "./config.js";
import { ModelLoadError } from "./errors.js";
import { GazetteerNer } from "./ner.js";
import { SnapshotLinker, loadSnapshot } from "./linker.js";
import { RuleSplitter } from "./splitter.js";
import { CueLexiconTsc, loadLexicon } from "./tsc.js";

export interface Sentence {
  text: string;
  index: number;
}

export interface SentenceSplitter {
  split(body: string): Sentence[];
}

export interface DetectedSpan {
  start: number;
  end: number;
  surface: string;
}

export interface NerModel {
  detect(sentence: string): DetectedSpan[];
}

export interface LinkResult {
  kbId: string;
  logLikelihood: number;
}

export interface EntityLinker {
  link(surface: string): LinkResult | null;
}

export interface Distribution {
  pNegative: number;
  pNeutral: number;
  pPositive: number;
}

export interface SentimentClassifier {
  classify(sentence: string, span: DetectedSpan): Distribution;
}

export interface Pipeline {
  splitter: SentenceSplitter;
  ner: NerModel;
  linker: EntityLinker;
  tsc: SentimentClassifier;
}

type Factory<T> = (config: AdapterConfig) => T;

const SPLITTERS: Record<string, Factory<SentenceSplitter>> = {
  "rule-splitter-v1": () => new RuleSplitter(),
};

const NER_MODELS: Record<string, Factory<NerModel>> = {
  "gazetteer-ner-v1": (config) =>
    new GazetteerNer(Object.keys(loadSnapshot(config.assets.personSnapshot).surfaces)),
};

const LINKERS: Record<string, Factory<EntityLinker>> = {
  "snapshot-linker-v1": (config) => new SnapshotLinker(loadSnapshot(config.assets.personSnapshot)),
};

const CLASSIFIERS: Record<string, Factory<SentimentClassifier>> = {
  "cue-lexicon-tsc-v1": (config) => new CueLexiconTsc(loadLexicon(config.assets.cueLexicon)),
};

function lookup<T>(table: Record<string, Factory<T>>, id: string, kind: string): Factory<T> {
  const factory = table[id];
  if (!factory) {
    const known = Object.keys(table).sort().join(", ");
    throw new ModelLoadError(`unknown ${kind} model ${id}; available: ${known}`);
  }
  return factory;
}

/** Instantiate the four stage backends named by the config's model ids. */
export function createPipeline(config: AdapterConfig): Pipeline {
  if (config.device !== "cpu") {
    throw new ModelLoadError(`the registered rule backends run on cpu only, got device ${config.device}`);
  }
  return {
    splitter: lookup(SPLITTERS, config.models.splitter, "splitter")(config),
    ner: lookup(NER_MODELS, config.models.ner, "ner")(config),
    linker: lookup(LINKERS, config.models.linker, "linker")(config),
    tsc: lookup(CLASSIFIERS, config.models.tsc, "tsc")(config),
  };
}
