import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { ConfigError } from "./errors.js";

export const DEFAULT_LINK_THRESHOLD = -0.2;
export const DEFAULT_BATCH_SIZE = 32;

export interface ModelIds {
  splitter: string;
  ner: string;
  linker: string;
  tsc: string;
}

export interface AdapterConfig {
  models: ModelIds;
  linkThreshold: number;
  batchSize: number;
  device: "cpu" | "cuda";
  assets: { personSnapshot: string; cueLexicon: string };
}

const TOP_KEYS = ["models", "link_threshold", "batch_size", "device", "assets"];
const MODEL_KEYS = ["splitter", "ner", "linker", "tsc"];
const ASSET_KEYS = ["person_snapshot", "cue_lexicon"];

function requireStringMap(raw: unknown, keys: string[], label: string): Record<string, string> {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ConfigError(`${label} must be an object`);
  }
  const record = raw as Record<string, unknown>;
  for (const key of keys) {
    if (typeof record[key] !== "string" || record[key] === "") {
      throw new ConfigError(`${label}.${key} must be a non-empty string`);
    }
  }
  for (const key of Object.keys(record)) {
    if (!keys.includes(key)) throw new ConfigError(`unknown ${label} key ${key}`);
  }
  return record as Record<string, string>;
}

/** Parse an adapter config; relative asset paths resolve against the config's directory. */
export function loadConfig(path: string): AdapterConfig {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (exc) {
    if ((exc as NodeJS.ErrnoException).code === "ENOENT") {
      throw new ConfigError(`config file ${path} does not exist`);
    }
    throw new ConfigError(`config file ${path} is not valid JSON`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ConfigError("config root must be a JSON object");
  }
  const record = raw as Record<string, unknown>;
  for (const key of Object.keys(record)) {
    if (!TOP_KEYS.includes(key)) throw new ConfigError(`unknown config key ${key}`);
  }
  const models = requireStringMap(record.models, MODEL_KEYS, "models");
  const assets = requireStringMap(record.assets, ASSET_KEYS, "assets");

  const threshold = record.link_threshold === undefined ? DEFAULT_LINK_THRESHOLD : record.link_threshold;
  if (typeof threshold !== "number" || Number.isNaN(threshold) || threshold > 0) {
    throw new ConfigError(`link_threshold must be a number <= 0, got ${threshold}`);
  }
  const batchSize = record.batch_size === undefined ? DEFAULT_BATCH_SIZE : record.batch_size;
  if (typeof batchSize !== "number" || !Number.isInteger(batchSize) || batchSize < 1) {
    throw new ConfigError(`batch_size must be an integer >= 1, got ${batchSize}`);
  }
  const device = record.device === undefined ? "cpu" : record.device;
  if (device !== "cpu" && device !== "cuda") {
    throw new ConfigError(`device must be "cpu" or "cuda", got ${device}`);
  }

  const base = dirname(resolve(path));
  return {
    models: models as unknown as ModelIds,
    linkThreshold: threshold,
    batchSize,
    device,
    assets: {
      personSnapshot: resolve(base, assets.person_snapshot as string),
      cueLexicon: resolve(base, assets.cue_lexicon as string),
    },
  };
}
