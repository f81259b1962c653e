import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { runAnnotate } from "./annotate.js";
import { loadConfig } from "./config.js";
import { ConfigError, ModelLoadError } from "./errors.js";

const USAGE = "usage: poliscope-adapter annotate --corpus <jsonl> --out <jsonl> --config <json>";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        corpus: { type: "string" },
        out: { type: "string" },
        config: { type: "string" },
      },
    });
  } catch (exc) {
    process.stderr.write(JSON.stringify({ error: "usage", message: String(exc) }) + "\n");
    return 2;
  }

  const { positionals, values } = parsed;
  if (positionals.length !== 1 || positionals[0] !== "annotate") {
    process.stderr.write(JSON.stringify({ error: "usage", message: USAGE }) + "\n");
    return 2;
  }
  const { corpus, out, config: configPath } = values;
  if (!corpus || !out || !configPath) {
    process.stderr.write(JSON.stringify({ error: "usage", message: USAGE }) + "\n");
    return 2;
  }

  try {
    const config = loadConfig(configPath);
    const summary = runAnnotate(corpus, out, config);
    process.stdout.write(JSON.stringify(summary) + "\n");
    return 0;
  } catch (exc) {
    if (exc instanceof ConfigError || exc instanceof ModelLoadError) {
      process.stderr.write(JSON.stringify({ error: "config", message: exc.message }) + "\n");
      return 2;
    }
    const message = exc instanceof Error ? exc.message : String(exc);
    process.stderr.write(JSON.stringify({ error: "adapter", message }) + "\n");
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
