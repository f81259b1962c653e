import { describe, expect, it } from "vitest";

import { RuleSplitter } from "../src/splitter.js";

const splitter = new RuleSplitter();

describe("RuleSplitter", () => {
  it("splits on terminal punctuation followed by whitespace", () => {
    const sentences = splitter.split("One ends here. Two asks? Three shouts! Four trails");
    expect(sentences.map((s) => s.text)).toEqual([
      "One ends here.",
      "Two asks?",
      "Three shouts!",
      "Four trails",
    ]);
    expect(sentences.map((s) => s.index)).toEqual([0, 1, 2, 3]);
  });

  it("keeps periods without trailing whitespace inside one sentence", () => {
    const sentences = splitter.split("Version v1.2 shipped to every office today.");
    expect(sentences).toHaveLength(1);
    expect(sentences[0]!.text).toBe("Version v1.2 shipped to every office today.");
  });

  it("treats newlines and runs of spaces as sentence separators", () => {
    const sentences = splitter.split("First.\nSecond.   Third.");
    expect(sentences.map((s) => s.text)).toEqual(["First.", "Second.", "Third."]);
  });

  it("returns no sentences for empty or whitespace-only bodies", () => {
    expect(splitter.split("")).toEqual([]);
    expect(splitter.split("   \n\t ")).toEqual([]);
  });

  it("emits no empty sentence after a trailing terminator", () => {
    const sentences = splitter.split("Only one sentence. ");
    expect(sentences.map((s) => s.text)).toEqual(["Only one sentence."]);
  });
});
