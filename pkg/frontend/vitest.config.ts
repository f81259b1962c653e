import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the end-to-end test shells out to the analytics CLI
    testTimeout: 60_000,
  },
});
