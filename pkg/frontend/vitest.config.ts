import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    // one test file spawns a real service; keep files sequential
    fileParallelism: false,
    testTimeout: 60_000,
    hookTimeout: 120_000,
  },
});
