import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // the live suite talks to the local service on an ephemeral port
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ["test/**/*.test.ts"],
    testTimeout: 60_000,
    hookTimeout: 60_000,
    // the live suite drives one shared server session; keep files serial
    fileParallelism: false,
  },
});
