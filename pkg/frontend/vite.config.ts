import { defineConfig } from "vitest/config";

// dev server proxies /api to a locally running `nvhdrill serve`
export default defineConfig({
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8700",
    },
  },
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // integration tests talk to a spawned service on another port
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ["tests/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
