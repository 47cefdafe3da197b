import { defineConfig } from "vitest/config";

// base "./" keeps asset references relative so the build works when the API
// server mounts dist/ under /ui/ as well as from any static host root.
export default defineConfig({
  base: "./",
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8000",
      "/assets": "http://127.0.0.1:8000",
    },
  },
  build: {
    outDir: "dist",
    emptyOutDir: true,
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
  },
});
