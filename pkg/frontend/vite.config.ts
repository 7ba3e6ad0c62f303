import { defineConfig } from "vitest/config";

// The bundle is served from the service's root path, so assets must be
// referenced relatively.  During `vite dev` the API lives on another port;
// proxy the service routes there.
export default defineConfig({
  base: "./",
  build: {
    outDir: "dist",
    emptyOutDir: true,
    sourcemap: false,
  },
  server: {
    proxy: {
      "/healthz": "http://127.0.0.1:8000",
      "/layouts": "http://127.0.0.1:8000",
      "/sessions": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
  },
});
