import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { get } from "node:http";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface LiveServer {
  baseUrl: string;
  stop(): void;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const addr = srv.address();
      if (addr === null || typeof addr === "string") {
        reject(new Error("no port"));
        return;
      }
      srv.close(() => resolve(addr.port));
    });
    srv.on("error", reject);
  });
}

// small box scenario with one planted hot band so drill-down has a target
const DATASET_SPEC = {
  seed: 11,
  resolution: 6,
  n_harmonics: 60,
  base_level_db: 70.0,
  noise_db: 1.0,
  limit_db: 95.0,
  hotspots: [
    {
      region: "BOTTOM",
      band_lo_hz: 500.0,
      band_hi_hz: 500.0,
      target_total_excess_db: 3.0,
      area_fraction: 0.5,
    },
  ],
};

/**
 * Generate a small dataset with the CLI and serve it on a free port.
 * Readiness is polled on /dataset/meta; stop() kills the child.
 */
export async function startServer(): Promise<LiveServer> {
  const dir = mkdtempSync(join(tmpdir(), "nvhdrill-ui-"));
  const specPath = join(dir, "spec.json");
  writeFileSync(specPath, JSON.stringify(DATASET_SPEC));

  const synth = spawnSync("nvhdrill", ["synth", specPath, join(dir, "ds")], {
    encoding: "utf8",
  });
  if (synth.status !== 0) {
    throw new Error(`synth failed: ${synth.stderr || synth.stdout}`);
  }

  const port = await freePort();
  const child: ChildProcess = spawn(
    "nvhdrill",
    ["serve", join(dir, "ds", "manifest.json"), "--port", String(port)],
    { stdio: "ignore" },
  );
  const baseUrl = `http://127.0.0.1:${port}/api/v1`;

  // poll over node:http; the DOM fetch would log every refused connect
  const up = (url: string) =>
    new Promise<boolean>((resolve) => {
      get(url, (res) => {
        res.resume();
        resolve(res.statusCode === 200);
      }).on("error", () => resolve(false));
    });

  const deadline = Date.now() + 60_000;
  while (!(await up(`${baseUrl}/dataset/meta`))) {
    if (Date.now() > deadline) {
      child.kill();
      throw new Error("service did not come up in time");
    }
    await new Promise((r) => setTimeout(r, 250));
  }

  return {
    baseUrl,
    stop: () => {
      child.kill();
    },
  };
}
