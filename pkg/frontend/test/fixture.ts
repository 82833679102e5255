/** Spawns the real triage service as a child process for end-to-end tests. */

import { spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { createServer } from "node:net";

export interface ServiceFixture {
  baseUrl: string;
  stop(): Promise<void>;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.once("error", reject);
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        server.close();
        reject(new Error("no port assigned"));
        return;
      }
      const port = address.port;
      server.close(() => resolve(port));
    });
  });
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function startService(minNewDecisions = 5): Promise<ServiceFixture> {
  const stateDir = mkdtempSync(join(tmpdir(), "patrol-ui-"));
  const port = await freePort();
  const baseUrl = `http://127.0.0.1:${port}`;
  const child = spawn(
    "patrol",
    [
      "serve",
      "--state",
      stateDir,
      "--port",
      String(port),
      "--min-new-decisions",
      String(minNewDecisions),
    ],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  child.stderr.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });
  let exited = false;
  child.once("exit", () => {
    exited = true;
  });

  // the service trains its initial model before it starts listening
  const deadline = Date.now() + 60_000;
  for (;;) {
    if (exited) throw new Error(`service exited during startup:\n${stderr}`);
    try {
      const res = await fetch(`${baseUrl}/model`);
      if (res.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error(`service never became ready:\n${stderr}`);
    }
    await sleep(200);
  }

  return {
    baseUrl,
    stop: () =>
      new Promise<void>((resolve) => {
        const finish = () => {
          rmSync(stateDir, { recursive: true, force: true });
          resolve();
        };
        if (exited) {
          finish();
          return;
        }
        const killTimer = setTimeout(() => child.kill("SIGKILL"), 5_000);
        child.once("exit", () => {
          clearTimeout(killTimer);
          finish();
        });
        child.kill("SIGTERM");
      }),
  };
}
