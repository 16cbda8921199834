/** Boots the real play server once for the whole test run.
 *
 * The server binds port 0 and announces the resolved address on stderr;
 * tests receive it through vitest's provide/inject channel.
 */

import { spawn } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";

const READY = /serving on (http:\/\/[\d.]+:\d+)\//;

// eslint-disable-next-line @typescript-eslint/no-explicit-any
export default async function setup(ctx: any): Promise<() => void> {
  const here = path.dirname(fileURLToPath(import.meta.url));
  const repoRoot = path.resolve(here, "..", "..");

  const child = spawn(
    "python3",
    ["-m", "envlab.cli", "serve", "--host", "127.0.0.1", "--port", "0"],
    {
      cwd: repoRoot,
      env: { ...process.env, PYTHONUNBUFFERED: "1" },
      stdio: ["ignore", "pipe", "pipe"],
    },
  );

  const base = await new Promise<string>((resolve, reject) => {
    let output = "";
    let settled = false;
    const timer = setTimeout(() => {
      if (!settled) {
        settled = true;
        reject(new Error(`play server not ready after 15s: ${output}`));
      }
    }, 15_000);
    const scan = (chunk: Buffer): void => {
      output += chunk.toString();
      const match = READY.exec(output);
      if (match && !settled) {
        settled = true;
        clearTimeout(timer);
        resolve(match[1]!);
      }
    };
    child.stdout!.on("data", scan);
    child.stderr!.on("data", scan);
    child.on("exit", (code) => {
      if (!settled) {
        settled = true;
        clearTimeout(timer);
        reject(new Error(`play server exited early (${code}): ${output}`));
      }
    });
  });

  ctx.provide("baseUrl", base);

  return () => {
    child.kill("SIGTERM");
  };
}
