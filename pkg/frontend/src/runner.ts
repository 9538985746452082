/**
 * Process plumbing: every computation is delegated to the core CLI.
 * The binary is resolved from QWALK_BIN, defaulting to `qwalk` on PATH.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { errorForExit } from "./errors.js";

export interface SnapshotRecord {
  k: number;
  t: number;
  p: number[];
}

export interface SimulationDocument {
  schema: number;
  model: string;
  graph: Record<string, unknown>;
  snapshots: SnapshotRecord[];
}

export function qwalkBinary(): string {
  return process.env.QWALK_BIN ?? "qwalk";
}

export function makeRunDir(): string {
  return mkdtempSync(join(tmpdir(), "qwalk-session-"));
}

export function runSimulate(
  config: Record<string, unknown>,
  outDir: string,
  configDir: string = outDir,
): void {
  const configPath = join(configDir, "config.json");
  writeFileSync(configPath, JSON.stringify(config));
  const result = spawnSync(qwalkBinary(), ["simulate", configPath, "--out-dir", outDir], {
    encoding: "utf8",
  });
  if (result.error) {
    throw result.error;
  }
  if (result.status !== 0) {
    throw errorForExit(result.status, result.stderr ?? "");
  }
}

export function readDocument(outDir: string, name: string): SimulationDocument {
  return JSON.parse(readFileSync(join(outDir, name), "utf8")) as SimulationDocument;
}
