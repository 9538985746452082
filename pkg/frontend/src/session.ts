/**
 * Session classes mirroring the core walk models.  Every method delegates to
 * one CLI invocation; no amplitude arithmetic happens on this side.  State
 * snapshots carry the run configuration they came from, so plotting re-drives
 * the core with the plot sinks attached.
 */

import { existsSync, readdirSync } from "node:fs";
import { join, resolve } from "node:path";

import { QwalkConfigError } from "./errors.js";
import { GraphHandle } from "./graphs.js";
import {
  makeRunDir,
  readDocument,
  runSimulate,
  SnapshotRecord,
} from "./runner.js";
import { arcKet, StateExpr, vertexKet } from "./state.js";

export type RangeSpec = number | [number, number, number];

interface RunProvenance {
  /** Config without its outputs entry; re-used verbatim for plot runs. */
  baseConfig: Record<string, unknown>;
  runDir: string;
}

export class StateList {
  constructor(
    readonly snapshots: SnapshotRecord[],
    readonly provenance: RunProvenance,
  ) {}

  get length(): number {
    return this.snapshots.length;
  }
}

export class DistributionList extends Array<number[]> {
  provenance?: RunProvenance;

  static fromStates(states: StateList): DistributionList {
    const list = new DistributionList();
    for (const snap of states.snapshots) {
      list.push([...snap.p]);
    }
    list.provenance = states.provenance;
    return list;
  }
}

abstract class WalkSession {
  protected constructor(
    protected readonly graph: GraphHandle,
    protected readonly modelEntries: Record<string, unknown>,
    protected readonly model: "ctqw" | "coined",
  ) {}

  simulate(options: { range: RangeSpec; state: StateExpr }): StateList {
    const runDir = makeRunDir();
    const config: Record<string, unknown> = {
      schema: 1,
      model: this.model,
      graph: this.graph.configEntry(runDir),
      ...this.modelEntries,
      initial_state: options.state.terms,
      range: options.range,
      engine: "serial",
    };
    runSimulate({ ...config, outputs: [{ type: "json", path: "out.json" }] }, runDir);
    const doc = readDocument(runDir, "out.json");
    return new StateList(doc.snapshots, { baseConfig: config, runDir });
  }

  probability_distribution(states: StateList): DistributionList {
    return DistributionList.fromStates(states);
  }
}

export interface ContinuousTimeOptions {
  graph: GraphHandle | number[][];
  gamma: number;
  time: number;
  marked?: number[];
}

export class ContinuousTime extends WalkSession {
  constructor(options: ContinuousTimeOptions) {
    const graph = Array.isArray(options.graph)
      ? GraphHandle.adjacency(options.graph)
      : options.graph;
    const entries: Record<string, unknown> = {
      gamma: options.gamma,
      delta_t: options.time,
    };
    if (options.marked !== undefined) {
      entries.marked = options.marked;
    }
    super(graph, entries, "ctqw");
  }

  ket(v: number): StateExpr {
    return vertexKet(v);
  }
}

export interface CoinedOptions {
  shift?: string;
  coin?: string;
  marked?: number[];
  marked_policy?: string;
}

export class Coined extends WalkSession {
  constructor(graph: GraphHandle | number[][], options: CoinedOptions = {}) {
    const handle = Array.isArray(graph) ? GraphHandle.adjacency(graph) : graph;
    const entries: Record<string, unknown> = {};
    if (options.shift !== undefined) entries.shift = options.shift;
    if (options.coin !== undefined) entries.coin = options.coin;
    if (options.marked !== undefined) entries.marked = options.marked;
    if (options.marked_policy !== undefined) entries.marked_policy = options.marked_policy;
    super(handle, entries, "coined");
  }

  ket(v: number, w: number): StateExpr {
    return arcKet(v, w);
  }
}

export interface PlotOptions {
  animate?: boolean;
  outDir?: string;
  snapshot?: number;
}

/**
 * Write plot artifacts for a list of distributions: one SVG when
 * animate=false (the last snapshot unless `snapshot` selects another), or one
 * frame file per snapshot when animate=true.  Returns the written paths.
 */
export function plot_probability_distribution(
  probs: DistributionList,
  options: PlotOptions = {},
): string[] {
  if (!(probs instanceof DistributionList) || probs.length === 0) {
    throw new QwalkConfigError("plot_probability_distribution needs a non-empty distribution list");
  }
  const provenance = probs.provenance;
  if (!provenance) {
    throw new QwalkConfigError("distributions carry no run provenance; use probability_distribution");
  }
  const outDir = resolve(options.outDir ?? ".");
  const animate = options.animate ?? false;
  const sink = animate
    ? { type: "frames", dir: "frames" }
    : { type: "svg", path: "distribution.svg", snapshot: options.snapshot ?? -1 };
  // the re-run config goes into a scratch dir so outDir only receives plots
  runSimulate({ ...provenance.baseConfig, outputs: [sink] }, outDir, makeRunDir());
  if (!animate) {
    return [join(outDir, "distribution.svg")];
  }
  const framesDir = join(outDir, "frames");
  if (!existsSync(framesDir)) {
    return [];
  }
  return readdirSync(framesDir)
    .sort()
    .map((name) => join(framesDir, name));
}
