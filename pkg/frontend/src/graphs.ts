/**
 * Graph inputs for a session: either a named family (serialized straight
 * into the run configuration) or a square adjacency array (transcribed to a
 * Matrix Market file so the core performs all structural validation itself).
 */

import { writeFileSync } from "node:fs";
import { join } from "node:path";

export type FamilyDescriptor =
  | { family: "cycle"; n: number }
  | { family: "line"; n: number }
  | { family: "grid"; nx: number; ny: number; periodic: boolean }
  | { family: "hypercube"; dim: number };

export class GraphHandle {
  private constructor(
    readonly descriptor: FamilyDescriptor | null,
    readonly adjacency: number[][] | null,
  ) {}

  static family(descriptor: FamilyDescriptor): GraphHandle {
    return new GraphHandle(descriptor, null);
  }

  static adjacency(matrix: number[][]): GraphHandle {
    if (!Array.isArray(matrix) || matrix.length === 0) {
      throw new TypeError("adjacency must be a non-empty square array");
    }
    for (const row of matrix) {
      if (!Array.isArray(row) || row.length !== matrix.length) {
        throw new TypeError("adjacency must be a non-empty square array");
      }
    }
    return new GraphHandle(null, matrix.map((row) => [...row]));
  }

  /** Resolve to the "graph" entry of a run configuration, writing any
   *  adjacency file into the run directory. */
  configEntry(runDir: string): Record<string, unknown> {
    if (this.descriptor !== null) {
      return { ...this.descriptor };
    }
    const matrix = this.adjacency!;
    const n = matrix.length;
    const entries: Array<[number, number, number]> = [];
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) {
        if (matrix[i][j] !== 0) {
          entries.push([i + 1, j + 1, matrix[i][j]]);
        }
      }
    }
    const lines = [
      "%%MatrixMarket matrix coordinate real general",
      `${n} ${n} ${entries.length}`,
      ...entries.map(([i, j, v]) => `${i} ${j} ${v}`),
    ];
    const path = join(runDir, "adjacency.mtx");
    writeFileSync(path, lines.join("\n") + "\n");
    return { file: path, format: "mtx" };
  }
}

export function Graph(adjacency: number[][]): GraphHandle {
  return GraphHandle.adjacency(adjacency);
}

export function Cycle(n: number): GraphHandle {
  return GraphHandle.family({ family: "cycle", n });
}

export function Line(n: number): GraphHandle {
  return GraphHandle.family({ family: "line", n });
}

export function Grid(nx: number, ny: number, periodic = true): GraphHandle {
  return GraphHandle.family({ family: "grid", nx, ny, periodic });
}

export function Hypercube(dim: number): GraphHandle {
  return GraphHandle.family({ family: "hypercube", dim });
}
