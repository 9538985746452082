/**
 * Initial-state expressions.  A StateExpr is a bag of (basis label, re, im)
 * coefficient terms — the exact shape the run configuration takes.  Assembly,
 * duplicate merging and normalization checking all happen in the core.
 */

export type StateTerm = [string, number, number];

export class StateExpr {
  constructor(readonly terms: StateTerm[]) {}

  /** Sum of two expressions: the terms are concatenated; the core merges them. */
  plus(other: StateExpr): StateExpr {
    return new StateExpr([...this.terms, ...other.terms]);
  }

  /** Multiply every term coefficient by the complex scalar re + im*i. */
  times(re: number, im = 0): StateExpr {
    return new StateExpr(
      this.terms.map(([label, a, b]) => [label, a * re - b * im, a * im + b * re]),
    );
  }
}

export function vertexKet(v: number): StateExpr {
  return new StateExpr([[`v:${v}`, 1, 0]]);
}

export function arcKet(v: number, w: number): StateExpr {
  return new StateExpr([[`a:${v},${w}`, 1, 0]]);
}
