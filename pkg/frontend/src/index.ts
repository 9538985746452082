/**
 * Scripting frontend over the qwalk core.
 *
 * The core is consumed exclusively through its command line interface and
 * file formats; this package holds no numeric logic.  A typical session:
 *
 *   const ctqw = new ContinuousTime({ graph: Cycle(101), gamma: 0.35, time: 0.03 });
 *   const a = 1 / Math.sqrt(2);
 *   const psi0 = ctqw.ket(2).plus(ctqw.ket(4).times(0, 1)).times(a);
 *   const states = ctqw.simulate({ range: 21, state: psi0 });
 *   const probs = ctqw.probability_distribution(states);
 *   plot_probability_distribution(probs, { animate: true, outDir: "frames-out" });
 */

export { ContinuousTime, Coined, plot_probability_distribution } from "./session.js";
export { Graph, Cycle, Line, Grid, Hypercube } from "./graphs.js";

export type { ContinuousTimeOptions, CoinedOptions, PlotOptions, RangeSpec, StateList, DistributionList } from "./session.js";
export type { StateExpr } from "./state.js";
export type { GraphHandle } from "./graphs.js";
export type { QwalkError, QwalkConfigError, QwalkRuntimeError, QwalkIoError } from "./errors.js";
