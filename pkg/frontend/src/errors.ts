/** Errors surfaced from the core CLI, keyed by its exit-code taxonomy. */

export class QwalkError extends Error {}

/** Exit code 1: the run configuration was rejected; the message names the offending key. */
export class QwalkConfigError extends QwalkError {}

/** Exit code 2: a numeric failure during the run. */
export class QwalkRuntimeError extends QwalkError {}

/** Exit code 3: the core failed to write its outputs. */
export class QwalkIoError extends QwalkError {}

export function errorForExit(code: number | null, stderr: string): QwalkError {
  const message = stderr.trim() || `qwalk exited with code ${code}`;
  switch (code) {
    case 1:
      return new QwalkConfigError(message);
    case 2:
      return new QwalkRuntimeError(message);
    case 3:
      return new QwalkIoError(message);
    default:
      return new QwalkError(message);
  }
}
