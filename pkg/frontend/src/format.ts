// Display rounding for numbers received from the service. Nothing here
// computes; it only turns service-provided floats into fixed-width text.

export function fmtValue(x: number): string {
  const s = x.toFixed(4);
  return s === "-0.0000" ? "0.0000" : s;
}

export function fmtAmplitude(re: number, im: number): string {
  const imPart = im < 0 ? `${fmtValue(im)}i` : `+${fmtValue(im)}i`;
  return `${fmtValue(re)}${imPart}`;
}

export function fmtMillis(ms: number): string {
  return ms >= 100 ? `${Math.round(ms)} ms` : `${ms.toFixed(1)} ms`;
}

/** Basis label for row `i` of a probability vector over `n` qubits. */
export function basisLabel(i: number, n: number): string {
  return i.toString(2).padStart(n, "0");
}
