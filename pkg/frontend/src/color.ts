/** Score presentation: a green -> gray -> red gradient around the 0.5 verdict line. */

export const THRESHOLD = 0.5;

const GREEN: readonly [number, number, number] = [46, 160, 67];
const GRAY: readonly [number, number, number] = [130, 130, 130];
const RED: readonly [number, number, number] = [207, 34, 46];

function lerp(a: readonly number[], b: readonly number[], t: number): string {
  const ch = a.map((v, i) => Math.round(v + ((b[i] ?? 0) - v) * t));
  return `rgb(${ch[0]}, ${ch[1]}, ${ch[2]})`;
}

/** Map a maliciousness score in [0, 1] onto the gradient. */
export function scoreColor(score: number): string {
  const s = Math.min(1, Math.max(0, score));
  if (s <= THRESHOLD) {
    return lerp(GREEN, GRAY, s / THRESHOLD);
  }
  return lerp(GRAY, RED, (s - THRESHOLD) / (1 - THRESHOLD));
}

/** Fixed precision for every score shown in the UI. */
export function formatScore(score: number): string {
  return score.toFixed(3);
}

export const NEUTRAL_COLOR = scoreColor(THRESHOLD);
