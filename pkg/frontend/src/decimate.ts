/** Point decimation for rendering, mirroring the server's downsampling rule:
 * at most `cap` points, both endpoints kept, uniform stride in between. */

export const RENDER_POINT_CAP = 2000;

export function decimateIndices(n: number, cap: number = RENDER_POINT_CAP): number[] {
  if (n <= cap) {
    return Array.from({ length: n }, (_, i) => i);
  }
  const stride = Math.ceil(n / cap);
  const indices: number[] = [];
  for (let i = 0; i < n; i += stride) {
    indices.push(i);
  }
  if (indices[indices.length - 1] !== n - 1) {
    indices[indices.length - 1] = n - 1;
  }
  return indices;
}

export function decimate<T>(points: T[], cap: number = RENDER_POINT_CAP): T[] {
  return decimateIndices(points.length, cap).map((i) => points[i]);
}
