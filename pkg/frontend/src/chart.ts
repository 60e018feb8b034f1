/** SVG overlay chart: observed counts as dots, model curve as a path.
 * Pure geometry helpers are exported separately so tests can check them
 * without a DOM. */

import { decimateIndices } from "./decimate.js";

export interface ChartGeometry {
  width: number;
  height: number;
  margin: number;
}

export interface XY {
  x: number;
  y: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = { width: 640, height: 320, margin: 36 };

export interface Extent {
  tMin: number;
  tMax: number;
  vMin: number;
  vMax: number;
}

export function overlayExtent(
  t: number[],
  seriesA: number[],
  seriesB: number[],
): Extent {
  const all = seriesA.concat(seriesB);
  let vMin = Math.min(...all);
  let vMax = Math.max(...all);
  if (vMin === vMax) {
    vMin -= 1;
    vMax += 1;
  }
  return { tMin: t[0], tMax: t[t.length - 1], vMin, vMax };
}

export function project(
  t: number,
  v: number,
  extent: Extent,
  geom: ChartGeometry,
): XY {
  const spanT = extent.tMax - extent.tMin || 1;
  const spanV = extent.vMax - extent.vMin || 1;
  const usableW = geom.width - 2 * geom.margin;
  const usableH = geom.height - 2 * geom.margin;
  return {
    x: geom.margin + ((t - extent.tMin) / spanT) * usableW,
    y: geom.height - geom.margin - ((v - extent.vMin) / spanV) * usableH,
  };
}

export function curvePath(
  t: number[],
  values: number[],
  extent: Extent,
  geom: ChartGeometry,
): string {
  const idx = decimateIndices(t.length);
  return idx
    .map((i, k) => {
      const p = project(t[i], values[i], extent, geom);
      return `${k === 0 ? "M" : "L"}${p.x.toFixed(2)},${p.y.toFixed(2)}`;
    })
    .join(" ");
}

export function renderedPointCount(n: number): number {
  return decimateIndices(n).length;
}

const SVG_NS = "http://www.w3.org/2000/svg";

/** Draw the observed/model overlay into `host`, replacing previous content.
 * An empty overlay renders a placeholder message instead of axes. */
export function renderOverlay(
  host: HTMLElement,
  t: number[],
  observed: number[],
  predicted: number[],
  whatIf?: { t: number[]; values: number[] },
  geom: ChartGeometry = DEFAULT_GEOMETRY,
): void {
  host.textContent = "";
  if (t.length === 0) {
    const placeholder = document.createElement("p");
    placeholder.className = "placeholder";
    placeholder.textContent = "No data yet: upload a series to begin.";
    host.appendChild(placeholder);
    return;
  }
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${geom.width} ${geom.height}`);
  svg.setAttribute("class", "overlay-chart");

  const whatIfValues = whatIf ? whatIf.values : [];
  const extent = overlayExtent(t, observed, predicted.concat(whatIfValues));

  if (predicted.length === t.length && predicted.length > 0) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", curvePath(t, predicted, extent, geom));
    path.setAttribute("class", "model-curve");
    path.setAttribute("fill", "none");
    svg.appendChild(path);
  }
  if (whatIf && whatIf.t.length > 0) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", curvePath(whatIf.t, whatIf.values, extent, geom));
    path.setAttribute("class", "whatif-curve");
    path.setAttribute("fill", "none");
    path.setAttribute("stroke-dasharray", "4 3");
    svg.appendChild(path);
  }
  for (const i of decimateIndices(t.length)) {
    const p = project(t[i], observed[i], extent, geom);
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", p.x.toFixed(2));
    dot.setAttribute("cy", p.y.toFixed(2));
    dot.setAttribute("r", "2.5");
    dot.setAttribute("class", "observed-dot");
    svg.appendChild(dot);
  }
  host.appendChild(svg);
}
