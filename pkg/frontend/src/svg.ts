/** Deterministic SVG helpers: pure string building, no timestamps or randomness. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const MARGIN: Margin = { top: 28, right: 24, bottom: 46, left: 64 };

export interface LinearScale {
  kind: "linear" | "log10";
  domainMin: number;
  domainMax: number;
  rangeMin: number;
  rangeMax: number;
}

export function makeScale(
  values: number[],
  rangeMin: number,
  rangeMax: number,
  kind: "linear" | "log10" = "linear",
  padFraction = 0.06,
): LinearScale {
  const mapped = kind === "log10" ? values.map(Math.log10) : values;
  let lo = Math.min(...mapped);
  let hi = Math.max(...mapped);
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return { kind, domainMin: lo - pad, domainMax: hi + pad, rangeMin, rangeMax };
}

export function applyScale(scale: LinearScale, value: number): number {
  const v = scale.kind === "log10" ? Math.log10(value) : value;
  const t = (v - scale.domainMin) / (scale.domainMax - scale.domainMin);
  return scale.rangeMin + t * (scale.rangeMax - scale.rangeMin);
}

export function invertScale(scale: LinearScale, pixel: number): number {
  const t = (pixel - scale.rangeMin) / (scale.rangeMax - scale.rangeMin);
  const v = scale.domainMin + t * (scale.domainMax - scale.domainMin);
  return scale.kind === "log10" ? 10 ** v : v;
}

export function px(value: number): string {
  return value.toFixed(2);
}

export function el(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(" ");
  if (children.length === 0 && text === undefined) {
    return `<${name} ${attrText}/>`;
  }
  const body = text !== undefined ? escapeText(text) : children.join("");
  return `<${name} ${attrText}>${body}</${name}>`;
}

function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function ticks(scale: LinearScale, count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i++) {
    const v = scale.domainMin + ((scale.domainMax - scale.domainMin) * i) / count;
    out.push(scale.kind === "log10" ? 10 ** v : v);
  }
  return out;
}

export function fmtTick(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e5 || magnitude < 1e-3) return value.toExponential(1);
  if (magnitude >= 100) return value.toFixed(0);
  if (magnitude >= 1) return value.toFixed(1);
  return value.toFixed(3);
}

export function axes(
  xScale: LinearScale,
  yScale: LinearScale,
  xLabel: string,
  yLabel: string,
  width: number,
  height: number,
): string {
  const parts: string[] = [];
  const y0 = height - MARGIN.bottom;
  parts.push(
    el("line", {
      x1: px(MARGIN.left), y1: px(y0), x2: px(width - MARGIN.right), y2: px(y0),
      stroke: "#333", "stroke-width": 1,
    }),
    el("line", {
      x1: px(MARGIN.left), y1: px(MARGIN.top), x2: px(MARGIN.left), y2: px(y0),
      stroke: "#333", "stroke-width": 1,
    }),
  );
  for (const t of ticks(xScale)) {
    const x = applyScale(xScale, t);
    parts.push(
      el("line", { x1: px(x), y1: px(y0), x2: px(x), y2: px(y0 + 4), stroke: "#333" }),
      el("text", { x: px(x), y: px(y0 + 18), "text-anchor": "middle", "font-size": 11 }, [], fmtTick(t)),
    );
  }
  for (const t of ticks(yScale)) {
    const y = applyScale(yScale, t);
    parts.push(
      el("line", { x1: px(MARGIN.left - 4), y1: px(y), x2: px(MARGIN.left), y2: px(y), stroke: "#333" }),
      el("text", {
        x: px(MARGIN.left - 7), y: px(y + 4), "text-anchor": "end", "font-size": 11,
      }, [], fmtTick(t)),
    );
  }
  parts.push(
    el("text", {
      x: px((MARGIN.left + width - MARGIN.right) / 2), y: px(height - 8),
      "text-anchor": "middle", "font-size": 12,
    }, [], xLabel),
    el("text", {
      x: 16, y: px((MARGIN.top + height - MARGIN.bottom) / 2), "text-anchor": "middle",
      "font-size": 12, transform: `rotate(-90 16 ${px((MARGIN.top + height - MARGIN.bottom) / 2)})`,
    }, [], yLabel),
  );
  return parts.join("");
}

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#7f7f7f"];

const METHOD_COLOURS: Record<string, string> = {
  pe: "#1f77b4",
  pp: "#ff7f0e",
  bdro: "#2ca02c",
  kl: "#7f7f7f",
  wasserstein: "#8c564b",
};

export function seriesColour(name: string, index: number): string {
  return METHOD_COLOURS[name] ?? PALETTE[index % PALETTE.length];
}

export function legend(entries: Array<{ label: string; colour: string }>, width: number): string {
  const parts: string[] = [];
  entries.forEach((entry, i) => {
    const y = MARGIN.top + 16 * i;
    const x = width - MARGIN.right - 130;
    parts.push(
      el("rect", {
        class: "legend-swatch", x: px(x), y: px(y - 9), width: 10, height: 10, fill: entry.colour,
      }),
      el("text", { x: px(x + 15), y: px(y), "font-size": 11 }, [], entry.label),
    );
  });
  return el("g", { class: "legend" }, parts);
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
