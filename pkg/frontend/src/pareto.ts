import { CsvTable, requireColumns, toNumber } from "./csv.js";
import {
  MARGIN,
  applyScale,
  axes,
  document as svgDocument,
  el,
  legend,
  makeScale,
  px,
  seriesColour,
} from "./svg.js";

export interface SummaryRow {
  method: string;
  epsilon: number;
  oosMean: number;
  oosVar: number;
  onPareto: boolean;
  /** verbatim CSV strings, echoed into the marker data attributes */
  raw: { epsilon: string; mean: string; variance: string };
}

export function summaryRows(table: CsvTable, source: string): SummaryRow[] {
  const cols = requireColumns(table, ["method", "epsilon", "oos_mean", "oos_var", "on_pareto"], source);
  return table.rows.map((cells) => ({
    method: cells[cols.get("method")!],
    epsilon: toNumber(cells[cols.get("epsilon")!], "epsilon", source),
    oosMean: toNumber(cells[cols.get("oos_mean")!], "oos_mean", source),
    oosVar: toNumber(cells[cols.get("oos_var")!], "oos_var", source),
    onPareto: cells[cols.get("on_pareto")!] === "true",
    raw: {
      epsilon: cells[cols.get("epsilon")!],
      mean: cells[cols.get("oos_mean")!],
      variance: cells[cols.get("oos_var")!],
    },
  }));
}

export interface ParetoOptions {
  width?: number;
  height?: number;
  annotate?: number[];
}

/**
 * Mean-variance scatter with one series per method.  Markers are filled
 * when the point lies on the Pareto frontier per the summary CSV; no
 * statistics are recomputed here.  Each marker carries the verbatim CSV
 * values as data attributes.
 */
export function renderPareto(rows: SummaryRow[], options: ParetoOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 440;
  const annotate = options.annotate ?? [];
  if (rows.length === 0) {
    throw new Error("no summary rows to plot");
  }

  const xScale = makeScale(rows.map((r) => r.oosMean), MARGIN.left, width - MARGIN.right);
  const yScale = makeScale(rows.map((r) => r.oosVar), height - MARGIN.bottom, MARGIN.top);

  const methods = [...new Set(rows.map((r) => r.method))].sort();
  const body: string[] = [axes(xScale, yScale, "out-of-sample mean", "out-of-sample variance", width, height)];

  methods.forEach((method, mi) => {
    const colour = seriesColour(method, mi);
    const series = rows
      .filter((r) => r.method === method)
      .sort((a, b) => a.epsilon - b.epsilon);
    const path = series
      .map((r) => `${px(applyScale(xScale, r.oosMean))},${px(applyScale(yScale, r.oosVar))}`)
      .join(" ");
    const parts: string[] = [
      el("polyline", { points: path, fill: "none", stroke: colour, "stroke-width": 1, opacity: 0.45 }),
    ];
    for (const row of series) {
      const cx = applyScale(xScale, row.oosMean);
      const cy = applyScale(yScale, row.oosVar);
      parts.push(
        el("circle", {
          class: "marker",
          cx: px(cx),
          cy: px(cy),
          r: 4.5,
          fill: row.onPareto ? colour : "#ffffff",
          stroke: colour,
          "stroke-width": 1.5,
          "data-method": row.method,
          "data-epsilon": row.raw.epsilon,
          "data-m": row.raw.mean,
          "data-v": row.raw.variance,
          "data-pareto": String(row.onPareto),
        }),
      );
      const annotated = annotate.some((eps) => Math.abs(eps - row.epsilon) <= 1e-12 + 1e-6 * Math.abs(eps));
      if (annotated) {
        parts.push(
          el("text", {
            class: "annotation",
            x: px(cx + 6),
            y: px(cy - 6),
            "font-size": 10,
            fill: colour,
          }, [], `eps=${row.raw.epsilon}`),
        );
      }
    }
    body.push(el("g", { class: "series", "data-method": method }, parts));
  });

  body.push(legend(methods.map((m, i) => ({ label: m, colour: seriesColour(m, i) })), width));
  return svgDocument(width, height, body);
}
