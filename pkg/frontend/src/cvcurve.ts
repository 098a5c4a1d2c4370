import { CsvTable, requireColumns, toNumber } from "./csv.js";
import {
  MARGIN,
  applyScale,
  axes,
  document as svgDocument,
  el,
  makeScale,
  px,
} from "./svg.js";

export interface CvRow {
  epsilon: number;
  cvMean: number;
  cvStd: number;
  feasible: boolean;
  chosen: boolean;
  raw: { epsilon: string; mean: string; std: string };
}

export function cvRows(table: CsvTable, source: string): CvRow[] {
  const cols = requireColumns(table, ["epsilon", "cv_mean", "cv_std", "feasible", "chosen"], source);
  return table.rows.map((cells) => ({
    epsilon: toNumber(cells[cols.get("epsilon")!], "epsilon", source),
    cvMean: cells[cols.get("feasible")!] === "true"
      ? toNumber(cells[cols.get("cv_mean")!], "cv_mean", source)
      : NaN,
    cvStd: cells[cols.get("feasible")!] === "true"
      ? toNumber(cells[cols.get("cv_std")!], "cv_std", source)
      : NaN,
    feasible: cells[cols.get("feasible")!] === "true",
    chosen: cells[cols.get("chosen")!] === "true",
    raw: {
      epsilon: cells[cols.get("epsilon")!],
      mean: cells[cols.get("cv_mean")!],
      std: cells[cols.get("cv_std")!],
    },
  }));
}

/** Cross-validation mean vs radius on a log axis, the chosen radius starred. */
export function renderCvCurve(rows: CvRow[], options: { width?: number; height?: number } = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const usable = rows.filter((r) => r.feasible).sort((a, b) => a.epsilon - b.epsilon);
  if (usable.length === 0) {
    throw new Error("no feasible cross-validation rows to plot");
  }
  const xScale = makeScale(usable.map((r) => r.epsilon), MARGIN.left, width - MARGIN.right, "log10");
  const yScale = makeScale(usable.map((r) => r.cvMean), height - MARGIN.bottom, MARGIN.top);

  const body: string[] = [axes(xScale, yScale, "radius", "cross-validation mean", width, height)];
  const colour = "#1f77b4";
  body.push(
    el("polyline", {
      points: usable
        .map((r) => `${px(applyScale(xScale, r.epsilon))},${px(applyScale(yScale, r.cvMean))}`)
        .join(" "),
      fill: "none",
      stroke: colour,
      "stroke-width": 1.4,
    }),
  );
  for (const row of usable) {
    const cx = applyScale(xScale, row.epsilon);
    const cy = applyScale(yScale, row.cvMean);
    body.push(
      el("circle", {
        class: "marker",
        cx: px(cx),
        cy: px(cy),
        r: row.chosen ? 5 : 3.2,
        fill: row.chosen ? "#d62728" : colour,
        "data-epsilon": row.raw.epsilon,
        "data-mean": row.raw.mean,
        "data-std": row.raw.std,
        "data-chosen": String(row.chosen),
      }),
    );
  }
  return svgDocument(width, height, body);
}
