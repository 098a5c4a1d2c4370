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

export interface ReturnRow {
  week: number;
  method: string;
  epsilon: number;
  weeklyReturn: number;
  raw: { week: string; epsilon: string; weeklyReturn: string };
}

export function returnRows(table: CsvTable, source: string): ReturnRow[] {
  const cols = requireColumns(table, ["week", "method", "epsilon", "weekly_return"], source);
  return table.rows.map((cells) => ({
    week: toNumber(cells[cols.get("week")!], "week", source),
    method: cells[cols.get("method")!],
    epsilon: toNumber(cells[cols.get("epsilon")!], "epsilon", source),
    weeklyReturn: toNumber(cells[cols.get("weekly_return")!], "weekly_return", source),
    raw: {
      week: cells[cols.get("week")!],
      epsilon: cells[cols.get("epsilon")!],
      weeklyReturn: cells[cols.get("weekly_return")!],
    },
  }));
}

export interface ReturnsOptions {
  width?: number;
  height?: number;
}

/**
 * Cumulative-return lines: one line per (method, epsilon), the value at
 * week ``w`` being the running product of ``1 + weekly_return`` over the
 * test weeks up to ``w``.  A vertical dotted line marks the start of the
 * first test week.  Point markers carry the verbatim weekly returns.
 */
export function renderCumulativeReturns(rows: ReturnRow[], options: ReturnsOptions = {}): string {
  const width = options.width ?? 720;
  const height = options.height ?? 420;
  if (rows.length === 0) {
    throw new Error("no return rows to plot");
  }

  const keys = [...new Set(rows.map((r) => `${r.method}|${r.raw.epsilon}`))].sort();
  const groups = keys.map((key) => {
    const [method, epsilon] = key.split("|");
    const series = rows
      .filter((r) => r.method === method && r.raw.epsilon === epsilon)
      .sort((a, b) => a.week - b.week);
    let level = 1.0;
    const cumulative = series.map((r) => {
      level *= 1.0 + r.weeklyReturn;
      return level;
    });
    return { method, epsilon, series, cumulative };
  });

  const firstTestWeek = Math.min(...rows.map((r) => r.week));
  const allWeeks = rows.map((r) => r.week);
  const allLevels = groups.flatMap((g) => g.cumulative).concat([1.0]);
  const xScale = makeScale(allWeeks.concat([firstTestWeek]), MARGIN.left, width - MARGIN.right);
  const yScale = makeScale(allLevels, height - MARGIN.bottom, MARGIN.top);

  const body: string[] = [axes(xScale, yScale, "week", "cumulative return", width, height)];

  const markX = applyScale(xScale, firstTestWeek);
  body.push(
    el("line", {
      class: "test-start",
      x1: px(markX), y1: px(MARGIN.top), x2: px(markX), y2: px(height - MARGIN.bottom),
      stroke: "#555", "stroke-width": 1, "stroke-dasharray": "4 3",
      "data-week": String(firstTestWeek),
    }),
  );

  groups.forEach((group, gi) => {
    const colour = seriesColour(group.method, gi);
    const points = group.series.map((row, i) => {
      const x = applyScale(xScale, row.week);
      const y = applyScale(yScale, group.cumulative[i]);
      return { row, x, y, level: group.cumulative[i] };
    });
    const parts: string[] = [
      el("polyline", {
        points: points.map((p) => `${px(p.x)},${px(p.y)}`).join(" "),
        fill: "none",
        stroke: colour,
        "stroke-width": 1.4,
      }),
    ];
    for (const p of points) {
      parts.push(
        el("circle", {
          class: "marker",
          cx: px(p.x),
          cy: px(p.y),
          r: 1.6,
          fill: colour,
          "data-method": group.method,
          "data-epsilon": p.row.raw.epsilon,
          "data-week": p.row.raw.week,
          "data-return": p.row.raw.weeklyReturn,
          "data-cumulative": p.level.toPrecision(12),
        }),
      );
    }
    body.push(el("g", { class: "series", "data-method": group.method, "data-epsilon": group.epsilon }, parts));
  });

  body.push(
    legend(
      groups.map((g, i) => ({
        label: `${g.method} (${g.epsilon})`,
        colour: seriesColour(g.method, i),
      })),
      width,
    ),
  );
  return svgDocument(width, height, body);
}
