import { mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { SchemaError, parseCsv } from "../src/csv.js";
import { renderCumulativeReturns, returnRows } from "../src/returns.js";
import { run } from "../src/cli.js";

const FIXTURE = new URL("./fixtures/portfolio_returns.csv", import.meta.url).pathname;

function csvOf(rows: Array<[number, string, number, number]>): string {
  return (
    "week,method,epsilon,weekly_return\n" +
    rows.map((r) => r.join(",")).join("\n") +
    "\n"
  );
}

function markers(svg: string): Array<Record<string, string>> {
  const out: Array<Record<string, string>> = [];
  for (const match of svg.matchAll(/<circle class="marker" ([^/]*)\/>/g)) {
    const attrs: Record<string, string> = {};
    for (const pair of match[1].matchAll(/([a-z-]+)="([^"]*)"/g)) {
      attrs[pair[1]] = pair[2];
    }
    out.push(attrs);
  }
  return out;
}

describe("cumulative returns", () => {
  it("constant zero returns give a flat line at 1", () => {
    const rows = returnRows(
      parseCsv(csvOf([[52, "pe", 0.5, 0], [53, "pe", 0.5, 0], [54, "pe", 0.5, 0]])),
      "fixture",
    );
    const ms = markers(renderCumulativeReturns(rows));
    expect(ms).toHaveLength(3);
    for (const m of ms) {
      expect(Number(m["data-cumulative"])).toBeCloseTo(1.0, 12);
    }
    const ys = ms.map((m) => m.cy);
    expect(new Set(ys).size).toBe(1);
  });

  it("a single +10% week steps the level to 1.1", () => {
    const rows = returnRows(
      parseCsv(csvOf([[52, "pe", 0.5, 0], [53, "pe", 0.5, 0.1], [54, "pe", 0.5, 0]])),
      "fixture",
    );
    const ms = markers(renderCumulativeReturns(rows));
    expect(Number(ms[0]["data-cumulative"])).toBeCloseTo(1.0, 12);
    expect(Number(ms[1]["data-cumulative"])).toBeCloseTo(1.1, 12);
    expect(Number(ms[2]["data-cumulative"])).toBeCloseTo(1.1, 12);
  });

  it("marks the start of the first test week with a vertical line", () => {
    const rows = returnRows(
      parseCsv(csvOf([[52, "pe", 0.5, 0.01], [53, "pe", 0.5, -0.01]])),
      "fixture",
    );
    const svg = renderCumulativeReturns(rows);
    const mark = svg.match(/<line class="test-start" ([^/]*)\/>/);
    expect(mark).not.toBeNull();
    expect(mark![1]).toContain('data-week="52"');
    expect(mark![1]).toContain("stroke-dasharray");
  });

  it("renders the pipeline fixture with one line per method and verbatim returns", () => {
    const table = parseCsv(readFileSync(FIXTURE, "utf8"));
    const rows = returnRows(table, FIXTURE);
    const svg = renderCumulativeReturns(rows);
    const methods = new Set(rows.map((r) => r.method));
    for (const method of methods) {
      expect(svg).toContain(`data-method="${method}"`);
    }
    const ms = markers(svg);
    expect(ms.length).toBe(table.rows.length);
    // every weekly return appears verbatim, and the running product checks out
    const cols = table.header;
    const byKey = new Map(
      ms.map((m) => [`${m["data-method"]}|${m["data-epsilon"]}|${m["data-week"]}`, m]),
    );
    const level = new Map<string, number>();
    for (const cells of table.rows) {
      const series = `${cells[cols.indexOf("method")]}|${cells[cols.indexOf("epsilon")]}`;
      const key = `${series}|${cells[cols.indexOf("week")]}`;
      const marker = byKey.get(key);
      expect(marker, key).toBeDefined();
      expect(marker!["data-return"]).toBe(cells[cols.indexOf("weekly_return")]);
      const next = (level.get(series) ?? 1.0) * (1.0 + Number(cells[cols.indexOf("weekly_return")]));
      level.set(series, next);
      expect(Number(marker!["data-cumulative"])).toBeCloseTo(next, 9);
    }
  });

  it("vertical line sits at week 52 for the pipeline fixture", () => {
    const rows = returnRows(parseCsv(readFileSync(FIXTURE, "utf8")), FIXTURE);
    const svg = renderCumulativeReturns(rows);
    expect(svg.match(/<line class="test-start" [^/]*data-week="52"/)).not.toBeNull();
  });

  it("rejects files missing the weekly_return column", () => {
    const bad = parseCsv("week,method,epsilon\n52,pe,0.5\n");
    expect(() => returnRows(bad, "bad.csv")).toThrowError(SchemaError);
    expect(() => returnRows(bad, "bad.csv")).toThrowError(/weekly_return/);
  });

  it("cli renders the fixture deterministically", () => {
    const dir = mkdtempSync(join(tmpdir(), "returns-"));
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    expect(run(["--input", FIXTURE, "--output", out1, "--style", "cumulative-returns"])).toBe(0);
    expect(run(["--input", FIXTURE, "--output", out2, "--style", "cumulative-returns"])).toBe(0);
    const a = readFileSync(out1);
    expect(a.length).toBeGreaterThan(500);
    expect(a.equals(readFileSync(out2))).toBe(true);
  });
});
