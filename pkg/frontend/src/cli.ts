#!/usr/bin/env node
import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { SchemaError, readCsvFile } from "./csv.js";
import { cvRows, renderCvCurve } from "./cvcurve.js";
import { renderPareto, summaryRows } from "./pareto.js";
import { renderCumulativeReturns, returnRows } from "./returns.js";

export function run(args: string[]): number {
  const argv = yargs(args)
    .option("input", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "bench CSV file(s): summary CSVs for pareto, returns CSV for cumulative-returns, cv table for cv-curve",
    })
    .option("output", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("style", {
      type: "string",
      choices: ["pareto", "cumulative-returns", "cv-curve"] as const,
      demandOption: true,
    })
    .option("annotate", {
      type: "number",
      array: true,
      default: [] as number[],
      describe: "radius values to label on the pareto scatter",
    })
    .option("width", { type: "number" })
    .option("height", { type: "number" })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    const size = { width: argv.width, height: argv.height };
    let svg: string;
    if (argv.style === "pareto") {
      const rows = argv.input.flatMap((path) => summaryRows(readCsvFile(path), path));
      svg = renderPareto(rows, { ...size, annotate: argv.annotate });
    } else if (argv.style === "cumulative-returns") {
      const rows = argv.input.flatMap((path) => returnRows(readCsvFile(path), path));
      svg = renderCumulativeReturns(rows, size);
    } else {
      const rows = argv.input.flatMap((path) => cvRows(readCsvFile(path), path));
      svg = renderCvCurve(rows, size);
    }
    writeFileSync(argv.output, svg);
    console.log(`wrote ${argv.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === `file://${entry}`) {
  process.exit(run(hideBin(process.argv)));
}
