#!/usr/bin/env node
import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { boxplotFigure, convergenceFigure, deltaTraceFigure } from "./figures.js";
import { loadRunDir } from "./loader.js";

const KINDS = ["convergence", "delta_trace", "boxplot"] as const;
type Kind = (typeof KINDS)[number];

export function renderToFile(
  kind: Kind,
  runDirPaths: string[],
  out: string,
  options: { log?: boolean; spaghetti?: boolean } = {},
): void {
  const dirs = runDirPaths.map(loadRunDir);
  let svg: string;
  if (kind === "convergence") {
    svg = convergenceFigure(dirs, options);
  } else if (kind === "delta_trace") {
    svg = deltaTraceFigure(dirs);
  } else {
    svg = boxplotFigure(dirs);
  }
  writeFileSync(out, svg + "\n");
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .command("$0 <kind>", "render a figure from harness run directories", (cmd) =>
      cmd
        .positional("kind", { choices: KINDS, demandOption: true, type: "string" })
        .option("runs", {
          type: "string",
          array: true,
          demandOption: true,
          describe: "one or more experiment output directories",
        })
        .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
        .option("log", { type: "boolean", default: false })
        .option("spaghetti", { type: "boolean", default: false, describe: "overlay per-run curves" }),
    )
    .strict()
    .fail((message, error) => {
      throw error ?? new Error(message);
    })
    .parse();
  renderToFile(args.kind as Kind, args.runs as string[], args.out as string, {
    log: args.log as boolean,
    spaghetti: args.spaghetti as boolean,
  });
  console.log(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((error) => {
      console.error(String(error.message ?? error));
      process.exit(1);
    });
}
