/**
 * Fixture generation driver.
 *
 * Usage: node dist/cli.js --out <dir> [--molecule h2|h2o|all]
 */

import { generateFixture } from "./generate";
import { H2_GRID, H2O_GRID, hydrogenMolecule, waterMolecule } from "./molecules";

function parseArgs(argv: string[]): { out: string; molecule: string } {
  let out = "fixtures";
  let molecule = "all";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--out") out = argv[++i];
    else if (argv[i] === "--molecule") molecule = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  return { out, molecule };
}

function main(): number {
  const { out, molecule } = parseArgs(process.argv.slice(2));
  const jobs = [];
  if (molecule === "h2" || molecule === "all") {
    jobs.push(...H2_GRID.map((r) => hydrogenMolecule(r)));
  }
  if (molecule === "h2o" || molecule === "all") {
    jobs.push(...H2O_GRID.map((r) => waterMolecule(r)));
  }
  if (jobs.length === 0) {
    console.error(`unknown molecule ${molecule}`);
    return 2;
  }
  for (const job of jobs) {
    try {
      const result = generateFixture(job, out);
      console.log(
        `${job.name} R=${job.rLabel}: E_HF=${result.scfEnergy.toFixed(10)} -> ${result.fcidumpPath}`,
      );
    } catch (error) {
      console.error(`${job.name} R=${job.rLabel}: ${(error as Error).message}`);
      return 1;
    }
  }
  return 0;
}

process.exitCode = main();
