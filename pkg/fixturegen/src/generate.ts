/** End-to-end fixture generation: geometry -> RHF -> MO export -> files. */

import * as fs from "fs";
import * as path from "path";

import { ATOMIC_NUMBER, buildBasisFunctions } from "./basis";
import { buildMoProblem, hfEnergyFromMo, renderFcidump, renderSidecar } from "./fcidump";
import { computeIntegrals } from "./integrals";
import { electronCount, runRhf } from "./scf";
import { Molecule, nucleiFor, shellsFor } from "./molecules";

export interface GeneratedFixture {
  fcidumpPath: string;
  sidecarPath: string;
  scfEnergy: number;
  hfFromExport: number;
  converged: boolean;
}

/** Run one geometry and write `<name>_<basis>_<R>.fcidump` plus sidecar. */
export function generateFixture(molecule: Molecule, outDir: string): GeneratedFixture {
  const functions = buildBasisFunctions(shellsFor(molecule));
  const nuclei = nucleiFor(molecule, ATOMIC_NUMBER);
  const integrals = computeIntegrals(functions, nuclei);
  const scf = runRhf(integrals, molecule.nElectrons);
  if (!scf.converged) {
    throw new Error(`SCF did not converge for ${molecule.name} R=${molecule.rLabel}`);
  }
  const traced = electronCount(scf.density, integrals.overlap);
  if (Math.abs(traced - molecule.nElectrons) > 1e-8) {
    throw new Error(`electron count drifted: Tr[PS] = ${traced}`);
  }

  const problem = buildMoProblem(
    integrals, scf, molecule.nElectrons, molecule.frozen, molecule.keep,
  );
  const rebuilt = hfEnergyFromMo(problem);
  if (Math.abs(rebuilt - scf.energy) > 1e-9) {
    throw new Error(
      `frozen-core folding changed the HF energy: ${rebuilt} vs ${scf.energy}`,
    );
  }

  const stem = `${molecule.name}_${molecule.basis}_${molecule.rLabel}`;
  const fcidumpPath = path.join(outDir, `${stem}.fcidump`);
  const sidecarPath = path.join(outDir, `${stem}.sidecar`);
  fs.mkdirSync(outDir, { recursive: true });
  fs.writeFileSync(fcidumpPath, renderFcidump(problem));
  fs.writeFileSync(
    sidecarPath,
    renderSidecar(problem, {
      molecule: molecule.name,
      basis: molecule.basis,
      r_angstrom: molecule.rLabel,
      geometry: molecule.geometryNote,
      scf_iterations: String(scf.iterations),
      bohr_per_angstrom: "1/0.529177210903",
    }),
  );
  return {
    fcidumpPath,
    sidecarPath,
    scfEnergy: scf.energy,
    hfFromExport: rebuilt,
    converged: scf.converged,
  };
}
