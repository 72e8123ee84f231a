import { describe, expect, it } from "vitest";

import { ATOMIC_NUMBER, buildBasisFunctions } from "../src/basis";
import { buildMoProblem, hfEnergyFromMo } from "../src/fcidump";
import { computeIntegrals } from "../src/integrals";
import { electronCount, runRhf } from "../src/scf";
import {
  hydrogenMolecule,
  nucleiFor,
  shellsFor,
  waterMolecule,
} from "../src/molecules";

function solve(molecule: ReturnType<typeof hydrogenMolecule>) {
  const functions = buildBasisFunctions(shellsFor(molecule));
  const nuclei = nucleiFor(molecule, ATOMIC_NUMBER);
  const integrals = computeIntegrals(functions, nuclei);
  const scf = runRhf(integrals, molecule.nElectrons);
  return { integrals, scf };
}

describe("restricted Hartree-Fock", () => {
  it("hydrogen molecule near equilibrium", () => {
    const { integrals, scf } = solve(hydrogenMolecule(0.7414));
    expect(scf.converged).toBe(true);
    // split-valence literature value at the experimental bond length
    expect(scf.energy).toBeCloseTo(-1.1267, 3);
    expect(electronCount(scf.density, integrals.overlap)).toBeCloseTo(2, 9);
  });

  it("stretched hydrogen still converges", () => {
    const { scf } = solve(hydrogenMolecule(2.5));
    expect(scf.converged).toBe(true);
  });

  it("water at the equilibrium geometry", () => {
    const { integrals, scf } = solve(waterMolecule(0.958));
    expect(scf.converged).toBe(true);
    // split-valence water sits near -75.98 hartree
    expect(scf.energy).toBeGreaterThan(-76.1);
    expect(scf.energy).toBeLessThan(-75.9);
    expect(electronCount(scf.density, integrals.overlap)).toBeCloseTo(10, 8);
    // canonical MO ordering: deep oxygen core first
    expect(scf.orbitalEnergies[0]).toBeLessThan(-20);
    expect(scf.orbitalEnergies[1]).toBeGreaterThan(-2);
  });

  it("stretched water converges with damping", () => {
    const { scf } = solve(waterMolecule(2.0));
    expect(scf.converged).toBe(true);
    expect(scf.energy).toBeCloseTo(-75.7658734742, 8);
  });

  it("approximately satisfies the virial theorem at equilibrium", () => {
    const { integrals, scf } = solve(hydrogenMolecule(0.7414));
    const n = integrals.nbf;
    let kinetic = 0;
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) kinetic += scf.density[i][j] * integrals.kinetic[j][i];
    }
    const potential = scf.energy - kinetic;
    expect(-potential / kinetic).toBeGreaterThan(1.9);
    expect(-potential / kinetic).toBeLessThan(2.1);
  });
});

describe("frozen-core folding", () => {
  it("keeps the HF energy exactly when truncating water to 6 orbitals", () => {
    const molecule = waterMolecule(0.958);
    const functions = buildBasisFunctions(shellsFor(molecule));
    const nuclei = nucleiFor(molecule, ATOMIC_NUMBER);
    const integrals = computeIntegrals(functions, nuclei);
    const scf = runRhf(integrals, molecule.nElectrons);
    const problem = buildMoProblem(integrals, scf, 10, molecule.frozen, molecule.keep);
    expect(problem.nOrbitals).toBe(6);
    expect(problem.nElectrons).toBe(8);
    expect(hfEnergyFromMo(problem)).toBeCloseTo(scf.energy, 9);
  });

  it("no-core hydrogen export reproduces the SCF energy too", () => {
    const molecule = hydrogenMolecule(0.7);
    const functions = buildBasisFunctions(shellsFor(molecule));
    const nuclei = nucleiFor(molecule, ATOMIC_NUMBER);
    const integrals = computeIntegrals(functions, nuclei);
    const scf = runRhf(integrals, 2);
    const problem = buildMoProblem(integrals, scf, 2, 0, 4);
    expect(problem.coreConstant).toBeCloseTo(0.755967, 5);
    expect(hfEnergyFromMo(problem)).toBeCloseTo(scf.energy, 10);
  });
});
