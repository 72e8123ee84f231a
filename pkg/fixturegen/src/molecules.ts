/** Molecule geometries and the scan grids for the bundled fixtures. */

import { Shell, atomShells } from "./basis";

export const BOHR_PER_ANGSTROM = 1 / 0.529177210903;

export interface Molecule {
  name: string;
  basis: string;
  rLabel: string; // scanned bond length in angstrom, 3 decimals
  atoms: { element: string; center: [number, number, number] }[];
  nElectrons: number;
  /** lowest MOs folded into the core constant */
  frozen: number;
  /** MOs exported after the frozen block */
  keep: number;
  geometryNote: string;
}

export function shellsFor(molecule: Molecule): Shell[] {
  const shells: Shell[] = [];
  for (const atom of molecule.atoms) {
    shells.push(...atomShells(atom.element, molecule.basis, atom.center));
  }
  return shells;
}

export function nucleiFor(
  molecule: Molecule,
  charges: Record<string, number>,
): { charge: number; center: [number, number, number] }[] {
  return molecule.atoms.map((a) => ({ charge: charges[a.element], center: a.center }));
}

/** H2 along the bond axis; all four 6-31G MOs exported. */
export function hydrogenMolecule(rAngstrom: number, basis = "6-31g"): Molecule {
  const r = rAngstrom * BOHR_PER_ANGSTROM;
  return {
    name: "h2",
    basis,
    rLabel: rAngstrom.toFixed(3),
    atoms: [
      { element: "H", center: [0, 0, 0] },
      { element: "H", center: [0, 0, r] },
    ],
    nElectrons: 2,
    frozen: 0,
    keep: basis === "6-31g" ? 4 : 2,
    geometryNote: `H2 bond length ${rAngstrom.toFixed(3)} A`,
  };
}

/**
 * Water with one O-H bond scanned (asymmetric stretch), the other held at
 * the experimental length, bond angle fixed at 104.5 degrees.  The oxygen
 * 1s MO is folded into the core constant and the export keeps the next 6
 * MOs: 12 spin orbitals holding the 8 valence electrons.
 */
export function waterMolecule(rAngstrom: number, basis = "6-31g"): Molecule {
  const fixed = 0.958 * BOHR_PER_ANGSTROM;
  const scanned = rAngstrom * BOHR_PER_ANGSTROM;
  const half = ((104.5 / 2) * Math.PI) / 180;
  return {
    name: "h2o",
    basis,
    rLabel: rAngstrom.toFixed(3),
    atoms: [
      { element: "O", center: [0, 0, 0] },
      { element: "H", center: [fixed * Math.sin(half), 0, fixed * Math.cos(half)] },
      { element: "H", center: [-scanned * Math.sin(half), 0, scanned * Math.cos(half)] },
    ],
    nElectrons: 10,
    frozen: 1,
    keep: 6,
    geometryNote:
      `H2O angle 104.5 deg, O-H1 fixed 0.958 A, O-H2 ${rAngstrom.toFixed(3)} A, ` +
      "oxygen 1s folded as frozen core",
  };
}

export const H2_GRID = [
  0.3, 0.45, 0.592, 0.6, 0.7, 0.8, 1.0, 1.2, 1.5, 1.9, 2.5,
];

export const H2O_GRID = [0.7, 0.85, 0.958, 1.1, 1.3, 1.6, 2.0];
