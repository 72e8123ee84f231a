/**
 * MO-basis integral export.
 *
 * Transforms converged AO integrals to the molecular-orbital basis,
 * optionally folds frozen core orbitals into the scalar constant and an
 * effective one-body term, truncates to a window of exported orbitals,
 * and renders FCIDUMP text (1-based indices, chemist notation) plus a
 * key=value sidecar with orbital energies and metadata.
 */

import { IntegralSet } from "./integrals";
import { Matrix, zeros } from "./linalg";
import { ScfResult } from "./scf";

export interface MoProblem {
  nOrbitals: number;
  nElectrons: number;
  coreConstant: number; // nuclear repulsion plus folded frozen-core energy
  h: Matrix;
  eri: number[][][][]; // chemist notation over exported MOs
  orbitalEnergies: number[];
  scfEnergy: number;
  frozenCore: number;
}

/** One-electron AO matrix to the MO basis. */
function transformOneBody(h: Matrix, c: Matrix, moIndices: number[]): Matrix {
  const nAo = h.length;
  const nMo = moIndices.length;
  const out = zeros(nMo, nMo);
  for (let p = 0; p < nMo; p++) {
    for (let q = 0; q < nMo; q++) {
      let sum = 0;
      for (let mu = 0; mu < nAo; mu++) {
        const cp = c[mu][moIndices[p]];
        if (cp === 0) continue;
        for (let nu = 0; nu < nAo; nu++) {
          sum += cp * c[nu][moIndices[q]] * h[mu][nu];
        }
      }
      out[p][q] = sum;
    }
  }
  return out;
}

function tensor4(d0: number, d1: number, d2: number, d3: number): number[][][][] {
  return Array.from({ length: d0 }, () =>
    Array.from({ length: d1 }, () =>
      Array.from({ length: d2 }, () => new Array<number>(d3).fill(0)),
    ),
  );
}

/** Four-index AO-to-MO transform, one index per stage. */
function transformTwoBody(
  eri: number[][][][],
  c: Matrix,
  moIndices: number[],
): number[][][][] {
  const nAo = eri.length;
  const nMo = moIndices.length;
  const coeff = (mu: number, p: number) => c[mu][moIndices[p]];

  let current = eri;
  for (let stage = 0; stage < 4; stage++) {
    const dims = [
      current.length, current[0].length, current[0][0].length, current[0][0][0].length,
    ];
    dims[stage] = nMo;
    const next = tensor4(dims[0], dims[1], dims[2], dims[3]);
    for (let a = 0; a < dims[0]; a++) {
      for (let b = 0; b < dims[1]; b++) {
        for (let r = 0; r < dims[2]; r++) {
          for (let d = 0; d < dims[3]; d++) {
            let sum = 0;
            for (let mu = 0; mu < nAo; mu++) {
              if (stage === 0) sum += current[mu][b][r][d] * coeff(mu, a);
              else if (stage === 1) sum += current[a][mu][r][d] * coeff(mu, b);
              else if (stage === 2) sum += current[a][b][mu][d] * coeff(mu, r);
              else sum += current[a][b][r][mu] * coeff(mu, d);
            }
            next[a][b][r][d] = sum;
          }
        }
      }
    }
    current = next;
  }
  return current;
}

/**
 * Build the exported MO problem.
 *
 * ``frozen`` lowest MOs are folded: their mean-field interaction joins the
 * one-body term and their energy joins the scalar constant.  ``keep``
 * MOs after the frozen block are exported.
 */
export function buildMoProblem(
  integrals: IntegralSet,
  scf: ScfResult,
  nElectrons: number,
  frozen: number,
  keep: number,
): MoProblem {
  const nAo = integrals.nbf;
  const allMo = Array.from({ length: nAo }, (_, i) => i);
  const h = zeros(nAo, nAo);
  for (let i = 0; i < nAo; i++) {
    for (let j = 0; j < nAo; j++) h[i][j] = integrals.kinetic[i][j] + integrals.nuclear[i][j];
  }

  const hMo = transformOneBody(h, scf.coefficients, allMo);
  const eriMo = transformTwoBody(integrals.eri, scf.coefficients, allMo);

  // frozen-core folding over the lowest `frozen` MOs
  let frozenEnergy = 0;
  for (let c1 = 0; c1 < frozen; c1++) {
    frozenEnergy += 2 * hMo[c1][c1];
    for (let c2 = 0; c2 < frozen; c2++) {
      frozenEnergy += 2 * eriMo[c1][c1][c2][c2] - eriMo[c1][c2][c1][c2];
    }
  }

  const exported = Array.from({ length: keep }, (_, i) => frozen + i);
  const nMo = exported.length;
  const hEff = zeros(nMo, nMo);
  for (let p = 0; p < nMo; p++) {
    for (let q = 0; q < nMo; q++) {
      let value = hMo[exported[p]][exported[q]];
      for (let c1 = 0; c1 < frozen; c1++) {
        value +=
          2 * eriMo[exported[p]][exported[q]][c1][c1] -
          eriMo[exported[p]][c1][exported[q]][c1];
      }
      hEff[p][q] = value;
    }
  }

  const eriOut: number[][][][] = Array.from({ length: nMo }, (_, p) =>
    Array.from({ length: nMo }, (_, q) =>
      Array.from({ length: nMo }, (_, r) =>
        Array.from({ length: nMo }, (_, s) =>
          eriMo[exported[p]][exported[q]][exported[r]][exported[s]],
        ),
      ),
    ),
  );

  const remaining = nElectrons - 2 * frozen;
  if (remaining <= 0 || remaining > 2 * nMo) {
    throw new Error(`exported window cannot hold ${remaining} electrons`);
  }

  return {
    nOrbitals: nMo,
    nElectrons: remaining,
    coreConstant: integrals.nuclearRepulsion + frozenEnergy,
    h: hEff,
    eri: eriOut,
    orbitalEnergies: exported.map((i) => scf.orbitalEnergies[i]),
    scfEnergy: scf.energy,
    frozenCore: frozen,
  };
}

/** Closed-shell HF energy recomputed from the exported integrals. */
export function hfEnergyFromMo(problem: MoProblem): number {
  const nOcc = problem.nElectrons / 2;
  let e = problem.coreConstant;
  for (let i = 0; i < nOcc; i++) {
    e += 2 * problem.h[i][i];
    for (let j = 0; j < nOcc; j++) {
      e += 2 * problem.eri[i][i][j][j] - problem.eri[i][j][i][j];
    }
  }
  return e;
}

function fortranFloat(x: number): string {
  if (Object.is(x, -0)) x = 0;
  return x.toPrecision(17).replace(/(\.\d*?)0+(e|$)/, "$1$2").replace(/\.$/, ".0").replace(/\.e/, ".0e");
}

/** FCIDUMP text: unique 8-fold orbits, h upper triangle, core constant. */
export function renderFcidump(problem: MoProblem, threshold = 1e-16): string {
  const n = problem.nOrbitals;
  const lines: string[] = [
    ` &FCI NORB=${n},NELEC=${problem.nElectrons},MS2=0,`,
    `  ORBSYM=${Array(n).fill("1").join(",")},`,
    "  ISYM=1,",
    " &END",
  ];
  const written = new Set<string>();
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      for (let k = 0; k <= i; k++) {
        for (let l = 0; l <= k; l++) {
          const key = [i, j, k, l].join(",");
          if (written.has(key)) continue;
          const orbit: [number, number, number, number][] = [
            [i, j, k, l], [j, i, k, l], [i, j, l, k], [j, i, l, k],
            [k, l, i, j], [l, k, i, j], [k, l, j, i], [l, k, j, i],
          ];
          for (const quad of orbit) written.add(quad.join(","));
          const value = problem.eri[i][j][k][l];
          if (Math.abs(value) > threshold) {
            lines.push(` ${fortranFloat(value)} ${i + 1} ${j + 1} ${k + 1} ${l + 1}`);
          }
        }
      }
    }
  }
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      if (Math.abs(problem.h[i][j]) > threshold) {
        lines.push(` ${fortranFloat(problem.h[i][j])} ${i + 1} ${j + 1} 0 0`);
      }
    }
  }
  lines.push(` ${fortranFloat(problem.coreConstant)} 0 0 0 0`);
  return lines.join("\n") + "\n";
}

/** Sidecar text with orbital energies, the SCF energy, and metadata. */
export function renderSidecar(
  problem: MoProblem,
  metadata: Record<string, string>,
): string {
  const lines: string[] = [];
  for (const [key, value] of Object.entries(metadata)) {
    lines.push(`${key}=${value}`);
  }
  lines.push(`norb=${problem.nOrbitals}`);
  lines.push(`nelec=${problem.nElectrons}`);
  lines.push(`frozen_core_orbitals=${problem.frozenCore}`);
  lines.push(`e_core=${fortranFloat(problem.coreConstant)}`);
  lines.push(`hf_energy=${fortranFloat(problem.scfEnergy)}`);
  lines.push(
    `orbital_energies=${problem.orbitalEnergies.map(fortranFloat).join(",")}`,
  );
  return lines.join("\n") + "\n";
}
