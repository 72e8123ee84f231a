/**
 * Restricted Hartree-Fock with DIIS convergence acceleration.
 *
 * Works in the symmetrically orthogonalized basis; returns canonical
 * molecular orbitals ascending in energy, the total energy, and the
 * converged density for sanity checks.
 */

import { IntegralSet } from "./integrals";
import {
  Matrix,
  eighSymmetric,
  invSqrtSymmetric,
  matmul,
  solveLinear,
  transpose,
  zeros,
} from "./linalg";

export interface ScfResult {
  converged: boolean;
  iterations: number;
  energy: number; // total, nuclear repulsion included
  electronicEnergy: number;
  orbitalEnergies: number[];
  /** AO -> MO coefficients, columns are MOs ascending in energy. */
  coefficients: Matrix;
  density: Matrix;
}

function buildFock(h: Matrix, eri: number[][][][], density: Matrix): Matrix {
  const n = h.length;
  const f = h.map((row) => [...row]);
  for (let mu = 0; mu < n; mu++) {
    for (let nu = 0; nu < n; nu++) {
      let g = 0;
      for (let lam = 0; lam < n; lam++) {
        for (let sig = 0; sig < n; sig++) {
          const p = density[lam][sig];
          if (p === 0) continue;
          g += p * (eri[mu][nu][lam][sig] - 0.5 * eri[mu][lam][nu][sig]);
        }
      }
      f[mu][nu] += g;
    }
  }
  return f;
}

function densityFromOrbitals(c: Matrix, nOcc: number): Matrix {
  const n = c.length;
  const p = zeros(n, n);
  for (let mu = 0; mu < n; mu++) {
    for (let nu = 0; nu < n; nu++) {
      let s = 0;
      for (let i = 0; i < nOcc; i++) s += c[mu][i] * c[nu][i];
      p[mu][nu] = 2 * s;
    }
  }
  return p;
}

function electronicEnergy(density: Matrix, h: Matrix, f: Matrix): number {
  let e = 0;
  const n = h.length;
  for (let mu = 0; mu < n; mu++) {
    for (let nu = 0; nu < n; nu++) {
      e += 0.5 * density[mu][nu] * (h[mu][nu] + f[mu][nu]);
    }
  }
  return e;
}

/** Solve the Roothaan equations for a closed-shell molecule. */
export function runRhf(
  integrals: IntegralSet,
  nElectrons: number,
  options?: {
    maxIterations?: number;
    tolerance?: number;
    commutatorTolerance?: number;
    damping?: number;
  },
): ScfResult {
  if (nElectrons % 2 !== 0) {
    throw new Error("restricted HF needs an even electron count");
  }
  const nOcc = nElectrons / 2;
  const maxIterations = options?.maxIterations ?? 1000;
  const tolerance = options?.tolerance ?? 1e-11;
  // commutator threshold governs how canonical the exported orbitals are
  const commutatorTolerance = options?.commutatorTolerance ?? 1e-10;
  // density mixing while far from self-consistency; stretched geometries
  // oscillate under plain Roothaan steps
  const damping = options?.damping ?? 0.7;

  const n = integrals.nbf;
  const h = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) h[i][j] = integrals.kinetic[i][j] + integrals.nuclear[i][j];
  }
  const s = integrals.overlap;
  const x = invSqrtSymmetric(s);

  const solve = (f: Matrix) => {
    const fPrime = matmul(matmul(transpose(x), f), x);
    const { values, vectors } = eighSymmetric(fPrime);
    return { energies: values, c: matmul(x, vectors) };
  };

  let { c } = solve(h);
  let density = densityFromOrbitals(c, nOcc);
  let energy = Number.POSITIVE_INFINITY;
  let orbitalEnergies: number[] = [];
  let converged = false;
  let iteration = 0;

  const errorHistory: Matrix[] = [];
  const fockHistory: Matrix[] = [];

  let damped = damping > 0;

  for (iteration = 1; iteration <= maxIterations; iteration++) {
    let f = buildFock(h, integrals.eri, density);

    const fps = matmul(matmul(f, density), s);
    const spf = transpose(fps);
    const errRaw = fps.map((row, i) => row.map((val, j) => val - spf[i][j]));
    const err = matmul(matmul(transpose(x), errRaw), x);
    let commutator = 0;
    for (const row of err) {
      for (const val of row) commutator = Math.max(commutator, Math.abs(val));
    }
    if (damped && commutator < 1e-3) {
      damped = false; // close enough: hand over to DIIS for the tail
      errorHistory.length = 0;
      fockHistory.length = 0;
    }

    if (!damped) {
      errorHistory.push(err);
      fockHistory.push(f);
      if (errorHistory.length > 8) {
        errorHistory.shift();
        fockHistory.shift();
      }
    }
    // DIIS extrapolation; the B matrix is scaled to O(1) so tiny late-stage
    // error vectors stay solvable, and the oldest entries are dropped when
    // the system is linearly dependent
    while (errorHistory.length >= 2) {
      const m = errorHistory.length;
      const b = zeros(m + 1, m + 1);
      let scale = 0;
      for (let i = 0; i < m; i++) {
        for (let j = 0; j < m; j++) {
          let dot = 0;
          for (let r = 0; r < n; r++) {
            for (let cIdx = 0; cIdx < n; cIdx++) {
              dot += errorHistory[i][r][cIdx] * errorHistory[j][r][cIdx];
            }
          }
          b[i][j] = dot;
          scale = Math.max(scale, Math.abs(dot));
        }
      }
      if (scale === 0) break;
      for (let i = 0; i < m; i++) {
        for (let j = 0; j < m; j++) b[i][j] /= scale;
        b[i][m] = -1;
        b[m][i] = -1;
      }
      const rhs = new Array<number>(m + 1).fill(0);
      rhs[m] = -1;
      try {
        const weights = solveLinear(b, rhs);
        const mixed = zeros(n, n);
        for (let k = 0; k < m; k++) {
          for (let r = 0; r < n; r++) {
            for (let cIdx = 0; cIdx < n; cIdx++) {
              mixed[r][cIdx] += weights[k] * fockHistory[k][r][cIdx];
            }
          }
        }
        f = mixed;
        break;
      } catch {
        errorHistory.shift();
        fockHistory.shift();
      }
    }

    const solved = solve(f);
    c = solved.c;
    let newDensity = densityFromOrbitals(c, nOcc);
    if (damped) {
      newDensity = newDensity.map((row, i) =>
        row.map((val, j) => damping * val + (1 - damping) * density[i][j]),
      );
    }
    const fOfDensity = buildFock(h, integrals.eri, newDensity);
    const newEnergy = electronicEnergy(newDensity, h, fOfDensity) + integrals.nuclearRepulsion;

    // exported orbitals must be canonical: the MO-basis Fock of their own
    // density has to be diagonal to high accuracy
    const fMo = matmul(matmul(transpose(c), fOfDensity), c);
    let offDiagonal = 0;
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) {
        if (i !== j) offDiagonal = Math.max(offDiagonal, Math.abs(fMo[i][j]));
      }
    }
    orbitalEnergies = Array.from({ length: n }, (_, i) => fMo[i][i]);

    const deltaE = Math.abs(newEnergy - energy);
    density = newDensity;
    energy = newEnergy;
    void commutator;
    if (deltaE < tolerance && offDiagonal < commutatorTolerance) {
      converged = true;
      break;
    }
  }

  return {
    converged,
    iterations: iteration,
    energy,
    electronicEnergy: energy - integrals.nuclearRepulsion,
    orbitalEnergies,
    coefficients: c,
    density,
  };
}

/** Tr[P S]: the electron count implied by a density matrix. */
export function electronCount(density: Matrix, overlap: Matrix): number {
  let count = 0;
  const n = density.length;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) count += density[i][j] * overlap[j][i];
  }
  return count;
}
