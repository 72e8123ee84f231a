/**
 * McMurchie-Davidson evaluation of Gaussian integrals over contracted
 * Cartesian functions: overlap, kinetic, nuclear attraction, and
 * electron repulsion.  Angular momenta up to p are exercised here,
 * though the recursions are general.
 */

import { BasisFunction } from "./basis";
import { Matrix, zeros } from "./linalg";

/** Boys function values F_0..F_mMax at argument t. */
export function boys(mMax: number, t: number): number[] {
  const out = new Array<number>(mMax + 1).fill(0);
  if (t < 1e-14) {
    for (let m = 0; m <= mMax; m++) out[m] = 1 / (2 * m + 1);
    return out;
  }
  if (t < 35) {
    // series for the highest order, then stable downward recursion
    const expT = Math.exp(-t);
    let term = 1 / (2 * mMax + 1);
    let sum = term;
    for (let k = 1; k < 500; k++) {
      term *= (2 * t) / (2 * mMax + 2 * k + 1);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    out[mMax] = sum * expT;
    for (let m = mMax - 1; m >= 0; m--) {
      out[m] = (2 * t * out[m + 1] + expT) / (2 * m + 1);
    }
    return out;
  }
  // large argument: erf asymptotics and stable upward recursion
  const expT = Math.exp(-t);
  out[0] = 0.5 * Math.sqrt(Math.PI / t);
  for (let m = 0; m < mMax; m++) {
    out[m + 1] = ((2 * m + 1) * out[m] - expT) / (2 * t);
  }
  return out;
}

/**
 * Hermite expansion coefficients E_t^{ij} for a 1D primitive pair.
 * Returns E[i][j][t] for i <= iMax, j <= jMax, t <= i + j.
 */
function hermiteCoefficients(
  iMax: number,
  jMax: number,
  a: number,
  b: number,
  ab: number, // A - B along this axis
): number[][][] {
  const p = a + b;
  const q = (a * b) / p;
  const e: number[][][] = [];
  for (let i = 0; i <= iMax; i++) {
    e.push([]);
    for (let j = 0; j <= jMax; j++) {
      e[i].push(new Array<number>(i + j + 2).fill(0));
    }
  }
  e[0][0][0] = Math.exp(-q * ab * ab);
  const pa = (-b / p) * ab; // P - A
  const pb = (a / p) * ab; // P - B
  for (let i = 0; i <= iMax; i++) {
    for (let j = 0; j <= jMax; j++) {
      if (i === 0 && j === 0) continue;
      const target = e[i][j];
      if (i > 0) {
        const src = e[i - 1][j];
        for (let t = 0; t <= i + j; t++) {
          let v = pa * (src[t] ?? 0);
          if (t > 0) v += (src[t - 1] ?? 0) / (2 * p);
          v += (t + 1) * (src[t + 1] ?? 0);
          target[t] = v;
        }
      } else {
        const src = e[i][j - 1];
        for (let t = 0; t <= i + j; t++) {
          let v = pb * (src[t] ?? 0);
          if (t > 0) v += (src[t - 1] ?? 0) / (2 * p);
          v += (t + 1) * (src[t + 1] ?? 0);
          target[t] = v;
        }
      }
    }
  }
  return e;
}

/** Hermite-Coulomb tensor R_{tuv} = R^0_{tuv}(p, PC). */
function hermiteCoulomb(
  tMax: number,
  uMax: number,
  vMax: number,
  p: number,
  pc: [number, number, number],
): number[][][] {
  const mTop = tMax + uMax + vMax;
  const t2 = p * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]);
  const f = boys(mTop, t2);
  const cache = new Map<string, number>();
  const r = (t: number, u: number, v: number, m: number): number => {
    if (t < 0 || u < 0 || v < 0) return 0;
    if (t === 0 && u === 0 && v === 0) {
      return Math.pow(-2 * p, m) * f[m];
    }
    const key = `${t},${u},${v},${m}`;
    const hit = cache.get(key);
    if (hit !== undefined) return hit;
    let value: number;
    if (t > 0) {
      value = (t - 1) * r(t - 2, u, v, m + 1) + pc[0] * r(t - 1, u, v, m + 1);
    } else if (u > 0) {
      value = (u - 1) * r(t, u - 2, v, m + 1) + pc[1] * r(t, u - 1, v, m + 1);
    } else {
      value = (v - 1) * r(t, u, v - 2, m + 1) + pc[2] * r(t, u, v - 1, m + 1);
    }
    cache.set(key, value);
    return value;
  };
  const out: number[][][] = [];
  for (let t = 0; t <= tMax; t++) {
    out.push([]);
    for (let u = 0; u <= uMax; u++) {
      out[t].push(new Array<number>(vMax + 1).fill(0));
      for (let v = 0; v <= vMax; v++) out[t][u][v] = r(t, u, v, 0);
    }
  }
  return out;
}

interface PrimitivePair {
  aExp: number;
  bExp: number;
  p: number; // combined exponent
  coefficient: number; // product of contraction coefficients
  center: [number, number, number]; // Gaussian product center P
  e: [number[][][], number[][][], number[][][]]; // per axis E[i][j][t]
}

/** Precomputed primitive-pair expansion data for two contracted functions. */
export function pairData(fa: BasisFunction, fb: BasisFunction): PrimitivePair[] {
  const pairs: PrimitivePair[] = [];
  const iMax = Math.max(...fa.powers) + 2; // +2 covers kinetic shifts
  const jMax = Math.max(...fb.powers) + 2;
  for (let ip = 0; ip < fa.exponents.length; ip++) {
    for (let jp = 0; jp < fb.exponents.length; jp++) {
      const a = fa.exponents[ip];
      const b = fb.exponents[jp];
      const p = a + b;
      const center: [number, number, number] = [
        (a * fa.center[0] + b * fb.center[0]) / p,
        (a * fa.center[1] + b * fb.center[1]) / p,
        (a * fa.center[2] + b * fb.center[2]) / p,
      ];
      const e: [number[][][], number[][][], number[][][]] = [
        hermiteCoefficients(iMax, jMax, a, b, fa.center[0] - fb.center[0]),
        hermiteCoefficients(iMax, jMax, a, b, fa.center[1] - fb.center[1]),
        hermiteCoefficients(iMax, jMax, a, b, fa.center[2] - fb.center[2]),
      ];
      pairs.push({
        aExp: a,
        bExp: b,
        p,
        coefficient: fa.coefficients[ip] * fb.coefficients[jp],
        center,
        e,
      });
    }
  }
  return pairs;
}

function overlap1D(pair: PrimitivePair, axis: number, i: number, j: number): number {
  return pair.e[axis][i][j][0] * Math.sqrt(Math.PI / pair.p);
}

/** Overlap of two contracted functions. */
export function overlap(fa: BasisFunction, fb: BasisFunction, pairs?: PrimitivePair[]): number {
  let s = 0;
  for (const pair of pairs ?? pairData(fa, fb)) {
    s +=
      pair.coefficient *
      overlap1D(pair, 0, fa.powers[0], fb.powers[0]) *
      overlap1D(pair, 1, fa.powers[1], fb.powers[1]) *
      overlap1D(pair, 2, fa.powers[2], fb.powers[2]);
  }
  return s;
}

/** Kinetic energy integral -1/2 <a|del^2|b> of two contracted functions. */
export function kinetic(fa: BasisFunction, fb: BasisFunction, pairs?: PrimitivePair[]): number {
  let total = 0;
  for (const pair of pairs ?? pairData(fa, fb)) {
    const b = pair.bExp;
    const s = [0, 1, 2].map((axis) => overlap1D(pair, axis, fa.powers[axis], fb.powers[axis]));
    const k = [0, 1, 2].map((axis) => {
      const j = fb.powers[axis];
      let v = -2 * b * b * overlap1D(pair, axis, fa.powers[axis], j + 2);
      v += b * (2 * j + 1) * overlap1D(pair, axis, fa.powers[axis], j);
      if (j >= 2) v -= 0.5 * j * (j - 1) * overlap1D(pair, axis, fa.powers[axis], j - 2);
      return v;
    });
    total += pair.coefficient * (k[0] * s[1] * s[2] + s[0] * k[1] * s[2] + s[0] * s[1] * k[2]);
  }
  return total;
}

/**
 * Nuclear attraction of two contracted functions to point charges:
 * sum over nuclei of -Z <a| 1/|r-C| |b>.
 */
export function nuclearAttraction(
  fa: BasisFunction,
  fb: BasisFunction,
  nuclei: { charge: number; center: [number, number, number] }[],
  pairs?: PrimitivePair[],
): number {
  let total = 0;
  const [la, ma, na] = fa.powers;
  const [lb, mb, nb] = fb.powers;
  for (const pair of pairs ?? pairData(fa, fb)) {
    const ex = pair.e[0][la][lb];
    const ey = pair.e[1][ma][mb];
    const ez = pair.e[2][na][nb];
    const pref = (2 * Math.PI) / pair.p;
    for (const nucleus of nuclei) {
      const pc: [number, number, number] = [
        pair.center[0] - nucleus.center[0],
        pair.center[1] - nucleus.center[1],
        pair.center[2] - nucleus.center[2],
      ];
      const r = hermiteCoulomb(la + lb, ma + mb, na + nb, pair.p, pc);
      let sum = 0;
      for (let t = 0; t <= la + lb; t++) {
        for (let u = 0; u <= ma + mb; u++) {
          for (let v = 0; v <= na + nb; v++) {
            sum += ex[t] * ey[u] * ez[v] * r[t][u][v];
          }
        }
      }
      total -= nucleus.charge * pair.coefficient * pref * sum;
    }
  }
  return total;
}

/** Electron repulsion integral (ab|cd) in chemist notation. */
export function electronRepulsion(
  fa: BasisFunction,
  fb: BasisFunction,
  fc: BasisFunction,
  fd: BasisFunction,
  bra?: PrimitivePair[],
  ket?: PrimitivePair[],
): number {
  const braPairs = bra ?? pairData(fa, fb);
  const ketPairs = ket ?? pairData(fc, fd);
  const [la, ma, na] = fa.powers;
  const [lb, mb, nb] = fb.powers;
  const [lc, mc, nc] = fc.powers;
  const [ld, md, nd] = fd.powers;
  const tB = la + lb;
  const uB = ma + mb;
  const vB = na + nb;
  const tK = lc + ld;
  const uK = mc + md;
  const vK = nc + nd;
  let total = 0;
  for (const pb of braPairs) {
    const ex = pb.e[0][la][lb];
    const ey = pb.e[1][ma][mb];
    const ez = pb.e[2][na][nb];
    for (const pk of ketPairs) {
      const fx = pk.e[0][lc][ld];
      const fy = pk.e[1][mc][md];
      const fz = pk.e[2][nc][nd];
      const alpha = (pb.p * pk.p) / (pb.p + pk.p);
      const pq: [number, number, number] = [
        pb.center[0] - pk.center[0],
        pb.center[1] - pk.center[1],
        pb.center[2] - pk.center[2],
      ];
      const r = hermiteCoulomb(tB + tK, uB + uK, vB + vK, alpha, pq);
      let sum = 0;
      for (let t = 0; t <= tB; t++) {
        for (let u = 0; u <= uB; u++) {
          for (let v = 0; v <= vB; v++) {
            const eb = ex[t] * ey[u] * ez[v];
            if (eb === 0) continue;
            for (let tt = 0; tt <= tK; tt++) {
              for (let uu = 0; uu <= uK; uu++) {
                for (let vv = 0; vv <= vK; vv++) {
                  const ek = fx[tt] * fy[uu] * fz[vv];
                  if (ek === 0) continue;
                  const sign = (tt + uu + vv) % 2 === 0 ? 1 : -1;
                  sum += eb * ek * sign * r[t + tt][u + uu][v + vv];
                }
              }
            }
          }
        }
      }
      const pref =
        (2 * Math.pow(Math.PI, 2.5)) /
        (pb.p * pk.p * Math.sqrt(pb.p + pk.p));
      total += pb.coefficient * pk.coefficient * pref * sum;
    }
  }
  return total;
}

export interface IntegralSet {
  nbf: number;
  overlap: Matrix;
  kinetic: Matrix;
  nuclear: Matrix;
  /** chemist notation (ij|kl), full 4-index array */
  eri: number[][][][];
  nuclearRepulsion: number;
}

/** All AO integrals for a molecule given its basis functions and nuclei. */
export function computeIntegrals(
  functions: BasisFunction[],
  nuclei: { charge: number; center: [number, number, number] }[],
): IntegralSet {
  const n = functions.length;
  const s = zeros(n, n);
  const t = zeros(n, n);
  const v = zeros(n, n);
  const pairs: PrimitivePair[][][] = [];
  for (let i = 0; i < n; i++) {
    pairs.push([]);
    for (let j = 0; j < n; j++) {
      pairs[i].push(j <= i ? pairData(functions[i], functions[j]) : []);
    }
  }
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      const pd = pairs[i][j];
      s[i][j] = s[j][i] = overlap(functions[i], functions[j], pd);
      t[i][j] = t[j][i] = kinetic(functions[i], functions[j], pd);
      v[i][j] = v[j][i] = nuclearAttraction(functions[i], functions[j], nuclei, pd);
    }
  }

  const eri: number[][][][] = Array.from({ length: n }, () =>
    Array.from({ length: n }, () =>
      Array.from({ length: n }, () => new Array<number>(n).fill(0)),
    ),
  );
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      const ij = (i * (i + 1)) / 2 + j;
      for (let k = 0; k <= i; k++) {
        for (let l = 0; l <= k; l++) {
          const kl = (k * (k + 1)) / 2 + l;
          if (kl > ij) continue;
          const value = electronRepulsion(
            functions[i], functions[j], functions[k], functions[l],
            pairs[i][j], pairs[k][l],
          );
          const quads: [number, number, number, number][] = [
            [i, j, k, l], [j, i, k, l], [i, j, l, k], [j, i, l, k],
            [k, l, i, j], [l, k, i, j], [k, l, j, i], [l, k, j, i],
          ];
          for (const [a, b, c, d] of quads) eri[a][b][c][d] = value;
        }
      }
    }
  }

  let enuc = 0;
  for (let a = 0; a < nuclei.length; a++) {
    for (let b = a + 1; b < nuclei.length; b++) {
      const dx = nuclei[a].center[0] - nuclei[b].center[0];
      const dy = nuclei[a].center[1] - nuclei[b].center[1];
      const dz = nuclei[a].center[2] - nuclei[b].center[2];
      enuc += (nuclei[a].charge * nuclei[b].charge) / Math.sqrt(dx * dx + dy * dy + dz * dz);
    }
  }

  return { nbf: n, overlap: s, kinetic: t, nuclear: v, eri, nuclearRepulsion: enuc };
}
