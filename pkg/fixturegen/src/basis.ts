/**
 * Gaussian basis set data and contraction handling.
 *
 * Exponents and contraction coefficients are the published Pople values
 * (coefficients refer to normalized primitives).  Contracted functions
 * are renormalized to unit self-overlap when shells are instantiated.
 */

/** One contracted shell of a single angular momentum on one center. */
export interface Shell {
  l: number; // 0 = s, 1 = p
  exponents: number[];
  coefficients: number[];
  center: [number, number, number];
}

/** A single Cartesian basis function: shell data plus powers (i,j,k). */
export interface BasisFunction {
  exponents: number[];
  /** Contraction coefficients with primitive norms folded in. */
  coefficients: number[];
  center: [number, number, number];
  powers: [number, number, number];
}

interface ShellData {
  l: number;
  exponents: number[];
  coefficients: number[];
}

/** element -> basis name -> shells */
const BASIS_DATA: Record<string, Record<string, ShellData[]>> = {
  "sto-3g": {
    H: [
      {
        l: 0,
        exponents: [3.42525091, 0.62391373, 0.1688554],
        coefficients: [0.15432897, 0.53532814, 0.44463454],
      },
    ],
    O: [
      {
        l: 0,
        exponents: [130.70932, 23.808861, 6.4436083],
        coefficients: [0.15432897, 0.53532814, 0.44463454],
      },
      {
        l: 0,
        exponents: [5.0331513, 1.1695961, 0.38038896],
        coefficients: [-0.09996723, 0.39951283, 0.70011547],
      },
      {
        l: 1,
        exponents: [5.0331513, 1.1695961, 0.38038896],
        coefficients: [0.15591627, 0.60768372, 0.39195739],
      },
    ],
  },
  "6-31g": {
    H: [
      {
        l: 0,
        exponents: [18.731137, 2.8253937, 0.6401217],
        coefficients: [0.0334946, 0.23472695, 0.81375733],
      },
      {
        l: 0,
        exponents: [0.1612778],
        coefficients: [1.0],
      },
    ],
    O: [
      {
        l: 0,
        exponents: [5484.6717, 825.23495, 188.04696, 52.9645, 16.89757, 5.7996353],
        coefficients: [0.0018311, 0.0139501, 0.0684451, 0.2327143, 0.470193, 0.3585209],
      },
      {
        l: 0,
        exponents: [15.539616, 3.5999336, 1.0137618],
        coefficients: [-0.1107775, -0.1480263, 1.130767],
      },
      {
        l: 1,
        exponents: [15.539616, 3.5999336, 1.0137618],
        coefficients: [0.0708743, 0.3397528, 0.7271586],
      },
      {
        l: 0,
        exponents: [0.2700058],
        coefficients: [1.0],
      },
      {
        l: 1,
        exponents: [0.2700058],
        coefficients: [1.0],
      },
    ],
  },
};

export const ATOMIC_NUMBER: Record<string, number> = { H: 1, O: 8 };

function doubleFactorial(n: number): number {
  let out = 1;
  for (let k = n; k > 1; k -= 2) out *= k;
  return out;
}

/** Norm of a Cartesian primitive with exponent a and powers (i,j,k). */
export function primitiveNorm(a: number, i: number, j: number, k: number): number {
  const l = i + j + k;
  const num = Math.pow(2 * a / Math.PI, 0.75) * Math.pow(4 * a, l / 2);
  const den = Math.sqrt(
    doubleFactorial(2 * i - 1) * doubleFactorial(2 * j - 1) * doubleFactorial(2 * k - 1),
  );
  return num / den;
}

/** Self-overlap of a contracted Cartesian function (primitive norms folded). */
function contractedSelfOverlap(
  exponents: number[],
  coefficients: number[],
  powers: [number, number, number],
): number {
  const [i, j, k] = powers;
  const l = i + j + k;
  let s = 0;
  for (let p = 0; p < exponents.length; p++) {
    for (let q = 0; q < exponents.length; q++) {
      const a = exponents[p];
      const b = exponents[q];
      // primitive overlap at zero separation
      const pref =
        Math.pow(Math.PI / (a + b), 1.5) / Math.pow(2 * (a + b), l);
      const poly =
        doubleFactorial(2 * i - 1) * doubleFactorial(2 * j - 1) * doubleFactorial(2 * k - 1);
      s += coefficients[p] * coefficients[q] * pref * poly;
    }
  }
  return s;
}

const CARTESIAN_POWERS: [number, number, number][][] = [
  [[0, 0, 0]],
  [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
  ],
];

/**
 * Expand shells into normalized Cartesian basis functions.
 * Order: shells as listed, p shells in (x, y, z) component order.
 */
export function buildBasisFunctions(shells: Shell[]): BasisFunction[] {
  const functions: BasisFunction[] = [];
  for (const shell of shells) {
    for (const powers of CARTESIAN_POWERS[shell.l]) {
      const withNorms = shell.exponents.map(
        (a, p) => shell.coefficients[p] * primitiveNorm(a, powers[0], powers[1], powers[2]),
      );
      const self = contractedSelfOverlap(shell.exponents, withNorms, powers);
      const scale = 1 / Math.sqrt(self);
      functions.push({
        exponents: [...shell.exponents],
        coefficients: withNorms.map((c) => c * scale),
        center: shell.center,
        powers,
      });
    }
  }
  return functions;
}

/** Shells for one atom of a named basis at a center (bohr). */
export function atomShells(
  element: string,
  basis: string,
  center: [number, number, number],
): Shell[] {
  const table = BASIS_DATA[basis.toLowerCase()];
  if (!table || !table[element]) {
    throw new Error(`no ${basis} data for element ${element}`);
  }
  return table[element].map((s) => ({
    l: s.l,
    exponents: [...s.exponents],
    coefficients: [...s.coefficients],
    center,
  }));
}
