/** Dense linear algebra for small symmetric problems (Jacobi + Gauss). */

export type Matrix = number[][];

export function zeros(rows: number, cols: number): Matrix {
  return Array.from({ length: rows }, () => new Array<number>(cols).fill(0));
}

export function identity(n: number): Matrix {
  const m = zeros(n, n);
  for (let i = 0; i < n; i++) m[i][i] = 1;
  return m;
}

export function matmul(a: Matrix, b: Matrix): Matrix {
  const n = a.length;
  const k = b.length;
  const m = b[0].length;
  const out = zeros(n, m);
  for (let i = 0; i < n; i++) {
    for (let t = 0; t < k; t++) {
      const ait = a[i][t];
      if (ait === 0) continue;
      const brow = b[t];
      const orow = out[i];
      for (let j = 0; j < m; j++) orow[j] += ait * brow[j];
    }
  }
  return out;
}

export function transpose(a: Matrix): Matrix {
  const out = zeros(a[0].length, a.length);
  for (let i = 0; i < a.length; i++) {
    for (let j = 0; j < a[0].length; j++) out[j][i] = a[i][j];
  }
  return out;
}

export function maxAbsDiff(a: Matrix, b: Matrix): number {
  let worst = 0;
  for (let i = 0; i < a.length; i++) {
    for (let j = 0; j < a[0].length; j++) {
      worst = Math.max(worst, Math.abs(a[i][j] - b[i][j]));
    }
  }
  return worst;
}

/**
 * Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
 * Returns eigenvalues ascending with matching eigenvector columns.
 */
export function eighSymmetric(a: Matrix): { values: number[]; vectors: Matrix } {
  const n = a.length;
  const m = a.map((row) => [...row]);
  let v = identity(n);

  const offDiagonal = () => {
    let s = 0;
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) s += m[i][j] * m[i][j];
    }
    return Math.sqrt(s);
  };

  for (let sweep = 0; sweep < 200 && offDiagonal() > 1e-14; sweep++) {
    for (let p = 0; p < n; p++) {
      for (let q = p + 1; q < n; q++) {
        if (Math.abs(m[p][q]) < 1e-18) continue;
        const theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
        const t = Math.sign(theta || 1) / (Math.abs(theta) + Math.sqrt(theta * theta + 1));
        const c = 1 / Math.sqrt(t * t + 1);
        const s = t * c;
        for (let k = 0; k < n; k++) {
          const mkp = m[k][p];
          const mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (let k = 0; k < n; k++) {
          const mpk = m[p][k];
          const mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (let k = 0; k < n; k++) {
          const vkp = v[k][p];
          const vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  const order = Array.from({ length: n }, (_, i) => i).sort((i, j) => m[i][i] - m[j][j]);
  const values = order.map((i) => m[i][i]);
  const vectors = zeros(n, n);
  for (let col = 0; col < n; col++) {
    for (let row = 0; row < n; row++) vectors[row][col] = v[row][order[col]];
  }
  return { values, vectors };
}

/** Solve a x = b by Gaussian elimination with partial pivoting. */
export function solveLinear(aIn: Matrix, bIn: number[]): number[] {
  const n = aIn.length;
  const a = aIn.map((row, i) => [...row, bIn[i]]);
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(a[r][col]) > Math.abs(a[pivot][col])) pivot = r;
    }
    if (Math.abs(a[pivot][col]) < 1e-14) {
      throw new Error("singular linear system");
    }
    [a[col], a[pivot]] = [a[pivot], a[col]];
    for (let r = 0; r < n; r++) {
      if (r === col) continue;
      const f = a[r][col] / a[col][col];
      if (f === 0) continue;
      for (let c = col; c <= n; c++) a[r][c] -= f * a[col][c];
    }
  }
  return a.map((row, i) => row[n] / a[i][i]);
}

/** Symmetric orthogonalizer X = U s^{-1/2} U^T of an overlap matrix. */
export function invSqrtSymmetric(s: Matrix): Matrix {
  const { values, vectors } = eighSymmetric(s);
  const n = s.length;
  for (const v of values) {
    if (v < 1e-10) throw new Error(`overlap matrix is near singular (eig ${v})`);
  }
  const scaled = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) scaled[i][j] = vectors[i][j] / Math.sqrt(values[j]);
  }
  return matmul(scaled, transpose(vectors));
}
