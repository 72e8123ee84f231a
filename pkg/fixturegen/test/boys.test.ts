import { describe, expect, it } from "vitest";

import { boys } from "../src/integrals";

/** Composite Simpson quadrature of F_m(t) = int_0^1 u^{2m} exp(-t u^2) du. */
function boysQuadrature(m: number, t: number): number {
  const n = 20000;
  const h = 1 / n;
  let sum = 0;
  for (let k = 0; k <= n; k++) {
    const u = k * h;
    const f = Math.pow(u, 2 * m) * Math.exp(-t * u * u);
    const w = k === 0 || k === n ? 1 : k % 2 === 1 ? 4 : 2;
    sum += w * f;
  }
  return (sum * h) / 3;
}

describe("Boys function", () => {
  it("matches quadrature across orders and arguments", () => {
    for (const t of [0, 1e-8, 0.1, 0.5, 1, 3.3, 10, 25, 34.9, 35.1, 60, 200]) {
      const values = boys(6, t);
      for (let m = 0; m <= 6; m++) {
        expect(values[m]).toBeCloseTo(boysQuadrature(m, t), 10);
      }
    }
  });

  it("has the right zero-argument limits", () => {
    const values = boys(4, 0);
    for (let m = 0; m <= 4; m++) {
      expect(values[m]).toBeCloseTo(1 / (2 * m + 1), 14);
    }
  });

  it("decays like the leading asymptotic term for large argument", () => {
    const [f0] = boys(0, 400);
    expect(f0).toBeCloseTo(0.5 * Math.sqrt(Math.PI / 400), 12);
  });
});
