//! Univariate complex polynomials.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly1 {
    coeffs: Vec<Complex64>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly1::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly1::new(alloc::vec![c])
    }

    /// The monomial z.
    pub fn z() -> Self {
        Poly1::new(alloc::vec![ZERO, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest coefficient modulus.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(
            self.coeffs.iter().enumerate().skip(1).map(|(j, &c)| c * j as f64).collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// zⁿ conj(q)(1/z̄): coefficients conjugated, reversed, padded to degree n.
    /// Returns `None` when deg q > n.
    pub fn reflect(&self, n: usize) -> Option<Poly1> {
        if self.coeffs.len() > n + 1 {
            return None;
        }
        let mut out = alloc::vec![ZERO; n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[n - j] = c.conj();
        }
        Some(Poly1::new(out))
    }

    /// The polynomial ζ^d·|q(ζ)|² (d = deg q); on 𝕋 it equals ζ^d times the
    /// Laurent polynomial |q|².
    pub fn abs_sq_shifted(&self, d: usize) -> Poly1 {
        let mut out = alloc::vec![ZERO; 2 * d + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            for (l, b) in self.coeffs.iter().enumerate() {
                out[d + j - l] += a * b.conj();
            }
        }
        Poly1::new(out)
    }

    /// Quotient by (z − r), remainder discarded.
    pub fn deflate(&self, r: Complex64) -> Poly1 {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly1::zero();
        }
        let mut q = alloc::vec![ZERO; n - 1];
        let mut acc = ZERO;
        for j in (1..n).rev() {
            acc = acc * r + self.coeffs[j];
            q[j - 1] = acc;
        }
        Poly1::new(q)
    }

    /// All complex roots by Aberth–Ehrlich iteration, with multiplicity.
    pub fn roots(&self) -> Vec<Complex64> {
        let mut p = self.clone();
        let mut out = Vec::new();
        // Roots at the origin are exact.
        while p.coeffs.len() > 1 && p.coeffs[0] == ZERO {
            p.coeffs.remove(0);
            out.push(ZERO);
        }
        let n = match p.degree() {
            Some(n) if n > 0 => n,
            _ => return out,
        };
        let lead = p.coeffs[n];
        let monic = p.scale(lead.inv());
        let dp = monic.derivative();
        let r0 = (monic.coeffs[0].norm()).powf(1.0 / n as f64).max(1e-3);
        let mut z: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(r0, TAU * k as f64 / n as f64 + 0.4)).collect();
        for _ in 0..2000 {
            let mut moved = 0.0f64;
            for k in 0..n {
                let pv = monic.eval(z[k]);
                if pv == ZERO {
                    continue;
                }
                let ratio = pv / dp.eval(z[k]);
                let s: Complex64 =
                    (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
                let step = ratio / (1.0 - ratio * s);
                if step.is_finite() {
                    z[k] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[k].norm()));
                }
            }
            if moved < 1e-16 {
                break;
            }
        }
        out.extend(z);
        out
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new(
            (0..n)
                .map(|j| {
                    self.coeffs.get(j).copied().unwrap_or(ZERO)
                        + rhs.coeffs.get(j).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        self + &(-rhs)
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = alloc::vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }
}
