//! Periodic trapezoid rule on 𝕋 under the normalized measure dθ/2π.

use alloc::vec::Vec;
use core::cell::RefCell;
use core::f64::consts::TAU;
use core::ops::Add;

use num_complex::Complex64;

use crate::tolerances::DEFAULT_NODES;
use crate::torus::TorusPoint;
use crate::{ClarkError, Result};

/// Uniform nodes θ_j = 2πj/N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureGrid {
    n: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid { n: DEFAULT_NODES }
    }
}

impl QuadratureGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(ClarkError::invalid("n_nodes", "must be positive"));
        }
        Ok(QuadratureGrid { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn node(&self, j: usize) -> TorusPoint {
        TorusPoint::from_angle(self.angle(j))
    }

    pub fn nodes(&self) -> impl Iterator<Item = TorusPoint> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    /// Largest number of undefined nodes tolerated (strictly fewer than N/1000).
    pub fn undefined_limit(&self) -> usize {
        (self.n - 1) / 1000
    }
}

const LEAF: usize = 16;

/// Sum `term(0) + … + term(n−1)` over a fixed balanced binary tree.
///
/// The tree depends only on `n`, so the result is independent of how the
/// terms are produced.
pub fn pairwise_sum<T, F>(n: usize, term: F) -> T
where
    T: Copy + Add<Output = T> + Default,
    F: Fn(usize) -> T,
{
    fn go<T, F>(lo: usize, hi: usize, term: &F) -> T
    where
        T: Copy + Add<Output = T> + Default,
        F: Fn(usize) -> T,
    {
        if hi - lo <= LEAF {
            let mut acc = T::default();
            for j in lo..hi {
                acc = acc + term(j);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, term) + go(mid, hi, term)
        }
    }
    go(0, n, &term)
}

/// Pairwise sum of a slice.
pub fn pairwise_slice<T>(xs: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    pairwise_sum(xs.len(), |j| xs[j])
}

/// (1/N) Σ_j f(e^{iθ_j}); `None` marks a node where f is undefined.
pub fn periodic_quadrature<F>(f: F, grid: &QuadratureGrid) -> Result<Complex64>
where
    F: Fn(&TorusPoint) -> Option<Complex64>,
{
    let (value, skipped) = quadrature_with_skips(f, grid)?;
    let _ = skipped;
    Ok(value)
}

/// Like [`periodic_quadrature`], also returning the skipped node list.
pub fn quadrature_with_skips<F>(f: F, grid: &QuadratureGrid) -> Result<(Complex64, Vec<usize>)>
where
    F: Fn(&TorusPoint) -> Option<Complex64>,
{
    let skipped = RefCell::new(Vec::new());
    let n = grid.len();
    let sum = pairwise_sum(n, |j| match f(&grid.node(j)) {
        Some(v) => v,
        None => {
            skipped.borrow_mut().push(j);
            Complex64::new(0.0, 0.0)
        }
    });
    let skipped = skipped.into_inner();
    if skipped.len() > grid.undefined_limit() {
        return Err(ClarkError::TooManyUndefined { nodes: skipped, limit: grid.undefined_limit() });
    }
    Ok((sum / n as f64, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{poisson_kernel, DiskPoint};
    use num_traits::Float;

    #[test]
    fn constant_is_exact() {
        for n in [1, 4, 7, 256, 4096] {
            let g = QuadratureGrid::new(n).unwrap();
            let v = periodic_quadrature(|_| Some(Complex64::new(1.0, 0.0)), &g).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn cosine_vanishes() {
        for n in [4, 16, 4096] {
            let g = QuadratureGrid::new(n).unwrap();
            let v = periodic_quadrature(|z| Some(Complex64::new(z.theta().cos(), 0.0)), &g)
                .unwrap();
            assert!(v.norm() <= 1e-15, "{n}: {v}");
        }
    }

    #[test]
    fn poisson_mean_is_one() {
        let z = DiskPoint::new(Complex64::new(0.5, 0.0)).unwrap();
        let g = QuadratureGrid::default();
        let v = periodic_quadrature(|w| Some(Complex64::new(poisson_kernel(&z, w), 0.0)), &g)
            .unwrap();
        assert!((v.re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn trig_polynomials_are_exact() {
        let g = QuadratureGrid::new(64).unwrap();
        for k in -31i32..=31 {
            let v = periodic_quadrature(|z| Some(z.value().powi(k)), &g).unwrap();
            let expected = if k == 0 { 1.0 } else { 0.0 };
            assert!((v - expected).norm() <= 1e-14, "k={k}: {v}");
        }
    }

    #[test]
    fn undefined_nodes_are_bounded() {
        let g = QuadratureGrid::new(4096).unwrap();
        let ok = quadrature_with_skips(
            |z| if z.theta() == 0.0 { None } else { Some(Complex64::new(1.0, 0.0)) },
            &g,
        )
        .unwrap();
        assert_eq!(ok.1, [0]);
        let bad = periodic_quadrature(|_| None, &g);
        assert!(matches!(bad, Err(ClarkError::TooManyUndefined { .. })));
    }

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let s: f64 = pairwise_sum(1000, |j| j as f64);
        assert_eq!(s, 499_500.0);
    }
}
