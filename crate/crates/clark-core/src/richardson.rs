//! Radial limits r → 1⁻ by Richardson extrapolation over r_m = 1 − 2^{−m}.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::tolerances::DIVERGENCE;

const M_FIRST: i32 = 4;
const M_LAST: i32 = 24;
const ROWS: usize = (M_LAST - M_FIRST + 1) as usize;
const MAX_ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialLimit {
    Finite { value: Complex64, error: f64 },
    Divergent,
}

impl RadialLimit {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            RadialLimit::Finite { value, .. } => Some(value),
            RadialLimit::Divergent => None,
        }
    }
}

/// The radii r_m = 1 − 2^{−m}, m = 4..24.
pub fn radii() -> impl Iterator<Item = f64> {
    (M_FIRST..=M_LAST).map(|m| 1.0 - (0.5f64).powi(m))
}

/// Extrapolate `lim_{r→1⁻} f(r)` assuming an expansion in powers of 1 − r.
///
/// The Richardson table is built with ratio 2. The entry whose value is
/// most consistent with the row above (same order) is returned.
pub fn radial_limit<F>(f: F) -> RadialLimit
where
    F: Fn(f64) -> Complex64,
{
    let mut table = [[Complex64::new(0.0, 0.0); MAX_ORDER + 1]; ROWS];
    for (i, r) in radii().enumerate() {
        let v = f(r);
        if !v.is_finite() || v.norm() > DIVERGENCE {
            return RadialLimit::Divergent;
        }
        table[i][0] = v;
        let mut factor = 1.0;
        for j in 1..=MAX_ORDER.min(i) {
            factor *= 2.0;
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
        }
    }
    let mut best = table[ROWS - 1][0];
    let mut best_err = (table[ROWS - 1][0] - table[ROWS - 2][0]).norm();
    for i in 2..ROWS {
        for j in 1..=MAX_ORDER.min(i - 1) {
            let err = (table[i][j] - table[i - 1][j]).norm();
            if err < best_err {
                best_err = err;
                best = table[i][j];
            }
        }
    }
    RadialLimit::Finite { value: best, error: best_err }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_in_radius() {
        let lim = radial_limit(|r| Complex64::new(2.0 - 3.0 * (1.0 - r) + (1.0 - r).powi(2), 0.0));
        let v = lim.finite().unwrap();
        assert!((v.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn analytic_function() {
        let lim = radial_limit(|r| Complex64::new(0.0, r).exp());
        let v = lim.finite().unwrap();
        assert!((v - Complex64::new(0.0, 1.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn blowup_diverges() {
        assert_eq!(radial_limit(|r| Complex64::new(1.0 / (1.0 - r).powi(2), 0.0)), RadialLimit::Divergent);
    }
}
