//! Points on the circle and the disc, unimodular constants, Poisson kernels.

use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::tolerances::{CANONICAL_EQ, UNIMODULAR};
use crate::{ClarkError, Result};

/// Reduce an angle into `[0, 2π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta - TAU * (theta / TAU).floor();
    if !(0.0..TAU).contains(&t) {
        0.0
    } else {
        t
    }
}

/// Signed angle in `(−π, π]` congruent to `theta`.
pub fn signed_angle(theta: f64) -> f64 {
    let t = canonical_angle(theta);
    if t > core::f64::consts::PI {
        t - TAU
    } else {
        t
    }
}

/// A point of 𝕋, kept both as its canonical angle and as a unit complex number.
///
/// The complex value is the authoritative coordinate; the angle is derived
/// from it. Points built from closed forms near 1 keep full relative
/// precision in `1 − ζ` this way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    theta: f64,
    value: Complex64,
}

impl TorusPoint {
    pub const ONE: TorusPoint = TorusPoint { theta: 0.0, value: Complex64::new(1.0, 0.0) };

    pub fn from_angle(theta: f64) -> Self {
        let t = canonical_angle(theta);
        TorusPoint { theta: t, value: Complex64::new(t.cos(), t.sin()) }
    }

    /// Project a nonzero complex number radially onto 𝕋.
    pub fn from_unit(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if r <= 0.0 || !r.is_finite() {
            return Err(ClarkError::NotUnimodular { modulus: r });
        }
        let v = z / r;
        Ok(TorusPoint { theta: canonical_angle(v.im.atan2(v.re)), value: v })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn conj(&self) -> Self {
        TorusPoint { theta: canonical_angle(-self.theta), value: self.value.conj() }
    }

    /// Group product on 𝕋.
    pub fn mul(&self, other: &TorusPoint) -> Self {
        let v = self.value * other.value;
        let v = v / v.norm();
        TorusPoint { theta: canonical_angle(v.im.atan2(v.re)), value: v }
    }

    /// Geodesic distance in radians, computed from the chord.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let chord = (self.value - other.value).norm();
        2.0 * (0.5 * chord).min(1.0).asin()
    }

    pub fn approx_eq(&self, other: &TorusPoint, tol: f64) -> bool {
        self.distance(other) < tol
    }

    /// Equality under the canonical comparator.
    pub fn same_point(&self, other: &TorusPoint) -> bool {
        self.approx_eq(other, CANONICAL_EQ)
    }
}

/// A point of the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if r < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(ClarkError::NotInDisk { modulus: r })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        DiskPoint::new(Complex64::from_polar(r, theta))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// α = e^{iν} with ν ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnimodularConstant {
    alpha: Complex64,
    nu: f64,
}

impl UnimodularConstant {
    pub fn from_angle(nu: f64) -> Self {
        let nu = canonical_angle(nu);
        UnimodularConstant { alpha: Complex64::new(nu.cos(), nu.sin()), nu }
    }

    pub fn new(alpha: Complex64) -> Result<Self> {
        let r = alpha.norm();
        if (r - 1.0).abs() > UNIMODULAR {
            return Err(ClarkError::NotUnimodular { modulus: r });
        }
        Ok(UnimodularConstant { alpha, nu: canonical_angle(alpha.im.atan2(alpha.re)) })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn as_point(&self) -> TorusPoint {
        TorusPoint { theta: self.nu, value: self.alpha }
    }
}

/// P_z(ζ) = (1 − |z|²)/|ζ − z|².
pub fn poisson_kernel(z: &DiskPoint, zeta: &TorusPoint) -> f64 {
    poisson_at(z.value(), zeta.value())
}

/// Poisson kernel at a unit complex number; identically 1 at the origin.
pub(crate) fn poisson_at(z: Complex64, u: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 1.0;
    }
    (1.0 - z.norm_sqr()) / (u - z).norm_sqr()
}

/// Product of one-variable Poisson kernels on 𝔻^d × 𝕋^d.
pub fn poisson_kernel_nd(z: &[DiskPoint], zeta: &[TorusPoint]) -> Result<f64> {
    if z.len() != zeta.len() || z.is_empty() {
        return Err(ClarkError::LengthMismatch { expected: z.len(), found: zeta.len() });
    }
    Ok(z.iter().zip(zeta).map(|(z, w)| poisson_kernel(z, w)).product())
}

/// sup over 𝕋 of P_z: (1 + |z|)/(1 − |z|).
pub fn poisson_sup(z: &DiskPoint) -> f64 {
    let r = z.value().norm();
    (1.0 + r) / (1.0 - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn kernel_examples() {
        let half = DiskPoint::new(Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(poisson_kernel(&DiskPoint::ORIGIN, &TorusPoint::from_angle(1.3)), 1.0);
        assert!((poisson_kernel(&half, &TorusPoint::from_angle(0.0)) - 3.0).abs() < 1e-15);
        assert!((poisson_kernel(&half, &TorusPoint::from_angle(PI)) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_nd_examples() {
        let half = DiskPoint::new(Complex64::new(0.5, 0.0)).unwrap();
        let o = DiskPoint::ORIGIN;
        let a = TorusPoint::from_angle(0.0);
        let b = TorusPoint::from_angle(2.0);
        assert_eq!(poisson_kernel_nd(&[o, o], &[a, b]).unwrap(), 1.0);
        assert!((poisson_kernel_nd(&[half, o], &[a, b]).unwrap() - 3.0).abs() < 1e-15);
        assert!((poisson_kernel_nd(&[half, half], &[a, a]).unwrap() - 9.0).abs() < 1e-14);
        assert!(poisson_kernel_nd(&[half], &[a, a]).is_err());
    }

    #[test]
    fn disk_rejects_boundary() {
        assert!(DiskPoint::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(DiskPoint::new(Complex64::new(0.6, 0.8)).is_err());
    }

    #[test]
    fn canonical_angles() {
        assert_eq!(TorusPoint::from_angle(TAU).theta(), 0.0);
        assert!((TorusPoint::from_angle(-PI / 2.0).theta() - 1.5 * PI).abs() < 1e-15);
        assert!(TorusPoint::from_angle(1e-15).same_point(&TorusPoint::from_angle(TAU - 1e-15)));
        assert!(!TorusPoint::from_angle(0.0).same_point(&TorusPoint::from_angle(1e-12)));
    }

    #[test]
    fn unimodular_checks_modulus() {
        assert!(UnimodularConstant::new(Complex64::new(1.0 + 1e-12, 0.0)).is_err());
        let a = UnimodularConstant::new(Complex64::new(0.0, -1.0)).unwrap();
        assert!((a.nu() - 1.5 * PI).abs() < 1e-15);
    }
}
