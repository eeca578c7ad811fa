//! One-variable inner functions e^{ia} z^k ∏ (a_j − z)/(1 − ā_j z) · exp(−Σ c_j (ξ_j + z)/(ξ_j − z)).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::richardson::{radial_limit, RadialLimit};
use crate::tolerances::{BOUNDARY_UNIMODULAR, POINT_EQ};
use crate::torus::{DiskPoint, TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

#[derive(Clone, Copy, Debug)]
pub struct SingularAtom {
    pub xi: TorusPoint,
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryValue {
    Unimodular(Complex64),
    Zero,
    Undefined,
}

impl BoundaryValue {
    pub fn unimodular(self) -> Option<Complex64> {
        match self {
            BoundaryValue::Unimodular(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngularDerivative {
    Finite(f64),
    Infinite,
}

impl AngularDerivative {
    pub fn finite(self) -> Option<f64> {
        match self {
            AngularDerivative::Finite(v) => Some(v),
            AngularDerivative::Infinite => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InnerFunction1D {
    unimodular: UnimodularConstant,
    monomial: u32,
    zeros: Vec<DiskPoint>,
    atoms: Vec<SingularAtom>,
}

/// (ξ + ζ)/(ξ − ζ) = i·q for ζ ≠ ξ on 𝕋; returns q.
///
/// With w = ξ̄ζ = x + iy the quotient is i(1 + x)/y = iy/(1 − x); the form
/// without cancellation is chosen.
pub(crate) fn cayley_imag(xi: &TorusPoint, zeta: &TorusPoint) -> f64 {
    let w = xi.value().conj() * zeta.value();
    if w.re > 0.0 {
        (1.0 + w.re) / w.im
    } else {
        w.im / (1.0 - w.re)
    }
}

impl InnerFunction1D {
    pub fn new(
        unimodular: UnimodularConstant,
        monomial: u32,
        zeros: Vec<DiskPoint>,
        atoms: Vec<SingularAtom>,
    ) -> Result<Self> {
        for a in &atoms {
            if a.mass <= 0.0 || !a.mass.is_finite() {
                return Err(ClarkError::invalid("singular_atoms", "masses must be positive"));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.xi.approx_eq(&a.xi, POINT_EQ)) {
                return Err(ClarkError::invalid("singular_atoms", "locations must be distinct"));
            }
        }
        Ok(InnerFunction1D { unimodular, monomial, zeros, atoms })
    }

    /// z^k.
    pub fn monomial(k: u32) -> Self {
        InnerFunction1D {
            unimodular: UnimodularConstant::from_angle(0.0),
            monomial: k,
            zeros: Vec::new(),
            atoms: Vec::new(),
        }
    }

    /// z^k ∏ (a_j − z)/(1 − ā_j z).
    pub fn blaschke(k: u32, zeros: Vec<DiskPoint>) -> Self {
        InnerFunction1D { zeros, ..InnerFunction1D::monomial(k) }
    }

    /// exp(−c (ξ + z)/(ξ − z)).
    pub fn singular(mass: f64, xi: TorusPoint) -> Result<Self> {
        InnerFunction1D::new(
            UnimodularConstant::from_angle(0.0),
            0,
            Vec::new(),
            alloc::vec![SingularAtom { xi, mass }],
        )
    }

    pub fn unimodular(&self) -> UnimodularConstant {
        self.unimodular
    }

    pub fn monomial_power(&self) -> u32 {
        self.monomial
    }

    pub fn zeros(&self) -> &[DiskPoint] {
        &self.zeros
    }

    pub fn singular_atoms(&self) -> &[SingularAtom] {
        &self.atoms
    }

    /// Degree of the Blaschke part, k + #zeros.
    pub fn blaschke_degree(&self) -> usize {
        self.monomial as usize + self.zeros.len()
    }

    pub fn is_blaschke_type(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.atoms.is_empty() && self.blaschke_degree() == 0
    }

    pub fn eval(&self, z: &DiskPoint) -> Complex64 {
        self.eval_raw(z.value())
    }

    /// Evaluation without the disc check; callers guarantee |z| < 1.
    pub(crate) fn eval_raw(&self, z: Complex64) -> Complex64 {
        let mut v = self.unimodular.alpha() * z.powu(self.monomial);
        for a in &self.zeros {
            let a = a.value();
            v *= (a - z) / (1.0 - a.conj() * z);
        }
        if !self.atoms.is_empty() {
            let h: Complex64 =
                self.atoms.iter().map(|s| s.mass * (s.xi.value() + z) / (s.xi.value() - z)).sum();
            v *= (-h).exp();
        }
        v
    }

    /// Radial boundary value, in closed form.
    pub fn boundary_value(&self, zeta: &TorusPoint) -> BoundaryValue {
        if self.atoms.iter().any(|s| s.xi.approx_eq(zeta, POINT_EQ)) {
            return BoundaryValue::Zero;
        }
        let u = zeta.value();
        let mut v = self.unimodular.alpha() * u.powu(self.monomial);
        for a in &self.zeros {
            let a = a.value();
            v *= (a - u) / (1.0 - a.conj() * u);
        }
        if !self.atoms.is_empty() {
            let q: f64 = self.atoms.iter().map(|s| s.mass * cayley_imag(&s.xi, zeta)).sum();
            v *= Complex64::from_polar(1.0, -q);
        }
        debug_assert!((v.norm() - 1.0).abs() <= BOUNDARY_UNIMODULAR);
        BoundaryValue::Unimodular(v)
    }

    /// φ'(z) by the product rule over the factors.
    pub fn derivative(&self, z: &DiskPoint) -> Complex64 {
        self.derivative_raw(z.value())
    }

    pub(crate) fn derivative_raw(&self, z: Complex64) -> Complex64 {
        // Factors f_i and derivatives f_i'; φ' = Σ_i f_i' ∏_{l≠i} f_l.
        let mut fs: Vec<(Complex64, Complex64)> = Vec::with_capacity(self.zeros.len() + 2);
        if self.monomial > 0 {
            let k = self.monomial;
            fs.push((z.powu(k), k as f64 * z.powu(k - 1)));
        }
        for a in &self.zeros {
            let a = a.value();
            let d = 1.0 - a.conj() * z;
            fs.push(((a - z) / d, (a.norm_sqr() - 1.0) / (d * d)));
        }
        if !self.atoms.is_empty() {
            let h: Complex64 =
                self.atoms.iter().map(|s| s.mass * (s.xi.value() + z) / (s.xi.value() - z)).sum();
            let dh: Complex64 = self
                .atoms
                .iter()
                .map(|s| 2.0 * s.mass * s.xi.value() / (s.xi.value() - z).powi(2))
                .sum();
            let e = (-h).exp();
            fs.push((e, -dh * e));
        }
        let n = fs.len();
        let mut prefix = alloc::vec![Complex64::new(1.0, 0.0); n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] * fs[i].0;
        }
        let mut suffix = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for i in (0..n).rev() {
            total += fs[i].1 * prefix[i] * suffix;
            suffix *= fs[i].0;
        }
        self.unimodular.alpha() * total
    }

    /// |φ'(ζ)| as the radial limit of |φ'(rζ)|.
    pub fn angular_derivative_modulus(&self, zeta: &TorusPoint) -> Result<AngularDerivative> {
        if self.boundary_value(zeta).unimodular().is_none() {
            return Err(ClarkError::ZeroBoundaryValue { angle: zeta.theta() });
        }
        let u = zeta.value();
        Ok(match radial_limit(|r| self.derivative_raw(u * r)) {
            RadialLimit::Finite { value, .. } => AngularDerivative::Finite(value.norm()),
            RadialLimit::Divergent => AngularDerivative::Infinite,
        })
    }

    /// Closed-form |φ'(ζ)| on 𝕋 for Blaschke-type φ: k + Σ (1 − |a|²)/|ζ − a|².
    pub fn blaschke_derivative_modulus(&self, zeta: &TorusPoint) -> Option<f64> {
        if !self.is_blaschke_type() {
            return None;
        }
        let u = zeta.value();
        let s: f64 = self
            .zeros
            .iter()
            .map(|a| (1.0 - a.value().norm_sqr()) / (u - a.value()).norm_sqr())
            .sum();
        Some(self.monomial as f64 + s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn exp_fn() -> InnerFunction1D {
        InnerFunction1D::singular(1.0, TorusPoint::ONE).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(InnerFunction1D::monomial(1).eval(&disk(0.0, 0.3)), c(0.0, 0.3));
        assert!((exp_fn().eval(&DiskPoint::ORIGIN) - c((-1.0f64).exp(), 0.0)).norm() < 1e-16);
        let b = InnerFunction1D::blaschke(1, alloc::vec![disk(0.0, 0.5)]);
        assert_eq!(b.eval(&DiskPoint::ORIGIN), c(0.0, 0.0));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(exp_fn().boundary_value(&TorusPoint::ONE), BoundaryValue::Zero);
        let k = 1.0;
        let eta = TorusPoint::from_unit(c(2.0 * PI * k, -1.0) / c(2.0 * PI * k, 1.0)).unwrap();
        let v = exp_fn().boundary_value(&eta).unimodular().unwrap();
        assert!((v - 1.0).norm() < 1e-13);
        let sq = InnerFunction1D::monomial(2).boundary_value(&TorusPoint::from_angle(FRAC_PI_2));
        assert!((sq.unimodular().unwrap() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(InnerFunction1D::monomial(1).derivative(&disk(0.2, -0.4)), c(1.0, 0.0));
        let d = exp_fn().derivative(&DiskPoint::ORIGIN);
        assert!((d - c(-2.0 * (-1.0f64).exp(), 0.0)).norm() < 1e-15);
        let z = disk(0.3, 0.1);
        let closed = -2.0 * exp_fn().eval(&z) / (1.0 - z.value()).powi(2);
        assert!((exp_fn().derivative(&z) - closed).norm() < 1e-14);
    }

    #[test]
    fn derivative_at_zero_of_phi() {
        let b = InnerFunction1D::blaschke(2, alloc::vec![disk(0.5, 0.0)]);
        // φ(z) = z²(1/2 − z)/(1 − z/2) has φ'(1/2) = (1/4)·(−1)/(3/4).
        assert!((b.derivative(&disk(0.5, 0.0)) - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(b.derivative(&DiskPoint::ORIGIN), c(0.0, 0.0));
    }

    #[test]
    fn angular_derivative_examples() {
        let id = InnerFunction1D::monomial(1);
        let m = id.angular_derivative_modulus(&TorusPoint::from_angle(2.0)).unwrap();
        assert!((m.finite().unwrap() - 1.0).abs() < 1e-12);
        // exp(−(1+z)/(1−z)) at η_k: |φ'(η_k)| = (1 + 4π²k²)/2.
        for k in [-3.0, 0.0, 1.0, 5.0] {
            let eta = TorusPoint::from_unit(c(2.0 * PI * k, -1.0) / c(2.0 * PI * k, 1.0)).unwrap();
            let m = exp_fn().angular_derivative_modulus(&eta).unwrap().finite().unwrap();
            let expected = (1.0 + 4.0 * PI * PI * k * k) / 2.0;
            assert!((m - expected).abs() <= 1e-9 * expected, "k={k}: {m} vs {expected}");
        }
        assert!(exp_fn().angular_derivative_modulus(&TorusPoint::ONE).is_err());
    }

    #[test]
    fn blaschke_modulus_matches_radial_limit() {
        let b = InnerFunction1D::blaschke(1, alloc::vec![disk(0.5, 0.3), disk(-0.2, 0.7)]);
        for j in 0..16 {
            let z = TorusPoint::from_angle(0.4 * j as f64);
            let closed = b.blaschke_derivative_modulus(&z).unwrap();
            let radial = b.angular_derivative_modulus(&z).unwrap().finite().unwrap();
            assert!((closed - radial).abs() <= 1e-8 * closed);
        }
    }

    #[test]
    fn rejects_duplicate_atoms() {
        let atoms = alloc::vec![
            SingularAtom { xi: TorusPoint::ONE, mass: 1.0 },
            SingularAtom { xi: TorusPoint::from_angle(1e-15), mass: 2.0 },
        ];
        assert!(InnerFunction1D::new(UnimodularConstant::from_angle(0.0), 0, Vec::new(), atoms)
            .is_err());
    }
}
