//! Checks of a computed Clark measure against the Poisson identity, its total
//! mass, its support and the vanishing of mixed-sign Fourier coefficients.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::{EmbeddedClarkND, Embedding};
use crate::inner1d::BoundaryValue;
use crate::measure::{ClarkMeasure2D, CurveComponent, Integral, TestFunction};
use crate::product2d::{ProductClark, ProductInner};
use crate::quadrature::QuadratureGrid;
use crate::rif2d::RifN1;
use crate::tolerances::{accumulation_radius, FOURIER, SUPPORT, TEST_RADIUS};
use crate::torus::{DiskPoint, TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Sets of 𝕋^d near which boundary values are too ill-conditioned to check.
#[derive(Clone, Debug, PartialEq)]
pub enum Exemption {
    Point { point: Vec<TorusPoint>, radius: f64 },
    /// ζ₁⋯ζ_d = ξ.
    ProductLevel { xi: TorusPoint, radius: f64 },
    /// ζ_axis = ξ.
    Line { axis: usize, xi: TorusPoint, radius: f64 },
}

impl Exemption {
    pub fn contains(&self, s: &[TorusPoint]) -> bool {
        match self {
            Exemption::Point { point, radius } => {
                point.len() == s.len() && point.iter().zip(s).all(|(a, b)| a.distance(b) <= *radius)
            }
            Exemption::ProductLevel { xi, radius } => {
                let w = s.iter().skip(1).fold(s[0], |acc, z| acc.mul(z));
                w.distance(xi) <= *radius
            }
            Exemption::Line { axis, xi, radius } => {
                s.get(*axis).is_some_and(|z| z.distance(xi) <= *radius)
            }
        }
    }
}

/// An inner function on 𝔻^d with boundary values on 𝕋^d.
pub trait InnerFunctionNd {
    fn dimension(&self) -> usize;
    fn eval(&self, z: &[DiskPoint]) -> Result<Complex64>;
    fn boundary(&self, zeta: &[TorusPoint]) -> Result<BoundaryValue>;
    fn exemptions(&self) -> Vec<Exemption> {
        Vec::new()
    }
}

/// A point of a positive-weight support component.
#[derive(Clone, Debug)]
pub struct SupportSample {
    pub component: usize,
    pub point: Vec<TorusPoint>,
}

/// A measure on 𝕋^d that integrates separable test functions.
pub trait ClarkMeasure {
    fn dimension(&self) -> usize;
    fn integrate_tests(&self, tests: &[TestFunction], grid: &QuadratureGrid) -> Result<Vec<Integral>>;
    fn tail_bound(&self) -> f64;
    fn support_samples(&self, per_component: usize) -> Result<Vec<SupportSample>>;
}

fn sample_angle(j: usize, count: usize) -> TorusPoint {
    TorusPoint::from_angle(TAU * (j as f64 + 0.5) / count as f64)
}

fn check_len(d: usize, n: usize) -> Result<()> {
    if d != n {
        return Err(ClarkError::LengthMismatch { expected: d, found: n });
    }
    Ok(())
}

impl InnerFunctionNd for Embedding {
    fn dimension(&self) -> usize {
        Embedding::dimension(self)
    }

    fn eval(&self, z: &[DiskPoint]) -> Result<Complex64> {
        Embedding::eval(self, z)
    }

    fn boundary(&self, zeta: &[TorusPoint]) -> Result<BoundaryValue> {
        self.boundary_value(zeta)
    }

    fn exemptions(&self) -> Vec<Exemption> {
        self.phi()
            .singular_atoms()
            .iter()
            .map(|a| Exemption::ProductLevel { xi: a.xi, radius: accumulation_radius(a.mass) })
            .collect()
    }
}

impl InnerFunctionNd for ProductInner {
    fn dimension(&self) -> usize {
        2
    }

    fn eval(&self, z: &[DiskPoint]) -> Result<Complex64> {
        check_len(2, z.len())?;
        Ok(ProductInner::eval(self, &z[0], &z[1]))
    }

    fn boundary(&self, zeta: &[TorusPoint]) -> Result<BoundaryValue> {
        check_len(2, zeta.len())?;
        Ok(self.boundary_value(&zeta[0], &zeta[1]))
    }

    fn exemptions(&self) -> Vec<Exemption> {
        let mut out = Vec::new();
        for (axis, f) in [self.phi(), self.psi()].into_iter().enumerate() {
            for a in f.singular_atoms() {
                out.push(Exemption::Line { axis, xi: a.xi, radius: accumulation_radius(a.mass) });
            }
        }
        out
    }
}

impl InnerFunctionNd for RifN1 {
    fn dimension(&self) -> usize {
        2
    }

    fn eval(&self, z: &[DiskPoint]) -> Result<Complex64> {
        check_len(2, z.len())?;
        Ok(RifN1::eval(self, z[0].value(), z[1].value()))
    }

    fn boundary(&self, zeta: &[TorusPoint]) -> Result<BoundaryValue> {
        check_len(2, zeta.len())?;
        Ok(BoundaryValue::Unimodular(self.boundary_value(&zeta[0], &zeta[1])?))
    }

    fn exemptions(&self) -> Vec<Exemption> {
        self.singularities()
            .iter()
            .map(|s| Exemption::Point { point: alloc::vec![s.z1, s.z2], radius: s.radius })
            .collect()
    }
}

impl ClarkMeasure for ClarkMeasure2D {
    fn dimension(&self) -> usize {
        2
    }

    fn integrate_tests(&self, tests: &[TestFunction], grid: &QuadratureGrid) -> Result<Vec<Integral>> {
        ClarkMeasure2D::integrate_tests(self, tests, grid)
    }

    fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    fn support_samples(&self, per_component: usize) -> Result<Vec<SupportSample>> {
        let mut out = Vec::new();
        for (i, c) in self.curves.iter().enumerate() {
            if let CurveComponent::Antidiagonal { weight, .. } = c {
                if *weight == 0.0 {
                    continue;
                }
            }
            for j in 0..per_component {
                let z = sample_angle(j, per_component);
                if let Some((g, w)) = c.eval(&z) {
                    if w > 0.0 {
                        out.push(SupportSample { component: i, point: alloc::vec![z, g] });
                    }
                }
            }
        }
        for (i, l) in self.lines.iter().enumerate() {
            for j in 0..per_component {
                out.push(SupportSample {
                    component: self.curves.len() + i,
                    point: alloc::vec![l.tau, sample_angle(j, per_component)],
                });
            }
        }
        Ok(out)
    }
}

impl ClarkMeasure for EmbeddedClarkND {
    fn dimension(&self) -> usize {
        EmbeddedClarkND::dimension(self)
    }

    fn integrate_tests(&self, tests: &[TestFunction], grid: &QuadratureGrid) -> Result<Vec<Integral>> {
        EmbeddedClarkND::integrate_tests(self, tests, grid)
    }

    fn tail_bound(&self) -> f64 {
        EmbeddedClarkND::tail_bound(self)
    }

    /// The first d − 1 coordinates run over shifted uniform angles.
    fn support_samples(&self, per_component: usize) -> Result<Vec<SupportSample>> {
        let d = EmbeddedClarkND::dimension(self);
        let mut out = Vec::new();
        for (i, a) in self.base().atoms().iter().enumerate() {
            for j in 0..per_component {
                let mut pt: Vec<TorusPoint> = (0..d - 1)
                    .map(|l| sample_angle((j * (l + 1) + l) % per_component, per_component))
                    .collect();
                let prod = pt.iter().skip(1).fold(pt[0], |acc, z| acc.mul(z));
                pt.push(a.point.mul(&prod.conj()));
                out.push(SupportSample { component: i, point: pt });
            }
        }
        Ok(out)
    }
}

impl ClarkMeasure for ProductClark {
    fn dimension(&self) -> usize {
        2
    }

    fn integrate_tests(&self, tests: &[TestFunction], grid: &QuadratureGrid) -> Result<Vec<Integral>> {
        ProductClark::integrate_tests(self, tests, grid)
    }

    fn tail_bound(&self) -> f64 {
        ProductClark::tail_bound(self)
    }

    /// Every fiber atom over `per_component` outer angles; the component is the atom index.
    fn support_samples(&self, per_component: usize) -> Result<Vec<SupportSample>> {
        let mut out = Vec::new();
        for j in 0..per_component {
            let z = sample_angle(j, per_component);
            let beta = match self.inner().fiber_parameter(&z, self.alpha()) {
                Ok(b) => b,
                Err(ClarkError::ZeroBoundaryValue { .. }) => continue,
                Err(e) => return Err(e),
            };
            for (i, a) in self.fiber(beta)?.atoms().iter().enumerate() {
                out.push(SupportSample { component: i, point: alloc::vec![z, a.point] });
            }
        }
        Ok(out)
    }
}

/// (1 − |Φ(z)|²)/|α − Φ(z)|².
pub fn herglotz_rhs(phi: &dyn InnerFunctionNd, alpha: UnimodularConstant, z: &[DiskPoint]) -> Result<f64> {
    let v = phi.eval(z)?;
    if v.norm() >= 1.0 {
        return Err(ClarkError::NotInDisk { modulus: v.norm() });
    }
    Ok((1.0 - v.norm_sqr()) / (alpha.alpha() - v).norm_sqr())
}

/// `count` points of 𝔻^d with radii uniform in [0, 0.95) and uniform angles.
pub fn sample_points(d: usize, count: usize, seed: u64) -> Vec<Vec<DiskPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let r = rng.gen_range(0.0..TEST_RADIUS);
                    let t = rng.gen_range(0.0..TAU);
                    DiskPoint::from_polar(r, t).expect("inside the disc")
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IdentityResidual {
    /// z as [re, im] pairs.
    pub z: Vec<[f64; 2]>,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
    /// Relative tolerance at this point, tail term included.
    pub allowed: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MassCheck {
    pub computed: f64,
    pub expected: f64,
    pub error: f64,
    pub allowed: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FourierCoefficient {
    pub k: [i32; 2],
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SupportRecord {
    pub component: usize,
    /// Sample angles in radians.
    pub point: Vec<f64>,
    pub residual: f64,
    pub exempt: bool,
}

/// Support samples: counts plus the worst non-exempt records and every failure.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SupportCheck {
    pub checked: usize,
    pub exempt: usize,
    pub max_residual: f64,
    pub records: Vec<SupportRecord>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Tolerances {
    pub identity_relative: f64,
    pub fourier: f64,
    pub support: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct VerificationReport {
    pub seed: u64,
    pub identity_residuals: Vec<IdentityResidual>,
    pub mass: Option<MassCheck>,
    pub fourier: Vec<FourierCoefficient>,
    pub support: Option<SupportCheck>,
    pub tolerances: Tolerances,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(seed: u64, identity_relative: f64) -> Self {
        VerificationReport {
            seed,
            identity_residuals: Vec::new(),
            mass: None,
            fourier: Vec::new(),
            support: None,
            tolerances: Tolerances { identity_relative, fourier: FOURIER, support: SUPPORT },
            passed: true,
        }
    }

    /// Recomputes `passed` from the recorded residuals.
    pub fn evaluate(&mut self, tail_bound: f64) {
        let id = self.identity_residuals.iter().all(|r| r.relative_error <= r.allowed);
        let mass = self.mass.as_ref().map_or(true, |m| m.error <= m.allowed);
        let fourier = self.fourier.iter().all(|c| c.modulus <= self.tolerances.fourier + tail_bound);
        let support = self
            .support
            .as_ref()
            .map_or(true, |s| s.records.iter().all(|r| r.exempt || r.residual <= self.tolerances.support));
        self.passed = id && mass && fourier && support;
    }

    pub fn max_identity_error(&self) -> f64 {
        self.identity_residuals.iter().map(|r| r.relative_error).fold(0.0, f64::max)
    }

    pub fn max_fourier(&self) -> f64 {
        self.fourier.iter().map(|c| c.modulus).fold(0.0, f64::max)
    }
}

/// Integral of P_z against μ next to the Herglotz right side, per point.
pub fn poisson_identity_check(
    mu: &dyn ClarkMeasure,
    phi: &dyn InnerFunctionNd,
    alpha: UnimodularConstant,
    points: &[Vec<DiskPoint>],
    grid: &QuadratureGrid,
    relative_tolerance: f64,
) -> Result<Vec<IdentityResidual>> {
    let tests: Vec<TestFunction> = points.iter().map(|z| TestFunction::poisson(z)).collect();
    let lhs = mu.integrate_tests(&tests, grid)?;
    points
        .iter()
        .zip(lhs)
        .map(|(z, l)| {
            let rhs = herglotz_rhs(phi, alpha, z)?;
            Ok(IdentityResidual {
                z: z.iter().map(|p| [p.value().re, p.value().im]).collect(),
                lhs: l.value.re,
                rhs,
                relative_error: (l.value - rhs).norm() / rhs,
                allowed: relative_tolerance + l.error_bound / rhs,
            })
        })
        .collect()
}

/// ∫ 1 dμ against (1 − |Φ(0)|²)/|α − Φ(0)|².
pub fn total_mass_check(
    mu: &dyn ClarkMeasure,
    phi: &dyn InnerFunctionNd,
    alpha: UnimodularConstant,
    grid: &QuadratureGrid,
    relative_tolerance: f64,
) -> Result<MassCheck> {
    let d = mu.dimension();
    let v = mu.integrate_tests(&[TestFunction::constant(d)], grid)?.remove(0);
    let expected = herglotz_rhs(phi, alpha, &alloc::vec![DiskPoint::ORIGIN; d])?;
    let error = (v.value - expected).norm();
    Ok(MassCheck {
        computed: v.value.re,
        expected,
        error,
        allowed: relative_tolerance * expected + v.error_bound,
    })
}

/// |Φ*(s) − α|, or `None` when s lies in an exemption set. A boundary value
/// that is zero or undefined counts as residual 1.
pub fn support_residual(
    phi: &dyn InnerFunctionNd,
    exemptions: &[Exemption],
    alpha: UnimodularConstant,
    s: &[TorusPoint],
) -> Result<Option<f64>> {
    if exemptions.iter().any(|e| e.contains(s)) {
        return Ok(None);
    }
    Ok(Some(match phi.boundary(s)? {
        BoundaryValue::Unimodular(v) => (v - alpha.alpha()).norm(),
        _ => 1.0,
    }))
}

/// |Φ*(s) − α| on sampled support points; points in an exemption set are exempt.
pub fn support_inclusion_check(
    mu: &dyn ClarkMeasure,
    phi: &dyn InnerFunctionNd,
    alpha: UnimodularConstant,
    samples_per_component: usize,
) -> Result<SupportCheck> {
    const KEEP: usize = 64;
    let exemptions = phi.exemptions();
    let mut checked = 0;
    let mut exempt = 0;
    let mut max_residual = 0.0f64;
    let mut records: Vec<SupportRecord> = Vec::new();
    for s in mu.support_samples(samples_per_component)? {
        let residual = match support_residual(phi, &exemptions, alpha, &s.point)? {
            Some(r) => r,
            None => {
                exempt += 1;
                continue;
            }
        };
        checked += 1;
        max_residual = max_residual.max(residual);
        records.push(SupportRecord {
            component: s.component,
            point: s.point.iter().map(TorusPoint::theta).collect(),
            residual,
            exempt: false,
        });
        if records.len() > 4 * KEEP {
            trim(&mut records, KEEP);
        }
    }
    trim(&mut records, KEEP);
    Ok(SupportCheck { checked, exempt, max_residual, records })
}

/// Keep failures and the `keep` largest residuals, in decreasing order.
fn trim(records: &mut Vec<SupportRecord>, keep: usize) {
    records.sort_by(|a, b| b.residual.total_cmp(&a.residual));
    let fails = records.iter().filter(|r| r.residual > SUPPORT).count();
    records.truncate(fails.max(keep));
}

/// |μ̂(k₁, k₂)| for all mixed-sign pairs with |kᵢ| ≤ kmax.
pub fn fourier_rp_check(
    mu: &dyn ClarkMeasure,
    kmax: i32,
    grid: &QuadratureGrid,
) -> Result<Vec<FourierCoefficient>> {
    if kmax < 1 {
        return Err(ClarkError::invalid("kmax", "must be at least 1"));
    }
    let mut ks = Vec::new();
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            if (k1 > 0 && k2 < 0) || (k1 < 0 && k2 > 0) {
                ks.push([k1, k2]);
            }
        }
    }
    let tests: Vec<TestFunction> = ks.iter().map(|k| TestFunction::fourier(k)).collect();
    Ok(mu
        .integrate_tests(&tests, grid)?
        .into_iter()
        .zip(ks)
        .map(|(v, k)| FourierCoefficient { k, modulus: v.value.norm() })
        .collect())
}

/// What [`verify`] runs.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub points: usize,
    pub grid: QuadratureGrid,
    pub identity_relative: f64,
    /// Mixed-sign Fourier order; 0 skips the check (it needs d = 2).
    pub kmax: i32,
    pub samples_per_component: usize,
}

impl VerifyConfig {
    pub fn new(identity_relative: f64) -> Self {
        VerifyConfig {
            seed: 20240601,
            points: 100,
            grid: QuadratureGrid::default(),
            identity_relative,
            kmax: 8,
            samples_per_component: 16,
        }
    }
}

/// The full suite: identity, mass, support and (for d = 2) Fourier.
pub fn verify(
    mu: &dyn ClarkMeasure,
    phi: &dyn InnerFunctionNd,
    alpha: UnimodularConstant,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let d = phi.dimension();
    check_len(d, mu.dimension())?;
    let mut report = VerificationReport::new(cfg.seed, cfg.identity_relative);
    let points = sample_points(d, cfg.points, cfg.seed);
    report.identity_residuals =
        poisson_identity_check(mu, phi, alpha, &points, &cfg.grid, cfg.identity_relative)?;
    report.mass = Some(total_mass_check(mu, phi, alpha, &cfg.grid, cfg.identity_relative)?);
    if d == 2 && cfg.kmax > 0 {
        report.fourier = fourier_rp_check(mu, cfg.kmax, &cfg.grid)?;
    }
    report.support = Some(support_inclusion_check(mu, phi, alpha, cfg.samples_per_component)?);
    report.evaluate(mu.tail_bound());
    Ok(report)
}
