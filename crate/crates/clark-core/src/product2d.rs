//! Product functions Ψ(z) = φ(z₁)ψ(z₂).
//!
//! The Clark measure at α is Σ_k ∫ f(ζ, g_k(β(ζ))) dm(ζ)/|ψ'(g_k(β(ζ)))| with
//! β(ζ) = α·conj(φ*(ζ)): at each outer node the fiber is the one-variable
//! Clark measure of ψ at β.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::clark1d::clark_measure;
use crate::inner1d::{BoundaryValue, InnerFunction1D, SingularAtom};
use crate::measure::{DiscreteMeasure1D, Integral, TestFunction};
use crate::quadrature::{pairwise_slice, pairwise_sum, QuadratureGrid};
use crate::torus::{DiskPoint, TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

/// Ψ = φ ⊗ ψ with φ Blaschke-type or e^{ia}·(one singular atom), and ψ
/// nonconstant with discrete Clark measures.
#[derive(Clone, Debug)]
pub struct ProductInner {
    phi: InnerFunction1D,
    psi: InnerFunction1D,
}

impl ProductInner {
    pub fn new(phi: InnerFunction1D, psi: InnerFunction1D) -> Result<Self> {
        let phi_ok = phi.is_blaschke_type()
            || (phi.singular_atoms().len() == 1 && phi.blaschke_degree() == 0);
        let psi_ok = (psi.is_blaschke_type() && psi.blaschke_degree() > 0)
            || (psi.singular_atoms().len() == 1 && psi.blaschke_degree() == 0);
        if !phi_ok || !psi_ok {
            return Err(ClarkError::Unsupported(
                "product needs phi Blaschke-type or one singular atom, psi nonconstant of the same kind",
            ));
        }
        Ok(ProductInner { phi, psi })
    }

    pub fn phi(&self) -> &InnerFunction1D {
        &self.phi
    }

    pub fn psi(&self) -> &InnerFunction1D {
        &self.psi
    }

    pub fn eval(&self, z1: &DiskPoint, z2: &DiskPoint) -> Complex64 {
        self.phi.eval(z1) * self.psi.eval(z2)
    }

    pub fn boundary_value(&self, z1: &TorusPoint, z2: &TorusPoint) -> BoundaryValue {
        match (self.phi.boundary_value(z1), self.psi.boundary_value(z2)) {
            (BoundaryValue::Unimodular(a), BoundaryValue::Unimodular(b)) => {
                BoundaryValue::Unimodular(a * b)
            }
            (BoundaryValue::Undefined, _) | (_, BoundaryValue::Undefined) => BoundaryValue::Undefined,
            _ => BoundaryValue::Zero,
        }
    }

    /// The singular atom of φ, if any.
    pub fn phi_atom(&self) -> Option<SingularAtom> {
        self.phi.singular_atoms().first().copied()
    }

    /// β = α·conj(φ*(ζ₁)); `ZeroBoundaryValue` marks a node to skip.
    pub fn fiber_parameter(&self, zeta1: &TorusPoint, alpha: UnimodularConstant) -> Result<UnimodularConstant> {
        match self.phi.boundary_value(zeta1) {
            BoundaryValue::Unimodular(v) => {
                Ok(UnimodularConstant::from_angle(alpha.nu() - v.im.atan2(v.re)))
            }
            _ => Err(ClarkError::ZeroBoundaryValue { angle: zeta1.theta() }),
        }
    }
}

/// The Clark measure of ψ at β = α·conj(φ*(ζ₁)).
pub fn fiber_measure(
    p: &ProductInner,
    zeta1: &TorusPoint,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<DiscreteMeasure1D> {
    clark_measure(&p.psi, p.fiber_parameter(zeta1, alpha)?, truncation)
}

/// Source of the branch functions g_k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BranchFamily {
    /// One-variable Clark solver on each fiber.
    Solver,
    /// exp × exp, parameter ν.
    ExpExp { nu: f64 },
    /// z(λ − z)/(1 − λ̄z) × exp, parameter ν.
    BlaschkeExp { lambda: DiskPoint, nu: f64 },
}

impl BranchFamily {
    /// Closed form when Ψ is one of the two worked families.
    pub fn detect(p: &ProductInner, alpha: UnimodularConstant) -> BranchFamily {
        let exp = |f: &InnerFunction1D| {
            f.blaschke_degree() == 0
                && f.unimodular().nu() == 0.0
                && matches!(f.singular_atoms(), [a] if a.mass == 1.0 && a.xi.theta() == 0.0)
        };
        if !exp(&p.phi) {
            return BranchFamily::Solver;
        }
        if exp(&p.psi) {
            return BranchFamily::ExpExp { nu: alpha.nu() };
        }
        if p.psi.is_blaschke_type()
            && p.psi.unimodular().nu() == 0.0
            && p.psi.monomial_power() == 1
            && p.psi.zeros().len() == 1
        {
            return BranchFamily::BlaschkeExp { lambda: p.psi.zeros()[0], nu: alpha.nu() };
        }
        BranchFamily::Solver
    }
}

/// Branch k of exp × exp at α = e^{iν}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpExpBranch {
    pub nu: f64,
    pub k: i64,
}

impl ExpExpBranch {
    fn denom(&self, z: Complex64) -> Complex64 {
        let t = self.nu + TAU * self.k as f64;
        t * (z - 1.0) + Complex64::new(0.0, 2.0) * z
    }

    /// g_k(ζ) = (t(ζ−1) + 2i)/(t(ζ−1) + 2iζ), t = ν + 2πk.
    pub fn g(&self, zeta: &TorusPoint) -> TorusPoint {
        let z = zeta.value();
        let t = self.nu + TAU * self.k as f64;
        let num = t * (z - 1.0) + Complex64::new(0.0, 2.0);
        TorusPoint::from_unit(num / self.denom(z)).expect("unimodular branch")
    }

    /// W_k(ζ) = 2|ζ−1|²/|t(ζ−1) + 2iζ|².
    pub fn weight(&self, zeta: &TorusPoint) -> f64 {
        let z = zeta.value();
        2.0 * (z - 1.0).norm_sqr() / self.denom(z).norm_sqr()
    }
}

pub fn expexp_branches(nu: f64, k: i64) -> ExpExpBranch {
    ExpExpBranch { nu, k }
}

/// Both roots of g² − (λ + Bλ̄)g + B = 0, B = e^{iν}e^{(1+ζ)/(1−ζ)}, with
/// weights |1 − λ̄g|²/|λ − 2g + λ̄g²|. The first root takes the principal
/// square root.
pub fn blaschke_exp_branches(
    lambda: DiskPoint,
    nu: f64,
    zeta: &TorusPoint,
) -> Result<[(TorusPoint, f64); 2]> {
    if zeta.same_point(&TorusPoint::ONE) {
        return Err(ClarkError::ZeroBoundaryValue { angle: zeta.theta() });
    }
    let l = lambda.value();
    let q = crate::inner1d::cayley_imag(&TorusPoint::ONE, zeta);
    // (1+ζ)/(1−ζ) = iq.
    let b = Complex64::from_polar(1.0, nu + q);
    let s = l + b * l.conj();
    let disc = s * s - 4.0 * b;
    if disc.norm() < 1e-14 {
        return Err(ClarkError::BranchCollision { angle: zeta.theta() });
    }
    let r = disc.sqrt();
    let roots = [(s + r) * 0.5, (s - r) * 0.5];
    let mut out = [(TorusPoint::ONE, 0.0); 2];
    for (o, g) in out.iter_mut().zip(roots) {
        let w = (1.0 - l.conj() * g).norm_sqr() / (l - 2.0 * g + l.conj() * g * g).norm();
        *o = (TorusPoint::from_unit(g)?, w);
    }
    Ok(out)
}

/// One sampled branch: (ζ₁, g(ζ₁), weight) in grid order.
#[derive(Clone, Debug)]
pub struct BranchCurve {
    pub label: i64,
    pub points: Vec<(TorusPoint, TorusPoint, f64)>,
}

/// The two Blaschke × exp branches on the grid, labelled at ζ = −1 and
/// continued by nearest-neighbour matching in both directions.
pub fn blaschke_exp_curves(lambda: DiskPoint, nu: f64, grid: &QuadratureGrid) -> Result<[BranchCurve; 2]> {
    let n = grid.len();
    let mut slots: Vec<Option<[(TorusPoint, f64); 2]>> = alloc::vec![None; n];
    let start = n / 2;
    type Pair = [(TorusPoint, f64); 2];
    let place = |j: usize, prev: Option<Pair>| -> Result<Option<Pair>> {
        let z = grid.node(j);
        let pair = match blaschke_exp_branches(lambda, nu, &z) {
            Ok(p) => p,
            Err(ClarkError::ZeroBoundaryValue { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let pair = match prev {
            Some(p) if p[0].0.distance(&pair[1].0) + p[1].0.distance(&pair[0].0)
                < p[0].0.distance(&pair[0].0) + p[1].0.distance(&pair[1].0) =>
            {
                [pair[1], pair[0]]
            }
            _ => pair,
        };
        Ok(Some(pair))
    };
    let mut prev = None;
    for j in start..n {
        slots[j] = place(j, prev)?;
        prev = slots[j].or(prev);
    }
    prev = slots[start];
    for j in (0..start).rev() {
        slots[j] = place(j, prev)?;
        prev = slots[j].or(prev);
    }
    let curve = |b: usize| BranchCurve {
        label: b as i64,
        points: (0..n)
            .filter_map(|j| slots[j].map(|p| (grid.node(j), p[b].0, p[b].1)))
            .collect(),
    };
    Ok([curve(0), curve(1)])
}

/// Curves of exp × exp for the listed branch indices.
pub fn expexp_curves(nu: f64, ks: &[i64], grid: &QuadratureGrid) -> Vec<BranchCurve> {
    ks.iter()
        .map(|&k| {
            let br = expexp_branches(nu, k);
            BranchCurve {
                label: k,
                points: grid.nodes().map(|z| (z, br.g(&z), br.weight(&z))).collect(),
            }
        })
        .collect()
}

/// Parameters of the split outer quadrature used when φ has a singular atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductQuadrature {
    /// Fiber parameters per period of the near grid.
    pub m: usize,
    /// Near-grid cutoff in v = cot(δ/2).
    pub v_max: f64,
    /// Inner and outer radius (in δ) of the partition of unity around ξ.
    pub delta_in: f64,
    pub delta_out: f64,
}

impl Default for ProductQuadrature {
    fn default() -> Self {
        ProductQuadrature { m: 1024, v_max: 4000.0, delta_in: 1.0, delta_out: 2.0 }
    }
}

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

impl ProductQuadrature {
    fn chi(&self, delta: f64) -> f64 {
        smooth_step((self.delta_out - delta.abs()) / (self.delta_out - self.delta_in))
    }

    fn eta(&self, v: f64) -> f64 {
        let h = 0.5 * self.v_max;
        1.0 - smooth_step((v.abs() - h) / h)
    }

    /// ∫_{V/2}^{V} (1 − η)/(1 + v²) dv + atan(1/V), by Simpson's rule.
    fn tail_integral(&self) -> f64 {
        let (a, b) = (0.5 * self.v_max, self.v_max);
        let n = 4000;
        let h = (b - a) / n as f64;
        let g = |v: f64| (1.0 - self.eta(v)) / (1.0 + v * v);
        let inner = pairwise_sum(n - 1, |j| {
            let x = a + (j + 1) as f64 * h;
            if j % 2 == 0 { 4.0 * g(x) } else { 2.0 * g(x) }
        });
        h / 3.0 * (g(a) + inner + g(b)) + (1.0 / self.v_max).atan()
    }
}

/// Outer rule: one fiber parameter per group of (ζ₁, weight) entries.
#[derive(Clone, Debug)]
struct OuterRule {
    groups: Vec<(UnimodularConstant, Vec<(TorusPoint, f64)>)>,
    skipped: usize,
}

fn outer_rule(
    p: &ProductInner,
    alpha: UnimodularConstant,
    grid: &QuadratureGrid,
    q: &ProductQuadrature,
) -> Result<OuterRule> {
    let n = grid.len();
    let w0 = 1.0 / n as f64;
    let mut groups = Vec::new();
    let mut skipped = Vec::new();
    let atom = match p.phi_atom() {
        None => {
            for (j, z) in grid.nodes().enumerate() {
                match p.fiber_parameter(&z, alpha) {
                    Ok(b) => groups.push((b, alloc::vec![(z, w0)])),
                    Err(ClarkError::ZeroBoundaryValue { .. }) => skipped.push(j),
                    Err(e) => return Err(e),
                }
            }
            return finish(groups, skipped, grid);
        }
        Some(a) => a,
    };
    let (xi, c) = (atom.xi, atom.mass);
    // Far part: uniform nodes weighted by 1 − χ.
    for (j, z) in grid.nodes().enumerate() {
        let delta = crate::torus::signed_angle(z.theta() - xi.theta());
        let w = 1.0 - q.chi(delta);
        if w == 0.0 {
            continue;
        }
        match p.fiber_parameter(&z, alpha) {
            Ok(b) => groups.push((b, alloc::vec![(z, w * w0)])),
            Err(ClarkError::ZeroBoundaryValue { .. }) => skipped.push(j),
            Err(e) => return Err(e),
        }
    }
    // Near part: v = cot(δ/2), φ* = e^{ia}e^{−icv}, so β = αe^{−ia}e^{icv}.
    let m = q.m;
    let h = TAU / (c * m as f64);
    let base = alpha.nu() - p.phi.unimodular().nu();
    let first = groups.len();
    for r in 0..m {
        groups.push((UnimodularConstant::from_angle(base + TAU * r as f64 / m as f64), Vec::new()));
    }
    let count = (q.v_max / h).floor() as i64;
    for s in 1..=count {
        for sign in [1i64, -1] {
            let idx = s * sign;
            let v = idx as f64 * h;
            let delta = 2.0 * (1.0 / v).atan();
            let w = q.chi(delta) * q.eta(v) * h / (PI * (1.0 + v * v));
            if w == 0.0 {
                continue;
            }
            let e = Complex64::new(delta.cos(), delta.sin());
            let zeta = if xi.theta() == 0.0 { e } else { xi.value() * e };
            let slot = first + idx.rem_euclid(m as i64) as usize;
            groups[slot].1.push((TorusPoint::from_unit(zeta)?, w));
        }
    }
    // Tail beyond the cutoff: the fiber mean at ξ.
    let tail = 2.0 / PI * q.tail_integral() / m as f64;
    for r in 0..m {
        groups[first + r].1.push((xi, tail));
    }
    finish(groups, skipped, grid)
}

fn finish(
    groups: Vec<(UnimodularConstant, Vec<(TorusPoint, f64)>)>,
    skipped: Vec<usize>,
    grid: &QuadratureGrid,
) -> Result<OuterRule> {
    if skipped.len() > grid.undefined_limit() {
        return Err(ClarkError::TooManyUndefined { nodes: skipped, limit: grid.undefined_limit() });
    }
    Ok(OuterRule { groups, skipped: skipped.len() })
}

/// Clark measure of a product function at α, evaluated through its fibers.
#[derive(Clone, Debug)]
pub struct ProductClark {
    p: ProductInner,
    alpha: UnimodularConstant,
    truncation: usize,
    quadrature: ProductQuadrature,
}

impl ProductClark {
    pub fn new(p: ProductInner, alpha: UnimodularConstant, truncation: usize) -> Result<Self> {
        if truncation < 1 {
            return Err(ClarkError::invalid("K", "truncation order must be at least 1"));
        }
        Ok(ProductClark { p, alpha, truncation, quadrature: ProductQuadrature::default() })
    }

    pub fn with_quadrature(mut self, q: ProductQuadrature) -> Self {
        self.quadrature = q;
        self
    }

    pub fn inner(&self) -> &ProductInner {
        &self.p
    }

    pub fn alpha(&self) -> UnimodularConstant {
        self.alpha
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Mass missing from every fiber through truncation.
    pub fn tail_bound(&self) -> f64 {
        match self.p.psi.singular_atoms() {
            [a] => crate::clark1d::singular_tail_bound(a.mass, self.truncation),
            _ => 0.0,
        }
    }

    pub fn fiber(&self, beta: UnimodularConstant) -> Result<DiscreteMeasure1D> {
        clark_measure(&self.p.psi, beta, self.truncation)
    }

    /// ∫ f dσ_α for a general continuous f.
    pub fn integrate<F>(&self, f: F, grid: &QuadratureGrid) -> Result<Integral>
    where
        F: Fn(&TorusPoint, &TorusPoint) -> Option<Complex64>,
    {
        let rule = outer_rule(&self.p, self.alpha, grid, &self.quadrature)?;
        let mut sup = 0.0f64;
        let mut skipped = rule.skipped;
        let mut parts = Vec::with_capacity(rule.groups.len());
        for (beta, entries) in &rule.groups {
            let fiber = self.fiber(*beta)?;
            let mut terms = Vec::with_capacity(entries.len());
            for (z1, w) in entries {
                let mut vals = Vec::with_capacity(fiber.atoms().len());
                let mut ok = true;
                for a in fiber.atoms() {
                    match f(z1, &a.point) {
                        Some(v) => {
                            sup = sup.max(v.norm());
                            vals.push(v * a.weight);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    terms.push(pairwise_slice(&vals) * *w);
                } else {
                    skipped += 1;
                }
            }
            parts.push(pairwise_slice(&terms));
        }
        if skipped > grid.undefined_limit() {
            return Err(ClarkError::TooManyUndefined { nodes: Vec::new(), limit: grid.undefined_limit() });
        }
        Ok(Integral {
            value: pairwise_slice(&parts),
            error_bound: self.tail_bound() * sup,
            skipped,
        })
    }

    /// Batch integration of separable test functions; each fiber is solved once.
    pub fn integrate_tests(&self, tests: &[TestFunction], grid: &QuadratureGrid) -> Result<Vec<Integral>> {
        if let Some(t) = tests.iter().find(|t| t.dimension() != 2) {
            return Err(ClarkError::LengthMismatch { expected: 2, found: t.dimension() });
        }
        let rule = outer_rule(&self.p, self.alpha, grid, &self.quadrature)?;
        let mut parts: Vec<Vec<Complex64>> = alloc::vec![Vec::with_capacity(rule.groups.len()); tests.len()];
        for (beta, entries) in &rule.groups {
            let fiber = self.fiber(*beta)?;
            let atoms = fiber.atoms();
            for (t, out) in tests.iter().zip(parts.iter_mut()) {
                let (fa, fb) = (t.factors[0], t.factors[1]);
                let inner = fiber_sum(atoms, &fb);
                let outer = pairwise_sum(entries.len(), |e| fa.eval_unit(entries[e].0.value()) * entries[e].1);
                out.push(outer * inner);
            }
        }
        Ok(tests
            .iter()
            .zip(parts)
            .map(|(t, p)| Integral {
                value: pairwise_slice(&p),
                error_bound: self.tail_bound() * t.sup_norm(),
                skipped: rule.skipped,
            })
            .collect())
    }
}

/// Σ_k w_k f(g_k).
fn fiber_sum(atoms: &[crate::measure::Atom], f: &crate::measure::Factor) -> Complex64 {
    match f {
        crate::measure::Factor::Poisson(z) if z.value() != Complex64::new(0.0, 0.0) => {
            let z = z.value();
            let num = 1.0 - z.norm_sqr();
            let s: f64 = pairwise_sum(atoms.len(), |k| atoms[k].weight / (atoms[k].point.value() - z).norm_sqr());
            Complex64::new(num * s, 0.0)
        }
        _ => pairwise_sum(atoms.len(), |k| f.eval_unit(atoms[k].point.value()) * atoms[k].weight),
    }
}

/// ∫ f dσ_α for Ψ = φ ⊗ ψ.
pub fn product_clark_integrate<F>(
    p: &ProductInner,
    alpha: UnimodularConstant,
    f: F,
    grid: &QuadratureGrid,
    truncation: usize,
) -> Result<Integral>
where
    F: Fn(&TorusPoint, &TorusPoint) -> Option<Complex64>,
{
    ProductClark::new(p.clone(), alpha, truncation)?.integrate(f, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embed_clark2d;
    use core::f64::consts::{E, FRAC_PI_4};

    fn exp_fn() -> InnerFunction1D {
        InnerFunction1D::singular(1.0, TorusPoint::ONE).unwrap()
    }

    fn disk(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(Complex64::new(re, im)).unwrap()
    }

    fn rhs(v: Complex64, alpha: Complex64) -> f64 {
        (1.0 - v.norm_sqr()) / (alpha - v).norm_sqr()
    }

    #[test]
    fn identity_fiber_is_beta() {
        let p = ProductInner::new(InnerFunction1D::monomial(1), InnerFunction1D::monomial(1)).unwrap();
        let a = UnimodularConstant::from_angle(0.5);
        let z = TorusPoint::from_angle(2.0);
        let mu = fiber_measure(&p, &z, a, 10).unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert!(mu.atoms()[0].point.approx_eq(&TorusPoint::from_angle(0.5 - 2.0), 1e-12));
        assert!((mu.atoms()[0].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expexp_fiber_at_minus_one() {
        let p = ProductInner::new(exp_fn(), exp_fn()).unwrap();
        let m = TorusPoint::from_angle(PI);
        let mu = fiber_measure(&p, &m, UnimodularConstant::from_angle(0.0), 50).unwrap();
        let a = mu.atoms().iter().find(|a| a.point.approx_eq(&m, 1e-12)).unwrap();
        assert!((a.weight - 2.0).abs() < 1e-12);
        let br = expexp_branches(0.0, 0);
        assert!(br.g(&m).approx_eq(&m, 1e-15));
        assert!((br.weight(&m) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn expexp_closed_forms() {
        for k in -50..=50 {
            for nu in [0.0, 1.3] {
                let br = expexp_branches(nu, k);
                assert!(br.g(&TorusPoint::ONE).same_point(&TorusPoint::ONE));
                assert_eq!(br.weight(&TorusPoint::ONE), 0.0);
            }
        }
        let br = expexp_branches(0.0, 0);
        for j in 1..20 {
            let z = TorusPoint::from_angle(0.3 * j as f64);
            assert!(br.g(&z).approx_eq(&z.conj(), 1e-14));
            assert!((br.weight(&z) - 0.5 * (z.value() - 1.0).norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn blaschke_exp_lambda_zero() {
        let z = TorusPoint::from_angle(2.0);
        let pair = blaschke_exp_branches(DiskPoint::ORIGIN, 0.3, &z).unwrap();
        for (g, w) in pair {
            assert!((w - 0.5).abs() < 1e-14);
            let psi = -g.value() * g.value();
            let target = Complex64::from_polar(1.0, 0.3 + crate::inner1d::cayley_imag(&TorusPoint::ONE, &z));
            assert!((psi - target).norm() < 1e-12);
        }
    }

    #[test]
    fn blaschke_exp_curves_are_continuous() {
        let grid = QuadratureGrid::new(512).unwrap();
        let curves = blaschke_exp_curves(disk(0.0, 0.5), FRAC_PI_4, &grid).unwrap();
        for c in &curves {
            assert_eq!(c.points.len(), 511);
            let far: usize = c
                .points
                .windows(2)
                .filter(|w| w[0].0.theta() > 1.0 && w[1].0.theta() < TAU - 1.0)
                .filter(|w| w[0].1.distance(&w[1].1) > 0.5)
                .count();
            assert_eq!(far, 0);
        }
    }

    #[test]
    fn identity_product_matches_embedding() {
        let p = ProductInner::new(InnerFunction1D::monomial(1), InnerFunction1D::monomial(1)).unwrap();
        let a = UnimodularConstant::from_angle(0.9);
        let grid = QuadratureGrid::new(256).unwrap();
        let em = embed_clark2d(&InnerFunction1D::monomial(1), a, 1).unwrap();
        let t = TestFunction::poisson(&[disk(0.3, 0.1), disk(-0.4, 0.2)]);
        let x = product_clark_integrate(&p, a, |u, v| Some(t.eval(&[*u, *v])), &grid, 1).unwrap();
        let y = em.integrate_tests(std::slice::from_ref(&t), &grid).unwrap();
        assert!((x.value - y[0].value).norm() < 1e-12);
    }

    #[test]
    fn smooth_step_and_tail() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        let q = ProductQuadrature::default();
        let j = q.tail_integral();
        assert!(j > 1.0 / 4000.0 && j < 2.0 / 2000.0);
    }

    #[test]
    fn expexp_mass_and_poisson() {
        let p = ProductInner::new(exp_fn(), exp_fn()).unwrap();
        let a = UnimodularConstant::from_angle(0.0);
        let mu = ProductClark::new(p.clone(), a, 1000).unwrap();
        let grid = QuadratureGrid::default();
        let z = [disk(0.3, 0.0), disk(-0.2, 0.0)];
        let out = mu
            .integrate_tests(&[TestFunction::constant(2), TestFunction::poisson(&z)], &grid)
            .unwrap();
        let mass = (1.0 - E.powi(-4)) / (1.0 - E.powi(-2)).powi(2);
        assert!((out[0].value.re - mass).abs() <= 1e-5 * mass + out[0].error_bound);
        let r = rhs(p.eval(&z[0], &z[1]), a.alpha());
        assert!((out[1].value.re - r).abs() <= 1e-5 * r + out[1].error_bound);
    }

    #[test]
    fn blaschke_phi_uses_plain_grid() {
        let phi = InnerFunction1D::blaschke(0, alloc::vec![disk(0.5, 0.0)]);
        let psi = InnerFunction1D::blaschke(1, alloc::vec![disk(0.0, 0.5)]);
        let p = ProductInner::new(phi, psi).unwrap();
        let a = UnimodularConstant::from_angle(2.0);
        let z = [disk(0.1, 0.4), disk(-0.3, 0.2)];
        let out = ProductClark::new(p.clone(), a, 1)
            .unwrap()
            .integrate_tests(&[TestFunction::poisson(&z)], &QuadratureGrid::new(512).unwrap())
            .unwrap();
        let r = rhs(p.eval(&z[0], &z[1]), a.alpha());
        assert!((out[0].value.re - r).abs() < 1e-10 * r);
    }

    #[test]
    fn rejects_unsupported() {
        let two = InnerFunction1D::new(
            UnimodularConstant::from_angle(0.0),
            0,
            Vec::new(),
            alloc::vec![
                SingularAtom { xi: TorusPoint::ONE, mass: 1.0 },
                SingularAtom { xi: TorusPoint::from_angle(1.0), mass: 1.0 }
            ],
        )
        .unwrap();
        assert!(ProductInner::new(two, exp_fn()).is_err());
        assert!(ProductInner::new(exp_fn(), InnerFunction1D::monomial(0)).is_err());
    }
}
