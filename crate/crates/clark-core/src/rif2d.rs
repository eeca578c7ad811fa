//! Rational inner functions φ = p̃/p of bidegree (n, 1), p(z) = p₁(z₁) + z₂p₂(z₁).

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::measure::{ClarkMeasure2D, CurveComponent, GraphRule, LineComponent};
use crate::poly::Poly1;
use crate::richardson::{radial_limit, RadialLimit};
use crate::tolerances::{EXEMPT_RADIUS, SUPPORT};
use crate::torus::{TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

/// Bound on the modulus of p and p̃ at a computed singularity.
pub const SINGULAR_RESIDUAL: f64 = 1e-8;
/// Admissible distance of a resultant root from 𝕋.
pub const ROOT_ON_CIRCLE: f64 = 1e-8;
/// Computed roots closer than this belong to one multiple root.
const CLUSTER: f64 = 1e-3;
/// Denominators below this are treated as vanishing.
const DENOMINATOR_FLOOR: f64 = 1e-14;
/// Relative size below which a polynomial value counts as a root when cancelling.
const CANCEL: f64 = 1e-10;

/// Minimum of a unimodal `f` on [lo, hi] by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut best = f(lo).min(f(hi));
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        let (f1, f2) = (f(x1), f(x2));
        best = best.min(f1).min(f2);
        if f1 < f2 {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best
}

/// p̃ = zⁿ conj(q)(1/z̄).
pub fn reflect(q: &Poly1, n: usize) -> Result<Poly1> {
    q.reflect(n).ok_or(ClarkError::DegreeTooHigh { degree: q.degree().unwrap_or(0), n })
}

/// A polynomial affine in α: `constant + α·alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaLinear {
    pub constant: Poly1,
    pub alpha: Poly1,
}

impl AlphaLinear {
    pub fn at(&self, alpha: Complex64) -> Poly1 {
        &self.constant + &self.alpha.scale(alpha)
    }
}

/// A point of 𝕋² where p and p̃ vanish together.
#[derive(Clone, Copy, Debug)]
pub struct Singularity {
    pub z1: TorusPoint,
    pub z2: TorusPoint,
    /// Half-width of the box around (z1, z2) inside which |p| is too small
    /// for a double-precision boundary value to resolve [`SUPPORT`].
    pub radius: f64,
}

/// B_α = N/D after removing common roots on 𝕋.
#[derive(Clone, Debug)]
pub struct BAlpha {
    pub num: Poly1,
    pub den: Poly1,
    /// Common roots of the raw numerator and denominator (degenerate α).
    pub cancelled: Vec<TorusPoint>,
}

impl BAlpha {
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z);
        if d.norm() < DENOMINATOR_FLOOR {
            return None;
        }
        Some(self.num.eval(z) / d)
    }
}

/// The level curve ζ ↦ (ζ, conj B_α(ζ)) with density W_α.
#[derive(Clone, Debug)]
pub struct RifCurve {
    b: BAlpha,
    w_num: Poly1,
    w_den: Poly1,
}

impl RifCurve {
    pub fn b(&self) -> &BAlpha {
        &self.b
    }

    pub fn weight(&self, zeta: &TorusPoint) -> Option<f64> {
        let u = zeta.value();
        let d = self.w_den.eval(u);
        if d.norm() < DENOMINATOR_FLOOR {
            return None;
        }
        Some((self.w_num.eval(u) / d).re.max(0.0))
    }
}

impl GraphRule for RifCurve {
    fn eval(&self, zeta: &TorusPoint) -> Option<(TorusPoint, f64)> {
        let b = self.b.eval(zeta.value())?;
        let g = TorusPoint::from_unit(b.conj()).ok()?;
        Some((g, self.weight(zeta)?))
    }

    fn label(&self) -> &str {
        "rif-curve"
    }
}

#[derive(Clone, Debug)]
pub struct RifN1 {
    n: usize,
    p1: Poly1,
    p2: Poly1,
    p1t: Poly1,
    p2t: Poly1,
    singular: Vec<Singularity>,
}

impl RifN1 {
    /// Validates degree, stability on a 64×64 radii × 256 angle grid, and atorality.
    pub fn new(p1: Poly1, p2: Poly1, n: usize) -> Result<Self> {
        let p1t = reflect(&p1, n)?;
        let p2t = reflect(&p2, n)?;
        let mut r = RifN1 { n, p1, p2, p1t, p2t, singular: Vec::new() };
        r.check_stable()?;
        if r.resultant().norm() <= 1e-10 {
            return Err(ClarkError::NotAtoral);
        }
        r.singular = r.locate_singularities();
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p1(&self) -> &Poly1 {
        &self.p1
    }

    pub fn p2(&self) -> &Poly1 {
        &self.p2
    }

    pub fn p1_tilde(&self) -> &Poly1 {
        &self.p1t
    }

    pub fn p2_tilde(&self) -> &Poly1 {
        &self.p2t
    }

    /// min over |z₂| = r₂ of |p₁ + z₂p₂| is ||p₁| − r₂|p₂||; scan z₁ and r₂.
    fn check_stable(&self) -> Result<()> {
        for i in 0..64 {
            let r1 = i as f64 / 64.0;
            for a in 0..256 {
                let z1 = Complex64::from_polar(r1, TAU * a as f64 / 256.0);
                let (m1, m2) = (self.p1.eval(z1).norm(), self.p2.eval(z1).norm());
                for l in 0..64 {
                    let r2 = l as f64 / 64.0;
                    let modulus = (m1 - r2 * m2).abs();
                    if modulus <= 1e-12 {
                        return Err(ClarkError::Unstable { z1: [z1.re, z1.im], r2, modulus });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.p1.eval(z1) + z2 * self.p2.eval(z1)
    }

    pub fn p_tilde(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        z2 * self.p1t.eval(z1) + self.p2t.eval(z1)
    }

    /// φ(z) = p̃(z)/p(z).
    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.p_tilde(z1, z2) / self.p(z1, z2)
    }

    /// ∂φ/∂z₁.
    pub fn d_dz1(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let p = self.p(z1, z2);
        let pt = self.p_tilde(z1, z2);
        let dp = self.p1.derivative().eval(z1) + z2 * self.p2.derivative().eval(z1);
        let dpt = z2 * self.p1t.derivative().eval(z1) + self.p2t.derivative().eval(z1);
        (dpt * p - pt * dp) / (p * p)
    }

    /// Res_{z₂}(p, p̃) = p₁p̃₁ − p₂p̃₂.
    pub fn resultant(&self) -> Poly1 {
        &(&self.p1 * &self.p1t) - &(&self.p2 * &self.p2t)
    }

    /// Numerator and denominator of B_α as polynomials affine in α.
    pub fn b_alpha_symbolic(&self) -> (AlphaLinear, AlphaLinear) {
        (
            AlphaLinear { constant: self.p1t.clone(), alpha: -&self.p2 },
            AlphaLinear { constant: -&self.p2t, alpha: self.p1.clone() },
        )
    }

    /// Shifted numerator ζⁿ(|p₁|² − |p₂|²) of W_α.
    pub fn w_numerator_shifted(&self) -> Poly1 {
        &self.p1.abs_sq_shifted(self.n) - &self.p2.abs_sq_shifted(self.n)
    }

    pub fn b_alpha(&self, alpha: UnimodularConstant) -> BAlpha {
        let (n, d) = self.b_alpha_symbolic();
        let (mut num, mut den) = (n.at(alpha.alpha()), d.at(alpha.alpha()));
        let mut cancelled = Vec::new();
        for s in &self.singular {
            let t = s.z1.value();
            while num.degree().unwrap_or(0) > 0
                && den.degree().unwrap_or(0) > 0
                && num.eval(t).norm() <= CANCEL * num.norm()
                && den.eval(t).norm() <= CANCEL * den.norm()
            {
                num = num.deflate(t);
                den = den.deflate(t);
                cancelled.push(s.z1);
            }
        }
        BAlpha { num, den, cancelled }
    }

    /// The level curve of α with its density, common factors removed.
    pub fn curve(&self, alpha: UnimodularConstant) -> RifCurve {
        let b = self.b_alpha(alpha);
        let mut w_num = self.w_numerator_shifted();
        let mut w_den = self.b_alpha_symbolic().0.at(alpha.alpha()).abs_sq_shifted(self.n);
        for t in &b.cancelled {
            for _ in 0..2 {
                w_num = w_num.deflate(t.value());
                w_den = w_den.deflate(t.value());
            }
        }
        RifCurve { b, w_num, w_den }
    }

    /// W_α(ζ) = (|p₁|² − |p₂|²)/|p̃₁ − αp₂|², continuously extended across cancelled roots.
    pub fn w_alpha(&self, alpha: UnimodularConstant, zeta: &TorusPoint) -> Result<f64> {
        self.curve(alpha)
            .weight(zeta)
            .ok_or(ClarkError::ZeroBoundaryValue { angle: zeta.theta() })
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singular
    }

    fn locate_singularities(&self) -> Vec<Singularity> {
        let res = self.resultant();
        let roots = res.roots();
        // Merge clusters produced by multiple roots, then polish on R^{(m−1)}.
        let mut used = alloc::vec![false; roots.len()];
        let mut centres = Vec::new();
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            let mut members = alloc::vec![roots[i]];
            used[i] = true;
            for j in i + 1..roots.len() {
                if !used[j] && (roots[j] - roots[i]).norm() < CLUSTER {
                    used[j] = true;
                    members.push(roots[j]);
                }
            }
            let m = members.len();
            let mut c: Complex64 = members.iter().sum::<Complex64>() / m as f64;
            let mut d = res.clone();
            for _ in 1..m {
                d = d.derivative();
            }
            let dd = d.derivative();
            for _ in 0..8 {
                let step = d.eval(c) / dd.eval(c);
                if !step.is_finite() || step.norm() > CLUSTER {
                    break;
                }
                c -= step;
            }
            centres.push(c);
        }
        let mut out: Vec<Singularity> = Vec::new();
        for c in centres {
            if (c.norm() - 1.0).abs() > ROOT_ON_CIRCLE {
                continue;
            }
            let t = c / c.norm();
            let p2 = self.p2.eval(t);
            if p2.norm() < DENOMINATOR_FLOOR {
                continue;
            }
            let z2 = -self.p1.eval(t) / p2;
            if (z2.norm() - 1.0).abs() > ROOT_ON_CIRCLE {
                continue;
            }
            let z2 = z2 / z2.norm();
            if self.p(t, z2).norm() > SINGULAR_RESIDUAL || self.p_tilde(t, z2).norm() > SINGULAR_RESIDUAL
            {
                continue;
            }
            let mut s = Singularity {
                z1: TorusPoint::from_unit(t).expect("unit"),
                z2: TorusPoint::from_unit(z2).expect("unit"),
                radius: EXEMPT_RADIUS,
            };
            s.radius = self.conditioning_radius(&s);
            if !out.iter().any(|o| o.z1.approx_eq(&s.z1, 1e-8) && o.z2.approx_eq(&s.z2, 1e-8)) {
                out.push(s);
            }
        }
        out
    }

    /// Smallest box half-width ρ (on a doubling scale) beyond which |p| stays above
    /// 4ε‖p‖₁/SUPPORT on every larger box boundary, doubled for safety.
    fn conditioning_radius(&self, s: &Singularity) -> f64 {
        const SAMPLES: usize = 256;
        let l1: f64 = self.p1.coeffs().iter().chain(self.p2.coeffs()).map(|c| c.norm()).sum();
        let floor = 4.0 * f64::EPSILON * l1 / SUPPORT;
        let (a, b) = (s.z1.theta(), s.z2.theta());
        // |p| along one edge of the box, parametrised by u ∈ [−1, 1].
        let edge = |rho: f64, side: usize, u: f64| {
            let sign = if side % 2 == 0 { 1.0 } else { -1.0 };
            let (d1, d2) = if side < 2 { (sign * rho, u * rho) } else { (u * rho, sign * rho) };
            self.p(Complex64::from_polar(1.0, a + d1), Complex64::from_polar(1.0, b + d2)).norm()
        };
        let min_on_box = |rho: f64| {
            (0..4)
                .map(|side| {
                    let f = |u: f64| edge(rho, side, u);
                    let h = 2.0 / SAMPLES as f64;
                    let best = (0..=SAMPLES)
                        .map(|i| -1.0 + h * i as f64)
                        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
                        .unwrap_or(0.0);
                    golden_min(f, (best - h).max(-1.0), (best + h).min(1.0))
                })
                .fold(f64::INFINITY, f64::min)
        };
        let mut radius = EXEMPT_RADIUS;
        let mut rho = EXEMPT_RADIUS;
        while rho < 0.25 {
            if min_on_box(rho) < floor {
                radius = 2.0 * rho;
            }
            rho *= 2.0;
        }
        radius
    }

    /// Radial limit of φ along r·(τ, γ).
    pub fn radial_value(&self, s: &Singularity) -> Result<Complex64> {
        let (a, b) = (s.z1.value(), s.z2.value());
        match radial_limit(|r| self.eval(a * r, b * r)) {
            RadialLimit::Finite { value, .. } => Ok(value),
            RadialLimit::Divergent => Err(ClarkError::Divergent { what: "phi at a singularity" }),
        }
    }

    /// Nontangential values at singularities, duplicates merged.
    pub fn exceptional_values(&self) -> Result<Vec<UnimodularConstant>> {
        let mut out: Vec<UnimodularConstant> = Vec::new();
        for s in &self.singular {
            let v = self.radial_value(s)?;
            let a = UnimodularConstant::from_angle(v.im.atan2(v.re));
            if !out.iter().any(|o| (o.alpha() - a.alpha()).norm() < 1e-8) {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// 1/|∂φ/∂z₁(τ, z₂)|, checked constant in z₂.
    pub fn line_constant(&self, s: &Singularity) -> Result<f64> {
        let g = s.z2.value();
        let probes = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.3, 0.6) * g,
            g * Complex64::new(0.0, 1.0),
            -g,
            g * Complex64::new(0.0, -1.0),
        ];
        let t = s.z1.value();
        let mut values = Vec::with_capacity(probes.len());
        for z2 in probes {
            match radial_limit(|r| self.d_dz1(t * r, z2)) {
                RadialLimit::Finite { value, .. } => values.push(value),
                RadialLimit::Divergent => {
                    return Err(ClarkError::Divergent { what: "line derivative" })
                }
            }
        }
        let v0 = values[0];
        let spread = values.iter().map(|v| (v - v0).norm()).fold(0.0, f64::max);
        if spread > 1e-8 * v0.norm() {
            return Err(ClarkError::LineConstantNotConstant { spread });
        }
        Ok(1.0 / v0.norm())
    }

    /// Curve plus one line per singularity whose value is α.
    pub fn clark_measure(&self, alpha: UnimodularConstant) -> Result<ClarkMeasure2D> {
        let mut lines = Vec::new();
        for s in &self.singular {
            let v = self.radial_value(s)?;
            if (v - alpha.alpha()).norm() <= 1e-8 {
                lines.push(LineComponent::new(s.z1, self.line_constant(s)?)?);
            }
        }
        Ok(ClarkMeasure2D {
            curves: alloc::vec![CurveComponent::Graph(Arc::new(self.curve(alpha)))],
            lines,
            tail_bound: 0.0,
        })
    }

    /// Boundary value on 𝕋²; radial limit at or next to a singularity.
    pub fn boundary_value(&self, z1: &TorusPoint, z2: &TorusPoint) -> Result<Complex64> {
        let (a, b) = (z1.value(), z2.value());
        let near = self.singular.iter().any(|s| s.z1.approx_eq(z1, 1e-8) && s.z2.approx_eq(z2, 1e-8));
        if near || self.p(a, b).norm() < 1e-10 {
            return match radial_limit(|r| self.eval(a * r, b * r)) {
                RadialLimit::Finite { value, .. } => Ok(value),
                RadialLimit::Divergent => Err(ClarkError::Divergent { what: "phi" }),
            };
        }
        Ok(self.p_tilde(a, b) / self.p(a, b))
    }
}
