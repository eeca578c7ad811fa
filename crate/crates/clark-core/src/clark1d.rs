//! One-variable Clark measures: Blaschke-type by phase bisection, single-atom singular in closed form.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::inner1d::InnerFunction1D;
use crate::measure::{Atom, DiscreteMeasure1D, Generator};
use crate::tolerances::{BISECTION_WIDTH, DERIVATIVE_FLOOR};
use crate::torus::{TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

/// Continuous lift of arg φ(e^{iθ}) for Blaschke-type φ.
///
/// Each raw factor contributes π + θ + 2·Arg(1 − a e^{−iθ}); the principal
/// argument never wraps because Re(1 − a e^{−iθ}) > 0.
fn lifted_phase(phi: &InnerFunction1D, theta: f64) -> f64 {
    let e = Complex64::from_polar(1.0, -theta);
    let mut psi = phi.unimodular().nu() + phi.monomial_power() as f64 * theta;
    for a in phi.zeros() {
        let w = 1.0 - a.value() * e;
        psi += PI + theta + 2.0 * w.im.atan2(w.re);
    }
    psi
}

/// Clark measure of a finite Blaschke product: n atoms, zero tail.
pub fn clark_blaschke(phi: &InnerFunction1D, alpha: UnimodularConstant) -> Result<DiscreteMeasure1D> {
    if !phi.is_blaschke_type() {
        return Err(ClarkError::Unsupported("clark_blaschke needs a function without singular atoms"));
    }
    let n = phi.blaschke_degree();
    if n == 0 {
        return Err(ClarkError::invalid("phi", "degree must be at least 1"));
    }
    let nu = alpha.nu();
    let psi0 = lifted_phase(phi, 0.0);
    let m0 = ((psi0 - nu) / TAU).ceil();
    let samples = 16 * n;
    let scan: Vec<f64> =
        (0..=samples).map(|s| lifted_phase(phi, TAU * s as f64 / samples as f64)).collect();
    let mut atoms = Vec::with_capacity(n);
    let mut s = 0;
    for j in 0..n {
        let target = nu + TAU * (m0 + j as f64);
        while s + 1 < samples && scan[s + 1] <= target {
            s += 1;
        }
        let mut lo = TAU * s as f64 / samples as f64;
        let mut hi = TAU * (s + 1) as f64 / samples as f64;
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if lifted_phase(phi, mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut theta = 0.5 * (lo + hi);
        // One Newton step inside the bracket; the lifted phase has slope |φ'|.
        let slope = phi.blaschke_derivative_modulus(&TorusPoint::from_angle(theta)).unwrap_or(0.0);
        if slope > 0.0 {
            let t = theta - (lifted_phase(phi, theta) - target) / slope;
            if t >= lo && t <= hi {
                theta = t;
            }
        }
        let point = TorusPoint::from_angle(theta);
        let d = phi.blaschke_derivative_modulus(&point).unwrap_or(0.0);
        if d < DERIVATIVE_FLOOR {
            return Err(ClarkError::DegenerateDerivative { angle: point.theta(), modulus: d });
        }
        atoms.push(Atom { point, weight: 1.0 / d });
    }
    DiscreteMeasure1D::new(atoms, 0.0, Some(Generator::Blaschke { degree: n }))
}

/// Σ_{|k|>K} 2c/(c² + (ν + 2πk)²) ≤ (c/2π²)(2/K + 1/K²).
pub fn singular_tail_bound(c: f64, truncation: usize) -> f64 {
    let k = truncation as f64;
    c / (2.0 * PI * PI) * (2.0 / k + 1.0 / (k * k))
}

/// Atom and weight of exp(−c(ξ+z)/(ξ−z)) = e^{iν} with branch index k.
///
/// With s = −(ν + 2πk)/c the equation reads (1 + w)/(1 − w) = is for
/// w = ξ̄η, so w = ((s² − 1) + 2is)/(s² + 1) and |φ'(η)| = c(1 + s²)/2.
pub fn singular_atom(c: f64, xi: &TorusPoint, nu: f64, k: i64) -> (TorusPoint, f64) {
    let t = nu + TAU * k as f64;
    let s = -t / c;
    let d = s * s + 1.0;
    let w = Complex64::new((s * s - 1.0) / d, 2.0 * s / d);
    let eta = if xi.theta() == 0.0 { w } else { xi.value() * w };
    let point = TorusPoint::from_unit(eta).expect("unit atom");
    (point, 2.0 * c / (c * c + t * t))
}

/// Clark measure of exp(−c(ξ+z)/(ξ−z)) truncated at |k| ≤ K.
pub fn clark_atomic_singular(
    c: f64,
    xi: TorusPoint,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<DiscreteMeasure1D> {
    if truncation < 1 {
        return Err(ClarkError::invalid("K", "truncation order must be at least 1"));
    }
    if c <= 0.0 || !c.is_finite() {
        return Err(ClarkError::invalid("c", "mass must be positive"));
    }
    let kk = truncation as i64;
    let atoms = (-kk..=kk)
        .map(|k| {
            let (point, weight) = singular_atom(c, &xi, alpha.nu(), k);
            Atom { point, weight }
        })
        .collect();
    DiscreteMeasure1D::new(
        atoms,
        singular_tail_bound(c, truncation),
        Some(Generator::AtomicSingular {
            mass: c,
            xi_angle: xi.theta(),
            nu: alpha.nu(),
            truncation,
        }),
    )
}

/// Clark measure for any supported φ: Blaschke-type, or e^{ia} times one singular atom.
pub fn clark_measure(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<DiscreteMeasure1D> {
    if phi.is_blaschke_type() {
        return clark_blaschke(phi, alpha);
    }
    match (phi.singular_atoms(), phi.blaschke_degree()) {
        ([atom], 0) => {
            let shifted = UnimodularConstant::from_angle(alpha.nu() - phi.unimodular().nu());
            clark_atomic_singular(atom.mass, atom.xi, shifted, truncation)
        }
        _ => Err(ClarkError::Unsupported(
            "Clark measures need a Blaschke-type function or a single singular atom",
        )),
    }
}

/// Support of σ_α: its atoms plus zero-weight accumulation points.
#[derive(Clone, Debug)]
pub struct LevelPoints {
    pub points: Vec<TorusPoint>,
    pub accumulation: Vec<TorusPoint>,
}

pub fn level_points(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<LevelPoints> {
    let mu = clark_measure(phi, alpha, truncation)?;
    Ok(LevelPoints {
        points: mu.atoms().iter().map(|a| a.point).collect(),
        accumulation: phi.singular_atoms().iter().map(|s| s.xi).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::DiskPoint;
    use core::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exp_fn() -> InnerFunction1D {
        InnerFunction1D::singular(1.0, TorusPoint::ONE).unwrap()
    }

    #[test]
    fn identity_single_atom() {
        let a = UnimodularConstant::from_angle(1.1);
        let mu = clark_blaschke(&InnerFunction1D::monomial(1), a).unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert!((mu.atoms()[0].point.theta() - 1.1).abs() < 1e-13);
        assert!((mu.atoms()[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_two_atoms() {
        let mu = clark_blaschke(&InnerFunction1D::monomial(2), UnimodularConstant::from_angle(0.0))
            .unwrap();
        let mut th: Vec<f64> = mu.atoms().iter().map(|a| a.point.theta()).collect();
        th.sort_by(f64::total_cmp);
        assert!(th[0].abs() < 1e-13 && (th[1] - PI).abs() < 1e-13);
        assert!(mu.atoms().iter().all(|a| (a.weight - 0.5).abs() < 1e-15));
    }

    #[test]
    fn blaschke_probability_measure() {
        let lam = DiskPoint::new(c(0.0, 0.5)).unwrap();
        let phi = InnerFunction1D::blaschke(1, alloc::vec![lam]);
        let mu = clark_blaschke(&phi, UnimodularConstant::from_angle(0.0)).unwrap();
        assert_eq!(mu.atoms().len(), 2);
        assert!((mu.listed_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeros_near_circle_are_bracketed() {
        let zs = alloc::vec![
            DiskPoint::new(c(0.999, 0.0)).unwrap(),
            DiskPoint::new(c(0.0, -0.998)).unwrap(),
            DiskPoint::new(c(-0.5, 0.2)).unwrap(),
        ];
        let phi = InnerFunction1D::blaschke(0, zs);
        for nu in [0.0, 1.0, 4.0] {
            let a = UnimodularConstant::from_angle(nu);
            let mu = clark_blaschke(&phi, a).unwrap();
            assert_eq!(mu.atoms().len(), 3);
            let p0 = phi.eval(&DiskPoint::ORIGIN);
            let mass = (1.0 - p0.norm_sqr()) / (a.alpha() - p0).norm_sqr();
            assert!((mu.listed_mass() - mass).abs() <= 1e-12 * mass);
            for at in mu.atoms() {
                let v = phi.boundary_value(&at.point).unimodular().unwrap();
                assert!((v - a.alpha()).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn exponential_atoms() {
        let mu = clark_atomic_singular(1.0, TorusPoint::ONE, UnimodularConstant::from_angle(0.0), 20)
            .unwrap();
        for (i, atom) in mu.atoms().iter().enumerate() {
            let k = i as f64 - 20.0;
            let eta = c(2.0 * PI * k, -1.0) / c(2.0 * PI * k, 1.0);
            assert!((atom.point.value() - eta).norm() <= 1e-12);
            // Corrected weight 2/(1 + 4π²k²).
            assert!((atom.weight - 2.0 / (1.0 + 4.0 * PI * PI * k * k)).abs() <= 1e-12);
        }
        let k0 = &mu.atoms()[20];
        assert!((k0.point.value() + 1.0).norm() < 1e-15 && (k0.weight - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_weights_match_radial_oracle() {
        let xi = TorusPoint::from_angle(2.0);
        let phi = InnerFunction1D::singular(0.7, xi).unwrap();
        let a = UnimodularConstant::from_angle(0.4);
        let mu = clark_atomic_singular(0.7, xi, a, 6).unwrap();
        for at in mu.atoms() {
            let v = phi.boundary_value(&at.point).unimodular().unwrap();
            assert!((v - a.alpha()).norm() <= 1e-9);
            let d = phi.angular_derivative_modulus(&at.point).unwrap().finite().unwrap();
            assert!((at.weight * d - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn singular_mass_brackets_herglotz() {
        let xi = TorusPoint::ONE;
        let phi = exp_fn();
        let p0 = phi.eval(&crate::torus::DiskPoint::ORIGIN);
        for nu in [0.0, 0.5, FRAC_PI_2, 3.0, 5.5] {
            let a = UnimodularConstant::from_angle(nu);
            let mu = clark_atomic_singular(1.0, xi, a, 10_000).unwrap();
            let mass = (1.0 - p0.norm_sqr()) / (a.alpha() - p0).norm_sqr();
            let listed = mu.listed_mass();
            assert!(listed <= mass + 1e-12, "nu={nu}");
            assert!(listed + mu.tail_bound() >= mass - 1e-12, "nu={nu}");
            assert!(mu.tail_bound() <= 4.0 / (PI * PI * 10_000.0));
        }
    }

    #[test]
    fn level_points_report_accumulation() {
        let lp = level_points(&exp_fn(), UnimodularConstant::from_angle(0.0), 5).unwrap();
        assert_eq!(lp.points.len(), 11);
        assert_eq!(lp.accumulation.len(), 1);
        assert!(lp.accumulation[0].same_point(&TorusPoint::ONE));
        let sq = level_points(&InnerFunction1D::monomial(2), UnimodularConstant::from_angle(PI), 5)
            .unwrap();
        let mut th: Vec<f64> = sq.points.iter().map(|p| p.theta()).collect();
        th.sort_by(f64::total_cmp);
        assert!((th[0] - FRAC_PI_2).abs() < 1e-13 && (th[1] - 1.5 * PI).abs() < 1e-13);
        assert!(sq.accumulation.is_empty());
    }

    #[test]
    fn unimodular_factor_shifts_parameter() {
        let f = InnerFunction1D::new(
            UnimodularConstant::from_angle(1.0),
            0,
            Vec::new(),
            alloc::vec![crate::inner1d::SingularAtom { xi: TorusPoint::ONE, mass: 1.0 }],
        )
        .unwrap();
        let a = UnimodularConstant::from_angle(2.5);
        let mu = clark_measure(&f, a, 30).unwrap();
        for at in mu.atoms() {
            let v = f.boundary_value(&at.point).unimodular().unwrap();
            assert!((v - a.alpha()).norm() <= 1e-9);
        }
    }

    #[test]
    fn mutual_singularity_at_atom_level() {
        let phi = InnerFunction1D::blaschke(1, alloc::vec![DiskPoint::new(c(0.3, 0.4)).unwrap()]);
        let a = clark_blaschke(&phi, UnimodularConstant::from_angle(0.0)).unwrap();
        let b = clark_blaschke(&phi, UnimodularConstant::from_angle(0.1)).unwrap();
        for x in a.atoms() {
            for y in b.atoms() {
                assert!(x.point.distance(&y.point) > 1e-9);
            }
        }
    }
}
