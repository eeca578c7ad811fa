//! Sampled level curves: the rows behind CSV and SVG output.

use clark_core::embed::embed_level_set;
use clark_core::product2d::{blaschke_exp_curves, expexp_curves, BranchCurve, BranchFamily};
use clark_core::verify::support_residual;
use clark_core::{
    ClarkError, CurveComponent, DiskPoint, InnerFunction1D, InnerFunctionNd, ProductClark,
    ProductInner, QuadratureGrid, RifN1, TorusPoint, UnimodularConstant,
};

use crate::error::Result;

/// One sample of a support component.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub component: String,
    pub zeta1: TorusPoint,
    pub zeta2: TorusPoint,
    pub weight: f64,
}

/// All curves for one value of α.
#[derive(Clone, Debug)]
pub struct Family {
    pub nu: f64,
    pub points: Vec<CurvePoint>,
}

fn point(component: String, zeta1: TorusPoint, zeta2: TorusPoint, weight: f64) -> CurvePoint {
    CurvePoint { component, zeta1, zeta2, weight }
}

/// Antidiagonals (ζ, ηζ̄), including the zero-weight ones through accumulation points.
pub fn embed_points(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
    grid: &QuadratureGrid,
) -> Result<Vec<CurvePoint>> {
    let comps = embed_level_set(phi, alpha, truncation)?;
    let mut out = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        if let CurveComponent::Antidiagonal { eta, weight } = c {
            out.extend(grid.nodes().map(|z| point(format!("antidiagonal{i}"), z, eta.mul(&z.conj()), *weight)));
        }
    }
    Ok(out)
}

/// The level curve ζ₂ = conj B_α(ζ₁) and any exceptional lines ζ₁ = τ.
pub fn rif_points(r: &RifN1, alpha: UnimodularConstant, grid: &QuadratureGrid) -> Result<Vec<CurvePoint>> {
    let mu = r.clark_measure(alpha)?;
    let mut out = Vec::new();
    for (i, c) in mu.curves.iter().enumerate() {
        out.extend(grid.nodes().filter_map(|z| c.eval(&z).map(|(g, w)| point(format!("curve{i}"), z, g, w))));
    }
    for (i, l) in mu.lines.iter().enumerate() {
        out.extend(grid.nodes().map(|z| point(format!("line{i}"), l.tau, z, l.constant)));
    }
    Ok(out)
}

fn branch_points(curves: &[BranchCurve], prefix: &str) -> Vec<CurvePoint> {
    curves
        .iter()
        .flat_map(|c| c.points.iter().map(move |&(a, b, w)| point(format!("{prefix}{}", c.label), a, b, w)))
        .collect()
}

/// Branch graphs of a product function; closed forms for the two worked families.
pub fn product_points(
    p: &ProductInner,
    alpha: UnimodularConstant,
    truncation: usize,
    grid: &QuadratureGrid,
) -> Result<Vec<CurvePoint>> {
    match BranchFamily::detect(p, alpha) {
        BranchFamily::ExpExp { nu } => {
            let k = truncation as i64;
            let ks: Vec<i64> = (-k..=k).collect();
            Ok(branch_points(&expexp_curves(nu, &ks, grid), "k"))
        }
        BranchFamily::BlaschkeExp { lambda, nu } => {
            Ok(branch_points(&blaschke_exp_curves(lambda, nu, grid)?, "branch"))
        }
        BranchFamily::Solver => {
            let mu = ProductClark::new(p.clone(), alpha, truncation)?;
            let mut out = Vec::new();
            for z in grid.nodes() {
                let beta = match p.fiber_parameter(&z, alpha) {
                    Ok(b) => b,
                    Err(ClarkError::ZeroBoundaryValue { .. }) => continue,
                    Err(e) => return Err(e.into()),
                };
                for (i, a) in mu.fiber(beta)?.atoms().iter().enumerate() {
                    out.push(point(format!("atom{i}"), z, a.point, a.weight));
                }
            }
            Ok(out)
        }
    }
}

/// Exp × exp branches for chosen indices k.
pub fn expexp_points(nu: f64, ks: &[i64], grid: &QuadratureGrid) -> Vec<CurvePoint> {
    branch_points(&expexp_curves(nu, ks, grid), "k")
}

/// Both Blaschke × exp branches.
pub fn blaschke_exp_points(lambda: DiskPoint, nu: f64, grid: &QuadratureGrid) -> Result<Vec<CurvePoint>> {
    Ok(branch_points(&blaschke_exp_curves(lambda, nu, grid)?, "branch"))
}

/// Result of checking |Φ*(s) − α| on emitted points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointCheck {
    pub checked: usize,
    pub exempt: usize,
    pub max_residual: f64,
}

pub fn check_points(phi: &dyn InnerFunctionNd, alpha: UnimodularConstant, points: &[CurvePoint]) -> Result<PointCheck> {
    let ex = phi.exemptions();
    let mut c = PointCheck::default();
    for p in points {
        match support_residual(phi, &ex, alpha, &[p.zeta1, p.zeta2])? {
            Some(r) => {
                c.checked += 1;
                c.max_residual = c.max_residual.max(r);
            }
            None => c.exempt += 1,
        }
    }
    Ok(c)
}
