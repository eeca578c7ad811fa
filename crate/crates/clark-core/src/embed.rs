//! Multiplicative embeddings Φ(z) = φ(z₁z₂⋯z_d).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::clark1d::{clark_measure, level_points};
use crate::inner1d::{BoundaryValue, InnerFunction1D};
use crate::measure::{
    integrate_measure2d, ClarkMeasure2D, CurveComponent, DiscreteMeasure1D, Factor, Integral,
    TestFunction,
};
use crate::quadrature::{pairwise_slice, pairwise_sum, QuadratureGrid};
use crate::torus::{DiskPoint, TorusPoint, UnimodularConstant};
use crate::{ClarkError, Result};

/// Largest dimension accepted by the nested quadratures.
pub const MAX_DIMENSION: usize = 4;
/// Outer grids use N / OUTER_REDUCTION nodes per extra dimension.
pub const OUTER_REDUCTION: usize = 8;

/// Φ(z) = φ(z₁⋯z_d).
#[derive(Clone, Debug)]
pub struct Embedding {
    phi: InnerFunction1D,
    d: usize,
}

impl Embedding {
    pub fn new(phi: InnerFunction1D, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(ClarkError::invalid("d", "embedding dimension must be at least 2"));
        }
        Ok(Embedding { phi, d })
    }

    pub fn phi(&self) -> &InnerFunction1D {
        &self.phi
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn eval(&self, z: &[DiskPoint]) -> Result<Complex64> {
        if z.len() != self.d {
            return Err(ClarkError::LengthMismatch { expected: self.d, found: z.len() });
        }
        let w: Complex64 = z.iter().map(DiskPoint::value).product();
        Ok(self.phi.eval_raw(w))
    }

    pub fn boundary_value(&self, zeta: &[TorusPoint]) -> Result<BoundaryValue> {
        if zeta.len() != self.d {
            return Err(ClarkError::LengthMismatch { expected: self.d, found: zeta.len() });
        }
        let w = zeta.iter().skip(1).fold(zeta[0], |acc, z| acc.mul(z));
        Ok(self.phi.boundary_value(&w))
    }
}

/// τ_α of φ(z₁⋯z_d), carried by its one-variable measure σ_α.
#[derive(Clone, Debug)]
pub struct EmbeddedClarkND {
    base: DiscreteMeasure1D,
    dimension: usize,
}

impl EmbeddedClarkND {
    pub fn new(base: DiscreteMeasure1D, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(ClarkError::invalid("d", "embedding dimension must be at least 2"));
        }
        Ok(EmbeddedClarkND { base, dimension })
    }

    pub fn base(&self) -> &DiscreteMeasure1D {
        &self.base
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn tail_bound(&self) -> f64 {
        self.base.tail_bound()
    }

    /// The two-variable measure: one antidiagonal per atom.
    pub fn to_2d(&self) -> ClarkMeasure2D {
        ClarkMeasure2D {
            curves: self
                .base
                .atoms()
                .iter()
                .map(|a| CurveComponent::Antidiagonal { eta: a.point, weight: a.weight })
                .collect(),
            lines: Vec::new(),
            tail_bound: self.base.tail_bound(),
        }
    }

    /// Batch integration of separable test functions.
    ///
    /// The last factor is summed over the atoms once per node of the inner
    /// grid; outer grids divide the inner one, so every product of nodes is
    /// again an inner node. The error bound adds |I_N − I_{N/2}| to the tail.
    pub fn integrate_tests(
        &self,
        tests: &[TestFunction],
        grid: &QuadratureGrid,
    ) -> Result<Vec<Integral>> {
        let d = self.dimension;
        check_dimension(d)?;
        if let Some(t) = tests.iter().find(|t| t.dimension() != d) {
            return Err(ClarkError::LengthMismatch { expected: d, found: t.dimension() });
        }
        if d == 2 {
            return self.to_2d().integrate_tests(tests, grid);
        }
        let n = grid.len();
        let outer = outer_size(n)?;
        let step = n / outer;
        let nodes: Vec<Complex64> = grid.nodes().map(|z| z.value()).collect();
        let atoms = self.base.atoms();
        tests
            .iter()
            .map(|t| {
                let last = t.factors[d - 1];
                // G[m] = Σ_k w_k f_d(η_k ū_m).
                let g: Vec<Complex64> =
                    (0..n).map(|m| atom_sum(atoms, &last, nodes[m].conj())).collect();
                let inner: Vec<Complex64> =
                    (0..n).map(|j| t.factors[d - 2].eval_unit(nodes[j])).collect();
                let outer_vals: Vec<Vec<Complex64>> = (0..d - 2)
                    .map(|i| (0..outer).map(|j| t.factors[i].eval_unit(nodes[j * step])).collect())
                    .collect();
                let (full, half) = nested_separable(&outer_vals, &inner, &g, step, outer, n);
                Ok(Integral {
                    value: full,
                    error_bound: self.tail_bound() * t.sup_norm() + (full - half).norm(),
                    skipped: 0,
                })
            })
            .collect()
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d > MAX_DIMENSION {
        return Err(ClarkError::invalid("d", "nested quadrature supports d ≤ 4"));
    }
    Ok(())
}

fn outer_size(n: usize) -> Result<usize> {
    if n % OUTER_REDUCTION != 0 || n < 2 * OUTER_REDUCTION {
        return Err(ClarkError::invalid("N", "grid size must be a multiple of 16"));
    }
    Ok(n / OUTER_REDUCTION)
}

/// Σ_k w_k f(η_k u).
fn atom_sum(atoms: &[crate::measure::Atom], f: &Factor, u: Complex64) -> Complex64 {
    match f {
        Factor::Poisson(z) if z.value() != Complex64::new(0.0, 0.0) => {
            // P_z(ηu) = (1 − |z|²)/|η − z ū|².
            let z = z.value();
            let num = 1.0 - z.norm_sqr();
            let zu = z * u.conj();
            let s: f64 = pairwise_sum(atoms.len(), |k| {
                atoms[k].weight / (atoms[k].point.value() - zu).norm_sqr()
            });
            Complex64::new(num * s, 0.0)
        }
        _ => pairwise_sum(atoms.len(), |k| f.eval_unit(atoms[k].point.value() * u) * atoms[k].weight),
    }
}

/// Nested mean over the outer grids and the inner grid of
/// Π outer_i · inner · G[index of the product], plus the same mean over
/// even indices only.
fn nested_separable(
    outer: &[Vec<Complex64>],
    inner: &[Complex64],
    g: &[Complex64],
    step: usize,
    m: usize,
    n: usize,
) -> (Complex64, Complex64) {
    fn rec(
        level: usize,
        outer: &[Vec<Complex64>],
        inner: &[Complex64],
        g: &[Complex64],
        step: usize,
        m: usize,
        n: usize,
        offset: usize,
        even: bool,
    ) -> Complex64 {
        if level == outer.len() {
            let stride = if even { 2 } else { 1 };
            let count = n / stride;
            let s = pairwise_sum(count, |j| {
                let j = j * stride;
                inner[j] * g[(offset + j) % n]
            });
            return s / count as f64;
        }
        let stride = if even { 2 } else { 1 };
        let count = m / stride;
        let s = pairwise_sum(count, |j| {
            let j = j * stride;
            outer[level][j] * rec(level + 1, outer, inner, g, step, m, n, (offset + j * step) % n, even)
        });
        s / count as f64
    }
    (
        rec(0, outer, inner, g, step, m, n, 0, false),
        rec(0, outer, inner, g, step, m, n, 0, true),
    )
}

/// One antidiagonal per level point; accumulation points get weight zero.
pub fn embed_level_set(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<Vec<CurveComponent>> {
    let mu = clark_measure(phi, alpha, truncation)?;
    let lp = level_points(phi, alpha, truncation)?;
    let mut out: Vec<CurveComponent> = mu
        .atoms()
        .iter()
        .map(|a| CurveComponent::Antidiagonal { eta: a.point, weight: a.weight })
        .collect();
    out.extend(lp.accumulation.iter().map(|&eta| CurveComponent::Antidiagonal { eta, weight: 0.0 }));
    Ok(out)
}

pub fn embed_clark_nd(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
    d: usize,
) -> Result<EmbeddedClarkND> {
    EmbeddedClarkND::new(clark_measure(phi, alpha, truncation)?, d)
}

/// Antidiagonals (ζ, η_k ζ̄) with constant weights 1/|φ'(η_k)|.
pub fn embed_clark2d(
    phi: &InnerFunction1D,
    alpha: UnimodularConstant,
    truncation: usize,
) -> Result<ClarkMeasure2D> {
    Ok(embed_clark_nd(phi, alpha, truncation, 2)?.to_2d())
}

/// Iterated quadrature of Σ_k w_k f(ζ₁,…,ζ_{d−1}, η_k conj(ζ₁⋯ζ_{d−1})).
///
/// d = 2 is [`integrate_measure2d`]; for d > 2 the first d − 2 variables use
/// N/8 nodes each.
pub fn integrate_embed_nd<F>(em: &EmbeddedClarkND, f: F, grid: &QuadratureGrid) -> Result<Integral>
where
    F: Fn(&[TorusPoint]) -> Option<Complex64>,
{
    let d = em.dimension();
    check_dimension(d)?;
    if d == 2 {
        return integrate_measure2d(&em.to_2d(), |a, b| f(&[*a, *b]), grid);
    }
    let n = grid.len();
    let outer = outer_size(n)?;
    let step = n / outer;
    let nodes: Vec<TorusPoint> = grid.nodes().collect();
    let atoms = em.base().atoms();
    let mut sup = 0.0f64;
    let mut skipped = 0usize;
    let mut point: Vec<TorusPoint> = alloc::vec![TorusPoint::ONE; d];
    let total = outer.pow((d - 2) as u32);
    let mut cells: Vec<Complex64> = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rest = flat;
        let mut offset = 0usize;
        for slot in point.iter_mut().take(d - 2) {
            let j = rest % outer;
            rest /= outer;
            *slot = nodes[j * step];
            offset += j * step;
        }
        let mut vals: Vec<Complex64> = Vec::with_capacity(n);
        for (j, zj) in nodes.iter().enumerate() {
            point[d - 2] = *zj;
            let prod = nodes[(offset + j) % n].conj();
            let mut acc: Vec<Complex64> = Vec::with_capacity(atoms.len());
            let mut ok = true;
            for a in atoms {
                point[d - 1] = TorusPoint::from_unit(a.point.value() * prod.value()).expect("unit");
                match f(&point) {
                    Some(v) => {
                        sup = sup.max(v.norm());
                        acc.push(v * a.weight);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                vals.push(pairwise_slice(&acc));
            } else {
                skipped += 1;
                vals.push(Complex64::new(0.0, 0.0));
            }
        }
        cells.push(pairwise_slice(&vals) / n as f64);
    }
    let limit = (total * n - 1) / 1000;
    if skipped > limit {
        return Err(ClarkError::TooManyUndefined { nodes: Vec::new(), limit });
    }
    Ok(Integral {
        value: pairwise_slice(&cells) / total as f64,
        error_bound: em.tail_bound() * sup,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::DEFAULT_TRUNCATION;
    use core::f64::consts::{E, PI};

    fn exp_fn() -> InnerFunction1D {
        InnerFunction1D::singular(1.0, TorusPoint::ONE).unwrap()
    }

    fn disk(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn identity_single_antidiagonal() {
        let a = UnimodularConstant::from_angle(0.7);
        let mu = embed_clark2d(&InnerFunction1D::monomial(1), a, 10).unwrap();
        assert_eq!(mu.curves.len(), 1);
        match &mu.curves[0] {
            CurveComponent::Antidiagonal { eta, weight } => {
                assert!(eta.approx_eq(&a.as_point(), 1e-13));
                assert!((weight - 1.0).abs() < 1e-14);
            }
            _ => panic!("expected antidiagonal"),
        }
    }

    #[test]
    fn square_two_antidiagonals() {
        let set = embed_level_set(&InnerFunction1D::monomial(2), UnimodularConstant::from_angle(0.0), 10)
            .unwrap();
        let mut angles: Vec<f64> = set
            .iter()
            .map(|c| match c {
                CurveComponent::Antidiagonal { eta, .. } => eta.theta(),
                _ => panic!(),
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        assert!(angles[0].abs() < 1e-12 && (angles[1] - PI).abs() < 1e-12);
    }

    #[test]
    fn exponential_level_set_has_zero_weight_accumulation() {
        let set = embed_level_set(&exp_fn(), UnimodularConstant::from_angle(0.0), 5).unwrap();
        assert_eq!(set.len(), 12);
        match set.last().unwrap() {
            CurveComponent::Antidiagonal { eta, weight } => {
                assert!(eta.same_point(&TorusPoint::ONE));
                assert_eq!(*weight, 0.0);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn exponential_mass() {
        let mu = embed_clark2d(&exp_fn(), UnimodularConstant::from_angle(0.0), DEFAULT_TRUNCATION)
            .unwrap();
        let m = mu.total_mass(&QuadratureGrid::new(256).unwrap()).unwrap();
        let expected = (1.0 - E.powi(-2)) / (1.0 - 1.0 / E).powi(2);
        assert!((m.value.re - expected).abs() <= m.error_bound + 1e-12);
        assert!(m.error_bound < 1e-4);
    }

    #[test]
    fn d2_matches_measure2d() {
        let phi = InnerFunction1D::blaschke(0, alloc::vec![disk(0.0, 0.5)]);
        let em = embed_clark_nd(&phi, UnimodularConstant::from_angle(1.0), 10, 2).unwrap();
        let grid = QuadratureGrid::new(512).unwrap();
        let z = [disk(0.3, 0.1), disk(-0.2, 0.4)];
        let t = TestFunction::poisson(&z);
        let a = integrate_embed_nd(&em, |p| Some(t.eval(p)), &grid).unwrap();
        let b = integrate_measure2d(&em.to_2d(), |x, y| Some(t.eval(&[*x, *y])), &grid).unwrap();
        assert!((a.value - b.value).norm() < 1e-14);
        let c = em.integrate_tests(&[t], &grid).unwrap();
        assert!((a.value - c[0].value).norm() < 1e-13);
    }

    #[test]
    fn d3_identity_probability() {
        let em = embed_clark_nd(&InnerFunction1D::monomial(1), UnimodularConstant::from_angle(0.4), 1, 3)
            .unwrap();
        let grid = QuadratureGrid::new(128).unwrap();
        let v = integrate_embed_nd(&em, |_| Some(Complex64::new(1.0, 0.0)), &grid).unwrap();
        assert!((v.value - 1.0).norm() < 1e-14);
        let b = em.integrate_tests(&[TestFunction::constant(3)], &grid).unwrap();
        assert!((b[0].value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn d3_generic_and_separable_agree() {
        let phi = InnerFunction1D::blaschke(1, alloc::vec![disk(0.2, -0.3)]);
        let em = embed_clark_nd(&phi, UnimodularConstant::from_angle(2.0), 1, 3).unwrap();
        let grid = QuadratureGrid::new(64).unwrap();
        let z = [disk(0.3, 0.0), disk(0.0, 0.2), disk(-0.1, 0.0)];
        let t = TestFunction::poisson(&z);
        let a = integrate_embed_nd(&em, |p| Some(t.eval(p)), &grid).unwrap();
        let b = em.integrate_tests(&[t], &grid).unwrap();
        assert!((a.value - b[0].value).norm() < 1e-12, "{} {}", a.value, b[0].value);
    }

    #[test]
    fn d3_exponential_poisson_identity() {
        let em = embed_clark_nd(&exp_fn(), UnimodularConstant::from_angle(0.0), 2000, 3).unwrap();
        let z = [disk(0.3, 0.0), disk(0.0, 0.2), disk(-0.1, 0.0)];
        let v = em.integrate_tests(&[TestFunction::poisson(&z)], &QuadratureGrid::new(1024).unwrap())
            .unwrap();
        let phi = Embedding::new(exp_fn(), 3).unwrap().eval(&z).unwrap();
        let rhs = (1.0 - phi.norm_sqr()) / (1.0 - phi).norm_sqr();
        assert!((v[0].value.re - rhs).abs() <= 1e-6 * rhs + v[0].error_bound);
    }

    #[test]
    fn rejects_large_dimension() {
        let em = embed_clark_nd(&InnerFunction1D::monomial(1), UnimodularConstant::from_angle(0.0), 1, 5)
            .unwrap();
        let grid = QuadratureGrid::new(64).unwrap();
        assert!(integrate_embed_nd(&em, |_| Some(Complex64::new(1.0, 0.0)), &grid).is_err());
    }

    #[test]
    fn embedding_boundary_value() {
        let e = Embedding::new(InnerFunction1D::monomial(2), 3).unwrap();
        let v = e
            .boundary_value(&[TorusPoint::from_angle(0.1), TorusPoint::from_angle(0.2), TorusPoint::from_angle(0.3)])
            .unwrap()
            .unimodular()
            .unwrap();
        assert!((v - Complex64::from_polar(1.0, 1.2)).norm() < 1e-14);
    }
}
