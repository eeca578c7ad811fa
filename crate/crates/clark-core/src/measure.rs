//! Discrete measures on 𝕋, curve-and-line measures on 𝕋², and separable test functions.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use num_complex::Complex64;

use crate::quadrature::{pairwise_slice, quadrature_with_skips, QuadratureGrid};
use crate::torus::{poisson_at, poisson_sup, DiskPoint, TorusPoint};
use crate::{ClarkError, Result};

#[derive(Clone, Copy, Debug)]
pub struct Atom {
    pub point: TorusPoint,
    pub weight: f64,
}

/// Closed-form family a discrete measure was drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Generator {
    Blaschke { degree: usize },
    /// exp(−c(ξ+z)/(ξ−z)) at parameter e^{iν}, atoms for |k| ≤ `truncation`.
    AtomicSingular { mass: f64, xi_angle: f64, nu: f64, truncation: usize },
}

#[derive(Clone, Debug)]
pub struct DiscreteMeasure1D {
    atoms: Vec<Atom>,
    tail_bound: f64,
    generator: Option<Generator>,
}

impl DiscreteMeasure1D {
    pub fn new(atoms: Vec<Atom>, tail_bound: f64, generator: Option<Generator>) -> Result<Self> {
        if atoms.iter().any(|a| a.weight <= 0.0 || !a.weight.is_finite()) {
            return Err(ClarkError::invalid("atoms", "weights must be positive and finite"));
        }
        if tail_bound < 0.0 || !tail_bound.is_finite() {
            return Err(ClarkError::invalid("tail_bound", "must be finite and nonnegative"));
        }
        let mut order: Vec<usize> = (0..atoms.len()).collect();
        order.sort_by(|&i, &j| atoms[i].point.theta().total_cmp(&atoms[j].point.theta()));
        let n = order.len();
        for w in 0..n {
            let (a, b) = (order[w], order[(w + 1) % n]);
            if n > 1 && atoms[a].point.same_point(&atoms[b].point) {
                return Err(ClarkError::DuplicateAtoms { angle: atoms[a].point.theta() });
            }
        }
        Ok(DiscreteMeasure1D { atoms, tail_bound, generator })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn generator(&self) -> Option<Generator> {
        self.generator
    }

    /// Σ of listed weights, summed pairwise.
    pub fn listed_mass(&self) -> f64 {
        let w: Vec<f64> = self.atoms.iter().map(|a| a.weight).collect();
        pairwise_slice(&w)
    }

    /// ∫ f dσ over the listed atoms.
    pub fn integrate<F: Fn(&TorusPoint) -> Complex64>(&self, f: F) -> Complex64 {
        crate::quadrature::pairwise_sum(self.atoms.len(), |j| {
            let a = &self.atoms[j];
            f(&a.point) * a.weight
        })
    }
}

/// A graph ζ ↦ (ζ, g(ζ)) carrying a density W(ζ).
pub trait GraphRule: Send + Sync {
    /// `(g(ζ), W(ζ))`, or `None` where the rule is undefined.
    fn eval(&self, zeta: &TorusPoint) -> Option<(TorusPoint, f64)>;

    /// Short label for diagnostics and plots.
    fn label(&self) -> &str {
        "graph"
    }
}

#[derive(Clone)]
pub enum CurveComponent {
    /// ζ ↦ (ζ, η ζ̄) with constant weight.
    Antidiagonal { eta: TorusPoint, weight: f64 },
    Graph(Arc<dyn GraphRule>),
}

impl fmt::Debug for CurveComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveComponent::Antidiagonal { eta, weight } => f
                .debug_struct("Antidiagonal")
                .field("eta", &eta.theta())
                .field("weight", weight)
                .finish(),
            CurveComponent::Graph(g) => write!(f, "Graph({})", g.label()),
        }
    }
}

impl CurveComponent {
    /// Point and density over ζ.
    pub fn eval(&self, zeta: &TorusPoint) -> Option<(TorusPoint, f64)> {
        match self {
            CurveComponent::Antidiagonal { eta, weight } => Some((eta.mul(&zeta.conj()), *weight)),
            CurveComponent::Graph(g) => g.eval(zeta),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LineComponent {
    pub tau: TorusPoint,
    pub constant: f64,
}

impl LineComponent {
    pub fn new(tau: TorusPoint, constant: f64) -> Result<Self> {
        if constant <= 0.0 || !constant.is_finite() {
            return Err(ClarkError::invalid("constant", "line constants must be positive"));
        }
        Ok(LineComponent { tau, constant })
    }
}

/// Curves and vertical lines on 𝕋²; point masses are not representable.
#[derive(Clone, Debug, Default)]
pub struct ClarkMeasure2D {
    pub curves: Vec<CurveComponent>,
    pub lines: Vec<LineComponent>,
    pub tail_bound: f64,
}

/// A value with its error bound and the number of dropped nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_bound: f64,
    pub skipped: usize,
}

/// One coordinate factor of a separable test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    One,
    Poisson(DiskPoint),
    /// ζ ↦ ζ^{−k}, i.e. conj(ζ^k).
    Fourier(i32),
}

impl Factor {
    /// Value at a unit complex number.
    #[inline]
    pub fn eval_unit(&self, u: Complex64) -> Complex64 {
        match self {
            Factor::One => Complex64::new(1.0, 0.0),
            Factor::Poisson(z) => Complex64::new(poisson_at(z.value(), u), 0.0),
            Factor::Fourier(k) => u.conj().powi(*k),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Factor::Poisson(z) => poisson_sup(z),
            _ => 1.0,
        }
    }
}

/// f(ζ) = ∏_j factor_j(ζ_j).
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub factors: Vec<Factor>,
}

impl TestFunction {
    pub fn constant(d: usize) -> Self {
        TestFunction { factors: alloc::vec![Factor::One; d] }
    }

    pub fn poisson(z: &[DiskPoint]) -> Self {
        TestFunction { factors: z.iter().map(|&z| Factor::Poisson(z)).collect() }
    }

    /// ζ ↦ conj(ζ^k), whose integral is μ̂(k).
    pub fn fourier(k: &[i32]) -> Self {
        TestFunction { factors: k.iter().map(|&k| Factor::Fourier(k)).collect() }
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.factors.iter().map(Factor::sup_norm).product()
    }

    pub fn eval(&self, zeta: &[TorusPoint]) -> Complex64 {
        self.factors.iter().zip(zeta).map(|(f, z)| f.eval_unit(z.value())).product()
    }
}

/// Σ_j ∫ f(ζ, g_j(ζ)) W_j(ζ) dm + Σ_k c_k ∫ f(τ_k, ζ) dm.
pub fn integrate_measure2d<F>(mu: &ClarkMeasure2D, f: F, grid: &QuadratureGrid) -> Result<Integral>
where
    F: Fn(&TorusPoint, &TorusPoint) -> Option<Complex64>,
{
    let sup = Cell::new(0.0f64);
    let track = |v: Complex64| {
        sup.set(sup.get().max(v.norm()));
        v
    };
    let mut parts: Vec<Complex64> = Vec::with_capacity(mu.curves.len() + mu.lines.len());
    let mut skipped = 0;
    for (i, c) in mu.curves.iter().enumerate() {
        let (v, s) = quadrature_with_skips(
            |z| {
                let (g, w) = c.eval(z)?;
                if w == 0.0 {
                    return Some(Complex64::new(0.0, 0.0));
                }
                Some(track(f(z, &g)?) * w)
            },
            grid,
        )
        .map_err(|e| e.in_component(i))?;
        skipped += s.len();
        parts.push(v);
    }
    for (i, l) in mu.lines.iter().enumerate() {
        let (v, s) = quadrature_with_skips(|z| Some(track(f(&l.tau, z)?)), grid)
            .map_err(|e| e.in_component(mu.curves.len() + i))?;
        skipped += s.len();
        parts.push(v * l.constant);
    }
    Ok(Integral {
        value: pairwise_slice(&parts),
        error_bound: mu.tail_bound * sup.get(),
        skipped,
    })
}

impl ClarkMeasure2D {
    /// Total mass: curve-weight integrals plus line constants.
    pub fn total_mass(&self, grid: &QuadratureGrid) -> Result<Integral> {
        integrate_measure2d(self, |_, _| Some(Complex64::new(1.0, 0.0)), grid)
    }

    /// Integrate a batch of separable test functions.
    ///
    /// Antidiagonal components use the identity |ηζ̄ − z| = |η − zζ|; each
    /// result equals [`integrate_measure2d`] on the same function.
    pub fn integrate_tests(
        &self,
        tests: &[TestFunction],
        grid: &QuadratureGrid,
    ) -> Result<Vec<Integral>> {
        for t in tests {
            if t.dimension() != 2 {
                return Err(ClarkError::LengthMismatch { expected: 2, found: t.dimension() });
            }
        }
        let n = grid.len();
        let nodes: Vec<TorusPoint> = grid.nodes().collect();
        let graphs: Vec<Option<Vec<Option<(TorusPoint, f64)>>>> = self
            .curves
            .iter()
            .map(|c| match c {
                CurveComponent::Graph(g) => Some(nodes.iter().map(|z| g.eval(z)).collect()),
                CurveComponent::Antidiagonal { .. } => None,
            })
            .collect();
        let mut out = Vec::with_capacity(tests.len());
        let mut first: Vec<Complex64> = alloc::vec![Complex64::new(0.0, 0.0); n];
        for t in tests {
            let (fa, fb) = (t.factors[0], t.factors[1]);
            for (j, z) in nodes.iter().enumerate() {
                first[j] = fa.eval_unit(z.value());
            }
            let mut parts: Vec<Complex64> = Vec::with_capacity(self.curves.len() + self.lines.len());
            let mut skipped = 0;
            for (i, c) in self.curves.iter().enumerate() {
                let v = match c {
                    CurveComponent::Antidiagonal { eta, weight } => {
                        let e = eta.value();
                        let s = antidiagonal_sum(&first, &nodes, e, &fb);
                        s / n as f64 * *weight
                    }
                    CurveComponent::Graph(_) => {
                        let pts = graphs[i].as_ref().expect("graph nodes");
                        let dropped = Cell::new(0usize);
                        let s = crate::quadrature::pairwise_sum(n, |j| match pts[j] {
                            Some((g, w)) if w != 0.0 => first[j] * fb.eval_unit(g.value()) * w,
                            Some(_) => Complex64::new(0.0, 0.0),
                            None => {
                                dropped.set(dropped.get() + 1);
                                Complex64::new(0.0, 0.0)
                            }
                        });
                        if dropped.get() > grid.undefined_limit() {
                            let bad = (0..n).filter(|&j| pts[j].is_none()).collect();
                            return Err(ClarkError::TooManyUndefined {
                                nodes: bad,
                                limit: grid.undefined_limit(),
                            }
                            .in_component(i));
                        }
                        skipped += dropped.get();
                        s / n as f64
                    }
                };
                parts.push(v);
            }
            for l in &self.lines {
                let a = fa.eval_unit(l.tau.value());
                let s = crate::quadrature::pairwise_sum(n, |j| fb.eval_unit(nodes[j].value()));
                parts.push(a * (s / n as f64) * l.constant);
            }
            out.push(Integral {
                value: pairwise_slice(&parts),
                error_bound: self.tail_bound * t.sup_norm(),
                skipped,
            });
        }
        Ok(out)
    }
}

/// Σ_j a_j · f(η ζ̄_j) over the grid, pairwise.
fn antidiagonal_sum(
    first: &[Complex64],
    nodes: &[TorusPoint],
    eta: Complex64,
    fb: &Factor,
) -> Complex64 {
    match fb {
        Factor::Poisson(z) if z.value() != Complex64::new(0.0, 0.0) => {
            let z = z.value();
            let num = 1.0 - z.norm_sqr();
            crate::quadrature::pairwise_sum(first.len(), |j| {
                let d = (eta - z * nodes[j].value()).norm_sqr();
                first[j] * (num / d)
            })
        }
        _ => crate::quadrature::pairwise_sum(first.len(), |j| {
            first[j] * fb.eval_unit(eta * nodes[j].value().conj())
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::CANONICAL_EQ;

    struct Diagonal;
    impl GraphRule for Diagonal {
        fn eval(&self, z: &TorusPoint) -> Option<(TorusPoint, f64)> {
            Some((*z, 1.0))
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_antidiagonal_mass() {
        let mu = ClarkMeasure2D {
            curves: alloc::vec![CurveComponent::Antidiagonal { eta: TorusPoint::ONE, weight: 1.0 }],
            ..Default::default()
        };
        let g = QuadratureGrid::default();
        assert!((mu.total_mass(&g).unwrap().value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn line_with_poisson() {
        let mu = ClarkMeasure2D {
            lines: alloc::vec![LineComponent::new(TorusPoint::ONE, 0.5).unwrap()],
            ..Default::default()
        };
        let z = [DiskPoint::ORIGIN, DiskPoint::new(c(0.3, 0.0)).unwrap()];
        let t = TestFunction::poisson(&z);
        let g = QuadratureGrid::default();
        let v = integrate_measure2d(&mu, |a, b| Some(t.eval(&[*a, *b])), &g).unwrap();
        assert!((v.value - 0.5).norm() <= 1e-10);
    }

    #[test]
    fn batch_matches_generic() {
        let mu = ClarkMeasure2D {
            curves: alloc::vec![
                CurveComponent::Antidiagonal { eta: TorusPoint::from_angle(0.7), weight: 0.25 },
                CurveComponent::Graph(Arc::new(Diagonal)),
            ],
            lines: alloc::vec![LineComponent::new(TorusPoint::from_angle(2.0), 0.5).unwrap()],
            tail_bound: 0.0,
        };
        let g = QuadratureGrid::new(512).unwrap();
        let z = [DiskPoint::new(c(0.2, -0.5)).unwrap(), DiskPoint::new(c(-0.6, 0.1)).unwrap()];
        let tests = [TestFunction::poisson(&z), TestFunction::fourier(&[2, -1])];
        let batch = mu.integrate_tests(&tests, &g).unwrap();
        for (t, b) in tests.iter().zip(&batch) {
            let v = integrate_measure2d(&mu, |a, b| Some(t.eval(&[*a, *b])), &g).unwrap();
            assert!((v.value - b.value).norm() <= 1e-13 * (1.0 + v.value.norm()));
        }
    }

    #[test]
    fn rejects_duplicate_atoms() {
        let a = Atom { point: TorusPoint::from_angle(1.0), weight: 1.0 };
        assert!(matches!(
            DiscreteMeasure1D::new(alloc::vec![a, a], 0.0, None),
            Err(ClarkError::DuplicateAtoms { .. })
        ));
        let wrap = [
            Atom { point: TorusPoint::from_angle(0.0), weight: 1.0 },
            Atom { point: TorusPoint::from_angle(-CANONICAL_EQ / 4.0), weight: 1.0 },
        ];
        assert!(DiscreteMeasure1D::new(wrap.to_vec(), 0.0, None).is_err());
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let a = Atom { point: TorusPoint::ONE, weight: 0.0 };
        assert!(DiscreteMeasure1D::new(alloc::vec![a], 0.0, None).is_err());
    }
}
