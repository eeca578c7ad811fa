//! Pinned numerical tolerances shared by the library and its checks.

#[allow(unused_imports)]
use num_traits::Float;

/// Two torus points closer than this (radians) are the same point.
pub const CANONICAL_EQ: f64 = 1e-14;

/// Point equality used for atoms and singular locations.
pub const POINT_EQ: f64 = 1e-12;

/// Unimodular constants must satisfy ||α| − 1| ≤ this.
pub const UNIMODULAR: f64 = 1e-14;

/// Boundary values count as unimodular within this.
pub const BOUNDARY_UNIMODULAR: f64 = 1e-10;

/// Bisection width for Blaschke phase roots.
pub const BISECTION_WIDTH: f64 = 1e-13;

/// |φ'| below this at an atom is a degeneracy.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Radial sequences beyond this modulus diverge.
pub const DIVERGENCE: f64 = 1e12;

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 4096;

/// Default truncation order for ℤ-indexed atom families.
pub const DEFAULT_TRUNCATION: usize = 10_000;

/// Relative Poisson-identity tolerance for embeddings.
pub const IDENTITY_EMBED: f64 = 1e-6;

/// Relative Poisson-identity tolerance for product functions.
pub const IDENTITY_PRODUCT: f64 = 1e-5;

/// Relative Poisson-identity tolerance for rational inner functions.
pub const IDENTITY_RIF: f64 = 1e-8;

/// Mixed-sign Fourier coefficients must be below this (plus tail).
pub const FOURIER: f64 = 1e-8;

/// |Φ*(s) − α| allowed on support samples.
pub const SUPPORT: f64 = 1e-8;

/// Radius of the exemption neighbourhood around isolated singular points.
pub const EXEMPT_RADIUS: f64 = 1e-8;

/// Largest radius used for random test points.
pub const TEST_RADIUS: f64 = 0.95;

/// Exemption radius around an accumulation set of a singular factor with
/// mass `c`: inside it a double-precision sample point cannot resolve the
/// level set to within [`SUPPORT`].
pub fn accumulation_radius(c: f64) -> f64 {
    let rounding = 4.0 * f64::EPSILON;
    let r = (2.0 * c * rounding / SUPPORT).sqrt();
    if r > EXEMPT_RADIUS {
        r
    } else {
        EXEMPT_RADIUS
    }
}
