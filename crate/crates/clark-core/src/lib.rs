//! Clark measures of inner functions on the disc, the bidisc and the polydisc.
//!
//! Everything here is pure numerics on `alloc`; file formats and the command
//! line live in the `clark` crate.
#![no_std]
// With std linked into test builds the inherent float methods shadow `Float`.
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod clark1d;
pub mod embed;
pub mod inner1d;
pub mod measure;
pub mod poly;
pub mod product2d;
pub mod quadrature;
pub mod richardson;
pub mod rif2d;
pub mod tolerances;
pub mod torus;
pub mod verify;

pub use error::{ClarkError, Result};
pub use num_complex::Complex64;

pub use clark1d::{clark_atomic_singular, clark_blaschke, clark_measure, level_points, LevelPoints};
pub use embed::{
    embed_clark2d, embed_clark_nd, embed_level_set, integrate_embed_nd, EmbeddedClarkND, Embedding,
};
pub use inner1d::{AngularDerivative, BoundaryValue, InnerFunction1D, SingularAtom};
pub use measure::{
    integrate_measure2d, Atom, ClarkMeasure2D, CurveComponent, DiscreteMeasure1D, Factor,
    Generator, GraphRule, Integral, LineComponent, TestFunction,
};
pub use poly::Poly1;
pub use product2d::{
    blaschke_exp_branches, blaschke_exp_curves, expexp_branches, expexp_curves, fiber_measure,
    product_clark_integrate, BranchCurve, BranchFamily, ProductClark, ProductInner,
    ProductQuadrature,
};
pub use quadrature::{pairwise_sum, periodic_quadrature, QuadratureGrid};
pub use rif2d::{reflect, RifN1, Singularity};
pub use torus::{poisson_kernel, poisson_kernel_nd, DiskPoint, TorusPoint, UnimodularConstant};
pub use verify::{
    herglotz_rhs, sample_points, verify, ClarkMeasure, Exemption, InnerFunctionNd,
    VerificationReport, VerifyConfig,
};
