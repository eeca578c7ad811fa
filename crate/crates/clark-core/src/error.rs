use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, ClarkError>;

#[derive(Debug, Clone, PartialEq)]
pub enum ClarkError {
    /// A point that must lie in the open disc does not.
    NotInDisk { modulus: f64 },
    NotUnimodular { modulus: f64 },
    LengthMismatch { expected: usize, found: usize },
    /// Too many quadrature nodes where the integrand is undefined.
    TooManyUndefined { nodes: Vec<usize>, limit: usize },
    /// Failure inside one component of a composite measure.
    Component { index: usize, source: Box<ClarkError> },
    /// |φ'| below the degeneracy floor at a purported atom.
    DegenerateDerivative { angle: f64, modulus: f64 },
    /// Boundary value is zero (singular atom) where a unimodular value is required.
    ZeroBoundaryValue { angle: f64 },
    /// Radial limit did not settle.
    Divergent { what: &'static str },
    Unsupported(&'static str),
    InvalidParameter { name: &'static str, detail: String },
    DuplicateAtoms { angle: f64 },
    DegreeTooHigh { degree: usize, n: usize },
    Unstable { z1: [f64; 2], r2: f64, modulus: f64 },
    NotAtoral,
    BranchCollision { angle: f64 },
    LineConstantNotConstant { spread: f64 },
}

impl ClarkError {
    pub fn invalid(name: &'static str, detail: impl Into<String>) -> Self {
        ClarkError::InvalidParameter { name, detail: detail.into() }
    }

    pub fn in_component(self, index: usize) -> Self {
        ClarkError::Component { index, source: Box::new(self) }
    }
}

impl fmt::Display for ClarkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClarkError::NotInDisk { modulus } => {
                write!(f, "point of modulus {modulus} is not in the open unit disc")
            }
            ClarkError::NotUnimodular { modulus } => {
                write!(f, "value of modulus {modulus} is not unimodular")
            }
            ClarkError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            ClarkError::TooManyUndefined { nodes, limit } => write!(
                f,
                "{} undefined quadrature nodes (limit {limit}): {:?}",
                nodes.len(),
                nodes
            ),
            ClarkError::Component { index, source } => write!(f, "component {index}: {source}"),
            ClarkError::DegenerateDerivative { angle, modulus } => write!(
                f,
                "angular derivative {modulus:e} at angle {angle} is below the degeneracy floor"
            ),
            ClarkError::ZeroBoundaryValue { angle } => {
                write!(f, "boundary value vanishes at angle {angle}")
            }
            ClarkError::Divergent { what } => write!(f, "radial limit of {what} did not converge"),
            ClarkError::Unsupported(what) => write!(f, "unsupported: {what}"),
            ClarkError::InvalidParameter { name, detail } => {
                write!(f, "invalid parameter `{name}`: {detail}")
            }
            ClarkError::DuplicateAtoms { angle } => {
                write!(f, "two atoms coincide near angle {angle}")
            }
            ClarkError::DegreeTooHigh { degree, n } => {
                write!(f, "polynomial degree {degree} exceeds reflection degree {n}")
            }
            ClarkError::Unstable { z1, r2, modulus } => write!(
                f,
                "polynomial is not stable: |p| = {modulus:e} near z1 = {}+{}i, |z2| = {r2}",
                z1[0], z1[1]
            ),
            ClarkError::NotAtoral => write!(f, "p and its reflection share a common factor"),
            ClarkError::BranchCollision { angle } => {
                write!(f, "branches collide (zero discriminant) at angle {angle}")
            }
            ClarkError::LineConstantNotConstant { spread } => {
                write!(f, "line derivative varies along the line (spread {spread:e})")
            }
        }
    }
}

impl core::error::Error for ClarkError {}
