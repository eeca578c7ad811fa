//! JSON input formats. Angles are radians, complex numbers `[re, im]`.

use std::path::Path;

use clark_core::{
    DiskPoint, InnerFunction1D, Poly1, ProductInner, RifN1, SingularAtom, TorusPoint,
    UnimodularConstant,
};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// e^{i·unimodular} z^monomial ∏ (a − z)/(1 − āz) · exp(−Σ mass (ξ + z)/(ξ − z)).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub unimodular: f64,
    #[serde(default)]
    pub monomial: u32,
    #[serde(default)]
    pub blaschke_zeros: Vec<[f64; 2]>,
    #[serde(default)]
    pub singular_atoms: Vec<AtomSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub angle: f64,
    pub mass: f64,
}

impl FunctionSpec {
    pub fn build(&self) -> Result<InnerFunction1D> {
        let zeros = self
            .blaschke_zeros
            .iter()
            .map(|&[re, im]| {
                DiskPoint::new(Complex64::new(re, im))
                    .map_err(|e| CliError::Schema(format!("blaschke_zeros: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let atoms = self
            .singular_atoms
            .iter()
            .map(|a| SingularAtom { xi: TorusPoint::from_angle(a.angle), mass: a.mass })
            .collect();
        InnerFunction1D::new(UnimodularConstant::from_angle(self.unimodular), self.monomial, zeros, atoms)
            .map_err(|e| CliError::Schema(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub phi: FunctionSpec,
    pub psi: FunctionSpec,
}

impl ProductSpec {
    pub fn build(&self) -> Result<ProductInner> {
        ProductInner::new(self.phi.build()?, self.psi.build()?).map_err(|e| CliError::Schema(e.to_string()))
    }
}

/// p(z) = p1(z₁) + z₂ p2(z₁), coefficients ascending, reflected at degree n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RifSpec {
    pub p1: Vec<[f64; 2]>,
    pub p2: Vec<[f64; 2]>,
    pub n: usize,
}

fn poly(c: &[[f64; 2]]) -> Poly1 {
    Poly1::new(c.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

impl RifSpec {
    pub fn build(&self) -> Result<RifN1> {
        RifN1::new(poly(&self.p1), poly(&self.p2), self.n).map_err(|e| CliError::Schema(e.to_string()))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}
