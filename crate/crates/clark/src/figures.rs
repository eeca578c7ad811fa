//! Parameter sets for the five reference figures.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use clark_core::{
    DiskPoint, InnerFunction1D, InnerFunctionNd, Poly1, ProductInner, QuadratureGrid, RifN1,
    TorusPoint, UnimodularConstant,
};
use num_complex::Complex64;

use crate::curves::{blaschke_exp_points, check_points, expexp_points, rif_points, Family, PointCheck};
use crate::error::{CliError, Result};
use crate::output::Axes;

/// The rational inner function p̃/p with p = 4 − 3z₁ + z₁² − z₂(1 + z₁), reflected at (2, 1).
pub fn example_rif() -> RifN1 {
    RifN1::new(Poly1::from_real(&[4.0, -3.0, 1.0]), Poly1::from_real(&[-1.0, -1.0]), 2)
        .expect("stable atoral example")
}

pub fn exp_function() -> InnerFunction1D {
    InnerFunction1D::singular(1.0, TorusPoint::ONE).expect("positive mass")
}

/// exp(−(1+z₁)/(1−z₁)) · z₂(λ − z₂)/(1 − λ̄z₂) with λ = i/2.
pub fn blaschke_exp_product() -> ProductInner {
    let lambda = DiskPoint::new(Complex64::new(0.0, 0.5)).expect("inside");
    ProductInner::new(exp_function(), InnerFunction1D::blaschke(1, vec![lambda])).expect("supported")
}

pub fn exp_exp_product() -> ProductInner {
    ProductInner::new(exp_function(), exp_function()).expect("supported")
}

pub enum Source {
    Rif(RifN1),
    Product(ProductInner),
}

impl Source {
    pub fn function(&self) -> &dyn InnerFunctionNd {
        match self {
            Source::Rif(r) => r,
            Source::Product(p) => p,
        }
    }
}

pub struct FigureData {
    pub number: u8,
    pub title: &'static str,
    pub axes: Axes,
    pub families: Vec<Family>,
    pub source: Source,
}

impl FigureData {
    /// Support check of every emitted point against its own α.
    pub fn check(&self) -> Result<PointCheck> {
        let mut total = PointCheck::default();
        for f in &self.families {
            let c = check_points(self.source.function(), UnimodularConstant::from_angle(f.nu), &f.points)?;
            total.checked += c.checked;
            total.exempt += c.exempt;
            total.max_residual = total.max_residual.max(c.max_residual);
        }
        Ok(total)
    }
}

pub fn figure(number: u8, grid: &QuadratureGrid) -> Result<FigureData> {
    let lambda = DiskPoint::new(Complex64::new(0.0, 0.5)).expect("inside");
    let (title, axes, families, source) = match number {
        1 => {
            let r = example_rif();
            let families = [0.0, FRAC_PI_4, FRAC_PI_2, PI]
                .into_iter()
                .map(|nu| Ok(Family { nu, points: rif_points(&r, UnimodularConstant::from_angle(nu), grid)? }))
                .collect::<Result<Vec<_>>>()?;
            ("RIF level curves, alpha = 1, e^{i pi/4}, e^{i pi/2}, -1", Axes::Level, families, Source::Rif(r))
        }
        2 | 3 => {
            let points = blaschke_exp_points(lambda, FRAC_PI_4, grid)?;
            let (title, axes) = if number == 2 {
                ("Blaschke x exp level curves, alpha = e^{i pi/4}, lambda = i/2", Axes::Level)
            } else {
                ("Blaschke x exp weights, alpha = e^{i pi/4}, lambda = i/2", Axes::Weight)
            };
            (title, axes, vec![Family { nu: FRAC_PI_4, points }], Source::Product(blaschke_exp_product()))
        }
        4 | 5 => {
            let points = expexp_points(0.0, &[-1, 0, 2], grid);
            let (title, axes) = if number == 4 {
                ("exp x exp level curves, alpha = 1, k = -1, 0, 2", Axes::Level)
            } else {
                ("exp x exp weights, alpha = 1, k = -1, 0, 2", Axes::Weight)
            };
            (title, axes, vec![Family { nu: 0.0, points }], Source::Product(exp_exp_product()))
        }
        n => return Err(CliError::Schema(format!("no figure {n}; figures are 1 to 5"))),
    };
    Ok(FigureData { number, title, axes, families, source })
}
