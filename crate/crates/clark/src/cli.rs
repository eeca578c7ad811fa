//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use clark_core::embed::embed_clark_nd;
use clark_core::verify::{verify, VerifyConfig};
use clark_core::{
    clark_measure, ClarkMeasure, DiskPoint, Embedding, InnerFunctionNd, ProductClark,
    QuadratureGrid, UnimodularConstant,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::curves::{check_points, embed_points, product_points, rif_points, CurvePoint, Family};
use crate::error::{CliError, Result};
use crate::figures::{figure, Source};
use crate::output::{fmt_f64, render_svg, write_csv, Axes};
use crate::schema::{read_json, FunctionSpec, ProductSpec, RifSpec};

#[derive(Debug, Parser)]
#[command(name = "clark", version, about = "Clark measures of inner functions on the disc and polydisc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at a point of the disc or polydisc.
    Eval {
        #[command(flatten)]
        source: SourceArgs,
        /// Coordinates as re,im; repeat once per variable.
        #[arg(long = "z", value_parser = parse_complex, required = true, allow_hyphen_values = true)]
        z: Vec<[f64; 2]>,
    },
    /// Atoms and weights of a one-variable Clark measure.
    Measure1d {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Antidiagonal support of an embedding φ(z₁z₂).
    Embed {
        #[arg(long)]
        embed: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Branch graphs of a product φ(z₁)ψ(z₂).
    Product {
        #[arg(long)]
        product: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Level curve and exceptional lines of a rational inner function.
    Rif {
        #[arg(long)]
        rif: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the verification suite; exit code 3 on failure.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        /// Number of random test points.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Largest |k_i| in the Fourier check.
        #[arg(long, default_value_t = 8)]
        kmax: i32,
        /// Relative tolerance of the Poisson identity; defaults per function kind.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Level-curve CSV and SVG for a reference figure or an input function.
    Plot {
        /// Reference figure 1 to 5.
        #[arg(long, conflicts_with_all = ["rif", "product", "embed"])]
        figure: Option<u8>,
        #[arg(long)]
        rif: Option<PathBuf>,
        #[arg(long)]
        product: Option<PathBuf>,
        #[arg(long)]
        embed: Option<PathBuf>,
        /// Comma-separated angles ν of α = e^{iν}.
        #[arg(long = "alpha-list", value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
        alpha_list: Vec<f64>,
        #[arg(long = "N", default_value_t = 1024, value_parser = parse_grid)]
        n: usize,
        #[arg(long = "K", default_value_t = 20, value_parser = parse_truncation)]
        k: usize,
        /// Output prefix; writes <prefix>.csv and <prefix>.svg.
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// One-variable function spec.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Function spec, embedded as φ(z₁⋯z_d).
    #[arg(long)]
    embed: Option<PathBuf>,
    #[arg(long)]
    product: Option<PathBuf>,
    #[arg(long)]
    rif: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Angle ν of α = e^{iν}, radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Quadrature nodes; 4096 by default, 16384 for rational inner functions.
    #[arg(long = "N", value_parser = parse_grid)]
    n: Option<usize>,
    #[arg(long = "K", default_value_t = 10_000, value_parser = parse_truncation)]
    k: usize,
    /// Embedding dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Destination file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Samples per curve component.
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

fn parse_complex(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let re = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([re, im])
}

fn parse_grid(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
    if n < 256 || !n.is_power_of_two() {
        return Err(format!("N must be a power of two ≥ 256, got {n}"));
    }
    Ok(n)
}

fn parse_truncation(s: &str) -> std::result::Result<usize, String> {
    let k: usize = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
    if k < 1 {
        return Err("K must be at least 1".into());
    }
    Ok(k)
}

/// Parse and run; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Schema(e.to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}

fn write_out(path: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => stdout
            .write_all(bytes)
            .map_err(|source| CliError::Io { path: "stdout".into(), source }),
    }
}

fn json_line<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

#[derive(Serialize)]
struct AtomOut {
    angle: f64,
    weight: f64,
}

#[derive(Serialize)]
struct RowOut<'a> {
    component_id: &'a str,
    theta1: f64,
    theta2: f64,
    weight: f64,
}

fn emit_curves(families: &[Family], out: &OutputArgs, title: &str, stdout: &mut dyn Write) -> Result<()> {
    let bytes = match out.format {
        Format::Csv => {
            let mut b = Vec::new();
            write_csv(&mut b, families)?;
            b
        }
        Format::Svg => render_svg(families, Axes::Level, title).into_bytes(),
        Format::Json => {
            let rows: Vec<RowOut> = families
                .iter()
                .flat_map(|f| f.points.iter())
                .map(|p| RowOut {
                    component_id: &p.component,
                    theta1: p.zeta1.theta(),
                    theta2: p.zeta2.theta(),
                    weight: p.weight,
                })
                .collect();
            json_line(&rows)?
        }
    };
    write_out(out.output.as_deref(), stdout, &bytes)
}

enum Loaded {
    Function(clark_core::InnerFunction1D),
    Embed(Embedding),
    Product(clark_core::ProductInner),
    Rif(clark_core::RifN1),
}

fn load(source: &SourceArgs, d: usize) -> Result<Loaded> {
    if let Some(p) = &source.input {
        return Ok(Loaded::Function(read_json::<FunctionSpec>(p)?.build()?));
    }
    if let Some(p) = &source.embed {
        let phi = read_json::<FunctionSpec>(p)?.build()?;
        return Ok(Loaded::Embed(Embedding::new(phi, d).map_err(|e| CliError::Schema(e.to_string()))?));
    }
    if let Some(p) = &source.product {
        return Ok(Loaded::Product(read_json::<ProductSpec>(p)?.build()?));
    }
    if let Some(p) = &source.rif {
        return Ok(Loaded::Rif(read_json::<RifSpec>(p)?.build()?));
    }
    Err(CliError::Schema("one of --input, --embed, --product, --rif is required".into()))
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Eval { source, z } => {
            let loaded = load(&source, z.len().max(2))?;
            let pts = z
                .iter()
                .map(|&[re, im]| DiskPoint::new(Complex64::new(re, im)).map_err(|e| CliError::Schema(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let v = match &loaded {
                Loaded::Function(f) => {
                    if pts.len() != 1 {
                        return Err(CliError::Schema("a one-variable function takes one --z".into()));
                    }
                    f.eval(&pts[0])
                }
                Loaded::Embed(e) => InnerFunctionNd::eval(e, &pts)?,
                Loaded::Product(p) => InnerFunctionNd::eval(p, &pts)?,
                Loaded::Rif(r) => InnerFunctionNd::eval(r, &pts)?,
            };
            #[derive(Serialize)]
            struct Out {
                value: [f64; 2],
            }
            write_out(None, stdout, &json_line(&Out { value: [v.re, v.im] })?)
        }
        Command::Measure1d { input, common } => {
            let phi = read_json::<FunctionSpec>(&input)?.build()?;
            let mu = clark_measure(&phi, UnimodularConstant::from_angle(common.alpha), common.k)?;
            #[derive(Serialize)]
            struct Out {
                atoms: Vec<AtomOut>,
                tail_bound: f64,
            }
            let atoms = mu.atoms().iter().map(|a| AtomOut { angle: a.point.theta(), weight: a.weight }).collect();
            write_out(None, stdout, &json_line(&Out { atoms, tail_bound: mu.tail_bound() })?)
        }
        Command::Embed { embed, common, out } => {
            let phi = read_json::<FunctionSpec>(&embed)?.build()?;
            let alpha = UnimodularConstant::from_angle(common.alpha);
            let grid = QuadratureGrid::new(out.samples).map_err(|e| CliError::Schema(e.to_string()))?;
            let points = embed_points(&phi, alpha, common.k, &grid)?;
            emit_curves(&[Family { nu: common.alpha, points }], &out, "embedding level set", stdout)
        }
        Command::Product { product, common, out } => {
            let p = read_json::<ProductSpec>(&product)?.build()?;
            let alpha = UnimodularConstant::from_angle(common.alpha);
            let grid = QuadratureGrid::new(out.samples).map_err(|e| CliError::Schema(e.to_string()))?;
            let points = product_points(&p, alpha, common.k, &grid)?;
            emit_curves(&[Family { nu: common.alpha, points }], &out, "product level set", stdout)
        }
        Command::Rif { rif, common, out } => {
            let r = read_json::<RifSpec>(&rif)?.build()?;
            if out.format == Format::Json {
                return write_out(out.output.as_deref(), stdout, &json_line(&rif_summary(&r)?)?);
            }
            let grid = QuadratureGrid::new(out.samples).map_err(|e| CliError::Schema(e.to_string()))?;
            let points = rif_points(&r, UnimodularConstant::from_angle(common.alpha), &grid)?;
            emit_curves(&[Family { nu: common.alpha, points }], &out, "RIF level set", stdout)
        }
        Command::Verify { source, common, seed, points, kmax, tolerance, output } => {
            let alpha = UnimodularConstant::from_angle(common.alpha);
            let loaded = load(&source, common.d)?;
            let (mu, phi, default_tol, default_n): (Box<dyn ClarkMeasure>, Box<dyn InnerFunctionNd>, f64, usize) = match loaded {
                Loaded::Function(_) => {
                    return Err(CliError::Schema("verify needs --embed, --product or --rif".into()))
                }
                Loaded::Embed(e) => {
                    let mu = embed_clark_nd(e.phi(), alpha, common.k, common.d)?;
                    let tol = if common.d == 2 { 1e-6 } else { 1e-5 };
                    (Box::new(mu), Box::new(e), tol, 4096)
                }
                Loaded::Product(p) => (Box::new(ProductClark::new(p.clone(), alpha, common.k)?), Box::new(p), 1e-5, 4096),
                Loaded::Rif(r) => (Box::new(r.clark_measure(alpha)?), Box::new(r), 1e-8, 16_384),
            };
            let mut cfg = VerifyConfig::new(tolerance.unwrap_or(default_tol));
            cfg.seed = seed;
            cfg.points = points;
            cfg.kmax = kmax;
            cfg.grid = QuadratureGrid::new(common.n.unwrap_or(default_n))?;
            let report = verify(mu.as_ref(), phi.as_ref(), alpha, &cfg)?;
            write_out(output.as_deref(), stdout, &json_line(&report)?)?;
            if !report.passed {
                return Err(CliError::Verification(format!(
                    "max identity error {}, max mixed Fourier coefficient {}",
                    fmt_f64(report.max_identity_error()),
                    fmt_f64(report.max_fourier())
                )));
            }
            Ok(())
        }
        Command::Plot { figure: fig, rif, product, embed, alpha_list, n, k, output } => {
            let grid = QuadratureGrid::new(n)?;
            let data = match (fig, rif, product, embed) {
                (Some(f), ..) => figure(f, &grid)?,
                (None, Some(p), None, None) => {
                    let r = read_json::<RifSpec>(&p)?.build()?;
                    let exceptional = r.exceptional_values()?;
                    let families = alpha_list
                        .iter()
                        .map(|&nu| snap_exceptional(nu, &exceptional))
                        .map(|nu| Ok(Family { nu, points: rif_points(&r, UnimodularConstant::from_angle(nu), &grid)? }))
                        .collect::<Result<Vec<_>>>()?;
                    crate::figures::FigureData { number: 0, title: "RIF level curves", axes: Axes::Level, families, source: Source::Rif(r) }
                }
                (None, None, Some(p), None) => {
                    let pr = read_json::<ProductSpec>(&p)?.build()?;
                    let families = alpha_list
                        .iter()
                        .map(|&nu| {
                            Ok(Family { nu, points: product_points(&pr, UnimodularConstant::from_angle(nu), k, &grid)? })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    crate::figures::FigureData { number: 0, title: "product level curves", axes: Axes::Level, families, source: Source::Product(pr) }
                }
                (None, None, None, Some(p)) => {
                    let phi = read_json::<FunctionSpec>(&p)?.build()?;
                    let e = Embedding::new(phi.clone(), 2)?;
                    let mut families = Vec::new();
                    let mut worst = 0.0f64;
                    for &nu in &alpha_list {
                        let a = UnimodularConstant::from_angle(nu);
                        let points = embed_points(&phi, a, k, &grid)?;
                        worst = worst.max(check_points(&e, a, &points)?.max_residual);
                        families.push(Family { nu, points });
                    }
                    return finish_plot(&families, Axes::Level, "embedding level curves", &output, worst, stdout);
                }
                _ => return Err(CliError::Schema("plot needs exactly one of --figure, --rif, --product, --embed".into())),
            };
            let check = data.check()?;
            finish_plot(&data.families, data.axes, data.title, &output, check.max_residual, stdout)
        }
    }
}

/// Angles typed with a few decimals land within [`SNAP`] of an exceptional
/// value instead of on it; plotting then uses the exceptional value.
const SNAP: f64 = 1e-6;

fn snap_exceptional(nu: f64, exceptional: &[UnimodularConstant]) -> f64 {
    let a = UnimodularConstant::from_angle(nu);
    exceptional
        .iter()
        .find(|e| e.as_point().distance(&a.as_point()) <= SNAP)
        .map_or(nu, |e| e.nu())
}

fn finish_plot(
    families: &[Family],
    axes: Axes,
    title: &str,
    prefix: &Path,
    max_residual: f64,
    stdout: &mut dyn Write,
) -> Result<()> {
    let csv_path = prefix.with_extension("csv");
    let svg_path = prefix.with_extension("svg");
    let mut b = Vec::new();
    write_csv(&mut b, families)?;
    write_out(Some(&csv_path), stdout, &b)?;
    write_out(Some(&svg_path), stdout, render_svg(families, axes, title).as_bytes())?;
    #[derive(Serialize)]
    struct Out {
        csv: String,
        svg: String,
        families: usize,
        points: usize,
        max_support_residual: f64,
    }
    let points = families.iter().map(|f| f.points.len()).sum();
    write_out(
        None,
        stdout,
        &json_line(&Out {
            csv: csv_path.display().to_string(),
            svg: svg_path.display().to_string(),
            families: families.len(),
            points,
            max_support_residual: max_residual,
        })?,
    )?;
    if max_residual > clark_core::tolerances::SUPPORT {
        return Err(CliError::Verification(format!("emitted point off the level set by {}", fmt_f64(max_residual))));
    }
    Ok(())
}

#[derive(Serialize)]
struct SingularityOut {
    z1: f64,
    z2: f64,
    value: f64,
    line_constant: f64,
}

#[derive(Serialize)]
struct RifSummary {
    singularities: Vec<SingularityOut>,
    exceptional_values: Vec<f64>,
}

fn rif_summary(r: &clark_core::RifN1) -> Result<RifSummary> {
    let singularities = r
        .singularities()
        .iter()
        .map(|s| {
            let v = r.radial_value(s)?;
            Ok(SingularityOut {
                z1: s.z1.theta(),
                z2: s.z2.theta(),
                value: clark_core::torus::canonical_angle(v.im.atan2(v.re)),
                line_constant: r.line_constant(s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let exceptional_values = r.exceptional_values()?.iter().map(|a| a.nu()).collect();
    Ok(RifSummary { singularities, exceptional_values })
}

/// Rows of a family, for callers that want them without a writer.
pub fn rows(f: &Family) -> impl Iterator<Item = &CurvePoint> {
    f.points.iter()
}
