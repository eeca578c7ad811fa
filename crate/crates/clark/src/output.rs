//! CSV and SVG writers.

use std::fmt::Write as _;
use std::io::Write;

use crate::curves::Family;
use crate::error::{CliError, Result};

/// Locale-independent, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows `component_id,theta1,theta2,weight`; ids are `<alpha index>:<component>`.
pub fn write_csv<W: Write>(out: W, families: &[Family]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| CliError::Schema(format!("csv: {e}"));
    w.write_record(["component_id", "theta1", "theta2", "weight"]).map_err(err)?;
    for (i, f) in families.iter().enumerate() {
        for p in &f.points {
            w.write_record([
                format!("{i}:{}", p.component),
                fmt_f64(p.zeta1.theta()),
                fmt_f64(p.zeta2.theta()),
                fmt_f64(p.weight),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|source| CliError::Io { path: "csv output".into(), source })
}

const PALETTE: [&str; 8] = ["#000000", "#8c8c8c", "#e07b00", "#c81e1e", "#1f5fb4", "#2a9d3a", "#7b3fa0", "#a05a2c"];
const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

/// What the two axes show.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axes {
    /// θ₁ against θ₂ on [0, 2π)².
    Level,
    /// θ₁ against the weight.
    Weight,
}

/// Polylines per component, colour per α, opacity from weight.
pub fn render_svg(families: &[Family], axes: Axes, title: &str) -> String {
    let tau = std::f64::consts::TAU;
    let wmax = families
        .iter()
        .flat_map(|f| f.points.iter().map(|p| p.weight))
        .filter(|w| w.is_finite())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let total = SIZE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black" stroke-width="1"/>"#
    );
    let map = |x: f64, y: f64, ymax: f64| (PAD + SIZE * x / tau, PAD + SIZE * (1.0 - y / ymax));
    for (i, f) in families.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut comps: Vec<&str> = f.points.iter().map(|p| p.component.as_str()).collect();
        comps.dedup();
        for c in comps {
            let pts: Vec<_> = f.points.iter().filter(|p| p.component == c).collect();
            let mut runs: Vec<Vec<(f64, f64, f64)>> = vec![Vec::new()];
            let mut last: Option<(f64, f64)> = None;
            for p in pts {
                let (x, y) = match axes {
                    Axes::Level => (p.zeta1.theta(), p.zeta2.theta()),
                    Axes::Weight => (p.zeta1.theta(), p.weight),
                };
                let ymax = if axes == Axes::Level { tau } else { wmax };
                if let Some((lx, ly)) = last {
                    let jump = (x - lx).abs() > 0.5 * tau || (axes == Axes::Level && (y - ly).abs() > 0.5 * tau);
                    if jump {
                        runs.push(Vec::new());
                    }
                }
                last = Some((x, y));
                let (px, py) = map(x, y, ymax);
                runs.last_mut().expect("nonempty").push((px, py, p.weight));
            }
            for run in runs.iter().filter(|r| !r.is_empty()) {
                let mean = run.iter().map(|r| r.2).sum::<f64>() / run.len() as f64;
                let opacity = if axes == Axes::Level { (mean / wmax).clamp(0.2, 1.0) } else { 1.0 };
                let coords: Vec<String> = run.iter().map(|(x, y, _)| format!("{x:.3},{y:.3}")).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{colour}" stroke-opacity="{opacity:.3}" stroke-width="1.2" points="{}"/>"#,
                    coords.join(" ")
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurvePoint;
    use clark_core::TorusPoint;

    fn fam() -> Vec<Family> {
        vec![Family {
            nu: 0.0,
            points: (0..4)
                .map(|j| CurvePoint {
                    component: "curve0".into(),
                    zeta1: TorusPoint::from_angle(j as f64),
                    zeta2: TorusPoint::from_angle(0.1),
                    weight: 0.5,
                })
                .collect(),
        }]
    }

    #[test]
    fn csv_header_and_digits() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &fam()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("component_id,theta1,theta2,weight"));
        assert_eq!(lines.next(), Some("0:curve0,0.0000000000000000e0,1.0000000000000001e-1,5.0000000000000000e-1"));
    }

    #[test]
    fn svg_has_polylines() {
        let s = render_svg(&fam(), Axes::Level, "t");
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
