//! CSV and SVG renderings of a slice diagram.

use std::io::Write;

use super::{active_points, SliceDiagram};
use crate::correlations::PhaseLabel;
use crate::error::Result;

const CANVAS: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

/// Formats like C's `%.12g`.
pub fn format_g12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn colour(phase: PhaseLabel) -> &'static str {
    match phase {
        PhaseLabel::Zero => "#4169e1",
        PhaseLabel::PiHalf => "#2e8b57",
        PhaseLabel::Theta => "#ffd700",
    }
}

/// Canvas coordinates, rounded to a fixed number of decimals so that output
/// is byte-stable.
fn coord(v: f64) -> String {
    trim_zeros(&format!("{v:.4}")).to_string()
}

pub fn emit(d: &SliceDiagram, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => emit_csv(d, out),
        Format::Svg => emit_svg(d, out),
    }
}

fn emit_csv(d: &SliceDiagram, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "s1,c1,phase,deficit_nats,theta_opt_rad")?;
    let n = d.resolution;
    for j in 0..n {
        for i in 0..n {
            let (s1, c1) = d.center(i, j);
            let cell = d.cell(i, j);
            writeln!(
                out,
                "{},{},{},{},{}",
                format_g12(s1),
                format_g12(c1),
                cell.phase,
                format_g12(cell.deficit),
                format_g12(cell.theta_opt)
            )?;
        }
    }
    Ok(())
}

fn emit_svg(d: &SliceDiagram, out: &mut dyn Write) -> Result<()> {
    let (smax, cmax) = (d.s1_max(), d.c1_max());
    let to_x = |s1: f64| (s1 + smax) / (2.0 * smax) * CANVAS;
    let to_y = |c1: f64| CANVAS - (c1 + cmax) / (2.0 * cmax) * CANVAS;
    let n = d.resolution;
    let size = CANVAS / n as f64;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000" shape-rendering="crispEdges">"#
    )?;
    for j in 0..n {
        for i in 0..n {
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                coord(i as f64 * size),
                coord(CANVAS - (j + 1) as f64 * size),
                coord(size),
                coord(size),
                colour(d.label(i, j))
            )?;
        }
    }
    for curve in &d.curves {
        let active = active_points(curve);
        for (ms, mc) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let mut run: Vec<String> = Vec::new();
            let flush = |run: &mut Vec<String>, out: &mut dyn Write| -> Result<()> {
                if run.len() >= 2 {
                    writeln!(
                        out,
                        r##"<polyline points="{}" fill="none" stroke="#000000" stroke-width="2" shape-rendering="geometricPrecision"/>"##,
                        run.join(" ")
                    )?;
                }
                run.clear();
                Ok(())
            };
            for (p, &on) in curve.points.iter().zip(&active) {
                if on {
                    run.push(format!(
                        "{},{}",
                        coord(to_x(ms * p.s1())),
                        coord(to_y(mc * p.c1()))
                    ));
                } else {
                    flush(&mut run, out)?;
                }
            }
            flush(&mut run, out)?;
        }
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
