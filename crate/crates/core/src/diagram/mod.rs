//! Phase diagrams of `c3 = const` cross-sections: grid classification, phase
//! areas and boundary overlays.

mod emit;

pub use emit::{emit, format_g12, Format};

use rayon::prelude::*;
use serde::Serialize;

use crate::boundaries::{trace_slice, BoundaryCurve, BoundaryKind, EndKind, Section};
use crate::correlations::{deficit, PhaseLabel};
use crate::error::{DomainError, Error, Result};
use crate::roots::sign_changes;
use crate::state::XxzState;

pub const MIN_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 4096;

/// Offset along the free axis used to decide whether a traced point separates
/// two phases.
pub const PROBE_OFFSET: f64 = 1e-4;

/// Row spacing in `c1` for the area integral.
pub const AREA_ROW_STEP: f64 = 1e-3;
const AREA_ROW_SAMPLES: usize = 100;
const AREA_RESIDUAL_SAMPLES: usize = 400;
const AREA_TRANSITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub phase: PhaseLabel,
    pub deficit: f64,
    pub theta_opt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseArea {
    pub absolute: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseAreas {
    #[serde(rename = "0")]
    pub zero: PhaseArea,
    #[serde(rename = "pi2")]
    pub pi_half: PhaseArea,
    pub theta: PhaseArea,
}

impl PhaseAreas {
    pub fn get(&self, phase: PhaseLabel) -> PhaseArea {
        match phase {
            PhaseLabel::Zero => self.zero,
            PhaseLabel::PiHalf => self.pi_half,
            PhaseLabel::Theta => self.theta,
        }
    }
}

/// Classified grid over one cross-section. Cells are stored row-major with
/// `c1` as the outer index, both axes ascending from the negative corner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceDiagram {
    pub c3: f64,
    pub resolution: usize,
    pub cells: Vec<Cell>,
    pub areas: PhaseAreas,
    pub curves: Vec<BoundaryCurve>,
}

impl SliceDiagram {
    pub fn s1_max(&self) -> f64 {
        XxzState::s1_max(self.c3)
    }

    pub fn c1_max(&self) -> f64 {
        XxzState::c1_max(self.c3)
    }

    /// Cell centre `(s1, c1)` of column `i`, row `j`.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            cell_center(i, self.resolution, self.s1_max()),
            cell_center(j, self.resolution, self.c1_max()),
        )
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.resolution + i]
    }

    pub fn label(&self, i: usize, j: usize) -> PhaseLabel {
        self.cell(i, j).phase
    }

    /// Grid cell containing `(s1, c1)`, if inside the rectangle.
    pub fn locate(&self, s1: f64, c1: f64) -> Option<(usize, usize)> {
        let n = self.resolution as f64;
        let u = (s1 + self.s1_max()) / (2.0 * self.s1_max()) * n;
        let v = (c1 + self.c1_max()) / (2.0 * self.c1_max()) * n;
        if !(0.0..=n).contains(&u) || !(0.0..=n).contains(&v) {
            return None;
        }
        let clip = |t: f64| (t as usize).min(self.resolution - 1);
        Some((clip(u), clip(v)))
    }

    /// Traces every boundary kind present on this slice and attaches the
    /// curves.
    pub fn with_curves(mut self, step: f64) -> Result<Self> {
        self.curves = slice_curves(self.c3, step)?;
        Ok(self)
    }
}

fn cell_center(i: usize, n: usize, half_width: f64) -> f64 {
    -half_width + (i as f64 + 0.5) * (2.0 * half_width / n as f64)
}

fn check_c3(c3: f64) -> Result<(), DomainError> {
    if c3 > -1.0 && c3 < 1.0 {
        Ok(())
    } else {
        Err(DomainError::C3Range { c3 })
    }
}

/// Classifies the cell centres of the slice by the optimal-measurement phase.
///
/// Only the quadrant `s1, c1 >= 0` is computed; the rest follows from the
/// reflection symmetries, so the labels are exactly symmetric.
pub fn classify_grid(c3: f64, resolution: usize) -> Result<SliceDiagram> {
    check_c3(c3)?;
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&resolution) {
        return Err(DomainError::Argument(format!(
            "resolution {resolution} must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
        ))
        .into());
    }
    let n = resolution;
    let half = n / 2;
    let (smax, cmax) = (XxzState::s1_max(c3), XxzState::c1_max(c3));
    let quadrant: Vec<Vec<Cell>> = (half..n)
        .into_par_iter()
        .map(|j| {
            let c1 = cell_center(j, n, cmax);
            (half..n)
                .map(|i| {
                    let s1 = cell_center(i, n, smax);
                    let r = deficit(&XxzState::raw(s1, c1, c3))?;
                    Ok(Cell {
                        phase: r.phase,
                        deficit: r.value,
                        theta_opt: r.theta_opt,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let fold = |k: usize| k.max(n - 1 - k) - half;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        let row = &quadrant[fold(j)];
        cells.extend((0..n).map(|i| row[fold(i)]));
    }
    let areas = count_areas(&cells, c3);
    Ok(SliceDiagram {
        c3,
        resolution,
        cells,
        areas,
        curves: Vec::new(),
    })
}

fn count_areas(cells: &[Cell], c3: f64) -> PhaseAreas {
    let total = cells.len() as f64;
    let rect = (1.0 + c3) * (1.0 - c3);
    let area = |phase: PhaseLabel| {
        let count = cells.iter().filter(|c| c.phase == phase).count() as f64;
        PhaseArea {
            absolute: count / total * rect,
            fraction: count / total,
        }
    };
    PhaseAreas {
        zero: area(PhaseLabel::Zero),
        pi_half: area(PhaseLabel::PiHalf),
        theta: area(PhaseLabel::Theta),
    }
}

/// All boundary curves of the slice; kinds with no root are skipped.
pub fn slice_curves(c3: f64, step: f64) -> Result<Vec<BoundaryCurve>> {
    let traced: Vec<Result<BoundaryCurve>> = BoundaryKind::ALL
        .par_iter()
        .map(|&kind| trace_slice(kind, c3, step))
        .collect();
    let mut out = Vec::new();
    for r in traced {
        match r {
            Ok(c) => out.push(c),
            Err(Error::EmptyCurve { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn phase_at(s1: f64, c1: f64, c3: f64) -> Option<PhaseLabel> {
    let x = XxzState::new(s1, c1, c3).ok()?;
    deficit(&x).ok().map(|r| r.phase)
}

/// Whether each traced point separates two different phases, judged by
/// probing `±PROBE_OFFSET` along the free coordinate. Points on parts of a
/// residual's zero set that do not bound a phase come out `false`.
pub fn active_points(curve: &BoundaryCurve) -> Vec<bool> {
    let march_s1 = curve.kind.march_axis() == crate::boundaries::Axis::S1;
    curve
        .points
        .par_iter()
        .map(|p| {
            let (s1, c1, c3) = (p.s1(), p.c1(), p.c3());
            let probe = |d: f64| {
                if march_s1 {
                    phase_at(s1, c1 + d, c3)
                } else {
                    phase_at(s1 + d, c1, c3)
                }
            };
            match (probe(-PROBE_OFFSET), probe(PROBE_OFFSET)) {
                (Some(a), Some(b)) => a != b,
                _ => false,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaArea {
    /// Area of the oblique-phase region in the quadrant `s1, c1 >= 0`.
    pub segment: f64,
    /// Four segments relative to the slice rectangle `(1 + c3)(1 - c3)`.
    pub fraction: f64,
}

/// Length of the oblique-phase set on the row `c1 = const`, `s1 >= 0`.
///
/// The row is cut at a uniform scan and at the roots of the two curvature
/// residuals (so that thin slivers between them are not stepped over); the
/// label changes between neighbouring pieces are located by bisection.
fn theta_length(c1: f64, c3: f64) -> Result<f64> {
    let smax = XxzState::s1_max(c3);
    let hi = smax - 1e-9;
    let mut cuts: Vec<f64> = (0..=AREA_ROW_SAMPLES)
        .map(|k| hi * k as f64 / AREA_ROW_SAMPLES as f64)
        .collect();
    for kind in [BoundaryKind::Zero, BoundaryKind::PiHalf] {
        let f = |s1: f64| {
            let x = XxzState::raw(s1, c1, c3);
            crate::boundaries::residual(kind, &x).ok()
        };
        for (a, b) in sign_changes(f, 0.0, hi, AREA_RESIDUAL_SAMPLES) {
            if let Ok(r) = crate::roots::bisect(f, a, b, AREA_TRANSITION_TOL, 80) {
                cuts.push(r);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < AREA_TRANSITION_TOL);

    let label = |s1: f64| -> Result<PhaseLabel> { Ok(deficit(&XxzState::raw(s1, c1, c3))?.phase) };
    // representative label of each piece, taken at its midpoint
    let mids: Vec<f64> = cuts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let labels = mids.iter().map(|&m| label(m)).collect::<Result<Vec<_>>>()?;

    let mut length = 0.0;
    let mut start = if labels.first() == Some(&PhaseLabel::Theta) {
        Some(0.0)
    } else {
        None
    };
    for k in 1..labels.len() {
        if labels[k] == labels[k - 1] {
            continue;
        }
        // transition somewhere between the two midpoints
        let (mut a, mut b) = (mids[k - 1], mids[k]);
        let la = labels[k - 1];
        while b - a > AREA_TRANSITION_TOL {
            let m = 0.5 * (a + b);
            if label(m)? == la {
                a = m;
            } else {
                b = m;
            }
        }
        let t = 0.5 * (a + b);
        if labels[k] == PhaseLabel::Theta {
            start = Some(t);
        } else if la == PhaseLabel::Theta {
            length += t - start.take().unwrap_or(t);
        }
    }
    if let Some(s) = start {
        length += smax - s;
    }
    Ok(length)
}

/// Area of the oblique-phase region of a slice, by trapezoid integration over
/// rows `c1 = const` of the distance between the bounding curves.
pub fn theta_region_area(c3: f64) -> Result<ThetaArea> {
    check_c3(c3)?;
    let cmax = XxzState::c1_max(c3);
    let rows = (cmax / AREA_ROW_STEP).ceil() as usize;
    let c1s: Vec<f64> = (0..=rows)
        .map(|k| (k as f64 * AREA_ROW_STEP).min(cmax))
        .collect();
    let widths = c1s
        .par_iter()
        .map(|&c1| theta_length(c1, c3))
        .collect::<Result<Vec<_>>>()?;
    let segment: f64 = c1s
        .windows(2)
        .zip(widths.windows(2))
        .map(|(c, w)| 0.5 * (w[0] + w[1]) * (c[1] - c[0]))
        .sum();
    Ok(ThetaArea {
        segment,
        fraction: 4.0 * segment / ((1.0 + c3) * (1.0 - c3)),
    })
}

/// Phase areas and curve endpoints of a slice, as written next to the
/// rendered diagram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreasReport {
    pub c3: f64,
    pub resolution: usize,
    pub areas: PhaseAreas,
    pub curves: Vec<CurveSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub kind: BoundaryKind,
    pub label: &'static str,
    pub section: Section,
    pub points: usize,
    pub start: [f64; 3],
    pub end: [f64; 3],
    pub start_kind: EndKind,
    pub end_kind: EndKind,
}

impl From<&BoundaryCurve> for CurveSummary {
    fn from(c: &BoundaryCurve) -> Self {
        let coords = |p: &XxzState| [p.s1(), p.c1(), p.c3()];
        CurveSummary {
            kind: c.kind,
            label: c.kind.label(),
            section: c.section,
            points: c.points.len(),
            start: coords(c.first()),
            end: coords(c.last()),
            start_kind: c.start,
            end_kind: c.end,
        }
    }
}

impl From<&SliceDiagram> for AreasReport {
    fn from(d: &SliceDiagram) -> Self {
        AreasReport {
            c3: d.c3,
            resolution: d.resolution,
            areas: d.areas,
            curves: d.curves.iter().map(CurveSummary::from).collect(),
        }
    }
}
