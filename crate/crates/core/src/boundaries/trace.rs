//! Continuation of boundary curves on a two-dimensional section.
//!
//! A section is parameterised by a marching coordinate `m` and a free
//! coordinate `f`; each step fixes `m` and solves for `f` by bisection in a
//! bracket centred on the previous root.

use std::fmt;

use serde::Serialize;

use super::{accept_root, bracket_residual, BoundaryKind, SOLVE_TOL};
use crate::error::{DomainError, Error, Result};
use crate::roots::{bisect, sign_changes, BISECT_MAX_ITER};
use crate::state::XxzState;

pub const DEFAULT_STEP: f64 = 0.002;
pub const MAX_STEP: f64 = 0.05;

const SEED_COLUMNS: usize = 200;
const SEED_SAMPLES: usize = 64;
const BRACKET_HALF_WIDTH: f64 = 5.0;
const MAX_WIDENINGS: usize = 5;
const BRACKET_SAMPLES: usize = 11;
const MAX_HALVINGS: u32 = 10;
/// Largest accepted change of the free coordinate per step, in steps.
const MAX_FREE_JUMP: f64 = 2.0;
/// Free-range ends are pulled in by this much, since several residuals are
/// singular on the faces of the tetrahedron.
const FACE_INSET: f64 = 1e-9;

/// Two-dimensional section of the tetrahedron on which a curve is traced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Section {
    /// Plane `c3 = const`, quadrant `s1, c1 >= 0`.
    Slice { c3: f64 },
    /// Face `c1 = (1 - c3)/2`, half `s1 >= 0`.
    UpperFace,
    /// Face `s1 = (1 + c3)/2`, half `c1 >= 0`.
    LowerFace,
}

impl Section {
    pub fn c3(&self) -> Option<f64> {
        match self {
            Section::Slice { c3 } => Some(*c3),
            _ => None,
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Slice { c3 } => write!(f, "c3 = {c3}"),
            Section::UpperFace => f.write_str("c1 = (1 - c3)/2"),
            Section::LowerFace => f.write_str("s1 = (1 + c3)/2"),
        }
    }
}

/// How a traced curve terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndKind {
    /// On the border of the section.
    Edge,
    /// Inside the section, where the continuation could not proceed (a
    /// junction with another curve or a fold).
    Junction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub kind: BoundaryKind,
    pub section: Section,
    /// Ordered by increasing marching coordinate.
    pub points: Vec<XxzState>,
    pub start: EndKind,
    pub end: EndKind,
    pub step: f64,
}

impl BoundaryCurve {
    pub fn first(&self) -> &XxzState {
        &self.points[0]
    }

    pub fn last(&self) -> &XxzState {
        &self.points[self.points.len() - 1]
    }
}

/// Coordinates of a section for one boundary kind.
#[derive(Debug, Clone, Copy)]
struct Frame {
    section: Section,
    /// Slices march along `s1` instead of `c1`.
    march_s1: bool,
}

impl Frame {
    fn new(kind: BoundaryKind, section: Section) -> Self {
        let march_s1 =
            matches!(section, Section::Slice { .. }) && kind.march_axis() == super::Axis::S1;
        Self { section, march_s1 }
    }

    fn m_range(&self) -> (f64, f64) {
        match self.section {
            Section::Slice { c3 } if self.march_s1 => (0.0, XxzState::s1_max(c3)),
            Section::Slice { c3 } => (0.0, XxzState::c1_max(c3)),
            Section::UpperFace | Section::LowerFace => (-1.0, 1.0),
        }
    }

    fn f_range(&self, m: f64) -> (f64, f64) {
        match self.section {
            Section::Slice { c3 } if self.march_s1 => (0.0, XxzState::c1_max(c3)),
            Section::Slice { c3 } => (0.0, XxzState::s1_max(c3)),
            Section::UpperFace => (0.0, XxzState::s1_max(m)),
            Section::LowerFace => (0.0, XxzState::c1_max(m)),
        }
    }

    /// Free range with the face end pulled inward.
    fn f_search(&self, m: f64) -> (f64, f64) {
        let (lo, hi) = self.f_range(m);
        (lo, (hi - FACE_INSET).max(lo))
    }

    fn state(&self, m: f64, f: f64) -> XxzState {
        let (lo, hi) = self.f_range(m);
        let f = f.clamp(lo, hi);
        match self.section {
            Section::Slice { c3 } if self.march_s1 => XxzState::raw(m, f, c3),
            Section::Slice { c3 } => XxzState::raw(f, m, c3),
            Section::UpperFace => XxzState::raw(f, XxzState::c1_max(m), m),
            Section::LowerFace => XxzState::raw(XxzState::s1_max(m), f, m),
        }
    }
}

struct Tracer {
    kind: BoundaryKind,
    frame: Frame,
    step: f64,
}

impl Tracer {
    fn residual(&self, m: f64, f: f64) -> Option<f64> {
        bracket_residual(self.kind, &self.frame.state(m, f))
    }

    fn root_in(&self, m: f64, a: f64, b: f64) -> Option<f64> {
        let root = bisect(|f| self.residual(m, f), a, b, SOLVE_TOL, BISECT_MAX_ITER).ok()?;
        accept_root(self.kind, &self.frame.state(m, root)).ok()?;
        Some(root)
    }

    /// All accepted roots on the column `m` within `[lo, hi]`.
    fn roots(&self, m: f64, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
        sign_changes(|f| self.residual(m, f), lo, hi, samples)
            .into_iter()
            .filter_map(|(a, b)| self.root_in(m, a, b))
            .collect()
    }

    fn seed(&self) -> Option<(f64, f64)> {
        let (m_lo, m_hi) = self.frame.m_range();
        // interior columns first, then the borders, where a short curve may
        // hide between the last column and the face
        let columns = (0..SEED_COLUMNS)
            .map(|j| m_lo + (m_hi - m_lo) * (j as f64 + 0.5) / SEED_COLUMNS as f64)
            .chain([m_hi, m_lo]);
        for m in columns {
            let (lo, hi) = self.frame.f_search(m);
            if let Some(f) = self.roots(m, lo, hi, SEED_SAMPLES).into_iter().next() {
                return Some((m, f));
            }
        }
        None
    }

    /// Root on column `m` nearest to `prev`, widening the bracket as needed.
    fn continue_at(&self, m: f64, prev: f64) -> Option<f64> {
        let (lo, hi) = self.frame.f_search(m);
        let mut half = BRACKET_HALF_WIDTH * self.step;
        for _ in 0..=MAX_WIDENINGS {
            let a = (prev - half).max(lo);
            let b = (prev + half).min(hi);
            if b > a {
                let best = self
                    .roots(m, a, b, BRACKET_SAMPLES)
                    .into_iter()
                    .min_by(|x, y| (x - prev).abs().total_cmp(&(y - prev).abs()));
                if best.is_some() {
                    return best;
                }
            }
            if a <= lo && b >= hi {
                break;
            }
            half *= 2.0;
        }
        None
    }

    /// Marches from the seed in direction `dir` (+1 or -1); returns the new
    /// points in marching order and whether the march left the section.
    fn march(&self, seed: (f64, f64), dir: f64) -> (Vec<(f64, f64)>, bool) {
        let (m_lo, m_hi) = self.frame.m_range();
        let (mut m, mut f) = seed;
        let mut out = Vec::new();
        let min_dm = self.step / 2f64.powi(MAX_HALVINGS as i32);
        let mut dm = self.step;
        loop {
            let at_border = if dir > 0.0 { m >= m_hi } else { m <= m_lo };
            if at_border {
                return (out, true);
            }
            let target = (m + dir * dm).clamp(m_lo, m_hi);
            let accepted = self
                .continue_at(target, f)
                .filter(|&g| (g - f).abs() <= MAX_FREE_JUMP * self.step);
            match accepted {
                Some(g) => {
                    m = target;
                    f = g;
                    out.push((m, f));
                    // recover the nominal increment after a hard stretch
                    dm = (2.0 * dm).min(self.step);
                }
                None if dm > min_dm => dm *= 0.5,
                None => return (out, false),
            }
        }
    }

    fn end_kind(&self, m: f64, f: f64, left_section: bool) -> EndKind {
        let (m_lo, m_hi) = self.frame.m_range();
        let (f_lo, f_hi) = self.frame.f_range(m);
        let near = 2.0 * self.step;
        if left_section || m - m_lo < near || m_hi - m < near || f - f_lo < near || f_hi - f < near
        {
            EndKind::Edge
        } else {
            EndKind::Junction
        }
    }
}

/// Traces one boundary curve of `kind` on an arbitrary section.
pub fn trace_section(kind: BoundaryKind, section: Section, step: f64) -> Result<BoundaryCurve> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(
            DomainError::Argument(format!("step {step} must lie in (0, {MAX_STEP}]")).into(),
        );
    }
    if let Section::Slice { c3 } = section {
        if !(c3 > -1.0 && c3 < 1.0) {
            return Err(DomainError::C3Range { c3 }.into());
        }
    }
    let tracer = Tracer {
        kind,
        frame: Frame::new(kind, section),
        step,
    };
    let seed = tracer.seed().ok_or_else(|| Error::EmptyCurve {
        kind: kind.name().to_owned(),
        section: section.to_string(),
    })?;
    let (mut back, back_out) = tracer.march(seed, -1.0);
    let (ahead, ahead_out) = tracer.march(seed, 1.0);
    back.reverse();
    let start = back.first().copied().unwrap_or(seed);
    let end = ahead.last().copied().unwrap_or(seed);
    let coords: Vec<(f64, f64)> = back
        .into_iter()
        .chain(std::iter::once(seed))
        .chain(ahead)
        .collect();
    Ok(BoundaryCurve {
        kind,
        section,
        points: coords
            .iter()
            .map(|&(m, f)| tracer.frame.state(m, f))
            .collect(),
        start: tracer.end_kind(start.0, start.1, back_out),
        end: tracer.end_kind(end.0, end.1, ahead_out),
        step,
    })
}

/// Traces the boundary of `kind` in the slice `c3 = const` (quadrant
/// `s1, c1 >= 0`; the other quadrants follow by reflection).
pub fn trace_slice(kind: BoundaryKind, c3: f64, step: f64) -> Result<BoundaryCurve> {
    trace_section(kind, Section::Slice { c3 }, step)
}
