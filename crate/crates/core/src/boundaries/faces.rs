//! Boundaries on the faces of the tetrahedron, the face-edge landmark points
//! and the triple point of a slice.

use serde::Serialize;

use super::trace::{trace_section, trace_slice, BoundaryCurve, Section, DEFAULT_STEP};
use super::{residual, solve_boundary, Axis, BoundaryKind, SOLVE_TOL};
use crate::correlations::{deficit_branch_0, deficit_branch_pi2};
use crate::entropy::{d2_post_at_pi_half, d2_post_at_zero_on_edge};
use crate::error::{DomainError, Error, Result};
use crate::roots::{bisect, sign_changes, BISECT_MAX_ITER};
use crate::state::XxzState;

/// Brackets in `c3` for the three landmark roots.
const LANDMARK_A_BRACKET: (f64, f64) = (-0.25, 0.25);
const LANDMARK_B_BRACKET: (f64, f64) = (-0.5, -0.2);
const LANDMARK_C_BRACKET: (f64, f64) = (-0.7, -0.45);
const FACE_SCAN: usize = 256;
const FACE_INSET: f64 = 1e-9;

/// Where the triple point is accepted, the three branch values agree to this.
pub const TRIPLE_TOL: f64 = 1e-6;

/// Points where boundaries meet the edges of the two faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Landmarks {
    /// The zero boundary reaches the edge `s1 = (1 + c3)/2, c1 = (1 - c3)/2`.
    pub a: XxzState,
    /// The π/2 boundary reaches the same edge.
    pub b: XxzState,
    /// The π/2 boundary on the face `s1 = (1 + c3)/2` meets the equal-value
    /// condition, where it hands over to the jump boundary.
    pub c: XxzState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceDiagram {
    pub curves: Vec<BoundaryCurve>,
    pub landmarks: Landmarks,
}

fn corner(c3: f64) -> XxzState {
    XxzState::raw(XxzState::s1_max(c3), XxzState::c1_max(c3), c3)
}

fn root_in_c3<F: FnMut(f64) -> Option<f64>>(f: F, bracket: (f64, f64)) -> Result<f64> {
    bisect(f, bracket.0, bracket.1, SOLVE_TOL, BISECT_MAX_ITER)
}

/// Root in `c1` of the π/2 curvature on the face `s1 = (1 + c3)/2`.
pub fn lower_face_pi_half_root(c3: f64) -> Result<f64> {
    let s1 = XxzState::s1_max(c3);
    let hi = XxzState::c1_max(c3) - FACE_INSET;
    let f = |c1: f64| d2_post_at_pi_half(&XxzState::raw(s1, c1, c3)).ok();
    let (a, b) = sign_changes(f, 0.0, hi, FACE_SCAN)
        .pop()
        .ok_or(Error::Bracket {
            lo: 0.0,
            hi,
            f_lo: f(0.0),
            f_hi: f(hi),
        })?;
    bisect(f, a, b, SOLVE_TOL, BISECT_MAX_ITER)
}

/// Locates the three face-edge landmarks by root finding in `c3`.
pub fn landmarks() -> Result<Landmarks> {
    let a = root_in_c3(|c3| d2_post_at_zero_on_edge(c3).ok(), LANDMARK_A_BRACKET)?;
    let b = root_in_c3(
        |c3| d2_post_at_pi_half(&corner(c3)).ok(),
        LANDMARK_B_BRACKET,
    )?;
    let equal_on_face = |c3: f64| {
        let c1 = lower_face_pi_half_root(c3).ok()?;
        let x = XxzState::raw(XxzState::s1_max(c3), c1, c3);
        Some(deficit_branch_0(&x) - deficit_branch_pi2(&x))
    };
    let c = root_in_c3(equal_on_face, LANDMARK_C_BRACKET)?;
    let c1 = lower_face_pi_half_root(c)?;
    Ok(Landmarks {
        a: corner(a),
        b: corner(b),
        c: XxzState::raw(XxzState::s1_max(c), c1, c),
    })
}

/// Boundary curves on the faces `c1 = (1 - c3)/2` (zero and π/2 boundaries)
/// and `s1 = (1 + c3)/2` (π/2, jump and equal-value boundaries), plus the
/// landmark points. Kinds with no root on a face are omitted.
pub fn trace_faces(step: f64) -> Result<FaceDiagram> {
    let plan = [
        (Section::UpperFace, BoundaryKind::Zero),
        (Section::UpperFace, BoundaryKind::PiHalf),
        (Section::LowerFace, BoundaryKind::PiHalf),
        (Section::LowerFace, BoundaryKind::ZeroPrime),
        (Section::LowerFace, BoundaryKind::Equal),
    ];
    let mut curves = Vec::new();
    for (section, kind) in plan {
        match trace_section(kind, section, step) {
            Ok(c) => curves.push(c),
            Err(Error::EmptyCurve { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(FaceDiagram {
        curves,
        landmarks: landmarks()?,
    })
}

/// Point of the slice where the π/2 boundary meets the equal-value boundary,
/// so that all three phases touch.
pub fn find_triple_point(c3: f64) -> Result<XxzState> {
    if !(c3 > -1.0 && c3 < 1.0) {
        return Err(DomainError::C3Range { c3 }.into());
    }
    let not_found = || Error::NotFound { c3 };
    let curve = match trace_slice(BoundaryKind::PiHalf, c3, DEFAULT_STEP) {
        Ok(c) => c,
        Err(Error::EmptyCurve { .. }) => return Err(not_found()),
        Err(e) => return Err(e),
    };
    let equal = |x: &XxzState| deficit_branch_0(x) - deficit_branch_pi2(x);
    // the curve starts at the cusp (0, |c3|), where the profile is flat and
    // all branches tie trivially; that tie is not a triple point
    let cusp = 2.0 * curve.step;
    let pair = curve
        .points
        .windows(2)
        .filter(|w| w[0].s1() > cusp)
        .find(|w| equal(&w[0]).signum() != equal(&w[1]).signum())
        .ok_or_else(not_found)?;
    let (p, q) = (pair[0], pair[1]);
    let s_max = XxzState::s1_max(c3) - FACE_INSET;
    let pad = 5.0 * curve.step;
    let s_lo = (p.s1().min(q.s1()) - pad).max(0.0);
    let s_hi = (p.s1().max(q.s1()) + pad).min(s_max);
    let on_curve = |c1: f64| -> Option<XxzState> {
        let s1 = solve_boundary(BoundaryKind::PiHalf, c3, (Axis::C1, c1), s_lo, s_hi).ok()?;
        XxzState::new(s1, c1, c3).ok()
    };
    let c1 = bisect(
        |c1| on_curve(c1).map(|x| equal(&x)),
        p.c1(),
        q.c1(),
        SOLVE_TOL,
        BISECT_MAX_ITER,
    )?;
    let x = on_curve(c1).ok_or_else(not_found)?;
    let tie = equal(&x).abs();
    let bend = residual(BoundaryKind::PiHalf, &x)?.abs();
    // no third basin may undercut the tied endpoints
    let lowest = crate::correlations::deficit(&x)?.value;
    let undercut = deficit_branch_0(&x) - lowest;
    if tie < TRIPLE_TOL && bend < TRIPLE_TOL && undercut < TRIPLE_TOL {
        Ok(x)
    } else {
        Err(not_found())
    }
}
