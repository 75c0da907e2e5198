//! Critical conditions separating the optimal-measurement phases, their
//! one-dimensional solvers, and curve tracing on sections of the tetrahedron.

mod faces;
mod trace;

pub use faces::{find_triple_point, landmarks, trace_faces, FaceDiagram, Landmarks};
pub use trace::{trace_section, trace_slice, BoundaryCurve, EndKind, Section, DEFAULT_STEP};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::correlations::{
    deficit_branch_0, deficit_branch_pi2, interior_minimum, INTERIOR_MARGIN,
};
use crate::entropy::{
    d2_post_at_pi_half, d2_post_at_zero, d2_post_at_zero_on_edge, post_entropy_at, pre_entropy,
};
use crate::error::{DomainError, Error, Result};
use crate::minimize::{self, GridConfig};
use crate::roots::{bisect, BISECT_MAX_ITER};
use crate::state::{XxzState, BOUNDARY_TOL};

/// Bracket width at which bisection stops.
pub const SOLVE_TOL: f64 = 1e-12;

/// A root is accepted only if the residual there is this small.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Smallest interior minimiser angle accepted on a `ZeroPrime` root.
pub const MIN_JUMP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// Curvature of the post-measurement entropy vanishes at θ = 0.
    Zero,
    /// Curvature vanishes at θ = π/2.
    #[serde(rename = "pi2")]
    PiHalf,
    /// The θ = 0 value ties with a strictly interior minimum.
    #[serde(rename = "zeroprime")]
    ZeroPrime,
    /// The θ = 0 and θ = π/2 values tie.
    Equal,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 4] = [
        BoundaryKind::Zero,
        BoundaryKind::PiHalf,
        BoundaryKind::ZeroPrime,
        BoundaryKind::Equal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Zero => "zero",
            BoundaryKind::PiHalf => "pi2",
            BoundaryKind::ZeroPrime => "zeroprime",
            BoundaryKind::Equal => "equal",
        }
    }

    /// Curve label used in figures.
    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::Zero => "0",
            BoundaryKind::PiHalf => "1",
            BoundaryKind::ZeroPrime => "0'",
            BoundaryKind::Equal => "2",
        }
    }

    /// Coordinate held fixed while the other one is solved for, on a slice.
    pub fn march_axis(self) -> Axis {
        match self {
            BoundaryKind::ZeroPrime => Axis::S1,
            _ => Axis::C1,
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryKind {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" | "0" => Ok(BoundaryKind::Zero),
            "pi2" | "1" => Ok(BoundaryKind::PiHalf),
            "zeroprime" | "0'" => Ok(BoundaryKind::ZeroPrime),
            "equal" | "2" => Ok(BoundaryKind::Equal),
            other => Err(DomainError::Argument(format!(
                "unknown boundary kind {other:?} (expected zero, pi2, zeroprime or equal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    S1,
    C1,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::S1 => Axis::C1,
            Axis::C1 => Axis::S1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::S1 => "s1",
            Axis::C1 => "c1",
        }
    }

    /// Half-width of the admissible range of this coordinate at `c3`.
    pub fn bound(self, c3: f64) -> f64 {
        match self {
            Axis::S1 => XxzState::s1_max(c3),
            Axis::C1 => XxzState::c1_max(c3),
        }
    }
}

impl FromStr for Axis {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "s1" => Ok(Axis::S1),
            "c1" => Ok(Axis::C1),
            other => Err(DomainError::Argument(format!(
                "unknown axis {other:?} (expected s1 or c1)"
            ))),
        }
    }
}

/// State on a slice with one coordinate fixed and the other free.
fn slice_state(c3: f64, fixed: (Axis, f64), free: f64) -> Result<XxzState, DomainError> {
    match fixed.0 {
        Axis::S1 => XxzState::new(fixed.1, free, c3),
        Axis::C1 => XxzState::new(free, fixed.1, c3),
    }
}

fn on_corner_edge(x: &XxzState) -> bool {
    let c3 = x.c3();
    x.s1().abs() >= XxzState::s1_max(c3) - BOUNDARY_TOL
        && x.c1().abs() >= XxzState::c1_max(c3) - BOUNDARY_TOL
}

fn zero_residual(x: &XxzState) -> Result<f64> {
    if on_corner_edge(x) {
        return d2_post_at_zero_on_edge(x.c3());
    }
    d2_post_at_zero(x)
}

/// Residual whose zero set is the boundary of the given kind.
///
/// For `ZeroPrime` this is `Δ₀` minus the lowest genuine interior local
/// minimum of the deficit profile; it is undefined (`NoInteriorMinimum`) where
/// the profile has no such minimum.
pub fn residual(kind: BoundaryKind, x: &XxzState) -> Result<f64> {
    match kind {
        BoundaryKind::Zero => zero_residual(x),
        BoundaryKind::PiHalf => d2_post_at_pi_half(x),
        BoundaryKind::Equal => Ok(deficit_branch_0(x) - deficit_branch_pi2(x)),
        BoundaryKind::ZeroPrime => {
            let (_, inner) = interior_minimum(x)?;
            Ok(deficit_branch_0(x) - inner)
        }
    }
}

/// Endpoint value minus the minimum over the interior window, with no
/// requirement that the minimiser be a genuine extremum. Shares its sign with
/// the `ZeroPrime` residual wherever that is defined and is defined
/// everywhere; used only to bracket roots.
fn zero_prime_surrogate(x: &XxzState) -> Result<f64> {
    let s = pre_entropy(x);
    let profile = |t: f64| post_entropy_at(x, t) - s;
    let cfg = GridConfig::default();
    let lo = INTERIOR_MARGIN;
    let hi = std::f64::consts::FRAC_PI_2 - INTERIOR_MARGIN;
    let (_, inner) = minimize::global_minimum(profile, lo, hi, &cfg)?;
    Ok(deficit_branch_0(x) - inner)
}

/// Residual used to detect sign changes; `None` where it cannot be evaluated.
pub(crate) fn bracket_residual(kind: BoundaryKind, x: &XxzState) -> Option<f64> {
    let r = match kind {
        BoundaryKind::ZeroPrime => match residual(kind, x) {
            Err(Error::NoInteriorMinimum) => zero_prime_surrogate(x),
            other => other,
        },
        _ => residual(kind, x),
    };
    r.ok().filter(|v| v.is_finite())
}

/// Accepts a bisection root only if the genuine residual vanishes there; this
/// rejects sign changes across folds of the zero set or poles of the residual.
///
/// A `ZeroPrime` root must also come with a finite jump of the optimal angle;
/// where the interior minimum merges into θ = 0 the residual vanishes too, but
/// that locus is the `Zero` boundary.
pub(crate) fn accept_root(kind: BoundaryKind, x: &XxzState) -> Result<f64> {
    let r = residual(kind, x)?;
    let jump_ok = kind != BoundaryKind::ZeroPrime || interior_minimum(x)?.0 >= MIN_JUMP;
    if jump_ok && r.abs() < RESIDUAL_TOL {
        Ok(r)
    } else {
        Err(Error::Convergence {
            what: "boundary residual at the bisection root",
            iterations: BISECT_MAX_ITER,
        })
    }
}

/// Where the residual cannot be evaluated exactly at a bracket end (on a face
/// of the tetrahedron), move the end inward by a tiny amount.
fn usable_end<F: FnMut(f64) -> Option<f64>>(f: &mut F, end: f64, toward: f64) -> f64 {
    if f(end).is_some() {
        return end;
    }
    for nudge in [1e-12, 1e-10, 1e-8] {
        let x = end + (toward - end).signum() * nudge;
        if f(x).is_some() {
            return x;
        }
    }
    end
}

/// Bisection root of the residual along the free coordinate, the other one
/// held at `fixed`.
///
/// Bracket ends beyond the tetrahedron are clamped onto its faces.
pub fn solve_boundary(
    kind: BoundaryKind,
    c3: f64,
    fixed: (Axis, f64),
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(DomainError::Argument(format!("bracket [{lo}, {hi}] is not finite")).into());
    }
    // validates c3 and the fixed coordinate
    slice_state(c3, fixed, 0.0)?;
    let bound = fixed.0.other().bound(c3);
    let lo = lo.clamp(-bound, bound);
    let hi = hi.clamp(-bound, bound);
    let mut f = |free: f64| -> Option<f64> {
        let x = slice_state(c3, fixed, free).ok()?;
        bracket_residual(kind, &x)
    };
    let a = usable_end(&mut f, lo, hi);
    let b = usable_end(&mut f, hi, lo);
    let root = bisect(&mut f, a, b, SOLVE_TOL, BISECT_MAX_ITER)?;
    let x = slice_state(c3, fixed, root)?;
    accept_root(kind, &x)?;
    Ok(root)
}

/// Signs of the residual on a uniform scan, for diagnostics after a failed
/// solve.
pub fn sign_table(
    kind: BoundaryKind,
    c3: f64,
    fixed: (Axis, f64),
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<(f64, Option<f64>)> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let free = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let r = slice_state(c3, fixed, free)
                .ok()
                .and_then(|x| bracket_residual(kind, &x));
            (free, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s1: f64, c1: f64, c3: f64) -> XxzState {
        XxzState::new(s1, c1, c3).unwrap()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in BoundaryKind::ALL {
            assert_eq!(k.name().parse::<BoundaryKind>().unwrap(), k);
            assert_eq!(k.label().parse::<BoundaryKind>().unwrap(), k);
        }
        assert!("bogus".parse::<BoundaryKind>().is_err());
    }

    #[test]
    fn zero_residual_on_diagonal() {
        for s in [0.1, 0.25, 0.4] {
            assert!(residual(BoundaryKind::Zero, &st(s, s, 0.0)).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn pi_half_residual_at_known_root() {
        let r = residual(BoundaryKind::PiHalf, &st(0.416297, 0.45, 0.1)).unwrap();
        assert!(r.abs() < 1e-5, "{r}");
    }

    #[test]
    fn zero_prime_residual_at_known_root() {
        let r = residual(BoundaryKind::ZeroPrime, &st(0.4, 0.576208, -0.2)).unwrap();
        assert!(r.abs() < 1e-5, "{r}");
    }

    #[test]
    fn solve_examples() {
        let r = solve_boundary(BoundaryKind::PiHalf, 0.1, (Axis::C1, 0.45), 0.3, 0.5).unwrap();
        assert!((r - 0.416297).abs() < 1e-4, "{r}");
        let r = solve_boundary(BoundaryKind::Zero, 0.1, (Axis::C1, 0.45), 0.45, 0.55).unwrap();
        assert!((r - 0.502469).abs() < 1e-4, "{r}");
        let r = solve_boundary(BoundaryKind::PiHalf, 0.0, (Axis::C1, 0.5), 0.3, 0.5).unwrap();
        assert!((r - 0.415037).abs() < 1e-4, "{r}");
        let r = solve_boundary(BoundaryKind::Zero, 0.0, (Axis::C1, 0.3), 0.1, 0.5).unwrap();
        assert!((r - 0.3).abs() < 1e-9, "{r}");
    }

    #[test]
    fn solve_zero_prime_examples() {
        let r = solve_boundary(BoundaryKind::ZeroPrime, -0.2, (Axis::S1, 0.4), 0.5, 0.65).unwrap();
        assert!((r - 0.576208).abs() < 1e-4, "{r}");
        let r = solve_boundary(BoundaryKind::ZeroPrime, -0.4, (Axis::S1, 0.3), 0.55, 0.7).unwrap();
        assert!((r - 0.652165).abs() < 1e-4, "{r}");
    }

    #[test]
    fn solve_reports_missing_bracket() {
        let e = solve_boundary(BoundaryKind::PiHalf, 0.1, (Axis::C1, 0.45), 0.0, 0.1).unwrap_err();
        assert!(matches!(e, Error::Bracket { .. }), "{e:?}");
        let e = solve_boundary(BoundaryKind::PiHalf, 0.1, (Axis::C1, 0.6), 0.3, 0.5).unwrap_err();
        assert!(matches!(e, Error::Domain(_)), "{e:?}");
        // bracket ends outside the tetrahedron are clamped
        let r = solve_boundary(BoundaryKind::PiHalf, 0.1, (Axis::C1, 0.45), 0.3, 0.9).unwrap();
        assert!((r - 0.416297).abs() < 1e-4);
    }
}
