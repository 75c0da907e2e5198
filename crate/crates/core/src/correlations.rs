//! One-way quantum deficit and quantum discord: endpoint branches, global
//! minimisation over the measurement angle, and phase classification.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt;

use serde::Serialize;

use crate::entropy::{self, h2, post_entropy_at, pre_entropy, xlnx, MeasurementAngle};
use crate::error::{DomainError, Error, Result};
use crate::minimize::{self, GridConfig};
use crate::state::XxzState;

/// Minimisers closer than this to an endpoint are reported as that endpoint.
pub const ENDPOINT_TOL: f64 = 1e-6;

/// Branch values closer than this to the minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

/// Half-width of the angle band excluded at each end when looking for a
/// strictly interior minimum.
pub const INTERIOR_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PhaseLabel {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "pi2")]
    PiHalf,
    #[serde(rename = "theta")]
    Theta,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 3] = [PhaseLabel::Zero, PhaseLabel::PiHalf, PhaseLabel::Theta];

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Zero => "0",
            PhaseLabel::PiHalf => "pi2",
            PhaseLabel::Theta => "theta",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchValues {
    pub zero: f64,
    pub pi_half: f64,
    /// Value at the minimiser when it lies strictly inside the interval.
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeficitResult {
    pub value: f64,
    pub phase: PhaseLabel,
    pub theta_opt: f64,
    pub branch_values: BranchValues,
}

/// Measurement-dependent deficit `S̃(θ) - S`.
pub fn deficit_at(x: &XxzState, a: MeasurementAngle) -> f64 {
    post_entropy_at(x, a.radians()) - pre_entropy(x)
}

/// Deficit for a θ = 0 measurement (independent of `s1`).
pub fn deficit_branch_0(x: &XxzState) -> f64 {
    let (c1, c3) = (x.c1(), x.c3());
    -0.5 * xlnx(1.0 - c3) + 0.25 * (xlnx(1.0 + 2.0 * c1 - c3) + xlnx(1.0 - 2.0 * c1 - c3))
}

/// Deficit for a θ = π/2 measurement.
pub fn deficit_branch_pi2(x: &XxzState) -> f64 {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    let r = s1.hypot(c1);
    -0.5 * (xlnx(1.0 + r) + xlnx(1.0 - r))
        + 0.25
            * (xlnx(1.0 + 2.0 * c1 - c3)
                + xlnx(1.0 - 2.0 * c1 - c3)
                + xlnx(1.0 + 2.0 * s1 + c3)
                + xlnx(1.0 - 2.0 * s1 + c3))
}

/// Measurement-dependent discord `Δ(θ) + h((1 + s1)/2) - h((1 + s1 cos θ)/2)`.
pub fn discord_at(x: &XxzState, a: MeasurementAngle) -> f64 {
    discord_profile(x)(a.radians())
}

/// Deficit and discord coincide on the Bell-diagonal edge `s1 = 0, c3 = -1`.
pub fn bell_diagonal_value(c1: f64) -> Result<f64, DomainError> {
    if !c1.is_finite() || c1.abs() > 1.0 + 1e-12 {
        return Err(DomainError::CorrelatorRange {
            name: "c1",
            value: c1,
        });
    }
    let c1 = c1.clamp(-1.0, 1.0);
    Ok(0.5 * (xlnx(1.0 + c1) + xlnx(1.0 - c1)))
}

fn deficit_profile(x: &XxzState) -> impl Fn(f64) -> f64 + '_ {
    let s = pre_entropy(x);
    move |theta| post_entropy_at(x, theta) - s
}

fn discord_profile(x: &XxzState) -> impl Fn(f64) -> f64 + '_ {
    let s = pre_entropy(x);
    let marginal = h2(0.5 * (1.0 + x.s1()));
    // grouped so that the marginal terms cancel exactly at θ = 0
    move |theta| {
        (post_entropy_at(x, theta) - s) + (marginal - entropy::outcome_entropy(x, theta.cos()))
    }
}

/// Global minimum of the deficit profile over `[0, π/2]`, as `(θ, Δ)`.
pub fn minimize_interior(x: &XxzState) -> Result<(f64, f64)> {
    minimize_interior_with(x, &GridConfig::default())
}

pub fn minimize_interior_with(x: &XxzState, cfg: &GridConfig) -> Result<(f64, f64)> {
    minimize::global_minimum(deficit_profile(x), 0.0, FRAC_PI_2, cfg)
}

/// Lowest strictly interior local minimum of the deficit profile, as `(θ, Δ)`.
///
/// Only grid local minima inside `[δ, π/2 - δ]` whose refinement stays off the
/// window edges count; an endpoint basin spilling into the window does not.
pub fn interior_minimum(x: &XxzState) -> Result<(f64, f64)> {
    interior_minimum_with(x, &GridConfig::default())
}

pub fn interior_minimum_with(x: &XxzState, cfg: &GridConfig) -> Result<(f64, f64)> {
    let window = (INTERIOR_MARGIN, FRAC_PI_2 - INTERIOR_MARGIN);
    minimize::interior_local_minima(deficit_profile(x), 0.0, FRAC_PI_2, window, cfg)?
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::NoInteriorMinimum)
}

fn classify(zero: f64, pi_half: f64, theta: f64, value: f64) -> DeficitResult {
    let interior = theta > ENDPOINT_TOL && theta < FRAC_PI_2 - ENDPOINT_TOL;
    // endpoint values are exact closed forms and may undercut the search
    let value = value.min(zero).min(pi_half);
    let (phase, theta_opt) = if zero <= value + TIE_TOL || theta <= ENDPOINT_TOL {
        (PhaseLabel::Zero, 0.0)
    } else if pi_half <= value + TIE_TOL || theta >= FRAC_PI_2 - ENDPOINT_TOL {
        (PhaseLabel::PiHalf, FRAC_PI_2)
    } else {
        (PhaseLabel::Theta, theta)
    };
    DeficitResult {
        value,
        phase,
        theta_opt,
        branch_values: BranchValues {
            zero,
            pi_half,
            theta: interior.then_some(value),
        },
    }
}

/// Optimised one-way deficit with its phase label.
///
/// Ties within [`TIE_TOL`] resolve in the order Zero, PiHalf, Theta.
pub fn deficit(x: &XxzState) -> Result<DeficitResult> {
    deficit_with(x, &GridConfig::default())
}

pub fn deficit_with(x: &XxzState, cfg: &GridConfig) -> Result<DeficitResult> {
    let (theta, value) = minimize_interior_with(x, cfg)?;
    Ok(classify(
        deficit_branch_0(x),
        deficit_branch_pi2(x),
        theta,
        value,
    ))
}

/// Optimised discord, minimised and classified like [`deficit`].
pub fn discord(x: &XxzState) -> Result<DeficitResult> {
    discord_with(x, &GridConfig::default())
}

pub fn discord_with(x: &XxzState, cfg: &GridConfig) -> Result<DeficitResult> {
    let profile = discord_profile(x);
    let (theta, value) = minimize::global_minimum(&profile, 0.0, FRAC_PI_2, cfg)?;
    let zero = deficit_branch_0(x);
    let pi_half = deficit_branch_pi2(x) + h2(0.5 * (1.0 + x.s1())) - LN_2;
    Ok(classify(zero, pi_half, theta, value))
}
