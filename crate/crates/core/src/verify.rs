//! Built-in verification suite: one group of checks per acceptance criterion,
//! each reporting expected value, computed value and tolerance.
//!
//! The curvature formulas enter through [`Model`] so that a deliberately
//! broken formula can be run through the same checks.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundaries::{
    find_triple_point, landmarks, solve_boundary, trace_slice, Axis, BoundaryKind, DEFAULT_STEP,
};
use crate::correlations::{
    bell_diagonal_value, deficit, deficit_at, deficit_branch_0, deficit_branch_pi2, deficit_with,
    discord, discord_at, PhaseLabel, INTERIOR_MARGIN,
};
use crate::diagram::{classify_grid, theta_region_area};
use crate::entropy::{
    d2_post_at_pi_half, d2_post_at_zero, oracle_post_matrix, oracle_spectrum, post_entropy_at,
    post_spectrum_cs, pre_entropy, quaternary_entropy, MeasurementAngle,
};
use crate::error::{Error, Result};
use crate::minimize::{global_minimum, GridConfig, DEFAULT_GRID};
use crate::roots::{bisect, BISECT_MAX_ITER, BISECT_TOL};
use crate::sample;
use crate::state::XxzState;

pub const CRITERIA: [(u8, &str); 18] = [
    (1, "pi/2 boundary endpoint at c3 = 0.1"),
    (2, "0 boundary endpoint at c3 = 0.1"),
    (3, "oblique-phase area at c3 = 0.1"),
    (4, "slice c3 = 0"),
    (5, "jump boundary at c3 = -0.2"),
    (6, "jump boundary at c3 = -0.4"),
    (7, "face landmark b"),
    (8, "face landmark c"),
    (9, "curvature roots at c3 = 0.15, c1 = 0.425"),
    (10, "band c3 >= 1/3 is phase 0"),
    (11, "Bell-diagonal edge"),
    (12, "triple point"),
    (13, "oracle spectral equivalence"),
    (14, "curvatures against finite differences"),
    (15, "symmetries"),
    (16, "nonnegativity and endpoint stationarity"),
    (17, "deficit and discord coincidences"),
    (18, "minimiser robustness under grid doubling"),
];

const RANDOM_STATES: usize = 1000;
const COINCIDENCE_STATES: usize = 100;
const BIMODAL_STATES: usize = 100;

/// Curvatures of the post-measurement entropy at the two endpoints.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub d2_zero: fn(&XxzState) -> Result<f64>,
    pub d2_pi_half: fn(&XxzState) -> Result<f64>,
}

impl Default for Model {
    fn default() -> Self {
        Model {
            d2_zero: d2_post_at_zero,
            d2_pi_half: d2_post_at_pi_half,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn near<E: std::fmt::Display>(
        criterion: u8,
        name: &str,
        expected: f64,
        tolerance: f64,
        computed: std::result::Result<f64, E>,
    ) -> Check {
        match computed {
            Ok(v) => Check {
                criterion,
                name: name.into(),
                expected,
                computed: v,
                tolerance,
                pass: (v - expected).abs() <= tolerance,
                error: None,
            },
            Err(e) => Check {
                criterion,
                name: name.into(),
                expected,
                computed: f64::NAN,
                tolerance,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }

    /// A nonnegative error measure that must not exceed `tolerance`.
    fn at_most<E: std::fmt::Display>(
        criterion: u8,
        name: &str,
        tolerance: f64,
        computed: std::result::Result<f64, E>,
    ) -> Check {
        let mut c = Check::near(criterion, name, 0.0, tolerance, computed);
        c.pass = c.error.is_none() && c.computed <= tolerance;
        c
    }
}

fn rng(criterion: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion as u64)
}

/// Root of a curvature along `s1` with `(c1, c3)` fixed.
fn curvature_root_s1(
    f: fn(&XxzState) -> Result<f64>,
    c3: f64,
    c1: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let g = |s1: f64| XxzState::new(s1, c1, c3).ok().and_then(|x| f(&x).ok());
    bisect(g, lo, hi, BISECT_TOL, BISECT_MAX_ITER)
}

fn corner(c3: f64) -> XxzState {
    XxzState::raw(XxzState::s1_max(c3), XxzState::c1_max(c3), c3)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Finite-difference curvature of `θ ↦ S̃` at an endpoint, Richardson
/// extrapolated; the step shrinks near the singular faces.
fn fd_curvature(x: &XxzState, at_pi_half: bool) -> f64 {
    let f = |t: f64| {
        if at_pi_half {
            post_entropy_at(x, FRAC_PI_2 - t)
        } else {
            post_entropy_at(x, t)
        }
    };
    let h = 1e-2 * x.min_weight().sqrt().min(1.0);
    let d = |h: f64| 2.0 * (f(h) - f(0.0)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Sample of states around the bimodal point `(0.4, 0.58, -0.2)`.
fn bimodal_state<R: Rng>(rng: &mut R) -> XxzState {
    loop {
        let s1 = rng.random_range(0.39..=0.41);
        let c1 = rng.random_range(0.57..=0.59);
        let c3 = rng.random_range(-0.21..=-0.19);
        if let Ok(x) = XxzState::new(s1, c1, c3) {
            return x;
        }
    }
}

pub fn criterion(n: u8) -> Vec<Check> {
    criterion_with(n, &Model::default())
}

pub fn criterion_with(n: u8, model: &Model) -> Vec<Check> {
    match n {
        1 => vec![Check::near(
            1,
            "pi/2 root s1 at c1 = 0.45",
            0.416297,
            1e-4,
            curvature_root_s1(model.d2_pi_half, 0.1, 0.45, 0.3, 0.5),
        )],
        2 => vec![Check::near(
            2,
            "0 root s1 at c1 = 0.45",
            0.502469,
            1e-4,
            curvature_root_s1(model.d2_zero, 0.1, 0.45, 0.46, XxzState::s1_max(0.1) - 1e-9),
        )],
        3 => {
            let area = theta_region_area(0.1).map_err(|e| e.to_string());
            let grid = classify_grid(0.1, 512).map_err(|e| e.to_string());
            let consistency = area
                .clone()
                .and_then(|a| grid.map(|g| (a.fraction - g.areas.theta.fraction).abs()));
            vec![
                Check::near(
                    3,
                    "segment area",
                    0.008639,
                    0.03 * 0.008639,
                    area.clone().map(|a| a.segment),
                ),
                Check::near(
                    3,
                    "whole-region fraction",
                    0.035,
                    0.002,
                    area.map(|a| a.fraction),
                ),
                Check::at_most(3, "|curve - grid(512)| fraction", 0.003, consistency),
            ]
        }
        4 => {
            let diagonal = trace_slice(BoundaryKind::Zero, 0.0, DEFAULT_STEP)
                .map(|c| max_of(c.points.iter().map(|p| (p.s1() - p.c1()).abs())));
            let endpoint = curvature_root_s1(model.d2_pi_half, 0.0, 0.5, 0.3, 0.5 - 1e-9);
            let fraction = theta_region_area(0.0).map(|a| a.fraction);
            vec![
                Check::at_most(4, "max |s1 - c1| on the 0 boundary", 1e-6, diagonal),
                Check::near(4, "pi/2 endpoint s1", 0.415037, 1e-4, endpoint),
                Check::near(4, "oblique-phase fraction", 0.042, 0.003, fraction),
            ]
        }
        5 => vec![Check::near(
            5,
            "jump boundary c1 at s1 = 0.4",
            0.576208,
            1e-4,
            solve_boundary(BoundaryKind::ZeroPrime, -0.2, (Axis::S1, 0.4), 0.5, 0.65),
        )],
        6 => vec![Check::near(
            6,
            "jump boundary c1 at s1 = 0.3",
            0.652165,
            1e-4,
            solve_boundary(BoundaryKind::ZeroPrime, -0.4, (Axis::S1, 0.3), 0.55, 0.7),
        )],
        7 => {
            let f = model.d2_pi_half;
            let b = bisect(
                |c3| f(&corner(c3)).ok(),
                -0.5,
                -0.2,
                BISECT_TOL,
                BISECT_MAX_ITER,
            );
            vec![Check::near(7, "c3 of landmark b", -0.350302, 1e-3, b)]
        }
        8 => vec![Check::near(
            8,
            "c3 of landmark c",
            -0.538191,
            2e-3,
            landmarks().map(|l| l.c.c3()),
        )],
        9 => vec![
            Check::near(
                9,
                "pi/2 curvature root s1",
                0.406975,
                1e-4,
                curvature_root_s1(model.d2_pi_half, 0.15, 0.425, 0.3, 0.44),
            ),
            Check::near(
                9,
                "0 curvature root s1",
                0.483997,
                1e-4,
                curvature_root_s1(
                    model.d2_zero,
                    0.15,
                    0.425,
                    0.44,
                    XxzState::s1_max(0.15) - 1e-9,
                ),
            ),
        ],
        10 => {
            let mut r = rng(10);
            let off = (0..RANDOM_STATES)
                .map(|_| {
                    let x = sample::state_in_band(&mut r, 1.0 / 3.0, 1.0 - 1e-9);
                    deficit(&x).map(|d| d.phase != PhaseLabel::Zero)
                })
                .collect::<Result<Vec<_>>>()
                .map(|v| v.into_iter().filter(|&b| b).count() as f64);
            vec![Check::at_most(10, "states not in phase 0", 0.0, off)]
        }
        11 => {
            let gap = [-1.0, -0.5, 0.0, 0.5, 1.0]
                .into_iter()
                .map(|c1| {
                    let x = XxzState::new(0.0, c1, -1.0)?;
                    Ok((deficit(&x)?.value - bell_diagonal_value(c1)?).abs())
                })
                .collect::<Result<Vec<_>>>()
                .map(max_of);
            let bit = XxzState::new(0.0, 1.0, -1.0)
                .map_err(Error::from)
                .and_then(|x| deficit(&x))
                .map(|d| d.value);
            vec![
                Check::at_most(11, "max |deficit - edge value|", 1e-10, gap),
                Check::near(11, "deficit at |c1| = 1", LN_2, 1e-10, bit),
            ]
        }
        12 => {
            let spread = find_triple_point(-0.6).and_then(|x| {
                let s = pre_entropy(&x);
                let window = (INTERIOR_MARGIN, FRAC_PI_2 - INTERIOR_MARGIN);
                let (_, theta) = global_minimum(
                    |t| post_entropy_at(&x, t) - s,
                    window.0,
                    window.1,
                    &GridConfig::default(),
                )?;
                let v = [deficit_branch_0(&x), deficit_branch_pi2(&x), theta];
                Ok(max_of([
                    (v[0] - v[1]).abs(),
                    (v[0] - v[2]).abs(),
                    (v[1] - v[2]).abs(),
                ]))
            });
            let absent = match find_triple_point(-0.3) {
                Err(Error::NotFound { .. }) => Ok(0.0),
                Ok(_) => Ok(1.0),
                Err(e) => Err(e),
            };
            vec![
                Check::at_most(12, "branch spread at c3 = -0.6", 1e-6, spread),
                Check::at_most(12, "triple points found at c3 = -0.3", 0.0, absent),
            ]
        }
        13 => {
            let mut r = rng(13);
            let worst = (0..RANDOM_STATES)
                .map(|_| {
                    let x = sample::state(&mut r);
                    let theta = r.random_range(0.0..PI);
                    let phi = r.random_range(0.0..2.0 * PI);
                    let oracle =
                        oracle_spectrum(&oracle_post_matrix(&x, theta, phi))?.sorted_desc();
                    let mut closed = post_spectrum_cs(&x, theta.cos(), theta.sin());
                    closed.sort_by(|a, b| b.total_cmp(a));
                    Ok(max_of((0..4).map(|k| (oracle[k] - closed[k]).abs())))
                })
                .collect::<Result<Vec<_>>>()
                .map(max_of);
            vec![Check::at_most(
                13,
                "max eigenvalue difference",
                1e-10,
                worst,
            )]
        }
        14 => {
            let mut r = rng(14);
            let states: Vec<XxzState> = (0..RANDOM_STATES)
                .map(|_| sample::interior_state(&mut r, 1e-6))
                .collect();
            let rel = |f: fn(&XxzState) -> Result<f64>, at_pi_half: bool| {
                states
                    .iter()
                    .map(|x| {
                        let a = f(x)?;
                        Ok((a - fd_curvature(x, at_pi_half)).abs() / a.abs().max(1.0))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(max_of)
            };
            vec![
                Check::at_most(
                    14,
                    "relative error at theta = 0",
                    1e-5,
                    rel(model.d2_zero, false),
                ),
                Check::at_most(
                    14,
                    "relative error at theta = pi/2",
                    1e-5,
                    rel(model.d2_pi_half, true),
                ),
            ]
        }
        15 => {
            let mut r = rng(15);
            let mut reflect: std::result::Result<f64, String> = Ok(0.0);
            let mut mirror: std::result::Result<f64, String> = Ok(0.0);
            for _ in 0..RANDOM_STATES {
                let x = sample::state(&mut r);
                let theta = r.random_range(0.0..FRAC_PI_2);
                let step = (|| -> Result<(f64, f64)> {
                    let (d, q) = (deficit(&x)?.value, discord(&x)?.value);
                    let mut gap: f64 = 0.0;
                    for y in [x.reflect_s1(), x.reflect_c1()] {
                        gap = gap
                            .max((deficit(&y)?.value - d).abs())
                            .max((discord(&y)?.value - q).abs());
                    }
                    let a =
                        quaternary_entropy(&oracle_spectrum(&oracle_post_matrix(&x, theta, 0.0))?);
                    let b = quaternary_entropy(&oracle_spectrum(&oracle_post_matrix(
                        &x,
                        PI - theta,
                        0.0,
                    ))?);
                    Ok((gap, (a - b).abs()))
                })();
                match step {
                    Ok((g, m)) => {
                        reflect = reflect.map(|v| v.max(g));
                        mirror = mirror.map(|v| v.max(m));
                    }
                    Err(e) => {
                        reflect = Err(e.to_string());
                        mirror = Err(e.to_string());
                        break;
                    }
                }
            }
            vec![
                Check::at_most(15, "reflection s1, c1 -> -s1, -c1", 1e-10, reflect),
                Check::at_most(15, "oracle entropy theta -> pi - theta", 1e-12, mirror),
            ]
        }
        16 => {
            let mut r = rng(16);
            let negative = (0..RANDOM_STATES)
                .map(|_| {
                    let x = sample::state(&mut r);
                    let s = pre_entropy(&x);
                    max_of((0..=100).map(|k| s - post_entropy_at(&x, PI * k as f64 / 100.0)))
                })
                .fold(0.0, f64::max);
            let mut r = rng(116);
            let stationarity = max_of((0..RANDOM_STATES).map(|_| {
                let x = sample::interior_state(&mut r, 1e-3);
                let e1 = 1e-2 * x.min_weight().sqrt().min(1.0);
                let e2 = 0.1 * e1;
                max_of([0.0, FRAC_PI_2].map(|end| {
                    let dir = if end == 0.0 { 1.0 } else { -1.0 };
                    let slope = |e: f64| {
                        (post_entropy_at(&x, end + dir * e) - post_entropy_at(&x, end)) / e
                    };
                    // a slope linear in the offset leaves no residual
                    (slope(e2) - 0.1 * slope(e1)).abs() / e2
                }))
            }));
            vec![
                Check::at_most(16, "max -deficit(theta)", 1e-10, Ok::<_, Error>(negative)),
                Check::at_most(
                    16,
                    "endpoint slope residual",
                    1e-4,
                    Ok::<_, Error>(stationarity),
                ),
            ]
        }
        17 => {
            let mut r = rng(17);
            let zero = MeasurementAngle::ZERO;
            let unequal = (0..COINCIDENCE_STATES)
                .filter(|_| {
                    let x = sample::state(&mut r);
                    discord_at(&x, zero) != deficit_at(&x, zero)
                })
                .count() as f64;
            let gap = (0..COINCIDENCE_STATES)
                .map(|_| {
                    let x = sample::bell_diagonal_state(&mut r);
                    Ok((discord(&x)?.value - deficit(&x)?.value).abs())
                })
                .collect::<Result<Vec<_>>>()
                .map(max_of);
            vec![
                Check::at_most(
                    17,
                    "states with Q(0) != deficit(0)",
                    0.0,
                    Ok::<_, Error>(unequal),
                ),
                Check::at_most(17, "max |Q - deficit| at s1 = 0", 1e-10, gap),
            ]
        }
        18 => {
            let mut r = rng(18);
            let coarse = GridConfig::default();
            let fine = GridConfig::with_points(2 * DEFAULT_GRID - 1);
            let mut states: Vec<XxzState> =
                (0..RANDOM_STATES).map(|_| sample::state(&mut r)).collect();
            states.extend((0..BIMODAL_STATES).map(|_| bimodal_state(&mut r)));
            let change = states
                .iter()
                .map(|x| {
                    Ok((deficit_with(x, &coarse)?.value - deficit_with(x, &fine)?.value).abs())
                })
                .collect::<Result<Vec<_>>>()
                .map(max_of);
            vec![Check::at_most(
                18,
                "max change of optimised deficit",
                1e-10,
                change,
            )]
        }
        _ => Vec::new(),
    }
}

/// Runs every criterion.
pub fn run(model: &Model) -> Vec<Check> {
    CRITERIA
        .iter()
        .flat_map(|&(n, _)| criterion_with(n, model))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The π/2 curvature with the sign of its longitudinal term flipped.
    fn flipped_pi_half(x: &XxzState) -> Result<f64> {
        let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
        let r = s1.hypot(c1);
        if r == 0.0 {
            return d2_post_at_pi_half(x);
        }
        let ss = s1 / r;
        let longitudinal =
            0.5 * ss * ss * ((r + c3).powi(2) / (1.0 + r) + (r - c3).powi(2) / (1.0 - r));
        Ok(d2_post_at_pi_half(x)? + 2.0 * longitudinal)
    }

    #[test]
    fn sign_error_in_pi_half_curvature_is_caught() {
        let model = Model {
            d2_pi_half: flipped_pi_half,
            ..Model::default()
        };
        for n in [1, 7, 9, 14] {
            let checks = criterion_with(n, &model);
            assert!(checks.iter().any(|c| !c.pass), "criterion {n}: {checks:?}");
        }
    }

    #[test]
    fn unknown_criterion_is_empty() {
        assert!(criterion(0).is_empty());
        assert!(criterion(19).is_empty());
    }
}
