//! Entropy kernels of symmetric XXZ states before and after a projective
//! measurement on one qubit.
//!
//! All entropies are in nats. The post-measurement spectrum depends only on the
//! polar angle θ of the measurement axis; by the symmetry θ -> π - θ it is
//! enough to consider θ ∈ [0, π/2].

mod oracle;

pub use oracle::{oracle_post_matrix, oracle_spectrum, HermitianMatrix4};

use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::Serialize;

use crate::error::{DomainError, Error, Result};
use crate::state::XxzState;

/// Eigenvalues below this magnitude contribute nothing to an entropy.
const XLNX_FLOOR: f64 = 1e-300;

/// Rounding slack for negative eigenvalues; anything below is rejected.
pub const NEGATIVE_CLIP: f64 = -1e-12;

const SPECTRUM_SUM_TOL: f64 = 1e-12;

/// Below this distance from the lines `s1 = ±c3` the bracketed terms of the
/// θ = 0 curvature are replaced by their limits.
const D2_ZERO_LIMIT_SWITCH: f64 = 1e-8;

/// Below this Bloch-like radius the π/2 curvature uses a series for `atanh(r)/r`.
const D2_PI_HALF_SERIES_SWITCH: f64 = 1e-6;

/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn xlnx(x: f64) -> f64 {
    if x < XLNX_FLOOR {
        0.0
    } else {
        x * x.ln()
    }
}

/// Four probabilities summing to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum4([f64; 4]);

impl Spectrum4 {
    /// Clips rounding-level negatives to zero; rejects larger ones.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let mut out = p;
        for v in &mut out {
            if !v.is_finite() {
                return Err(DomainError::NotFinite {
                    name: "eigenvalue",
                    value: *v,
                }
                .into());
            }
            if *v < NEGATIVE_CLIP {
                return Err(Error::NegativeEigenvalue { value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = out.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(DomainError::Normalization { sum }.into());
        }
        Ok(Self(out))
    }

    fn clipped(p: [f64; 4]) -> Self {
        debug_assert!(p.iter().all(|&v| v >= NEGATIVE_CLIP), "{p:?}");
        Self(p.map(|v| v.max(0.0)))
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    /// Values sorted in descending order.
    pub fn sorted_desc(&self) -> [f64; 4] {
        let mut v = self.0;
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// Polar angle of the measurement axis, restricted to `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct MeasurementAngle(f64);

impl MeasurementAngle {
    pub const ZERO: Self = Self(0.0);
    pub const PI_HALF: Self = Self(FRAC_PI_2);

    pub fn new(theta: f64) -> Result<Self, DomainError> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(DomainError::Angle { theta });
        }
        Ok(Self(theta))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Shannon entropy of a binary distribution `(x, 1 - x)`.
pub fn binary_entropy(x: f64) -> Result<f64, DomainError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(DomainError::Probability { value: x });
    }
    Ok(h2(x))
}

#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    -xlnx(x) - xlnx(1.0 - x)
}

pub fn quaternary_entropy(s: &Spectrum4) -> f64 {
    h4(s.0)
}

#[inline]
fn h4(p: [f64; 4]) -> f64 {
    -(xlnx(p[0]) + xlnx(p[1]) + xlnx(p[2]) + xlnx(p[3]))
}

/// Eigenvalues of the state itself.
pub fn pre_spectrum(x: &XxzState) -> Spectrum4 {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    Spectrum4::clipped([
        0.25 * (1.0 + 2.0 * s1 + c3),
        0.25 * (1.0 - 2.0 * s1 + c3),
        0.25 * (1.0 + 2.0 * c1 - c3),
        0.25 * (1.0 - 2.0 * c1 - c3),
    ])
}

pub fn pre_entropy(x: &XxzState) -> f64 {
    quaternary_entropy(&pre_spectrum(x))
}

/// Pre-measurement entropy written out with unnormalised logarithms.
pub fn pre_entropy_closed(x: &XxzState) -> f64 {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    2.0 * LN_2
        - 0.25
            * (xlnx(1.0 + 2.0 * c1 - c3)
                + xlnx(1.0 - 2.0 * c1 - c3)
                + xlnx(1.0 + 2.0 * s1 + c3)
                + xlnx(1.0 - 2.0 * s1 + c3))
}

#[inline]
pub(crate) fn post_spectrum_cs(x: &XxzState, cos: f64, sin: f64) -> [f64; 4] {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    let transverse = c1 * c1 * sin * sin;
    let root_plus = ((s1 + c3 * cos).powi(2) + transverse).sqrt();
    let root_minus = ((s1 - c3 * cos).powi(2) + transverse).sqrt();
    let up = 1.0 + s1 * cos;
    let down = 1.0 - s1 * cos;
    [
        0.25 * (up + root_plus),
        0.25 * (up - root_plus),
        0.25 * (down + root_minus),
        0.25 * (down - root_minus),
    ]
}

/// Spectrum of the averaged post-measurement state.
pub fn post_spectrum(x: &XxzState, a: MeasurementAngle) -> Spectrum4 {
    let (sin, cos) = a.0.sin_cos();
    Spectrum4::clipped(post_spectrum_cs(x, cos, sin))
}

/// Post-measurement entropy at an arbitrary polar angle (any real θ; the
/// function is even and π-periodic up to reflection).
#[inline]
pub fn post_entropy_at(x: &XxzState, theta: f64) -> f64 {
    let (sin, cos) = theta.sin_cos();
    h4(post_spectrum_cs(x, cos, sin))
}

pub fn post_entropy(x: &XxzState, a: MeasurementAngle) -> f64 {
    post_entropy_at(x, a.0)
}

/// Closed form of the post-measurement entropy at θ = 0.
pub fn post_entropy_zero_closed(x: &XxzState) -> f64 {
    let (s1, c3) = (x.s1(), x.c3());
    2.0 * LN_2
        - 0.5 * xlnx(1.0 - c3)
        - 0.25 * (xlnx(1.0 + 2.0 * s1 + c3) + xlnx(1.0 - 2.0 * s1 + c3))
}

/// Closed form of the post-measurement entropy at θ = π/2.
pub fn post_entropy_pi_half_closed(x: &XxzState) -> f64 {
    let r = x.s1().hypot(x.c1());
    2.0 * LN_2 - 0.5 * (xlnx(1.0 + r) + xlnx(1.0 - r))
}

/// Entropy of the measured qubit's outcome distribution at angle θ.
#[inline]
pub(crate) fn outcome_entropy(x: &XxzState, cos: f64) -> f64 {
    h2(0.5 * (1.0 + x.s1() * cos))
}

/// Conditional entropy `S̃(θ) - h((1 + s1 cos θ)/2)`.
pub fn cond_entropy(x: &XxzState, a: MeasurementAngle) -> f64 {
    post_entropy(x, a) - outcome_entropy(x, a.0.cos())
}

/// Second θ-derivative of the post-measurement entropy at θ = 0.
///
/// The bracketed `c1²` terms have removable singularities on `s1 = ±c3`; both
/// tend to `2/(1 - c3)` there.
pub fn d2_post_at_zero(x: &XxzState) -> Result<f64> {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    let a = 1.0 + 2.0 * s1 + c3;
    let b = 1.0 - 2.0 * s1 + c3;
    let c = 1.0 - c3;
    if c <= 0.0 || a <= 0.0 || b <= 0.0 {
        return Err(Error::SingularInput(format!(
            "curvature at theta = 0 needs 1 - c3 > 0 and 1 ± 2 s1 + c3 > 0 (s1 = {s1}, c3 = {c3})"
        )));
    }
    // ln(A/C)/(s1 + c3) with A = C + 2(s1 + c3)
    let plus = s1 + c3;
    let g_plus = if plus.abs() < D2_ZERO_LIMIT_SWITCH {
        2.0 / c
    } else {
        (2.0 * plus / c).ln_1p() / plus
    };
    // ln(C/B)/(s1 - c3) with B = C - 2(s1 - c3)
    let minus = s1 - c3;
    let g_minus = if minus.abs() < D2_ZERO_LIMIT_SWITCH {
        2.0 / c
    } else {
        -(-2.0 * minus / c).ln_1p() / minus
    };
    let la = a.ln();
    let lb = b.ln();
    let lc = c.ln();
    Ok(0.25 * (s1 * (la - lb) + c3 * (la + lb - 2.0 * lc) - c1 * c1 * (g_plus + g_minus)))
}

/// Limit of [`d2_post_at_zero`] on the edge `s1 = (1 + c3)/2`, `|c1| = (1 - c3)/2`.
///
/// On that edge the coefficient of `ln(1 - 2 s1 + c3)` vanishes, so the
/// curvature stays finite although the logarithm diverges.
pub fn d2_post_at_zero_on_edge(c3: f64) -> Result<f64> {
    if !(c3 > -1.0 && c3 < 1.0) {
        return Err(Error::SingularInput(format!(
            "edge curvature at theta = 0 needs -1 < c3 < 1 (c3 = {c3})"
        )));
    }
    let s1 = 0.5 * (1.0 + c3);
    let c1 = 0.5 * (1.0 - c3);
    let a = 1.0 + 2.0 * s1 + c3;
    let c = 1.0 - c3;
    let plus = s1 + c3;
    let g_plus = if plus.abs() < D2_ZERO_LIMIT_SWITCH {
        2.0 / c
    } else {
        (2.0 * plus / c).ln_1p() / plus
    };
    let (la, lc) = (a.ln(), c.ln());
    Ok(0.25 * (plus * la - 2.0 * c3 * lc - c1 * c1 * g_plus - c1 * lc))
}

/// Second θ-derivative of the post-measurement entropy at θ = π/2.
///
/// Evaluated in terms of the direction cosines `s1/r`, `c1/r`, which keeps the
/// expression bounded as `r -> 0`; the limit at `r = 0` is `-c3²`.
pub fn d2_post_at_pi_half(x: &XxzState) -> Result<f64> {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    let r = s1.hypot(c1);
    if r >= 1.0 {
        return Err(Error::SingularInput(format!(
            "curvature at theta = pi/2 needs r = sqrt(s1^2 + c1^2) < 1 (r = {r})"
        )));
    }
    if r == 0.0 {
        return Ok(-c3 * c3);
    }
    // atanh(r)/r = ln((1 + r)/(1 - r)) / (2r)
    let atanh_over_r = if r < D2_PI_HALF_SERIES_SWITCH {
        let r2 = r * r;
        1.0 + r2 / 3.0 + r2 * r2 / 5.0
    } else {
        r.atanh() / r
    };
    let (cs, ss) = (c1 / r, s1 / r);
    let transverse = cs * cs * (r * r - c3 * c3) * atanh_over_r;
    let longitudinal =
        0.5 * ss * ss * ((r + c3).powi(2) / (1.0 + r) + (r - c3).powi(2) / (1.0 - r));
    Ok(transverse - longitudinal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s1: f64, c1: f64, c3: f64) -> XxzState {
        XxzState::new(s1, c1, c3).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn binary_entropy_values() {
        assert!(close(binary_entropy(0.5).unwrap(), LN_2, 1e-15));
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let want = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!(close(binary_entropy(0.25).unwrap(), want, 1e-15));
        assert!(close(want, 0.562335, 1e-6));
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.01).is_err());
    }

    #[test]
    fn quaternary_entropy_values() {
        let u = Spectrum4::new([0.25; 4]).unwrap();
        assert!(close(quaternary_entropy(&u), 2.0 * LN_2, 1e-15));
        let p = Spectrum4::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(quaternary_entropy(&p), 0.0);
        let p = [0.375, 0.175, 0.375, 0.075];
        let by_hand: f64 = p.iter().map(|&v: &f64| -v * v.ln()).sum();
        let got = quaternary_entropy(&Spectrum4::new(p).unwrap());
        assert!(close(got, by_hand, 1e-15));
        assert!(close(got, 1.234912, 1e-6));
    }

    #[test]
    fn spectrum_validation() {
        assert!(Spectrum4::new([0.5, 0.5, 1e-13, -1e-13]).is_ok());
        assert!(matches!(
            Spectrum4::new([0.6, 0.5, 0.0, -0.1]),
            Err(Error::NegativeEigenvalue { .. })
        ));
        assert!(Spectrum4::new([0.5, 0.5, 0.1, 0.0]).is_err());
    }

    #[test]
    fn pre_spectrum_examples() {
        assert_eq!(pre_spectrum(&st(0.0, 0.0, 0.0)).as_array(), [0.25; 4]);
        let got = pre_spectrum(&st(0.2, 0.3, 0.1)).as_array();
        for (g, w) in got.iter().zip([0.375, 0.175, 0.375, 0.075]) {
            assert!(close(*g, w, 1e-15));
        }
        assert_eq!(
            pre_spectrum(&st(0.0, 1.0, -1.0)).as_array(),
            [0.0, 0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn pre_entropy_examples() {
        assert!(close(pre_entropy(&st(0.0, 0.0, 0.0)), 2.0 * LN_2, 1e-15));
        assert_eq!(pre_entropy(&st(0.0, 1.0, -1.0)), 0.0);
        let x = st(0.2, 0.3, 0.1);
        assert!(close(pre_entropy(&x), 1.234912, 1e-6));
        assert!(close(pre_entropy(&x), pre_entropy_closed(&x), 1e-12));
    }

    #[test]
    fn post_spectrum_endpoint_collapse() {
        let x = st(0.2, 0.3, 0.1);
        let (s1, c3) = (x.s1(), x.c3());
        let got = post_spectrum(&x, MeasurementAngle::ZERO).as_array();
        let want = [
            0.25 * (1.0 + s1 + (s1 + c3).abs()),
            0.25 * (1.0 + s1 - (s1 + c3).abs()),
            0.25 * (1.0 - s1 + (s1 - c3).abs()),
            0.25 * (1.0 - s1 - (s1 - c3).abs()),
        ];
        for (g, w) in got.iter().zip(want) {
            assert!(close(*g, w, 1e-15));
        }
        let r = 0.13f64.sqrt();
        let got = post_spectrum(&x, MeasurementAngle::PI_HALF).as_array();
        let want = [
            0.25 * (1.0 + r),
            0.25 * (1.0 - r),
            0.25 * (1.0 + r),
            0.25 * (1.0 - r),
        ];
        for (g, w) in got.iter().zip(want) {
            assert!(close(*g, w, 1e-15));
        }
    }

    #[test]
    fn post_entropy_examples() {
        let center = st(0.0, 0.0, 0.0);
        for theta in [0.0, 0.3, 1.0, FRAC_PI_2] {
            let a = MeasurementAngle::new(theta).unwrap();
            assert!(close(post_entropy(&center, a), 2.0 * LN_2, 1e-15));
            assert!(close(cond_entropy(&center, a), LN_2, 1e-15));
        }
        let x = st(0.2, 0.3, 0.1);
        // endpoint closed forms evaluated independently
        let s0 =
            2.0 * LN_2 - 0.5 * 0.9 * 0.9f64.ln() - 0.25 * (1.5 * 1.5f64.ln() + 0.7 * 0.7f64.ln());
        assert!(close(post_entropy(&x, MeasurementAngle::ZERO), s0, 1e-12));
        let r = 0.13f64.sqrt();
        let sp = 2.0 * LN_2 - 0.5 * ((1.0 + r) * (1.0 + r).ln() + (1.0 - r) * (1.0 - r).ln());
        assert!(close(
            post_entropy(&x, MeasurementAngle::PI_HALF),
            sp,
            1e-12
        ));
    }

    #[test]
    fn cond_entropy_on_s1_zero_plane() {
        let x = st(0.0, 0.3, -0.2);
        for theta in [0.0, 0.4, 1.2] {
            let a = MeasurementAngle::new(theta).unwrap();
            assert!(close(
                cond_entropy(&x, a),
                post_entropy(&x, a) - LN_2,
                1e-15
            ));
        }
    }

    #[test]
    fn angle_range() {
        assert!(MeasurementAngle::new(-0.1).is_err());
        assert!(MeasurementAngle::new(1.6).is_err());
        assert!(MeasurementAngle::new(FRAC_PI_2).is_ok());
    }

    /// Central difference at an endpoint, folding the stencil back into the
    /// interval with the reflection symmetry of the profile.
    fn fd_zero(x: &XxzState, h: f64) -> f64 {
        2.0 * (post_entropy_at(x, h) - post_entropy_at(x, 0.0)) / (h * h)
    }

    fn fd_pi_half(x: &XxzState, h: f64) -> f64 {
        2.0 * (post_entropy_at(x, FRAC_PI_2 - h) - post_entropy_at(x, FRAC_PI_2)) / (h * h)
    }

    #[test]
    fn curvatures_match_finite_differences() {
        for (s1, c1, c3) in [
            (0.2, 0.3, 0.1),
            (0.1, 0.4, -0.3),
            (0.3, 0.2, 0.2),
            (-0.25, 0.35, -0.1),
            (0.05, -0.6, -0.4),
        ] {
            let x = st(s1, c1, c3);
            let a0 = d2_post_at_zero(&x).unwrap();
            let ap = d2_post_at_pi_half(&x).unwrap();
            let (f0, fp) = (fd_zero(&x, 1e-4), fd_pi_half(&x, 1e-4));
            assert!(((a0 - f0) / a0).abs() < 1e-5, "{x:?}: {a0} vs {f0}");
            assert!(((ap - fp) / ap).abs() < 1e-5, "{x:?}: {ap} vs {fp}");
        }
    }

    #[test]
    fn d2_zero_vanishes_on_diagonal_when_c3_is_zero() {
        for s1 in [0.05, 0.2, 0.3, 0.45] {
            let x = st(s1, s1, 0.0);
            assert!(d2_post_at_zero(&x).unwrap().abs() < 1e-15);
            let x = st(s1, -s1, 0.0);
            assert!(d2_post_at_zero(&x).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn d2_zero_limits_are_continuous() {
        // s1 = -c3 and s1 = c3 are removable singularities
        for (s1, c1, c3) in [(0.2, 0.3, -0.2), (0.15, 0.3, 0.15)] {
            let on = d2_post_at_zero(&st(s1, c1, c3)).unwrap();
            let off = d2_post_at_zero(&st(s1 + 1e-6, c1, c3)).unwrap();
            let off2 = d2_post_at_zero(&st(s1 - 1e-6, c1, c3)).unwrap();
            assert!((on - off).abs() < 1e-5, "{on} {off}");
            assert!((on - off2).abs() < 1e-5, "{on} {off2}");
            let fd = fd_zero(&st(s1, c1, c3), 1e-4);
            assert!(((on - fd) / on).abs() < 1e-5, "{on} vs {fd}");
        }
    }

    #[test]
    fn d2_zero_edge_limit() {
        assert!(d2_post_at_zero_on_edge(0.0).unwrap().abs() < 1e-15);
        for c3 in [-0.6, -0.2, 0.1, 0.5] {
            let edge = d2_post_at_zero_on_edge(c3).unwrap();
            let (smax, cmax) = (XxzState::s1_max(c3), XxzState::c1_max(c3));
            // approach along the face |c1| = (1 - c3)/2
            let near = d2_post_at_zero(&st(smax - 1e-9, cmax, c3)).unwrap();
            assert!((edge - near).abs() < 1e-6, "{c3}: {edge} vs {near}");
        }
        assert!(d2_post_at_zero_on_edge(1.0).is_err());
    }

    #[test]
    fn d2_pi_half_near_origin() {
        let c3 = 0.3;
        assert_eq!(d2_post_at_pi_half(&st(0.0, 0.0, c3)).unwrap(), -c3 * c3);
        for (s1, c1) in [(1e-7, 0.0), (0.0, 1e-7), (5e-7, 5e-7), (2e-6, 1e-6)] {
            let v = d2_post_at_pi_half(&st(s1, c1, c3)).unwrap();
            assert!((v + c3 * c3).abs() < 1e-5, "{v}");
        }
    }

    #[test]
    fn curvature_signs() {
        // c1 = 0, s1 != 0: theta = 0 is a strict minimum
        for (s1, c3) in [(0.2, 0.1), (0.3, -0.2), (-0.1, 0.5)] {
            let x = st(s1, 0.0, c3);
            assert!(d2_post_at_zero(&x).unwrap() > 0.0);
            assert!(fd_zero(&x, 1e-3) > 0.0);
        }
        // s1 = 0, |c1| > |c3|: theta = pi/2 is a strict minimum
        for (c1, c3) in [(0.3, 0.1), (-0.35, 0.2), (0.6, -0.4)] {
            let x = st(0.0, c1, c3);
            assert!(d2_post_at_pi_half(&x).unwrap() > 0.0);
            assert!(fd_pi_half(&x, 1e-3) > 0.0);
        }
    }

    #[test]
    fn curvature_singular_inputs() {
        assert!(matches!(
            d2_post_at_zero(&st(0.55, 0.2, 0.1)),
            Err(Error::SingularInput(_))
        ));
        assert!(matches!(
            d2_post_at_zero(&st(0.0, 0.0, 1.0)),
            Err(Error::SingularInput(_))
        ));
        assert!(matches!(
            d2_post_at_pi_half(&st(0.0, 1.0, -1.0)),
            Err(Error::SingularInput(_))
        ));
    }
}
