//! Parameter space of symmetric XXZ states.
//!
//! A symmetric XXZ state is fixed by three correlators `(s1, c1, c3)`. Positive
//! semidefiniteness confines them to the tetrahedron
//!
//! ```text
//! c3 ∈ [-1, 1],  |s1| <= (1 + c3)/2,  |c1| <= (1 - c3)/2
//! ```
//!
//! which is also the image of the probability simplex of Bell/product mixture
//! weights. This module holds the validated types and the conversions between
//! the correlator, mixture and general X-state parameterizations.

use serde::Serialize;

use crate::error::DomainError;

/// Slack allowed on the faces and edges of the tetrahedron.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Tolerance used to recognise the symmetric XXZ subclass of a general X state.
pub const SUBCLASS_TOL: f64 = 1e-12;

/// Tolerance on the normalisation of mixture weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

fn finite(name: &'static str, value: f64) -> Result<f64, DomainError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DomainError::NotFinite { name, value })
    }
}

/// Correlator triple of a symmetric XXZ state, guaranteed to lie in the
/// tetrahedron (up to [`BOUNDARY_TOL`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxzState {
    s1: f64,
    c1: f64,
    c3: f64,
}

impl XxzState {
    pub fn new(s1: f64, c1: f64, c3: f64) -> Result<Self, DomainError> {
        validate(s1, c1, c3)
    }

    /// Builds a state without checking the tetrahedron inequalities.
    ///
    /// Used by the root solvers, which only ever produce coordinates that
    /// were clamped into the domain beforehand.
    pub(crate) fn raw(s1: f64, c1: f64, c3: f64) -> Self {
        Self { s1, c1, c3 }
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Half-width of the admissible `s1` interval at this `c3`.
    pub fn s1_max(c3: f64) -> f64 {
        0.5 * (1.0 + c3)
    }

    /// Half-width of the admissible `c1` interval at this `c3`.
    pub fn c1_max(c3: f64) -> f64 {
        0.5 * (1.0 - c3)
    }

    /// `s1 -> -s1`
    pub fn reflect_s1(&self) -> Self {
        Self::raw(-self.s1, self.c1, self.c3)
    }

    /// `c1 -> -c1`
    pub fn reflect_c1(&self) -> Self {
        Self::raw(self.s1, -self.c1, self.c3)
    }

    /// Distance to the nearest face, measured in mixture weights (the smallest
    /// eigenvalue of the density matrix).
    pub fn min_weight(&self) -> f64 {
        to_bell_mixture(self).min()
    }
}

/// Checks the three tetrahedron inequalities (inclusive, with slack
/// [`BOUNDARY_TOL`]).
pub fn validate(s1: f64, c1: f64, c3: f64) -> Result<XxzState, DomainError> {
    let s1 = finite("s1", s1)?;
    let c1 = finite("c1", c1)?;
    let c3 = finite("c3", c3)?;
    if c3.abs() > 1.0 + BOUNDARY_TOL {
        return Err(DomainError::C3Range { c3 });
    }
    let s1_bound = XxzState::s1_max(c3);
    if s1.abs() > s1_bound + BOUNDARY_TOL {
        return Err(DomainError::S1Bound {
            abs_s1: s1.abs(),
            bound: s1_bound,
        });
    }
    let c1_bound = XxzState::c1_max(c3);
    if c1.abs() > c1_bound + BOUNDARY_TOL {
        return Err(DomainError::C1Bound {
            abs_c1: c1.abs(),
            bound: c1_bound,
        });
    }
    Ok(XxzState { s1, c1, c3 })
}

/// Weights of the mixture `q1 |Ψ+><Ψ+| + q2 |Ψ-><Ψ-| + q3 |00><00| + q4 |11><11|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellMixWeights {
    q: [f64; 4],
}

impl BellMixWeights {
    pub fn new(q1: f64, q2: f64, q3: f64, q4: f64) -> Result<Self, DomainError> {
        let q = [q1, q2, q3, q4];
        for (i, &value) in q.iter().enumerate() {
            finite("q", value)?;
            if value < -BOUNDARY_TOL {
                return Err(DomainError::NegativeWeight {
                    index: i + 1,
                    value,
                });
            }
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(DomainError::Normalization { sum });
        }
        Ok(Self { q })
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.q
    }

    pub fn min(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn from_bell_mixture(w: &BellMixWeights) -> XxzState {
    let [q1, q2, q3, _] = w.q;
    XxzState::raw(q1 + q2 + 2.0 * q3 - 1.0, q1 - q2, 1.0 - 2.0 * (q1 + q2))
}

pub fn to_bell_mixture(x: &XxzState) -> BellMixWeights {
    let (s1, c1, c3) = (x.s1, x.c1, x.c3);
    BellMixWeights {
        q: [
            0.25 * (1.0 + 2.0 * c1 - c3),
            0.25 * (1.0 - 2.0 * c1 - c3),
            0.25 * (1.0 + 2.0 * s1 + c3),
            0.25 * (1.0 - 2.0 * s1 + c3),
        ],
    }
}

/// General seven-parameter X state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralXState {
    pub s1: f64,
    pub s2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c12: f64,
    pub c21: f64,
    pub c3: f64,
}

/// Real X form reached by local z-rotations, plus the XXZ state when the input
/// belongs to that subclass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XReduction {
    pub s1: f64,
    pub s2: f64,
    pub c3: f64,
    pub u: f64,
    pub v: f64,
    pub xxz: Option<XxzState>,
}

impl GeneralXState {
    /// Checks the correlator ranges and the two positivity conditions.
    pub fn validate(&self) -> Result<(), DomainError> {
        let fields = [
            ("s1", self.s1),
            ("s2", self.s2),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c12", self.c12),
            ("c21", self.c21),
            ("c3", self.c3),
        ];
        for (name, value) in fields {
            finite(name, value)?;
            if value.abs() > 1.0 + BOUNDARY_TOL {
                return Err(DomainError::CorrelatorRange { name, value });
            }
        }
        let (u2, v2) = self.uv_squared();
        let plus = (1.0 + self.c3).powi(2) - (self.s1 + self.s2).powi(2);
        if plus + BOUNDARY_TOL < u2 {
            return Err(DomainError::PositivityPlus { lhs: plus, rhs: u2 });
        }
        let minus = (1.0 - self.c3).powi(2) - (self.s1 - self.s2).powi(2);
        if minus + BOUNDARY_TOL < v2 {
            return Err(DomainError::PositivityMinus {
                lhs: minus,
                rhs: v2,
            });
        }
        Ok(())
    }

    fn uv_squared(&self) -> (f64, f64) {
        let u2 = (self.c1 - self.c2).powi(2) + (self.c12 + self.c21).powi(2);
        let v2 = (self.c1 + self.c2).powi(2) + (self.c12 - self.c21).powi(2);
        (u2, v2)
    }

    pub fn is_symmetric_xxz(&self) -> bool {
        (self.s1 - self.s2).abs() <= SUBCLASS_TOL
            && (self.c1 - self.c2).abs() <= SUBCLASS_TOL
            && self.c12.abs() <= SUBCLASS_TOL
            && self.c21.abs() <= SUBCLASS_TOL
    }
}

pub fn reduce_general_x(g: &GeneralXState) -> Result<XReduction, DomainError> {
    g.validate()?;
    let (u2, v2) = g.uv_squared();
    let xxz = if g.is_symmetric_xxz() {
        Some(validate(g.s1, g.c1, g.c3)?)
    } else {
        None
    };
    Ok(XReduction {
        s1: g.s1,
        s2: g.s2,
        c3: g.c3,
        u: u2.sqrt(),
        v: v2.sqrt(),
        xxz,
    })
}
