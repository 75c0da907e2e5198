use thiserror::Error;

/// A parameter (or parameter combination) lies outside its admissible set.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("{name} = {value} is not a finite number")]
    NotFinite { name: &'static str, value: f64 },
    #[error("c3 = {c3} lies outside [-1, 1]")]
    C3Range { c3: f64 },
    #[error("|s1| = {abs_s1} exceeds (1 + c3)/2 = {bound}")]
    S1Bound { abs_s1: f64, bound: f64 },
    #[error("|c1| = {abs_c1} exceeds (1 - c3)/2 = {bound}")]
    C1Bound { abs_c1: f64, bound: f64 },
    #[error("correlator {name} = {value} lies outside [-1, 1]")]
    CorrelatorRange { name: &'static str, value: f64 },
    #[error("positivity (1+c3)^2 - (s1+s2)^2 >= u^2 violated: {lhs} < {rhs}")]
    PositivityPlus { lhs: f64, rhs: f64 },
    #[error("positivity (1-c3)^2 - (s1-s2)^2 >= v^2 violated: {lhs} < {rhs}")]
    PositivityMinus { lhs: f64, rhs: f64 },
    #[error("weight q{index} = {value} is negative")]
    NegativeWeight { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    Normalization { sum: f64 },
    #[error("probability {value} lies outside [0, 1]")]
    Probability { value: f64 },
    #[error("measurement angle {theta} lies outside [0, pi/2]")]
    Angle { theta: f64 },
    #[error("{0}")]
    Argument(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("eigenvalue {value} is negative beyond rounding")]
    NegativeEigenvalue { value: f64 },
    #[error("{what} did not converge within {iterations} iterations")]
    Convergence {
        what: &'static str,
        iterations: usize,
    },
    #[error("no sign change on [{lo}, {hi}]: residual(lo) = {}, residual(hi) = {}", fmt_opt(*f_lo), fmt_opt(*f_hi))]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: Option<f64>,
        f_hi: Option<f64>,
    },
    #[error("no genuine interior minimum of the deficit profile")]
    NoInteriorMinimum,
    #[error("no {kind} boundary found in the section {section}")]
    EmptyCurve { kind: String, section: String },
    #[error("triple point not found for c3 = {c3}")]
    NotFound { c3: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:e}"),
        None => "undefined".to_owned(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
