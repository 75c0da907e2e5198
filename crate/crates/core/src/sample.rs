//! Random states for property checks.
//!
//! The map from mixture weights to correlators is affine, so a uniform draw
//! from the probability simplex is a uniform draw from the tetrahedron.

use rand::Rng;

use crate::state::{from_bell_mixture, BellMixWeights, XxzState};

/// Uniform point of the probability simplex (flat Dirichlet via exponentials).
pub fn simplex<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let mut e = [0.0; 4];
    for v in &mut e {
        *v = -(1.0 - rng.random::<f64>()).ln();
    }
    let sum: f64 = e.iter().sum();
    e.map(|v| v / sum)
}

/// Uniform state in the tetrahedron.
pub fn state<R: Rng + ?Sized>(rng: &mut R) -> XxzState {
    let q = simplex(rng);
    let w = BellMixWeights::new(q[0], q[1], q[2], q[3]).expect("simplex sample");
    from_bell_mixture(&w)
}

/// Uniform state whose density-matrix eigenvalues all exceed `margin`.
pub fn interior_state<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> XxzState {
    loop {
        let x = state(rng);
        if x.min_weight() > margin {
            return x;
        }
    }
}

/// Uniform state of the slab `lo <= c3 <= hi`.
pub fn state_in_band<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> XxzState {
    let c3 = rng.random_range(lo..=hi);
    let s1 = rng.random_range(-1.0..=1.0) * XxzState::s1_max(c3);
    let c1 = rng.random_range(-1.0..=1.0) * XxzState::c1_max(c3);
    XxzState::raw(s1, c1, c3)
}

/// State on the Bell-diagonal plane `s1 = 0`.
pub fn bell_diagonal_state<R: Rng + ?Sized>(rng: &mut R) -> XxzState {
    let c3 = rng.random_range(-1.0..=1.0);
    let c1 = rng.random_range(-1.0..=1.0) * XxzState::c1_max(c3);
    XxzState::raw(0.0, c1, c3)
}
