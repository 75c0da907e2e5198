//! One-dimensional minimisation: uniform grid scan followed by golden-section
//! refinement of every local-minimum bracket.

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub points: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl GridConfig {
    pub fn with_points(points: usize) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }
}

/// Minimum of a unimodal function on `[a, b]`; returns `(x, f(x))`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while b - a > tol {
        if iter == max_iter {
            return Err(Error::Convergence {
                what: "golden-section search",
                iterations: max_iter,
            });
        }
        iter += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    // the bracket ends are candidates too: the search never evaluates them
    let xm = 0.5 * (a + b);
    let mut best = (xm, f(xm));
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    Ok(best)
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
        .collect()
}

/// Global minimum of `f` on `[lo, hi]`. Every grid local minimum, endpoints
/// included, is refined; ties keep the smallest abscissa.
pub fn global_minimum<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    cfg: &GridConfig,
) -> Result<(f64, f64)> {
    let n = cfg.points.max(3);
    let xs = grid(lo, hi, n);
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut best = (xs[0], fs[0]);
    for i in 0..n {
        if fs[i] < best.1 {
            best = (xs[i], fs[i]);
        }
    }
    for i in 0..n {
        let left_ok = i == 0 || fs[i] <= fs[i - 1];
        let right_ok = i == n - 1 || fs[i] <= fs[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(n - 1)];
        let (x, fx) = golden_section(&mut f, a, b, cfg.tol, cfg.max_iter)?;
        // golden section never samples the bracket ends; endpoints stay as is
        if fx < best.1 || (fx == best.1 && x < best.0) {
            best = (x, fx);
        }
    }
    Ok(best)
}

/// Strict interior local minima of `f` on the grid over `[lo, hi]`, refined
/// by golden section and kept only if they stay inside `window`.
pub fn interior_local_minima<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    window: (f64, f64),
    cfg: &GridConfig,
) -> Result<Vec<(f64, f64)>> {
    let n = cfg.points.max(3);
    let xs = grid(lo, hi, n);
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 1..n - 1 {
        if !(fs[i] < fs[i - 1] && fs[i] <= fs[i + 1]) {
            continue;
        }
        if xs[i] <= window.0 || xs[i] >= window.1 {
            continue;
        }
        let a = xs[i - 1].max(window.0);
        let b = xs[i + 1].min(window.1);
        let (x, fx) = golden_section(&mut f, a, b, cfg.tol, cfg.max_iter)?;
        // a refined point pinned at the window edge is not a genuine extremum
        if x - window.0 <= cfg.tol || window.1 - x <= cfg.tol {
            continue;
        }
        out.push((x, fx));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-10, 200).unwrap();
        // a smooth minimum is located only to about sqrt(machine epsilon)
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_reports_iteration_cap() {
        let r = golden_section(|x| x * x, -1.0, 1.0, 1e-10, 5);
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }

    #[test]
    fn global_picks_deeper_of_two_basins() {
        // basins at 0.2 (depth -1) and 1.2 (depth -1.1)
        let f = |x: f64| {
            -(-(x - 0.2f64).powi(2) / 0.01).exp() - 1.1 * (-(x - 1.2f64).powi(2) / 0.01).exp()
        };
        let (x, _) =
            global_minimum(f, 0.0, std::f64::consts::FRAC_PI_2, &GridConfig::default()).unwrap();
        assert!((x - 1.2).abs() < 1e-6, "{x}");
    }

    #[test]
    fn global_keeps_endpoints() {
        let (x, fx) = global_minimum(|x| x, 0.0, 1.0, &GridConfig::default()).unwrap();
        assert_eq!(x, 0.0);
        assert_eq!(fx, 0.0);
        let (x, _) = global_minimum(|x| -x, 0.0, 1.0, &GridConfig::default()).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn flat_profile_returns_left_end() {
        let (x, fx) = global_minimum(|_| 0.0, 0.0, 1.0, &GridConfig::default()).unwrap();
        assert_eq!((x, fx), (0.0, 0.0));
    }

    #[test]
    fn interior_minima_skip_monotone_edges() {
        let f = |x: f64| (x - 0.7).powi(2) - 0.5 * x;
        let v =
            interior_local_minima(f, 0.0, 1.5, (1e-4, 1.5 - 1e-4), &GridConfig::default()).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0].0 - 0.95).abs() < 1e-7);
        let v = interior_local_minima(|x| x, 0.0, 1.0, (1e-4, 1.0 - 1e-4), &GridConfig::default())
            .unwrap();
        assert!(v.is_empty());
    }
}
