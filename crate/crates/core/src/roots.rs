//! Bracketed root finding.

use crate::error::{Error, Result};

pub const BISECT_TOL: f64 = 1e-12;
pub const BISECT_MAX_ITER: usize = 80;

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// `f` may return `None` where it is undefined; such points have no sign and
/// are rejected at the ends, and treated as a failure in the interior.
pub fn bisect<F: FnMut(f64) -> Option<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    let (mut fa, fb) = match (fa, fb) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => (x, y),
        _ => {
            return Err(Error::Bracket {
                lo: a,
                hi: b,
                f_lo: fa,
                f_hi: fb,
            })
        }
    };
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            f_lo: Some(fa),
            f_hi: Some(fb),
        });
    }
    for _ in 0..max_iter {
        if b - a < tol {
            return Ok(0.5 * (a + b));
        }
        let m = 0.5 * (a + b);
        let fm = match f(m) {
            Some(v) if v.is_finite() => v,
            other => {
                return Err(Error::Bracket {
                    lo: a,
                    hi: b,
                    f_lo: Some(fa),
                    f_hi: other,
                })
            }
        };
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if b - a < tol {
        return Ok(0.5 * (a + b));
    }
    Err(Error::Convergence {
        what: "bisection",
        iterations: max_iter,
    })
}

/// Sub-intervals of a uniform `n`-point scan on which `f` changes sign.
pub fn sign_changes<F: FnMut(f64) -> Option<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let n = n.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let mut prev: Option<(f64, f64)> = None;
    let mut out = Vec::new();
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + h * i as f64 };
        let v = f(x).filter(|v| v.is_finite());
        if let (Some((px, pv)), Some(v)) = (prev, v) {
            if pv == 0.0 || pv.signum() != v.signum() {
                out.push((px, x));
            }
        }
        prev = v.map(|v| (x, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| Some(x * x - 2.0), 0.0, 2.0, 1e-12, 80).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisect_reversed_bracket() {
        let r = bisect(|x| Some(x - 0.25), 1.0, 0.0, 1e-12, 80).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bisect_requires_sign_change() {
        let e = bisect(|x| Some(x * x + 1.0), -1.0, 1.0, 1e-12, 80).unwrap_err();
        assert!(matches!(
            e,
            Error::Bracket {
                f_lo: Some(_),
                f_hi: Some(_),
                ..
            }
        ));
        let e = bisect(|_| None, -1.0, 1.0, 1e-12, 80).unwrap_err();
        assert!(matches!(e, Error::Bracket { f_lo: None, .. }));
    }

    #[test]
    fn bisect_iteration_cap() {
        let e = bisect(|x| Some(x - 0.3), 0.0, 1.0, 1e-12, 5).unwrap_err();
        assert!(matches!(e, Error::Convergence { .. }));
    }

    #[test]
    fn scan_finds_all_changes() {
        let v = sign_changes(|x| Some((x * 10.0).sin()), 0.1, 1.0, 50);
        assert_eq!(v.len(), 3);
        for (a, b) in v {
            assert!(a < b);
        }
    }
}
