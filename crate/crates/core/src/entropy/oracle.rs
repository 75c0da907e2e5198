//! Independent evaluation of the post-measurement spectrum by explicit
//! construction of the 4x4 density matrix and numerical diagonalisation.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use super::Spectrum4;
use crate::error::{DomainError, Error, Result};
use crate::state::XxzState;

const HERMITIAN_TOL: f64 = 1e-12;
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Complex 4x4 matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix4(pub [[Complex64; 4]; 4]);

impl HermitianMatrix4 {
    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Largest entry of `|M - M^†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }
}

/// Post-measurement state for a measurement axis at polar angle `theta` and
/// azimuth `phi`, written in the computational basis.
pub fn oracle_post_matrix(x: &XxzState, theta: f64, phi: f64) -> HermitianMatrix4 {
    let (s1, c1, c3) = (x.s1(), x.c1(), x.c3());
    let (st, ct) = theta.sin_cos();
    let (sin2, cos2) = (st * st, ct * ct);
    let sin_2t = (2.0 * theta).sin();
    let e1 = Complex64::from_polar(1.0, phi);
    let e2 = Complex64::from_polar(1.0, 2.0 * phi);
    let re = |v: f64| Complex64::new(v, 0.0);

    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    m[0][0] = re(1.0 + s1 + (s1 + c3) * cos2);
    m[1][1] = re(1.0 - c3 + (s1 + c3) * sin2);
    m[2][2] = re(1.0 - c3 - (s1 - c3) * sin2);
    m[3][3] = re(1.0 - s1 - (s1 - c3) * cos2);
    m[1][0] = e1 * (0.5 * (s1 + c3) * sin_2t);
    m[2][0] = e1 * (0.5 * c1 * sin_2t);
    m[2][1] = re(c1 * sin2);
    m[3][0] = e2 * (c1 * sin2);
    m[3][1] = e1 * (-0.5 * c1 * sin_2t);
    m[3][2] = e1 * (0.5 * (s1 - c3) * sin_2t);
    for i in 0..4 {
        for j in 0..i {
            m[j][i] = m[i][j].conj();
        }
    }
    for row in &mut m {
        for v in row.iter_mut() {
            *v *= 0.25;
        }
    }
    HermitianMatrix4(m)
}

/// Eigenvalues of a Hermitian unit-trace matrix via cyclic Jacobi rotations on
/// its real 8x8 embedding `[[A, -B], [B, A]]`, whose spectrum is that of
/// `A + iB` with every eigenvalue doubled.
pub fn oracle_spectrum(m: &HermitianMatrix4) -> Result<Spectrum4> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(
            DomainError::Argument(format!("matrix is not Hermitian (defect {defect:e})")).into(),
        );
    }
    let mut a = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = m.0[i][j];
            a[i][j] = z.re;
            a[i + 4][j + 4] = z.re;
            a[i][j + 4] = -z.im;
            a[i + 4][j] = z.im;
        }
    }
    let mut eig = jacobi_eigenvalues(a)?;
    eig.sort_by(|x, y| y.total_cmp(x));
    Spectrum4::new([eig[0], eig[2], eig[4], eig[6]])
}

fn off_norm(a: &[[f64; 8]; 8]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigenvalues(mut a: [[f64; 8]; 8]) -> Result<[f64; 8]> {
    const N: usize = 8;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) < JACOBI_OFF_TOL {
            return Ok(std::array::from_fn(|i| a[i][i]));
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    if off_norm(&a) < JACOBI_OFF_TOL {
        return Ok(std::array::from_fn(|i| a[i][i]));
    }
    Err(Error::Convergence {
        what: "Jacobi eigenvalue sweep",
        iterations: JACOBI_MAX_SWEEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{post_spectrum_cs, MeasurementAngle};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_is_hermitian_with_unit_trace() {
        let x = XxzState::new(0.2, 0.3, 0.1).unwrap();
        let m = oracle_post_matrix(&x, 0.7, 1.3);
        assert!(m.hermiticity_defect() < 1e-15);
        assert!((m.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, v) in [0.1, 0.4, 0.2, 0.3].into_iter().enumerate() {
            m[i][i] = Complex64::new(v, 0.0);
        }
        let s = oracle_spectrum(&HermitianMatrix4(m)).unwrap();
        let want = [0.4, 0.3, 0.2, 0.1];
        for (g, w) in s.as_array().iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            m[i][i] = Complex64::new(0.25, 0.0);
        }
        m[0][1] = Complex64::new(0.1, 0.0);
        assert!(oracle_spectrum(&HermitianMatrix4(m)).is_err());
    }

    #[test]
    fn agrees_with_closed_form_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let x = sample::state(&mut rng);
            let theta = rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::PI);
            let phi = rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU);
            let got = oracle_spectrum(&oracle_post_matrix(&x, theta, phi))
                .unwrap()
                .sorted_desc();
            let (s, c) = theta.sin_cos();
            let mut want = post_spectrum_cs(&x, c, s).map(|v| v.max(0.0));
            want.sort_by(|a, b| b.total_cmp(a));
            for (g, w) in got.iter().zip(want) {
                assert!(
                    (g - w).abs() < 1e-10,
                    "{x:?} theta={theta}: {got:?} vs {want:?}"
                );
            }
        }
    }

    #[test]
    fn azimuth_does_not_change_spectrum() {
        let x = XxzState::new(-0.15, 0.4, -0.2).unwrap();
        let a = MeasurementAngle::new(0.9).unwrap();
        let base = crate::entropy::post_spectrum(&x, a).sorted_desc();
        for phi in [0.0, 0.5, 2.0, 4.0] {
            let got = oracle_spectrum(&oracle_post_matrix(&x, 0.9, phi))
                .unwrap()
                .sorted_desc();
            for (g, w) in got.iter().zip(base) {
                assert!((g - w).abs() < 1e-12);
            }
        }
    }
}
