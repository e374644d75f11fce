//! Reference concurrence computed from the non-Hermitian product `N flip(N)`.
//!
//! Shares no code with [`crate::concurrence`]: the spin flip is built from an
//! explicit `sigma_y ⊗ sigma_y` product and the spectrum comes from a shifted
//! QR iteration on the general complex matrix.

use crate::error::{Error, Result};
use crate::qmat::{kron, CMatrix, Complex, Mat2, Mat4, TAU_PSD};

const ORACLE_XI_FLOOR: f64 = 1e-14;
const MAX_QR_ITER: usize = 1000;

/// Concurrence functional via the eigenvalues of `N flip(N)`.
pub fn oracle_concurrence(n: &Mat4) -> Result<f64> {
    let n = n.checked_hermitian()?;
    let spectrum = eigenvalues_general(&n);
    let scale = spectrum.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    if let Some(z) = spectrum.iter().find(|z| z.re < -TAU_PSD * scale) {
        return Err(Error::NotPositive { eigenvalue: z.re });
    }

    let yy = kron(&Mat2::pauli_y(), &Mat2::pauli_y());
    let flipped = yy * n.conj() * yy;
    let product = n * flipped;
    let trace = n.trace().re;
    let floor = ORACLE_XI_FLOOR * trace * trace;
    let mut xi: Vec<f64> = eigenvalues_general(&product)
        .iter()
        .map(|z| if z.re < floor { 0.0 } else { z.re })
        .collect();
    xi.sort_by(|a, b| b.total_cmp(a));
    let c = xi[0].sqrt() - xi[1..].iter().map(|x| x.sqrt()).sum::<f64>();
    Ok(c.max(0.0))
}

/// Eigenvalues of a general complex matrix by Wilkinson-shifted QR with
/// Givens rotations and deflation from the bottom.
pub fn eigenvalues_general<const N: usize>(m: &CMatrix<N>) -> Vec<Complex> {
    let mut a = *m;
    let norm = m.norm_fro();
    let mut eigs = Vec::with_capacity(N);
    let mut n = N;
    let mut iter = 0;
    while n > 0 {
        if n == 1 {
            eigs.push(a.0[0][0]);
            break;
        }
        let off: f64 = (0..n - 1).map(|j| a.0[n - 1][j].norm()).sum();
        let local = a.0[n - 1][n - 1].norm() + a.0[n - 2][n - 2].norm();
        if off <= f64::EPSILON * local || off <= f64::EPSILON * norm || iter >= MAX_QR_ITER {
            eigs.push(a.0[n - 1][n - 1]);
            n -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        let mut shift = wilkinson_shift(
            a.0[n - 2][n - 2],
            a.0[n - 2][n - 1],
            a.0[n - 1][n - 2],
            a.0[n - 1][n - 1],
        );
        if iter % 11 == 0 {
            shift += Complex::new(0.75 * off, 0.0);
        }
        qr_step(&mut a, n, shift);
    }
    eigs
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One step `A <- R Q + mu` on the leading `n x n` block, `A - mu = Q R`.
fn qr_step<const N: usize>(a: &mut CMatrix<N>, n: usize, shift: Complex) {
    for i in 0..n {
        a.0[i][i] -= shift;
    }
    let mut rotations = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n - 1 {
        for i in j + 1..n {
            let x = a.0[j][j];
            let y = a.0[i][j];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if r == 0.0 || y.norm() == 0.0 {
                continue;
            }
            let g = [[x.conj() / r, y.conj() / r], [-y / r, x / r]];
            for k in 0..n {
                let (p, q) = (a.0[j][k], a.0[i][k]);
                a.0[j][k] = g[0][0] * p + g[0][1] * q;
                a.0[i][k] = g[1][0] * p + g[1][1] * q;
            }
            a.0[i][j] = Complex::new(0.0, 0.0);
            rotations.push((j, i, g));
        }
    }
    for (j, i, g) in rotations {
        for k in 0..n {
            let (p, q) = (a.0[k][j], a.0[k][i]);
            a.0[k][j] = p * g[0][0].conj() + q * g[0][1].conj();
            a.0[k][i] = p * g[1][0].conj() + q * g[1][1].conj();
        }
    }
    for i in 0..n {
        a.0[i][i] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::bell_phi_plus;

    fn sorted_re(mut v: Vec<Complex>) -> Vec<f64> {
        v.sort_by(|a, b| b.re.total_cmp(&a.re));
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = Mat4::real([
            [4.0, 1.0, 2.0, 3.0],
            [0.0, 3.0, 5.0, 1.0],
            [0.0, 0.0, 2.0, 7.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        let ev = sorted_re(eigenvalues_general(&m));
        for (x, y) in ev.iter().zip([4.0, 3.0, 2.0, 1.0]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn general_eigenvalues_non_normal() {
        // Shear similarity with a known inverse applied to an upper
        // triangular (non-normal) matrix.
        let mut shear = Mat4::identity();
        shear[(0, 2)] = Complex::new(2.0, 1.0);
        let mut shear_inv = Mat4::identity();
        shear_inv[(0, 2)] = Complex::new(-2.0, -1.0);
        let upper = Mat4::real([
            [3.0, 10.0, -4.0, 2.0],
            [0.0, 2.0, 6.0, -1.0],
            [0.0, 0.0, 1.0, 8.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        let rot = Mat4::real([
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        let similar = shear * rot * upper * rot.transpose() * shear_inv;
        let ev = eigenvalues_general(&similar);
        assert!(ev.iter().all(|z| z.im.abs() < 1e-12));
        for (x, y) in sorted_re(ev).iter().zip([3.0, 2.0, 1.0, 0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_state() {
        let c = oracle_concurrence(&bell_phi_plus().projector()).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_psd() {
        let bad = Mat4::from_diag([0.6, 0.6, 0.0, -0.2]);
        assert!(matches!(
            oracle_concurrence(&bad),
            Err(Error::NotPositive { .. })
        ));
    }
}
