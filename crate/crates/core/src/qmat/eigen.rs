//! Hermitian eigensolvers: closed form at 2x2, cyclic Jacobi at 4x4.

use super::{CMatrix, Complex, Mat2, Mat4, TAU_PSD, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `m = V diag(values) V^dagger` of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; column `j` of `vectors` belongs to
/// `values[j]` and has its largest-magnitude component real and positive.
#[derive(Debug, Clone, Copy)]
pub struct Eigh<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMatrix<N>,
}

impl<const N: usize> Eigh<N> {
    pub fn reconstruct(&self) -> CMatrix<N> {
        self.vectors * CMatrix::from_diag(self.values) * self.vectors.dagger()
    }

    /// Applies `f` to the spectrum: `V diag(f(values)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        self.vectors * CMatrix::from_diag(self.values.map(f)) * self.vectors.dagger()
    }
}

impl Mat2 {
    /// Closed-form Hermitian eigendecomposition.
    pub fn eigh(&self) -> Result<Eigh<2>> {
        let m = self.checked_hermitian()?;
        Ok(eigh2_unchecked(&m))
    }
}

impl Mat4 {
    /// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
    pub fn eigh(&self) -> Result<Eigh<4>> {
        let mut a = self.checked_hermitian()?;
        let mut v = Mat4::identity();
        jacobi(&mut a, Some(&mut v));
        let mut values = [0.0; 4];
        for (i, val) in values.iter_mut().enumerate() {
            *val = a.0[i][i].re;
        }
        Ok(sorted(values, &v))
    }
}

pub(crate) fn eigh2_unchecked(m: &Mat2) -> Eigh<2> {
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    let b = m.0[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let rad = half_gap.hypot(b.norm());
    let values = [mean + rad, mean - rad];

    let v1 = if b == ZERO {
        if a >= d {
            [Complex::new(1.0, 0.0), ZERO]
        } else {
            [ZERO, Complex::new(1.0, 0.0)]
        }
    } else if half_gap >= 0.0 {
        [Complex::new(half_gap + rad, 0.0), b.conj()]
    } else {
        [b, Complex::new(rad - half_gap, 0.0)]
    };
    let v1 = fix_phase(normalize(v1));
    let v2 = fix_phase([-v1[1].conj(), v1[0].conj()]);
    let vectors = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    Eigh { values, vectors }
}

/// Eigenvalues (descending) of a Hermitian 4x4 matrix, no vectors, no checks.
///
/// The input is symmetrized first. This is the hot path of the concurrence
/// functional.
pub fn eigvals_hermitian4(m: &Mat4) -> [f64; 4] {
    let mut a = m.hermitian_part();
    jacobi(&mut a, None);
    let mut values = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re, a.0[3][3].re];
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Hermitian square root of a positive semidefinite operator.
///
/// Eigenvalues in `[-TAU_PSD * scale, 0)` are clamped to zero, where `scale`
/// is `max(1, largest |eigenvalue|)`.
pub fn sqrt_psd(m: &Mat4) -> Result<Mat4> {
    let eig = m.eigh()?;
    check_psd(&eig.values)?;
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

pub(crate) fn check_psd<const N: usize>(values: &[f64; N]) -> Result<()> {
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    match values.iter().copied().find(|&v| v < -TAU_PSD * scale) {
        Some(eigenvalue) => Err(Error::NotPositive { eigenvalue }),
        None => Ok(()),
    }
}

fn jacobi<const N: usize>(a: &mut CMatrix<N>, mut v: Option<&mut CMatrix<N>>) {
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        let mut diag = 0.0;
        for p in 0..N {
            diag += a.0[p][p].re * a.0[p][p].re;
            for q in (p + 1)..N {
                off += a.0[p][q].norm_sqr();
            }
        }
        if off == 0.0 || off <= 1e-34 * diag {
            return;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let r = a.0[p][q].norm();
                if r == 0.0 {
                    continue;
                }
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                if r <= 1e-18 * (app.abs() + aqq.abs()) {
                    a.0[p][q] = ZERO;
                    a.0[q][p] = ZERO;
                    continue;
                }
                let phase = a.0[p][q] / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // G = diag(1, conj(phase)) on (p, q) followed by a real rotation.
                let g_pp = Complex::new(c, 0.0);
                let g_pq = Complex::new(s, 0.0);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;

                rotate_columns(a, p, q, g_pp, g_pq, g_qp, g_qq);
                for k in 0..N {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a.0[q][k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;

                if let Some(v) = v.as_deref_mut() {
                    rotate_columns(v, p, q, g_pp, g_pq, g_qp, g_qq);
                }
            }
        }
    }
}

#[inline]
fn rotate_columns<const N: usize>(
    m: &mut CMatrix<N>,
    p: usize,
    q: usize,
    g_pp: Complex,
    g_pq: Complex,
    g_qp: Complex,
    g_qq: Complex,
) {
    for row in m.0.iter_mut() {
        let xp = row[p];
        let xq = row[q];
        row[p] = xp * g_pp + xq * g_qp;
        row[q] = xp * g_pq + xq * g_qq;
    }
}

fn sorted<const N: usize>(values: [f64; N], v: &CMatrix<N>) -> Eigh<N> {
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut out = Eigh {
        values: [0.0; N],
        vectors: CMatrix::zeros(),
    };
    for (dst, &src) in order.iter().enumerate() {
        out.values[dst] = values[src];
        let col = fix_phase(v.column(src));
        for (i, z) in col.iter().enumerate() {
            out.vectors.0[i][dst] = *z;
        }
    }
    out
}

fn normalize<const N: usize>(v: [Complex; N]) -> [Complex; N] {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / n)
}

/// Rotates the global phase so the largest-magnitude entry is real positive.
fn fix_phase<const N: usize>(v: [Complex; N]) -> [Complex; N] {
    let mut best = 0;
    for i in 1..N {
        // Strict comparison keeps the lowest index on ties.
        if v[i].norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let mag = v[best].norm();
    if mag == 0.0 {
        return v;
    }
    let phase = v[best].conj() / mag;
    let mut out = v.map(|z| z * phase);
    out[best] = Complex::new(out[best].norm(), 0.0);
    out
}
