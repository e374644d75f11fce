//! Simultaneous filtering of both qubits.
//!
//! With unit-determinant filters `A`, `B` the normalized outcome has
//! concurrence `C(rho) / tr[(A^dagger A ⊗ B^dagger B) rho]`, so maximizing
//! concurrence is minimizing `f(H1, H2) = log tr[(exp H1 ⊗ exp H2) rho]` over
//! traceless Hermitian `H1`, `H2`. `f` is convex along `t -> (t H1, t H2)`.
//! In Pauli coordinates `H = h . sigma` its gradient at zero is the pair of
//! Bloch vectors `(r1, r2)` and its Hessian is
//!
//! ```text
//! [ I - r1 r1^T    T - r1 r2^T ]
//! [ T^T - r2 r1^T  I - r2 r2^T ]
//! ```
//!
//! with `T_ab = tr[(sigma_a ⊗ sigma_b) rho]`. A Newton direction followed by
//! an exact line search converges quickly even when the optimum is only
//! reached in the limit of singular filters, where alternating balance steps
//! crawl.

use crate::error::Result;
use crate::qmat::{kron, svd2, Complex, Mat2, Mat4};
use crate::states::DensityOperator;

/// Largest `|t| * |h|` a single line search may reach.
const LINE_SEARCH_SPAN: f64 = 4.0;
const HESSIAN_SHIFT: f64 = 1e-14;
const BISECTIONS: usize = 200;

/// Eigenvalues below this fraction of the trace count as zero when looking
/// for a product vector in the kernel.
pub const SNAP_EIG: f64 = 1e-13;
/// Smaller Schmidt coefficient below which a kernel vector counts as product.
pub const TAU_PRODUCT: f64 = 1e-8;

fn paulis() -> [Mat2; 3] {
    [Mat2::pauli_x(), Mat2::pauli_y(), Mat2::pauli_z()]
}

fn expectation(rho: &Mat4, ob: &Mat4) -> f64 {
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += ob[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

/// Bloch vectors of both marginals and the correlation matrix of a
/// unit-trace state.
pub(crate) struct PauliCoordinates {
    pub r1: [f64; 3],
    pub r2: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl PauliCoordinates {
    pub fn of(rho: &Mat4) -> Self {
        let p = paulis();
        let id = Mat2::identity();
        let mut out = Self {
            r1: [0.0; 3],
            r2: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for a in 0..3 {
            out.r1[a] = expectation(rho, &kron(&p[a], &id));
            out.r2[a] = expectation(rho, &kron(&id, &p[a]));
            for b in 0..3 {
                out.t[a][b] = expectation(rho, &kron(&p[a], &p[b]));
            }
        }
        out
    }

    fn gradient(&self) -> [f64; 6] {
        let mut g = [0.0; 6];
        g[..3].copy_from_slice(&self.r1);
        g[3..].copy_from_slice(&self.r2);
        g
    }

    fn hessian(&self) -> [[f64; 6]; 6] {
        let mut h = [[0.0; 6]; 6];
        for a in 0..3 {
            for b in 0..3 {
                let delta = if a == b { 1.0 } else { 0.0 };
                h[a][b] = delta - self.r1[a] * self.r1[b];
                h[a + 3][b + 3] = delta - self.r2[a] * self.r2[b];
                h[a][b + 3] = self.t[a][b] - self.r1[a] * self.r2[b];
                h[b + 3][a] = h[a][b + 3];
            }
        }
        h
    }
}

/// Gaussian elimination with partial pivoting. `None` for a singular system.
fn solve6(mut a: [[f64; 6]; 6], mut b: [f64; 6]) -> Option<[f64; 6]> {
    for col in 0..6 {
        let pivot = (col..6).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..6 {
            let f = a[row][col] / a[col][col];
            for k in col..6 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 6];
    for row in (0..6).rev() {
        let tail: f64 = (row + 1..6).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `exp(t/2 * d . sigma)`, a positive filter with unit determinant.
fn exp_half(d: [f64; 3], t: f64) -> Mat2 {
    let n = norm3(d);
    if n == 0.0 || t == 0.0 {
        return Mat2::identity();
    }
    let x = 0.5 * t * n;
    let p = paulis();
    (0..3).fold(Mat2::identity().scale(x.cosh()), |m, k| {
        m + p[k].scale(x.sinh() * d[k] / n)
    })
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| a[k] * b[k]).sum()
}

/// `F(t) = tr[(exp(t D1) ⊗ exp(t D2)) rho]` along a fixed direction.
struct Profile {
    n1: f64,
    n2: f64,
    p1: f64,
    p2: f64,
    pt: f64,
}

impl Profile {
    fn new(coords: &PauliCoordinates, d1: [f64; 3], d2: [f64; 3]) -> Self {
        let (n1, n2) = (norm3(d1), norm3(d2));
        let unit = |d: [f64; 3], n: f64| if n > 0.0 { d.map(|x| x / n) } else { [0.0; 3] };
        let (u1, u2) = (unit(d1, n1), unit(d2, n2));
        let tu2 = [0, 1, 2].map(|a| dot3(coords.t[a], u2));
        Self {
            n1,
            n2,
            p1: dot3(u1, coords.r1),
            p2: dot3(u2, coords.r2),
            pt: dot3(u1, tu2),
        }
    }

    fn value(&self, t: f64) -> f64 {
        let (c1, s1) = ((t * self.n1).cosh(), (t * self.n1).sinh());
        let (c2, s2) = ((t * self.n2).cosh(), (t * self.n2).sinh());
        c1 * c2 + c1 * s2 * self.p2 + s1 * c2 * self.p1 + s1 * s2 * self.pt
    }

    fn slope(&self, t: f64) -> f64 {
        let (c1, s1) = ((t * self.n1).cosh(), (t * self.n1).sinh());
        let (c2, s2) = ((t * self.n2).cosh(), (t * self.n2).sinh());
        self.n1 * (s1 * c2 + s1 * s2 * self.p2 + c1 * c2 * self.p1 + c1 * s2 * self.pt)
            + self.n2 * (c1 * s2 + c1 * c2 * self.p2 + s1 * s2 * self.p1 + s1 * c2 * self.pt)
    }

    /// Minimizer of the convex profile on `[0, span / max(n1, n2)]`.
    fn minimize(&self) -> f64 {
        let scale = self.n1.max(self.n2);
        if scale == 0.0 || self.slope(0.0) >= 0.0 {
            return 0.0;
        }
        let mut hi = LINE_SEARCH_SPAN / scale;
        if self.slope(hi) <= 0.0 {
            return hi;
        }
        let mut lo = 0.0;
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Result of one simultaneous step on a normalized state.
#[derive(Debug, Clone, Copy)]
pub struct JointStep {
    pub state: DensityOperator,
    /// Positive unit-determinant filters for qubit 1 and qubit 2.
    pub filters: [Mat2; 2],
    /// Predicted concurrence ratio after / before, `1 / F`.
    pub gain: f64,
}

/// Newton step with exact line search on both qubits at once.
pub fn joint_step(rho: &DensityOperator) -> Result<JointStep> {
    let rho = rho.normalized();
    let coords = PauliCoordinates::of(rho.op());
    let g = coords.gradient();
    let mut h = coords.hessian();
    for (i, row) in h.iter_mut().enumerate() {
        row[i] += HESSIAN_SHIFT;
    }
    let neg_g = g.map(|x| -x);
    let d = match solve6(h, neg_g) {
        Some(d) if (0..6).map(|k| d[k] * g[k]).sum::<f64>() < 0.0 => d,
        _ => neg_g,
    };
    let d1 = [d[0], d[1], d[2]];
    let d2 = [d[3], d[4], d[5]];
    let profile = Profile::new(&coords, d1, d2);
    let t = profile.minimize();
    let filters = [exp_half(d1, t), exp_half(d2, t)];
    let state = rho.transformed(&kron(&filters[0], &filters[1]));
    Ok(JointStep {
        state: state.normalized(),
        filters,
        gain: 1.0 / profile.value(t),
    })
}

/// Lower-triangular `L` with `L^dagger L = A^dagger A`, so `A = W L` for a
/// unitary `W`. `A` must be invertible.
pub fn lower_factor(a: &Mat2) -> Mat2 {
    let col1 = a[(0, 1)].norm_sqr() + a[(1, 1)].norm_sqr();
    let l11 = col1.sqrt();
    let l10 = (a[(0, 1)].conj() * a[(0, 0)] + a[(1, 1)].conj() * a[(1, 0)]) / l11;
    let l00 = a.det().norm() / l11;
    Mat2::new(
        Complex::new(l00, 0.0),
        Complex::new(0.0, 0.0),
        l10,
        Complex::new(l11, 0.0),
    )
}

/// Local frame in which a product vector spanning the kernel of `rho` is
/// `|00>`, together with `rho` in that frame with the `|00>` row and column
/// set to exactly zero.
///
/// Such states reach their largest concurrence only as the filters become
/// singular. Keeping the kernel pinned at `|00>` with lower-triangular
/// filters stops roundoff in the kernel from being amplified by them.
#[derive(Debug, Clone, Copy)]
pub struct KernelFrame {
    pub unitaries: [Mat2; 2],
    pub state: DensityOperator,
}

/// `None` unless the kernel is one-dimensional and spanned by a product
/// vector.
pub fn kernel_frame(rho: &DensityOperator) -> Result<Option<KernelFrame>> {
    let rho = rho.normalized();
    let eig = rho.op().eigh()?;
    let floor = SNAP_EIG * rho.weight();
    if eig.values[3] > floor || eig.values[2] <= floor {
        return Ok(None);
    }
    let k = eig.vectors.column(3);
    let svd = svd2(&Mat2::new(k[0], k[1], k[2], k[3]));
    if svd.s[1] > TAU_PRODUCT * svd.s[0] {
        return Ok(None);
    }
    let alpha = [svd.u[(0, 0)], svd.u[(1, 0)]];
    let beta = [svd.v[(0, 0)], svd.v[(0, 1)]];
    let to_zero = |v: [Complex; 2]| Mat2::new(v[0].conj(), v[1].conj(), -v[1], v[0]);
    let unitaries = [to_zero(alpha), to_zero(beta)];

    let mut op = *rho.local(&unitaries[0], &unitaries[1]).op();
    for j in 0..4 {
        op[(0, j)] = Complex::new(0.0, 0.0);
        op[(j, 0)] = Complex::new(0.0, 0.0);
    }
    Ok(Some(KernelFrame {
        unitaries,
        state: DensityOperator::from_op_unchecked(op).normalized(),
    }))
}
