//! Concurrence of arbitrary non-negative two-qubit operators.
//!
//! For an operator `N` (not necessarily of unit trace) the functional is
//! `C(N) = max(0, s1 - s2 - s3 - s4)` where `s_i = sqrt(xi_i)` and `xi_i` are
//! the eigenvalues of `N * flip(N)` in descending order. They are obtained
//! from the Hermitian matrix `sqrt(N) flip(N) sqrt(N)`, which has the same
//! spectrum. `C` is homogeneous of degree one, so dividing by the trace gives
//! the usual concurrence of the normalized state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{eigvals_hermitian4, sqrt_psd, Complex, Mat4};
use crate::states::{filter_m, DensityOperator};

/// Relative floor (in units of `tr(N)^2`) below which an eigenvalue of
/// `N flip(N)` is treated as rounding noise and set to zero.
pub const XI_FLOOR: f64 = 1e-14;

/// Concurrence together with the spectrum it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceValue {
    pub c: f64,
    /// Eigenvalues of `N flip(N)`, descending, clamped at zero.
    pub xi: [f64; 4],
}

impl ConcurrenceValue {
    pub(crate) fn from_xi(mut xi: [f64; 4], trace: f64) -> Self {
        let floor = XI_FLOOR * trace * trace;
        for x in xi.iter_mut() {
            if *x < floor {
                *x = 0.0;
            }
        }
        xi.sort_by(|a, b| b.total_cmp(a));
        let s = xi.map(f64::sqrt);
        let c = (s[0] - s[1] - s[2] - s[3]).max(0.0);
        Self { c, xi }
    }
}

/// `(sigma_y ⊗ sigma_y) conj(n) (sigma_y ⊗ sigma_y)`.
pub fn spin_flip(n: &Mat4) -> Mat4 {
    // sigma_y ⊗ sigma_y is anti-diagonal with signs (-1, 1, 1, -1).
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out.0[i][j] = n.0[3 - i][3 - j].conj() * (SIGN[i] * SIGN[j]);
        }
    }
    out
}

/// Concurrence functional of a Hermitian PSD operator.
pub fn concurrence(n: &Mat4) -> Result<ConcurrenceValue> {
    let root = sqrt_psd(n)?;
    let flipped = spin_flip(n);
    let xi = eigvals_hermitian4(&(root * flipped * root));
    Ok(ConcurrenceValue::from_xi(xi, n.trace().re))
}

/// Concurrence of the normalized state `op / weight`.
pub fn normalized_concurrence(rho: &DensityOperator) -> Result<f64> {
    let weight = rho.weight();
    if !(weight > 0.0) {
        return Err(Error::InvalidState(format!("non-positive weight {weight}")));
    }
    Ok(concurrence(rho.op())?.c / weight)
}

/// Evaluates both sides of the single-filter product rule:
/// `C(2 (M(a,b) ⊗ I) rho (M(a,b) ⊗ I)^dagger)` and `2|ab| C(rho)`.
pub fn lemma1_check(a: Complex, b: Complex, rho_eps: &DensityOperator) -> Result<(f64, f64)> {
    let filtered = rho_eps
        .one_sided(&filter_m(a, b), crate::qmat::Qubit::One)
        .op()
        .scale(2.0);
    let lhs = concurrence(&filtered)?.c;
    let rhs = 2.0 * (a * b).norm() * concurrence(rho_eps.op())?.c;
    Ok((lhs, rhs))
}
