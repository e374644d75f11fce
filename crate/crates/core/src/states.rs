//! Two-qubit states: validated density operators, pure states, the named
//! states used throughout, and the decomposition of any state into local
//! filters applied to `|phi+>`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{embed, marginal, Complex, Mat2, Mat4, Qubit, ONE, ZERO};

/// Tolerance on the norm of a [`PureState`].
pub const PURE_NORM_TOL: f64 = 1e-12;

/// A non-negative two-qubit operator together with its trace.
///
/// The operator need not be normalized: the weight plays the role of the
/// success probability (or normalization factor) accumulated by filtering.
#[derive(Debug, Clone, Copy)]
pub struct DensityOperator {
    op: Mat4,
    weight: f64,
}

impl DensityOperator {
    /// Validates Hermiticity, positivity and a positive trace.
    pub fn new(op: Mat4) -> Result<Self> {
        let op = op.checked_hermitian()?;
        let eig = op.eigh()?;
        crate::qmat::check_psd(&eig.values)?;
        let weight = op.trace().re;
        if !(weight > 0.0) {
            return Err(Error::InvalidState(format!("non-positive trace {weight}")));
        }
        Ok(Self { op, weight })
    }

    /// Skips validation. Used for operators produced by congruences of a
    /// state that was already validated.
    pub(crate) fn from_op_unchecked(op: Mat4) -> Self {
        let op = op.hermitian_part();
        let weight = op.trace().re;
        Self { op, weight }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            op: psi.projector(),
            weight: 1.0,
        }
    }

    /// Convex (or weighted) combination of pure states.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self> {
        let mut op = Mat4::zeros();
        for (w, psi) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            op = op + psi.projector().scale(*w);
        }
        Self::new(op)
    }

    pub fn op(&self) -> &Mat4 {
        &self.op
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Same state with unit trace.
    pub fn normalized(&self) -> Self {
        Self {
            op: self.op.scale(1.0 / self.weight),
            weight: 1.0,
        }
    }

    /// Reduced operator of qubit `keep` (unnormalized, trace = weight).
    pub fn marginal(&self, keep: Qubit) -> Mat2 {
        marginal(&self.op, keep)
    }

    /// `a * op * a^dagger`, with the weight recomputed.
    pub fn transformed(&self, a: &Mat4) -> Self {
        Self::from_op_unchecked(self.op.congruence(a))
    }

    /// `(u ⊗ v) rho (u ⊗ v)^dagger`.
    pub fn local(&self, u: &Mat2, v: &Mat2) -> Self {
        self.transformed(&crate::qmat::kron(u, v))
    }

    /// Applies a single-qubit operator on `side`.
    pub fn one_sided(&self, m: &Mat2, side: Qubit) -> Self {
        self.transformed(&embed(m, side))
    }
}

/// A normalized two-qubit ket in the `|00>, |01>, |10>, |11>` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amplitudes: [Complex; 4],
}

impl PureState {
    pub fn new(amplitudes: [Complex; 4]) -> Result<Self> {
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!("pure state norm {norm}")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales an arbitrary non-zero vector to unit norm.
    pub fn normalize(amplitudes: [Complex; 4]) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("zero or non-finite ket".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.map(|z| z / n),
        })
    }

    /// `a|00> + b|11>`, normalized.
    pub fn schmidt(a: Complex, b: Complex) -> Result<Self> {
        Self::normalize([a, ZERO, ZERO, b])
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.amplitudes
    }

    pub fn projector(&self) -> Mat4 {
        Mat4::outer(&self.amplitudes, &self.amplitudes)
    }

    /// The 2x2 matrix `A` with `|psi> = sum_ij A_ij |i>|j>`.
    pub fn coefficient_matrix(&self) -> Mat2 {
        let a = &self.amplitudes;
        Mat2::new(a[0], a[1], a[2], a[3])
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex>()
            .norm_sqr()
    }

    /// Applies a two-qubit operator and renormalizes.
    pub fn apply(&self, m: &Mat4) -> Result<Self> {
        Self::normalize(m.mul_vec(&self.amplitudes))
    }
}

fn norm(v: &[Complex; 4]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell_phi_plus() -> PureState {
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    PureState {
        amplitudes: [h, ZERO, ZERO, h],
    }
}

pub fn product_00() -> PureState {
    PureState {
        amplitudes: [ONE, ZERO, ZERO, ZERO],
    }
}

/// Real reflection `[[cos t, sin t], [sin t, -cos t]]`.
pub fn rotation_r(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::real([[c, s], [s, -c]])
}

/// Diagonal filter `a|0><0| + b|1><1|`.
pub fn filter_m(a: Complex, b: Complex) -> Mat2 {
    Mat2::new(a, ZERO, ZERO, b)
}

/// The imperfect entangled state used as the worked example:
/// `0.1 |p1><p1| + 0.12 |p2><p2| + 0.78 |phi+><phi+|` with
/// `|p1> = R(pi/5) ⊗ I |00>` and `|p2> = R(-3pi/10) ⊗ I |11>`.
pub fn paper_state_rho_tilde() -> DensityOperator {
    let r1 = embed(&rotation_r(PI / 5.0), Qubit::One);
    let r2 = embed(&rotation_r(-3.0 * PI / 10.0), Qubit::One);
    let ket11 = PureState {
        amplitudes: [ZERO, ZERO, ZERO, ONE],
    };
    let p1 = PureState {
        amplitudes: r1.mul_vec(product_00().amplitudes()),
    };
    let p2 = PureState {
        amplitudes: r2.mul_vec(ket11.amplitudes()),
    };
    DensityOperator::mixture(&[(0.1, p1), (0.12, p2), (0.78, bell_phi_plus())])
        .expect("worked example is a valid state")
}

/// Looks up one of the built-in states by name.
pub fn named_state(name: &str) -> Option<DensityOperator> {
    match name {
        "phi-plus" | "bell" => Some(DensityOperator::from_pure(&bell_phi_plus())),
        "paper-rho-tilde" => Some(paper_state_rho_tilde()),
        "product-00" => Some(DensityOperator::from_pure(&product_00())),
        _ => None,
    }
}

pub const NAMED_STATES: [&str; 4] = ["phi-plus", "bell", "paper-rho-tilde", "product-00"];

/// Returns `M` with `|psi> = (I ⊗ M) |phi+>`.
///
/// With `A` the coefficient matrix of `psi`, `M = sqrt(2) A^T`. `M` is a
/// general 2x2 operator; its positive polar factor (see
/// [`crate::qmat::polar`]) differs from it only by a unitary on qubit 2.
pub fn one_sided_factor(psi: &PureState) -> Mat2 {
    psi.coefficient_matrix().transpose().scale(SQRT_2)
}

/// One pure-state branch of the ensemble that generates a state from `|phi+>`.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub weight: f64,
    pub factor: Mat2,
}

/// Writes `rho` as `sum_i w_i (I ⊗ M_i)|phi+><phi+|(I ⊗ M_i)^dagger` using
/// the eigen-ensemble of `rho`.
pub fn generate_from_phi_plus(rho: &DensityOperator) -> Result<Vec<Branch>> {
    let eig = rho.op().eigh()?;
    let mut branches = Vec::with_capacity(4);
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let psi = PureState::normalize(eig.vectors.column(j))?;
        branches.push(Branch {
            weight: lambda,
            factor: one_sided_factor(&psi),
        });
    }
    Ok(branches)
}

/// Rebuilds the operator described by a branch list.
pub fn reconstruct_from_branches(branches: &[Branch]) -> Mat4 {
    let phi = bell_phi_plus().projector();
    branches.iter().fold(Mat4::zeros(), |acc, b| {
        acc + phi
            .congruence(&embed(&b.factor, Qubit::Two))
            .scale(b.weight)
    })
}

/// On-disk JSON form of a two-qubit state.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize: bool,
}

impl StateFile {
    pub fn from_state(rho: &DensityOperator) -> Self {
        let (re, im) = rho.op().to_parts();
        Self {
            re,
            im,
            normalize: false,
        }
    }

    /// Validates the operator and renormalizes it when `normalize` is set.
    pub fn into_state(self) -> Result<DensityOperator> {
        let rho = DensityOperator::new(Mat4::from_parts(self.re, self.im))?;
        Ok(if self.normalize {
            rho.normalized()
        } else {
            rho
        })
    }
}

pub fn state_from_json(text: &str) -> Result<DensityOperator> {
    let file: StateFile = serde_json::from_str(text)?;
    file.into_state()
}

pub fn state_to_json(rho: &DensityOperator) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("plain arrays serialize")
}
