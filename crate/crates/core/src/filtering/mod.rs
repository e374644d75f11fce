//! Local filtering that maximizes concurrence.
//!
//! A balance step picks the qubit whose reduced operator `K` is not yet
//! `I/2`, diagonalizes it (`U K U^dagger = diag(c1, c2)`), and applies
//! `Q = diag(sqrt(c2), sqrt(c1)) U` on that qubit. Afterwards the marginal is
//! proportional to the identity and the concurrence of the normalized state
//! has grown by the factor `1 / (2 sqrt(det K))`. Alternating the two sides
//! converges to a state with both marginals equal to `I/2`, which carries the
//! largest concurrence reachable by local filters. The accumulated products
//! of the step operators are the two single-qubit filters that produce it in
//! one shot.
//!
//! Some states only reach that maximum in the limit of singular filters and
//! the alternating scheme then slows to a crawl. [`maximize`] switches to
//! joint Newton steps on both qubits (see [`joint_step`]) once a sweep stops
//! shrinking the marginal deviation.

mod joint;

use serde::{Deserialize, Serialize};

use crate::concurrence::normalized_concurrence;
use crate::error::{Error, Result};
use crate::qmat::{kron, svd2, Mat2, Qubit};
use crate::states::DensityOperator;

pub use joint::{
    joint_step, kernel_frame, lower_factor, JointStep, KernelFrame, SNAP_EIG, TAU_PRODUCT,
};

/// Frobenius tolerance on `|| marginal - I/2 ||` for both qubits.
pub const TAU_CONV: f64 = 1e-10;
/// Default cap on recorded steps.
pub const MAX_ITER: usize = 200;
/// Smallest eigenvalue a normalized marginal may have and still be balanced.
pub const TAU_RANK: f64 = 1e-12;
/// A filter whose output keeps less than this fraction of the input weight
/// is reported as having removed the state.
pub const TAU_WEIGHT: f64 = 1e-15;
/// Concurrence at or below this value counts as separable.
pub const SEPARABLE_EPS: f64 = 1e-12;
/// Balance steps continue while each sweep at least shrinks the deviation
/// by this factor.
pub const ACCEL_RATIO: f64 = 0.1;

/// A single-qubit filter on a given side.
///
/// `physical_scale * m` has largest singular value exactly 1, i.e. it is the
/// least lossy physically realizable version of `m`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LocalOperator {
    m: Mat2,
    side: Qubit,
    physical_scale: f64,
}

impl LocalOperator {
    pub fn new(m: Mat2, side: Qubit) -> Self {
        let s_max = svd2(&m).s[0];
        let physical_scale = if s_max > 0.0 { 1.0 / s_max } else { 1.0 };
        Self {
            m,
            side,
            physical_scale,
        }
    }

    pub fn identity(side: Qubit) -> Self {
        Self::new(Mat2::identity(), side)
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn side(&self) -> Qubit {
        self.side
    }

    pub fn physical_scale(&self) -> f64 {
        self.physical_scale
    }

    /// The filter rescaled to unit operator norm.
    pub fn physical(&self) -> Mat2 {
        self.matrix().scale(self.physical_scale)
    }
}

fn accelerate_default() -> bool {
    true
}

/// Settings for [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub start_side: Qubit,
    pub max_iter: usize,
    pub tol: f64,
    /// Allow joint steps once alternating balance stalls.
    #[serde(default = "accelerate_default")]
    pub accelerate: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            start_side: Qubit::One,
            max_iter: MAX_ITER,
            tol: TAU_CONV,
            accelerate: true,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// One recorded step. `iteration` counts from 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iteration: usize,
    /// Filtered qubit, `None` for a joint step on both.
    pub side: Option<Qubit>,
    /// Concurrence of the normalized state after the step.
    pub concurrence: f64,
    /// Predicted ratio of concurrence after to before: `1 / (2 sqrt(det K))`
    /// for a balance step.
    pub gain: f64,
    /// `det K` of the balanced marginal, before the step.
    pub det_marginal_before: Option<f64>,
    /// `sqrt(dev1^2 + dev2^2)` after the step, see [`verify_final`].
    pub marginal_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct MaximizationTrace {
    pub initial_concurrence: f64,
    pub steps: Vec<StepRecord>,
    /// Normalized outcome state.
    pub final_state: DensityOperator,
    pub q1: LocalOperator,
    pub q2: LocalOperator,
    /// `tr[(Q ⊗ Q') rho_in (Q ⊗ Q')^dagger]` with both filters at unit norm.
    pub success_probability: f64,
    /// The input has a product vector as its only kernel direction, so the
    /// maximum is approached with increasingly singular filters.
    pub singular_limit: bool,
}

impl MaximizationTrace {
    pub fn final_concurrence(&self) -> f64 {
        self.steps
            .last()
            .map_or(self.initial_concurrence, |s| s.concurrence)
    }
}

/// Filter `Q = M U` with `Q k Q^dagger ∝ I/2` for a full-rank PSD `k`.
///
/// `k` is normalized internally. The diagonal part satisfies
/// `|a|^2 + |b|^2 = 1`.
pub fn balance_operator(k: &Mat2) -> Result<Mat2> {
    let k = k.checked_hermitian()?;
    let tr = k.trace().re;
    if !(tr > 0.0) {
        return Err(Error::NotBalanceable { eigenvalue: tr });
    }
    let eig = k.scale(1.0 / tr).eigh()?;
    let [c1, c2] = eig.values;
    if c2 <= TAU_RANK {
        return Err(Error::NotBalanceable { eigenvalue: c2 });
    }
    let u = eig.vectors.dagger();
    let m = Mat2::from_diag([c2.sqrt(), c1.sqrt()]);
    Ok(m * u)
}

/// Applies a filter at its physical scale. The output weight is the input
/// weight times the branch success probability.
pub fn apply_local(rho: &DensityOperator, op: &LocalOperator) -> Result<DensityOperator> {
    let out = rho.one_sided(&op.physical(), op.side());
    if !(out.weight() > TAU_WEIGHT * rho.weight()) {
        return Err(Error::FilteredToZero {
            weight: out.weight(),
        });
    }
    Ok(out)
}

/// Frobenius distances of both normalized marginals from `I/2`.
pub fn verify_final(rho: &DensityOperator) -> (f64, f64) {
    let half = Mat2::from_diag([0.5, 0.5]);
    let w = rho.weight();
    let dev = |side| rho.marginal(side).scale(1.0 / w).dist(&half);
    (dev(Qubit::One), dev(Qubit::Two))
}

/// Result of one balance step on a normalized state.
#[derive(Debug, Clone, Copy)]
pub struct BalanceStep {
    pub state: DensityOperator,
    pub filter: Mat2,
    pub det_marginal_before: f64,
}

/// Balances the marginal of `side` and renormalizes.
pub fn balance_step(rho: &DensityOperator, side: Qubit) -> Result<BalanceStep> {
    let rho = rho.normalized();
    let k = rho.marginal(side);
    let filter = balance_operator(&k)?;
    Ok(BalanceStep {
        state: rho.one_sided(&filter, side).normalized(),
        filter,
        det_marginal_before: k.det().re,
    })
}

struct Applied {
    state: DensityOperator,
    filters: [Option<Mat2>; 2],
    side: Option<Qubit>,
    gain: f64,
    det_marginal_before: Option<f64>,
}

/// Drives both marginals to `I/2`.
///
/// Balance steps alternate sides from `cfg.start_side`. With
/// `cfg.accelerate`, a sweep that shrinks the deviation by less than
/// [`ACCEL_RATIO`] hands over to joint steps for the rest of the run.
pub fn maximize(rho_in: &DensityOperator, cfg: &IterationConfig) -> Result<MaximizationTrace> {
    cfg.validate()?;
    let rho_in = rho_in.normalized();
    let initial_concurrence = normalized_concurrence(&rho_in)?;
    if initial_concurrence <= SEPARABLE_EPS {
        return Err(Error::SeparableInput {
            concurrence: initial_concurrence,
        });
    }
    for side in [Qubit::One, Qubit::Two] {
        let smallest = rho_in.marginal(side).eigh()?.values[1];
        if smallest <= TAU_RANK {
            return Err(Error::NotBalanceable {
                eigenvalue: smallest,
            });
        }
    }

    // In a kernel frame all filters are made lower triangular, which keeps
    // the |00> row of the state exactly zero.
    let frame = kernel_frame(&rho_in)?;
    let singular_limit = frame.is_some();
    let (base, frame_unitaries) = match frame {
        Some(f) => (f.state, f.unitaries),
        None => (rho_in, [Mat2::identity(), Mat2::identity()]),
    };
    let shape = |m: Mat2| if singular_limit { lower_factor(&m) } else { m };

    let mut rho = base;
    let mut acc = [Mat2::identity(), Mat2::identity()];
    let mut side = cfg.start_side;
    let mut joint = false;
    let mut steps: Vec<StepRecord> = Vec::new();
    loop {
        let (d1, d2) = verify_final(&rho);
        if d1 < cfg.tol && d2 < cfg.tol {
            break;
        }
        if steps.len() >= cfg.max_iter {
            return Err(Error::NotConverged {
                iterations: steps.len(),
                deviation: d1.max(d2),
            });
        }

        let applied = if joint {
            let step = joint_step(&rho)?;
            let filters = step.filters.map(shape);
            Applied {
                state: rho
                    .transformed(&kron(&filters[0], &filters[1]))
                    .normalized(),
                filters: filters.map(Some),
                side: None,
                gain: step.gain,
                det_marginal_before: None,
            }
        } else {
            let active = match side {
                Qubit::One => d1,
                Qubit::Two => d2,
            };
            if active < cfg.tol {
                side = side.other();
                continue;
            }
            let step = balance_step(&rho, side)?;
            let filter = shape(step.filter);
            let mut filters = [None, None];
            filters[usize::from(side.index() - 1)] = Some(filter);
            Applied {
                state: rho.one_sided(&filter, side).normalized(),
                filters,
                side: Some(side),
                gain: 0.5 / step.det_marginal_before.sqrt(),
                det_marginal_before: Some(step.det_marginal_before),
            }
        };

        rho = applied.state;
        for (slot, filter) in acc.iter_mut().zip(applied.filters) {
            if let Some(f) = filter {
                let product = f * *slot;
                *slot = product.scale(1.0 / product.norm_fro());
            }
        }
        let (e1, e2) = verify_final(&rho);
        steps.push(StepRecord {
            iteration: steps.len() + 1,
            side: applied.side,
            concurrence: normalized_concurrence(&rho)?,
            gain: applied.gain,
            det_marginal_before: applied.det_marginal_before,
            marginal_deviation: e1.hypot(e2),
        });
        side = side.other();

        let n = steps.len();
        if cfg.accelerate && !joint && n >= 3 {
            joint = steps[n - 1].marginal_deviation > ACCEL_RATIO * steps[n - 3].marginal_deviation;
        }
    }

    let q1 = LocalOperator::new(acc[0] * frame_unitaries[0], Qubit::One);
    let q2 = LocalOperator::new(acc[1] * frame_unitaries[1], Qubit::Two);
    let success_probability = base
        .transformed(&kron(
            &acc[0].scale(q1.physical_scale()),
            &acc[1].scale(q2.physical_scale()),
        ))
        .weight();
    Ok(MaximizationTrace {
        initial_concurrence,
        steps,
        final_state: rho,
        q1,
        q2,
        success_probability,
        singular_limit,
    })
}
