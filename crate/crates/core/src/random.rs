//! Random operators and states for property checks and search.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::concurrence::normalized_concurrence;
use crate::qmat::{embed, Complex, Mat2, Mat4, Qubit};
use crate::states::{bell_phi_plus, DensityOperator, PureState};

/// Lower end of the diagonal entries of a random filter.
pub const FILTER_DIAG_MIN: f64 = 0.01;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed 2x2 unitary.
pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    // Uniform point on S^3 gives Haar SU(2); a uniform phase completes U(2).
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex::new(q[0] / n, q[1] / n);
    let b = Complex::new(q[2] / n, q[3] / n);
    let phase = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Mat2::new(a, -b.conj(), b, a.conj()).scale_c(phase)
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut m = Mat2::zeros();
    for row in m.0.iter_mut() {
        for z in row.iter_mut() {
            *z = gaussian(rng);
        }
    }
    m
}

pub fn ginibre4<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let mut m = Mat4::zeros();
    for row in m.0.iter_mut() {
        for z in row.iter_mut() {
            *z = gaussian(rng);
        }
    }
    m
}

/// Hilbert-Schmidt random density matrix (full rank almost surely).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator {
    let g = ginibre4(rng);
    DensityOperator::from_op_unchecked(g * g.dagger()).normalized()
}

/// Random PSD operator with a random overall scale in `[0.1, 10)`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let g = ginibre4(rng);
    let m = g * g.dagger();
    let scale = rng.gen_range(0.1..10.0) / m.trace().re;
    m.hermitian_part().scale(scale)
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    PureState::normalize(std::array::from_fn(|_| gaussian(rng))).expect("gaussian ket is non-zero")
}

/// Random state generated by a one-sided map on `|phi+>`: a mixture of
/// `ranks` branches `(I ⊗ K_i)|phi+>` with Ginibre `K_i`.
pub fn random_one_sided_state<R: Rng + ?Sized>(rng: &mut R, ranks: usize) -> DensityOperator {
    let phi = bell_phi_plus().projector();
    let op = (0..ranks.max(1)).fold(Mat4::zeros(), |acc, _| {
        acc + phi.congruence(&embed(&ginibre2(rng), Qubit::Two))
    });
    DensityOperator::from_op_unchecked(op).normalized()
}

/// Random state with concurrence above `min_concurrence`.
pub fn random_entangled_state<R: Rng + ?Sized>(
    rng: &mut R,
    min_concurrence: f64,
) -> DensityOperator {
    loop {
        let rho = random_state(rng);
        if normalized_concurrence(&rho).is_ok_and(|c| c > min_concurrence) {
            return rho;
        }
    }
}

/// Random positive-definite-diagonal filter `diag(d1, d2) * U`, `U` Haar,
/// `d_i` uniform in `[FILTER_DIAG_MIN, 1]`.
pub fn random_filter<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let d = [
        rng.gen_range(FILTER_DIAG_MIN..=1.0),
        rng.gen_range(FILTER_DIAG_MIN..=1.0),
    ];
    Mat2::from_diag(d) * haar_unitary2(rng)
}
