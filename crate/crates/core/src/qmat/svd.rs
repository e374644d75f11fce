use super::eigen::eigh2_unchecked;
use super::{Complex, Mat2, ONE, ZERO};

/// `m = u * diag(s) * v` with `u`, `v` unitary and `s` descending, non-negative.
#[derive(Debug, Clone, Copy)]
pub struct Svd2 {
    pub u: Mat2,
    pub s: [f64; 2],
    pub v: Mat2,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Mat2 {
        self.u * Mat2::from_diag(self.s) * self.v
    }
}

/// Singular value decomposition of a 2x2 complex matrix.
///
/// The right vectors come from the eigenvectors of `m^dagger m`; the second
/// left vector is taken as the orthogonal complement of the first so `u`
/// stays unitary even when `m` is singular.
pub fn svd2(m: &Mat2) -> Svd2 {
    let gram = (m.dagger() * *m).hermitian_part();
    let eig = eigh2_unchecked(&gram);
    let w1 = eig.vectors.column(0);
    let w2 = eig.vectors.column(1);

    let mw1 = m.mul_vec(&w1);
    let s1 = norm(&mw1);
    let u1 = if s1 > 0.0 {
        mw1.map(|z| z / s1)
    } else {
        [ONE, ZERO]
    };
    let u2_dir = [-u1[1].conj(), u1[0].conj()];

    // <u2_dir| m |w2> carries both the second singular value and its phase.
    let mw2 = m.mul_vec(&w2);
    let coef: Complex = u2_dir[0].conj() * mw2[0] + u2_dir[1].conj() * mw2[1];
    let s2 = coef.norm();
    let u2 = if s2 > 0.0 {
        let ph = coef / s2;
        u2_dir.map(|z| z * ph)
    } else {
        u2_dir
    };

    let u = Mat2::new(u1[0], u2[0], u1[1], u2[1]);
    let w = Mat2::new(w1[0], w2[0], w1[1], w2[1]);
    Svd2 {
        u,
        s: [s1, s2],
        v: w.dagger(),
    }
}

/// Left polar decomposition `m = p * w` with `p` Hermitian PSD and `w` unitary.
pub fn polar(m: &Mat2) -> (Mat2, Mat2) {
    let svd = svd2(m);
    let p = svd.u * Mat2::from_diag(svd.s) * svd.u.dagger();
    (p, svd.u * svd.v)
}

fn norm(v: &[Complex; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}
