//! Fixed-size dense complex matrices for one- and two-qubit operators.
//!
//! Basis convention: qubit 1 is the left Kronecker factor and the two-qubit
//! computational basis is ordered `|00>, |01>, |10>, |11>`. Every other module
//! inherits this ordering.

mod eigen;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use eigen::check_psd;
pub use eigen::{eigvals_hermitian4, sqrt_psd, Eigh};
pub use svd::{polar, svd2, Svd2};

/// Complex scalar used throughout.
pub type Complex = Complex64;

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
pub const TAU_HERM: f64 = 1e-9;
/// Most negative eigenvalue tolerated (and clamped to zero) in a PSD operator.
pub const TAU_PSD: f64 = 1e-10;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const I: Complex = Complex::new(0.0, 1.0);

/// One of the two qubits of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn other(self) -> Self {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }
}

impl TryFrom<u8> for Qubit {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Qubit::One),
            2 => Ok(Qubit::Two),
            other => Err(Error::InvalidQubit(other)),
        }
    }
}

impl From<Qubit> for u8 {
    fn from(q: Qubit) -> u8 {
        q.index()
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Dense `N x N` complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[Complex; N]; N]);

/// Single-qubit operator.
pub type Mat2 = CMatrix<2>;
/// Two-qubit operator.
pub type Mat4 = CMatrix<4>;

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        Self([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Complex::new(d[i], 0.0);
        }
        m
    }

    /// Builds a matrix from separate real and imaginary parts.
    pub fn from_parts(re: [[f64; N]; N], im: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = Complex::new(re[i][j], im[i][j]);
            }
        }
        m
    }

    /// Real-valued matrix.
    pub fn real(re: [[f64; N]; N]) -> Self {
        Self::from_parts(re, [[0.0; N]; N])
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[Complex; N], b: &[Complex; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance to `other`.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm_fro()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `|| m - m^dagger ||_F / ||m||_F`, zero for the zero matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let norm = self.norm_fro();
        if norm == 0.0 {
            return 0.0;
        }
        self.dist(&self.dagger()) / norm
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.dagger()).scale(0.5)
    }

    /// Symmetrizes after checking the defect against [`TAU_HERM`].
    pub fn checked_hermitian(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = self.hermiticity_defect();
        if deviation > TAU_HERM {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(self.hermitian_part())
    }

    pub fn mul_vec(&self, v: &[Complex; N]) -> [Complex; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `a * self * a^dagger`.
    pub fn congruence(&self, a: &Self) -> Self {
        *a * *self * a.dagger()
    }

    pub fn column(&self, j: usize) -> [Complex; N] {
        let mut c = [ZERO; N];
        for i in 0..N {
            c[i] = self.0[i][j];
        }
        c
    }

    pub fn to_parts(&self) -> ([[f64; N]; N], [[f64; N]; N]) {
        let mut re = [[0.0; N]; N];
        let mut im = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                re[i][j] = self.0[i][j].re;
                im[i][j] = self.0[i][j].im;
            }
        }
        (re, im)
    }
}

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn det(&self) -> Complex {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn pauli_x() -> Self {
        Self::real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }
}

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for CMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> fmt::Debug for CMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! impl_serde_parts {
    ($n:literal) => {
        impl Serialize for CMatrix<$n> {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let (re, im) = self.to_parts();
                Parts { re, im }.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for CMatrix<$n> {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                let p = Parts::<[[f64; $n]; $n]>::deserialize(d)?;
                Ok(Self::from_parts(p.re, p.im))
            }
        }
    };
}

/// Serialized form of a matrix: separate real and imaginary arrays.
#[derive(Serialize, Deserialize)]
struct Parts<T> {
    re: T,
    im: T,
}

impl_serde_parts!(2);
impl_serde_parts!(4);

/// Kronecker product `a ⊗ b`, with `a` acting on qubit 1.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Embeds a single-qubit operator into the two-qubit space on `side`.
pub fn embed(op: &Mat2, side: Qubit) -> Mat4 {
    match side {
        Qubit::One => kron(op, &Mat2::identity()),
        Qubit::Two => kron(&Mat2::identity(), op),
    }
}

/// Traces out qubit `traced`, returning the reduced operator of the other one.
///
/// `partial_trace(m, Qubit::Two)` is `tr_2 m`, the operator of qubit 1.
pub fn partial_trace(m: &Mat4, traced: Qubit) -> Mat2 {
    let mut out = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = match traced {
                Qubit::Two => m.0[2 * i][2 * j] + m.0[2 * i + 1][2 * j + 1],
                Qubit::One => m.0[i][j] + m.0[2 + i][2 + j],
            };
        }
    }
    out
}

/// Reduced operator of `keep`, i.e. the partial trace over the other qubit.
pub fn marginal(m: &Mat4, keep: Qubit) -> Mat2 {
    partial_trace(m, keep.other())
}
