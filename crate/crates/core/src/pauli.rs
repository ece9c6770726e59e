//! Closed-form algebra for 2×2 Hermitian generators and their propagators.
//!
//! Convention: σ3 = diag(+1, −1), so |0⟩ is the σ3 = +1 state and
//! σ+ = |0⟩⟨1| = (σ1 + iσ2)/2. Every frame transformation in the crate uses
//! this single convention.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex 2×2 matrix.
pub type Mat2 = Matrix2<C64>;

/// Tolerance used by [`decompose`] to accept a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Tolerance of the [`Unitary2`] invariants (max entry deviation of U†U − 𝟙
/// and of |det U| − 1).
pub const UNITARITY_TOL: f64 = 1e-12;

/// Below this value of r·|dt| the sin(r dt)/r factor switches to its Taylor
/// series.
const SMALL_ANGLE: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn identity() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, ONE)
}

pub fn sigma1() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// σ+ = |0⟩⟨1|.
pub fn sigma_plus() -> Mat2 {
    Mat2::new(ZERO, ONE, ZERO, ZERO)
}

/// σ− = |1⟩⟨0|.
pub fn sigma_minus() -> Mat2 {
    Mat2::new(ZERO, ZERO, ONE, ZERO)
}

/// A Hermitian 2×2 operator c0·𝟙 + c1·σ1 + c2·σ2 + c3·σ3 with real
/// coefficients (units of angular frequency).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliCoeffs {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl PauliCoeffs {
    pub const ZERO: PauliCoeffs = PauliCoeffs::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self { c0, c1, c2, c3 }
    }

    pub const fn sigma1(c: f64) -> Self {
        Self::new(0.0, c, 0.0, 0.0)
    }

    pub const fn sigma2(c: f64) -> Self {
        Self::new(0.0, 0.0, c, 0.0)
    }

    pub const fn sigma3(c: f64) -> Self {
        Self::new(0.0, 0.0, 0.0, c)
    }

    /// a·σ+ + a*·σ− expressed in Pauli coefficients.
    pub fn from_raising(a: C64) -> Self {
        Self::new(0.0, a.re, -a.im, 0.0)
    }

    /// Length of the traceless part, |c⃗|. The eigenvalues are c0 ± |c⃗|.
    pub fn vector_norm(&self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.vector_norm();
        (self.c0 - r, self.c0 + r)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.c0.abs().max(self.c1.abs()).max(self.c2.abs()).max(self.c3.abs())
    }

    pub fn to_matrix(&self) -> Mat2 {
        compose(self)
    }
}

impl Add for PauliCoeffs {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl Sub for PauliCoeffs {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}

impl Neg for PauliCoeffs {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1, -self.c2, -self.c3)
    }
}

impl Mul<f64> for PauliCoeffs {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.c0 * s, self.c1 * s, self.c2 * s, self.c3 * s)
    }
}

/// Assemble c0·𝟙 + Σ ci·σi.
pub fn compose(p: &PauliCoeffs) -> Mat2 {
    Mat2::new(
        C64::new(p.c0 + p.c3, 0.0),
        C64::new(p.c1, -p.c2),
        C64::new(p.c1, p.c2),
        C64::new(p.c0 - p.c3, 0.0),
    )
}

/// Largest entry of |M − M†|.
pub fn hermiticity_deviation(m: &Mat2) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Pauli coefficients of the Hermitian part of `m`, without checking.
pub(crate) fn decompose_unchecked(m: &Mat2) -> PauliCoeffs {
    let a = m[(0, 0)];
    let b = m[(0, 1)];
    let c = m[(1, 0)];
    let d = m[(1, 1)];
    PauliCoeffs::new(
        0.5 * (a.re + d.re),
        0.5 * (b.re + c.re),
        0.5 * (c.im - b.im),
        0.5 * (a.re - d.re),
    )
}

/// Unique Pauli decomposition of a Hermitian 2×2 matrix.
pub fn decompose(m: &Mat2) -> Result<PauliCoeffs> {
    let deviation = hermiticity_deviation(m);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NonHermitianInput {
            deviation,
            tolerance: HERMITICITY_TOL,
        });
    }
    Ok(decompose_unchecked(m))
}

pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b - b * a
}

pub fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral (operator 2-) norm of a 2×2 matrix, from the largest eigenvalue
/// of M†M.
pub fn operator_norm(m: &Mat2) -> f64 {
    let g = m.adjoint() * m;
    let tr = g[(0, 0)].re + g[(1, 1)].re;
    let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr + disc)).max(0.0).sqrt()
}

/// exp(−i·H·dt) for H = compose(p), in closed form:
/// e^{−i c0 dt}[cos(r dt)𝟙 − i sin(r dt)(n̂·σ⃗)], r = |c⃗|.
pub fn expm_pauli(p: &PauliCoeffs, dt: f64) -> Unitary2 {
    let r = p.vector_norm();
    let x = r * dt;
    let cos = x.cos();
    // sin(r dt)/r, with the series branch near r dt = 0
    let sinc_dt = if x.abs() < SMALL_ANGLE {
        dt * (1.0 - x * x / 6.0)
    } else {
        x.sin() / r
    };
    let phase = C64::from_polar(1.0, -p.c0 * dt);
    let (a1, a2, a3) = (p.c1 * sinc_dt, p.c2 * sinc_dt, p.c3 * sinc_dt);
    // cos·𝟙 − i(a1σ1 + a2σ2 + a3σ3)
    let m = Mat2::new(
        C64::new(cos, -a3),
        C64::new(-a2, -a1),
        C64::new(a2, -a1),
        C64::new(cos, a3),
    );
    Unitary2(m * phase)
}

/// A 2×2 propagator. Constructed only through checked paths or products of
/// checked unitaries, so U†U = 𝟙 holds to [`UNITARITY_TOL`] up to
/// accumulated rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn identity() -> Self {
        Unitary2(identity())
    }

    pub fn new(m: Mat2) -> Result<Self> {
        let deviation = unitarity_deviation(&m);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary2(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary2(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    pub fn determinant(&self) -> C64 {
        self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]
    }

    /// max(|U†U − 𝟙|, ||det U| − 1|).
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }

    /// Eigenphases θ with eigenvalues e^{−iθ}, from the characteristic
    /// polynomial.
    pub fn eigenphases(&self) -> (f64, f64) {
        let tr = self.trace();
        let det = self.determinant();
        let disc = (tr * tr - det * 4.0).sqrt();
        let l1 = (tr + disc) * 0.5;
        let l2 = (tr - disc) * 0.5;
        (-l1.arg(), -l2.arg())
    }

    /// Operator-norm distance ‖A − B‖₂.
    pub fn distance(&self, other: &Unitary2) -> f64 {
        operator_norm(&(self.0 - other.0))
    }

    /// Probability |⟨to|U|from⟩|² between computational basis states.
    pub fn transition_probability(&self, to: usize, from: usize) -> f64 {
        self.0[(to, from)].norm_sqr()
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

impl Mul<&Unitary2> for &Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: &Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

fn unitarity_deviation(m: &Mat2) -> f64 {
    let gram = max_abs(&(m.adjoint() * m - identity()));
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
    gram.max((det - 1.0).abs())
}

/// U A U† for a Hermitian A, returned in Pauli form.
pub fn conjugate(u: &Unitary2, a: &PauliCoeffs) -> PauliCoeffs {
    let m = u.matrix() * compose(a) * u.matrix().adjoint();
    decompose_unchecked(&m)
}
