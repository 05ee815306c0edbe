//! Small exact kernels for so(5) and SO(5).
//!
//! so(5) is identified with its dual through the pairing `<X, Y> = -tr(XY)/2`,
//! so momentum values, coadjoint-orbit points and connection values all live
//! in [`SkewMatrix5`].

use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix5, Matrix5x2, Vector3, Vector5};

use crate::{Error, Result};

pub type Mat5 = Matrix5<f64>;
pub type Vec5 = Vector5<f64>;
/// A point of R^5 x R^5 stored as the two columns `(q1, q2)`.
pub type Pair5 = Matrix5x2<f64>;

const SKEW_TOL: f64 = 1e-12;

/// Element of so(5) (equivalently so(5)*).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewMatrix5(Mat5);

impl SkewMatrix5 {
    pub fn zero() -> Self {
        Self(Mat5::zeros())
    }

    /// Validates `X + X^T = 0` entrywise.
    pub fn new(m: Mat5) -> Result<Self> {
        let asym = (m + m.transpose()).amax();
        if asym > SKEW_TOL * m.amax().max(1.0) {
            return Err(Error::NotSkew { residual: asym });
        }
        Ok(Self(m))
    }

    /// Skew part `(M - M^T)/2`; never fails.
    pub fn from_skew_part(m: &Mat5) -> Self {
        Self((m - m.transpose()) * 0.5)
    }

    /// `a b^T - b a^T`. With this convention `s * wedge(e1, e2)` carries
    /// `[[0, s], [-s, 0]]` in its top-left corner.
    pub fn wedge(a: &Vec5, b: &Vec5) -> Self {
        Self(a * b.transpose() - b * a.transpose())
    }

    /// `e_i ^ e_j` for zero-based indices.
    pub fn basis(i: usize, j: usize) -> Self {
        let mut m = Mat5::zeros();
        m[(i, j)] = 1.0;
        m[(j, i)] = -1.0;
        Self(m)
    }

    /// Pairing-orthonormal basis of so(5): `e_i ^ e_j` for `i < j`.
    pub fn standard_basis() -> [Self; 10] {
        let mut out = [Self::zero(); 10];
        let mut n = 0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                out[n] = Self::basis(i, j);
                n += 1;
            }
        }
        out
    }

    pub fn matrix(&self) -> &Mat5 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat5 {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Frobenius norm of the matrix (equals `sqrt(2 <X,X>)`).
    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Norm induced by the pairing.
    pub fn norm(&self) -> f64 {
        libm::sqrt(pairing(self, self).max(0.0))
    }

    /// Conjugation `R X R^T`.
    pub fn conjugate(&self, r: &Rotation5) -> Self {
        Self(r.0 * self.0 * r.0.transpose())
    }

    /// The 10 upper-triangle coordinates in the order of [`Self::standard_basis`].
    pub fn coordinates(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        let mut n = 0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                out[n] = self.0[(i, j)];
                n += 1;
            }
        }
        out
    }

    pub fn from_coordinates(c: &[f64; 10]) -> Self {
        let mut m = Mat5::zeros();
        let mut n = 0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                m[(i, j)] = c[n];
                m[(j, i)] = -c[n];
                n += 1;
            }
        }
        Self(m)
    }

    /// Top-left 3x3 block written as `-hat(x)`:
    /// `[[0, x3, -x2], [-x3, 0, x1], [x2, -x1, 0]]`, zero elsewhere.
    pub fn from_spin_vector(x: &Vector3<f64>) -> Self {
        let mut m = Mat5::zeros();
        m[(0, 1)] = x[2];
        m[(1, 0)] = -x[2];
        m[(0, 2)] = -x[1];
        m[(2, 0)] = x[1];
        m[(1, 2)] = x[0];
        m[(2, 1)] = -x[0];
        Self(m)
    }

    /// Inverse of [`Self::from_spin_vector`] on its image.
    pub fn spin_vector(&self) -> Vector3<f64> {
        Vector3::new(self.0[(1, 2)], self.0[(2, 0)], self.0[(0, 1)])
    }
}

impl Add for SkewMatrix5 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for SkewMatrix5 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for SkewMatrix5 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for SkewMatrix5 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

/// Element of SO(5).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation5(Mat5);

impl Rotation5 {
    pub fn identity() -> Self {
        Self(Mat5::identity())
    }

    /// Checks `R^T R = I` and `det R = 1` to `tol`.
    pub fn new(m: Mat5, tol: f64) -> Result<Self> {
        let orth = (m.transpose() * m - Mat5::identity()).amax();
        let det = m.determinant();
        if orth > tol || (det - 1.0).abs() > tol {
            return Err(Error::NotRotation {
                orthogonality: orth,
                determinant: det,
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Mat5) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat5 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// `max |R^T R - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Mat5::identity()).amax()
    }

    /// Polar-factor repair by Newton averaging `R <- (R + R^{-T})/2`.
    pub fn reorthonormalize(&self) -> Self {
        let mut r = self.0;
        for _ in 0..20 {
            let Some(inv) = r.try_inverse() else {
                break;
            };
            let next = (r + inv.transpose()) * 0.5;
            let delta = (next - r).amax();
            r = next;
            if delta < 1e-16 {
                break;
            }
        }
        Self(r)
    }

    /// Diagonal action on R^5 x R^5.
    pub fn act(&self, q: &Pair5) -> Pair5 {
        self.0 * q
    }

    /// Embeds `R in SO(3)` into the lower-right corner (the subgroup H0).
    pub fn from_h0(r: &nalgebra::Matrix3<f64>) -> Self {
        let mut m = Mat5::identity();
        m.fixed_view_mut::<3, 3>(2, 2).copy_from(r);
        Self(m)
    }
}

/// Block of so(5) singled out by the subgroup structure `H0 = SO(3)` (lower
/// right) and `W0 = SO(2)` (upper left).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubalgebraTag {
    /// so(3) in the lower-right 3x3 block.
    H0,
    /// so(2) in the upper-left 2x2 block.
    W0,
    /// The mixed block pairing coordinates {1,2} with {3,4,5}.
    Complement,
}

/// `-tr(XY)/2`.
pub fn pairing(x: &SkewMatrix5, y: &SkewMatrix5) -> f64 {
    -0.5 * x.0.component_mul(&y.0.transpose()).sum()
}

/// Commutator `XY - YX`.
pub fn bracket(x: &SkewMatrix5, y: &SkewMatrix5) -> SkewMatrix5 {
    SkewMatrix5(x.0 * y.0 - y.0 * x.0)
}

fn block_of(i: usize, j: usize) -> SubalgebraTag {
    match (i < 2, j < 2) {
        (true, true) => SubalgebraTag::W0,
        (false, false) => SubalgebraTag::H0,
        _ => SubalgebraTag::Complement,
    }
}

/// Orthogonal projection onto the tagged block. The blocks are coordinate
/// blocks, so the projection is a mask.
pub fn project(x: &SkewMatrix5, tag: SubalgebraTag) -> SkewMatrix5 {
    let mut m = Mat5::zeros();
    for i in 0..5 {
        for j in 0..5 {
            if i != j && block_of(i, j) == tag {
                m[(i, j)] = x.0[(i, j)];
            }
        }
    }
    SkewMatrix5(m)
}

/// Inverse of `X -> ((x_{k1})_{k=3..5}, (x_{k2})_{k=3..5})` on the complement block.
pub fn embed_complement(v: &Vector3<f64>, w: &Vector3<f64>) -> SkewMatrix5 {
    let mut m = Mat5::zeros();
    for k in 0..3 {
        m[(k + 2, 0)] = v[k];
        m[(0, k + 2)] = -v[k];
        m[(k + 2, 1)] = w[k];
        m[(1, k + 2)] = -w[k];
    }
    SkewMatrix5(m)
}

/// Coordinates `(v, w)` of the complement block; left inverse of [`embed_complement`].
pub fn complement_coordinates(x: &SkewMatrix5) -> (Vector3<f64>, Vector3<f64>) {
    let v = Vector3::new(x.0[(2, 0)], x.0[(3, 0)], x.0[(4, 0)]);
    let w = Vector3::new(x.0[(2, 1)], x.0[(3, 1)], x.0[(4, 1)]);
    (v, w)
}

/// Pairing-orthonormal basis of the orthogonal complement of h0 (7 elements):
/// `E = e1^e2` first, then the six complement generators.
pub fn h0_perp_basis() -> [SkewMatrix5; 7] {
    [
        SkewMatrix5::basis(0, 1),
        SkewMatrix5::basis(0, 2),
        SkewMatrix5::basis(0, 3),
        SkewMatrix5::basis(0, 4),
        SkewMatrix5::basis(1, 2),
        SkewMatrix5::basis(1, 3),
        SkewMatrix5::basis(1, 4),
    ]
}

/// Matrix exponential by scaling and squaring with a degree-18 Taylor kernel.
pub fn exp_so5(x: &SkewMatrix5) -> Rotation5 {
    let norm = x.0.norm();
    if norm == 0.0 {
        return Rotation5::identity();
    }
    // scale so that the reduced argument has Frobenius norm <= 1/2
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = x.0 * scale;
    let mut term = Mat5::identity();
    let mut sum = Mat5::identity();
    for k in 1..=18 {
        term = term * a / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    Rotation5(sum)
}

/// `zeta_X(q) = (X q1, X q2)` for the diagonal action.
pub fn fundamental_field(x: &SkewMatrix5, q: &Pair5) -> Pair5 {
    x.0 * q
}
