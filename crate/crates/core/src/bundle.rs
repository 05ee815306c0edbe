//! The principal bundle `W0 -> Q_H0 ⊂ S^3 -> B0 ⊂ S^2(1/2)`.
//!
//! A frame point is a unit quaternion `a + ib + jα + kβ`, written as
//! `(q1, q2) = (a + ib, α + iβ)`. Its normal-form image in `R^5 x R^5` is
//! `((a, -b, 0, 0, 0), (α, -β, 0, 0, 0))`; with this embedding left
//! multiplication by `i` is the fundamental field of the so(2) generator
//! `E = e1^e2`, and the third Hopf coordinate is the oriented determinant of
//! the embedded pair.

use nalgebra::{Matrix2, Vector2, Vector3, Vector4};

use crate::liealg::Pair5;
use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Vec4 = Vector4<f64>;

/// Cut on `|aβ - bα|` below which a frame point counts as singular.
pub const REGULARITY_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-12;
const BASE_RADIUS: f64 = 0.5;

/// `i q` for `q = a + ib + jα + kβ`.
pub fn left_i(q: &Vec4) -> Vec4 {
    Vec4::new(-q[1], q[0], -q[3], q[2])
}

/// `j q`.
pub fn left_j(q: &Vec4) -> Vec4 {
    Vec4::new(-q[2], q[3], q[0], -q[1])
}

/// `k q`.
pub fn left_k(q: &Vec4) -> Vec4 {
    Vec4::new(-q[3], -q[2], q[1], q[0])
}

/// `e^{iθ} q`, the S^1 part of the W0 action.
pub fn rotate_phase(q: &Vec4, theta: f64) -> Vec4 {
    q * libm::cos(theta) + left_i(q) * libm::sin(theta)
}

/// The reflection `β -> -β` (with `b -> -b`), lifting the z-flip of the Δ factor.
pub fn reflect(q: &Vec4) -> Vec4 {
    Vec4::new(q[0], -q[1], q[2], -q[3])
}

/// Normal-form embedding of a quaternion (or a tangent vector) into `R^5 x R^5`.
pub fn embed(v: &Vec4) -> Pair5 {
    let mut p = Pair5::zeros();
    p[(0, 0)] = v[0];
    p[(1, 0)] = -v[1];
    p[(0, 1)] = v[2];
    p[(1, 1)] = -v[3];
    p
}

/// Left inverse of [`embed`]; reads the top 2x2 block only.
pub fn unembed(p: &Pair5) -> Vec4 {
    Vec4::new(p[(0, 0)], -p[(1, 0)], p[(0, 1)], -p[(1, 1)])
}

/// Point of `Q_H0 ⊂ S^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    q: Vec4,
    regular: bool,
}

impl FramePoint {
    pub fn new(q: Vec4) -> Result<Self> {
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self::from_unit(q))
    }

    /// Normalizes first; fails only on the zero vector.
    pub fn normalized(q: Vec4) -> Result<Self> {
        let norm = q.norm();
        if norm == 0.0 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self::from_unit(q / norm))
    }

    fn from_unit(q: Vec4) -> Self {
        let det = q[0] * q[3] - q[1] * q[2];
        Self {
            q,
            regular: det.abs() > REGULARITY_TOL,
        }
    }

    pub fn coords(&self) -> &Vec4 {
        &self.q
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// `((a, -b, 0, 0, 0), (α, -β, 0, 0, 0))`.
    pub fn embed(&self) -> Pair5 {
        embed(&self.q)
    }

    /// Normal-form coordinates `(q1_1, q1_2, q2_1, q2_2)` of the embedded pair.
    pub fn normal_form_coords(&self) -> Vec4 {
        Vec4::new(self.q[0], -self.q[1], self.q[2], -self.q[3])
    }

    /// `Π = q1 q1^T + q2 q2^T` of the embedded pair, restricted to the top-left block.
    pub fn row_gram(&self) -> Matrix2<f64> {
        let u = self.normal_form_coords();
        let u1 = Vector2::new(u[0], u[1]);
        let u2 = Vector2::new(u[2], u[3]);
        u1 * u1.transpose() + u2 * u2.transpose()
    }

    pub fn rotate_phase(&self, theta: f64) -> Self {
        Self::from_unit(rotate_phase(&self.q, theta))
    }
}

/// Stratum of the orbit space `B = B0 ⊔ B1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseStratum {
    /// Open northern hemisphere, `z > 0`.
    Interior,
    /// Equator, `z = 0`.
    Boundary,
}

impl BaseStratum {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Boundary => "boundary",
        }
    }
}

/// Point of the closed northern hemisphere of `S^2(1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pos: Vec3,
    stratum: BaseStratum,
}

impl BasePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let pos = Vec3::new(x, y, z);
        let norm = pos.norm();
        if (norm - BASE_RADIUS).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: 2.0 * norm });
        }
        if z < 0.0 {
            return Err(Error::InvalidArgument("base point below the equator"));
        }
        Ok(Self::from_folded(pos))
    }

    fn from_folded(pos: Vec3) -> Self {
        let stratum = if pos.z > REGULARITY_TOL {
            BaseStratum::Interior
        } else {
            BaseStratum::Boundary
        };
        Self { pos, stratum }
    }

    /// Folds an arbitrary point of `S^2(1/2)` into the closed upper hemisphere.
    pub fn fold(p: &Vec3) -> Self {
        Self::from_folded(Vec3::new(p.x, p.y, p.z.abs()))
    }

    pub fn position(&self) -> &Vec3 {
        &self.pos
    }

    pub fn stratum(&self) -> BaseStratum {
        self.stratum
    }
}

/// Result of the Hopf projection: the folded base point together with the
/// unfolded point of `S^2(1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfImage {
    pub base: BasePoint,
    pub unfolded: Vec3,
}

impl HopfImage {
    /// `+1` if the point lies in the upper hemisphere before folding, else `-1`.
    pub fn fold_sign(&self) -> f64 {
        if self.unfolded.z < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Tangent vector to `S^3` at a frame point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentAtFrame {
    pub base: FramePoint,
    pub v: Vec4,
}

impl TangentAtFrame {
    pub fn new(base: FramePoint, v: Vec4) -> Result<Self> {
        let inner = v.dot(base.coords());
        if inner.abs() > UNIT_TOL * v.norm().max(1.0) {
            return Err(Error::NotTangent { inner });
        }
        Ok(Self { base, v })
    }

    /// Projects `v` onto the tangent space first.
    pub fn projected(base: FramePoint, v: Vec4) -> Self {
        let q = base.coords();
        Self {
            base,
            v: v - q * v.dot(q),
        }
    }
}

/// Unfolded Hopf map `(|q1|^2 - |q2|^2)/2, Re(q1 q̄2), Im(q1 q̄2)`.
pub fn hopf_unfolded(q: &Vec4) -> Vec3 {
    let (a, b, al, be) = (q[0], q[1], q[2], q[3]);
    Vec3::new(
        0.5 * (a * a + b * b - al * al - be * be),
        a * al + b * be,
        b * al - a * be,
    )
}

/// Differential of [`hopf_unfolded`] at `q` applied to `v`.
pub fn hopf_differential(q: &Vec4, v: &Vec4) -> Vec3 {
    let (a, b, al, be) = (q[0], q[1], q[2], q[3]);
    let (da, db, dal, dbe) = (v[0], v[1], v[2], v[3]);
    Vec3::new(
        a * da + b * db - al * dal - be * dbe,
        da * al + a * dal + db * be + b * dbe,
        db * al + b * dal - da * be - a * dbe,
    )
}

pub fn hopf(q: &FramePoint) -> HopfImage {
    let unfolded = hopf_unfolded(q.coords());
    HopfImage {
        base: BasePoint::fold(&unfolded),
        unfolded,
    }
}

/// Orthonormal frame `(iq, jq, kq)` of `T_q S^3`.
pub fn frame_fields(q: &FramePoint) -> [Vec4; 3] {
    let c = q.coords();
    [left_i(c), left_j(c), left_k(c)]
}

/// Mechanical connection `A(q, v) = <v, iq>`, valued in w0 ≅ R.
pub fn mech_connection(t: &TangentAtFrame) -> f64 {
    t.v.dot(&left_i(t.base.coords()))
}

/// Inertia tensor `<X iq, Y iq>` on w0 ≅ R.
pub fn inertia(q: &FramePoint, x: f64, y: f64) -> f64 {
    let iq = left_i(q.coords());
    (iq * x).dot(&(iq * y))
}

/// Area form of `S^2(1/2)` oriented so that the Hopf map pulls it back to
/// `ξ^2 ∧ ξ^3`; `position` is an unfolded point.
pub fn area_form(position: &Vec3, u: &Vec3, v: &Vec3) -> f64 {
    position.dot(&v.cross(u)) / position.norm()
}

/// Great circle through `q` with initial velocity `u`.
fn geodesic(q: &Vec4, u: &Vec4, t: f64) -> Vec4 {
    let speed = u.norm();
    if speed == 0.0 {
        return *q;
    }
    q * libm::cos(t * speed) + u * (libm::sin(t * speed) / speed)
}

/// Tangential extension of a constant vector to a field near `S^3`.
fn extend(u: &Vec4, p: &Vec4) -> Vec4 {
    u - p * u.dot(p)
}

/// The connection 1-form at an arbitrary point.
fn connection_at(p: &Vec4, w: &Vec4) -> f64 {
    w.dot(&left_i(p))
}

/// Central difference of the scalar `f` along the geodesic in direction `u`.
fn directional_scalar(q: &Vec4, u: &Vec4, h: f64, f: impl Fn(&Vec4) -> f64) -> f64 {
    (f(&geodesic(q, u, h)) - f(&geodesic(q, u, -h))) / (2.0 * h)
}

fn directional_vector(q: &Vec4, u: &Vec4, h: f64, f: impl Fn(&Vec4) -> Vec4) -> Vec4 {
    (f(&geodesic(q, u, h)) - f(&geodesic(q, u, -h))) / (2.0 * h)
}

/// `dA(u, v) = u(A(ṽ)) - v(A(ũ)) - A([ũ, ṽ])` with central differences of step `h`.
fn d_connection(q: &Vec4, u: &Vec4, v: &Vec4, h: f64) -> f64 {
    let u_of_av = directional_scalar(q, u, h, |p| connection_at(p, &extend(v, p)));
    let v_of_au = directional_scalar(q, v, h, |p| connection_at(p, &extend(u, p)));
    let bracket = directional_vector(q, u, h, |p| extend(v, p))
        - directional_vector(q, v, h, |p| extend(u, p));
    u_of_av - v_of_au - connection_at(q, &bracket)
}

/// Initial finite-difference step of [`curvature_fd`].
pub const CURVATURE_STEP: f64 = 1e-4;
const MIN_STEP: f64 = 1e-9;

/// Curvature `dA(u, v)` by a Richardson-extrapolated finite-difference
/// exterior derivative. The step is halved until two successive
/// extrapolations agree.
pub fn curvature_fd(q: &FramePoint, u: &Vec4, v: &Vec4) -> Result<f64> {
    let c = q.coords();
    let scale = (u.norm() * v.norm()).max(f64::MIN_POSITIVE);
    let richardson =
        |h: f64| (4.0 * d_connection(c, u, v, h / 2.0) - d_connection(c, u, v, h)) / 3.0;
    let mut h = CURVATURE_STEP;
    let mut prev = richardson(h);
    while h >= MIN_STEP {
        h /= 2.0;
        let next = richardson(h);
        if (next - prev).abs() <= 1e-9 * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::StepUnderflow { min_step: MIN_STEP })
}

/// Horizontal lift of a base tangent vector `u` at `b` to the frame point `q`.
///
/// `u` is given in the folded picture; if `q` lies over the southern
/// hemisphere its z-component is reflected before lifting.
pub fn horizontal_lift(b: &BasePoint, u: &Vec3, q: &FramePoint) -> Result<TangentAtFrame> {
    let image = hopf(q);
    let distance = (image.base.position() - b.position()).norm();
    if distance > 1e-8 {
        return Err(Error::BaseMismatch { distance });
    }
    let mut target = *u;
    if image.fold_sign() < 0.0 {
        target.z = -target.z;
    }
    let [_, xi2, xi3] = frame_fields(q);
    let d2 = hopf_differential(q.coords(), &xi2);
    let d3 = hopf_differential(q.coords(), &xi3);
    let gram = Matrix2::new(d2.dot(&d2), d2.dot(&d3), d3.dot(&d2), d3.dot(&d3));
    let rhs = Vector2::new(d2.dot(&target), d3.dot(&target));
    let coef = gram
        .try_inverse()
        .ok_or(Error::InvalidArgument("degenerate Hopf differential"))?
        * rhs;
    Ok(TangentAtFrame {
        base: *q,
        v: xi2 * coef[0] + xi3 * coef[1],
    })
}

/// Pushes a frame tangent vector down to the folded base.
pub fn project_tangent(t: &TangentAtFrame) -> Vec3 {
    let mut d = hopf_differential(t.base.coords(), &t.v);
    if hopf(&t.base).fold_sign() < 0.0 {
        d.z = -d.z;
    }
    d
}
