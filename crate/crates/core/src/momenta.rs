//! Momentum maps of the three actions in play: `SO(5)` on `T*S^9`, `W0` on
//! `T*Q_H0`, and the diagonal `W0` action on `T*Q_H0 x (spin quotient)`.

use crate::bundle::{left_i, TangentAtFrame};
use crate::liealg::{fundamental_field, pairing, project, Pair5, SkewMatrix5, SubalgebraTag};
use crate::{Error, Result};

const INVARIANT_TOL: f64 = 1e-12;

/// Point `(q, p)` of `T*S^9 ≅ TS^9`, with `p` identified with a vector by the
/// round metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: Pair5,
    pub p: Pair5,
}

impl PhasePoint {
    /// Checks `|q| = 1` and `<q, p> = 0`.
    pub fn new(q: Pair5, p: Pair5) -> Result<Self> {
        let norm = q.norm();
        if (norm - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::NotUnit { norm });
        }
        let inner = q.dot(&p);
        if inner.abs() > INVARIANT_TOL * p.norm().max(1.0) {
            return Err(Error::NotTangent { inner });
        }
        Ok(Self { q, p })
    }

    /// Normalizes `q` and removes the normal component of `p`.
    pub fn projected(q: Pair5, p: Pair5) -> Self {
        let q = q / q.norm();
        let p = p - q * q.dot(&p);
        Self { q, p }
    }

    pub fn energy(&self) -> f64 {
        0.5 * self.p.norm_squared()
    }

    /// Diagonal action of `g`.
    pub fn transform(&self, g: &crate::liealg::Rotation5) -> Self {
        Self {
            q: g.act(&self.q),
            p: g.act(&self.p),
        }
    }
}

/// Value of the `SO(5)` momentum map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumValue {
    pub value: SkewMatrix5,
}

/// `μ(q, p) = p1 q1^T - q1 p1^T + p2 q2^T - q2 p2^T`, characterised by
/// `<μ(q, p), X> = <p, ζ_X(q)>`.
pub fn mu_full(s: &PhasePoint) -> MomentumValue {
    mu_of(&s.q, &s.p)
}

pub(crate) fn mu_of(q: &Pair5, p: &Pair5) -> MomentumValue {
    let m = p * q.transpose() - q * p.transpose();
    MomentumValue {
        value: SkewMatrix5::from_skew_part(&m),
    }
}

/// The momentum map assembled coordinate by coordinate from its defining
/// identity over the standard basis.
pub fn mu_by_definition(q: &Pair5, p: &Pair5) -> SkewMatrix5 {
    let basis = SkewMatrix5::standard_basis();
    let mut coords = [0.0; 10];
    for (c, x) in coords.iter_mut().zip(basis.iter()) {
        *c = p.dot(&fundamental_field(x, q));
    }
    SkewMatrix5::from_coordinates(&coords)
}

/// Checks the closed form of [`mu_full`] against the defining identity on
/// every basis element at a few fixed phase points.
pub fn self_test() -> Result<()> {
    let samples: [([f64; 10], [f64; 10]); 3] = [
        (
            [0.3, -0.1, 0.5, 0.2, 0.0, 0.4, 0.1, -0.6, 0.2, 0.1],
            [1.0, 0.2, -0.3, 0.5, 0.7, -0.2, 0.4, 0.1, 0.0, -0.9],
        ),
        (
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ),
        (
            [0.1, 0.2, 0.3, 0.4, 0.5, -0.5, 0.4, -0.3, 0.2, -0.1],
            [2.0, -1.0, 0.5, 0.0, 0.3, 0.3, 0.3, -0.7, 1.1, 0.6],
        ),
    ];
    for (qc, pc) in samples.iter() {
        let s = PhasePoint::projected(Pair5::from_column_slice(qc), Pair5::from_column_slice(pc));
        let closed = mu_full(&s).value;
        for x in SkewMatrix5::standard_basis().iter() {
            let lhs = pairing(&closed, x);
            let rhs = s.p.dot(&fundamental_field(x, &s.q));
            if (lhs - rhs).abs() > 1e-12 * (1.0 + s.p.norm()) {
                return Err(Error::InvalidArgument(
                    "momentum map closed form failed self-test",
                ));
            }
        }
    }
    Ok(())
}

/// The generator `E = e1^e2` of w0, normalised so that `<E, E> = 1`.
pub fn w0_generator() -> SkewMatrix5 {
    SkewMatrix5::basis(0, 1)
}

/// Coordinate of the w0-component of `x` in the basis [`w0_generator`].
pub fn w0_coordinate(x: &SkewMatrix5) -> f64 {
    pairing(x, &w0_generator())
}

/// `W0`-momentum map on `T*Q_H0`; since the inertia is the identity it equals
/// the mechanical connection `<v, iq>`.
pub fn mu_w(t: &TangentAtFrame) -> f64 {
    t.v.dot(&left_i(t.base.coords()))
}

/// `J_W(q, p, [λ]) = μ_W(q, p) - λ|w`. Zero marks membership in `J_W^{-1}(0)`.
pub fn j_w(t: &TangentAtFrame, spin: &SkewMatrix5) -> Result<f64> {
    let h = project(spin, SubalgebraTag::H0).norm();
    if h > 1e-10 {
        return Err(Error::NotInAnnH { norm: h });
    }
    Ok(mu_w(t) - w0_coordinate(spin))
}
