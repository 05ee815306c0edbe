use nalgebra::{Matrix4, SMatrix, SVector, Vector3};

use crate::bundle::{
    embed, hopf, left_i, project_tangent, reflect, rotate_phase, unembed, BasePoint, FramePoint,
    TangentAtFrame, Vec3, Vec4,
};
use crate::liealg::{h0_perp_basis, pairing, Mat5, Pair5, Rotation5, SkewMatrix5, Vec5};
use crate::momenta::{mu_full, mu_of, PhasePoint};
use crate::strata::{
    classify_config, reflect_spin_vector, spin_from_momentum, ConfigStratum, SpinClass,
};
use crate::{Error, Result};

const HORIZONTAL_TOL: f64 = 1e-10;
const LEVEL_TOL: f64 = 1e-8;

/// Point of the reduced space in an explicit gauge: a frame over the base
/// point, a horizontal covector there, and a spin class.
///
/// The unreduced lift is `(q0, p0 + ζ_X(q0))` with `X` the velocity
/// generator of the spin; its `W0` momentum is the spin charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub frame: FramePoint,
    pub p0: Vec4,
    pub spin: SpinClass,
}

impl ReducedState {
    /// Checks that `p0` is tangent and horizontal at `frame`.
    pub fn new(frame: FramePoint, p0: Vec4, spin: SpinClass) -> Result<Self> {
        let q = frame.coords();
        let scale = p0.norm().max(1.0);
        let tangential = p0.dot(q);
        if tangential.abs() > HORIZONTAL_TOL * scale {
            return Err(Error::NotTangent { inner: tangential });
        }
        let vertical = p0.dot(&left_i(q));
        if vertical.abs() > HORIZONTAL_TOL * scale {
            return Err(Error::NotTangent { inner: vertical });
        }
        Ok(Self { frame, p0, spin })
    }

    /// Builds a state from any covector at the frame by dropping its normal
    /// and vertical parts.
    pub fn horizontal_part(frame: FramePoint, v: Vec4, spin: SpinClass) -> Self {
        let q = frame.coords();
        let iq = left_i(q);
        let p0 = v - q * v.dot(q) - iq * v.dot(&iq);
        Self { frame, p0, spin }
    }

    pub fn base(&self) -> BasePoint {
        hopf(&self.frame).base
    }

    /// Base velocity in the folded picture.
    pub fn base_velocity(&self) -> Vec3 {
        project_tangent(&TangentAtFrame {
            base: self.frame,
            v: self.p0,
        })
    }

    /// `p0 + x3 iq`, the frame part of the lift lying in `J_W^{-1}(0)`.
    pub fn lifted_covector(&self) -> Vec4 {
        self.p0 + left_i(self.frame.coords()) * self.spin.charge()
    }

    /// Joint action of `e^{iθ} ∈ W0` on frame, covector and spin.
    pub fn gauge_rotate(&self, theta: f64) -> Self {
        Self {
            frame: self.frame.rotate_phase(theta),
            p0: rotate_phase(&self.p0, theta),
            spin: self.spin.rotate(theta),
        }
    }

    /// Joint action of the reflection in `N(H0)` covering the z-flip.
    pub fn reflect(&self) -> Self {
        let x = reflect_spin_vector(self.spin.vector());
        Self {
            frame: FramePoint::normalized(reflect(self.frame.coords())).expect("unit frame"),
            p0: reflect(&self.p0),
            spin: SpinClass::new(x, self.spin.scale()).expect("reflection preserves the norm"),
        }
    }

    /// Section gauge: `b = 0`, `a > 0` and `β <= 0`, so the frame lies over
    /// the closed upper hemisphere.
    pub fn canonical(&self) -> Self {
        let q = self.frame.coords();
        let mut out = *self;
        if libm::hypot(q[0], q[1]) > 0.0 {
            out = out.gauge_rotate(-libm::atan2(q[1], q[0]));
            let mut c = *out.frame.coords();
            c[1] = 0.0;
            out.frame = FramePoint::normalized(c).expect("unit frame");
        }
        if out.frame.coords()[3] > 0.0 {
            out = out.reflect();
        }
        out
    }
}

/// Folded base point of a configuration from its `SO(5)` invariants.
pub fn base_of_config(q: &Pair5) -> BasePoint {
    let (q1, q2) = (q.column(0), q.column(1));
    let (n1, n2, c) = (q1.norm_squared(), q2.norm_squared(), q1.dot(&q2));
    let det = (n1 * n2 - c * c).max(0.0);
    BasePoint::fold(&Vec3::new(0.5 * (n1 - n2), c, libm::sqrt(det)))
}

/// Rotation sending `q` into normal form `((r1, 0, ..), (α, β > 0, 0, ..))`.
pub fn normal_form_rotation(q: &Pair5) -> Result<Rotation5> {
    if classify_config(q) != ConfigStratum::RegularSo3 {
        return Err(Error::SingularConfig);
    }
    let f1: Vec5 = q.column(0).normalize();
    let q2 = q.column(1) - f1 * f1.dot(&q.column(1));
    let f2 = q2.normalize();
    let mut frame = [f1, f2, Vec5::zeros(), Vec5::zeros(), Vec5::zeros()];
    let mut used = [false; 5];
    for slot in 2..5 {
        let mut best = (0usize, Vec5::zeros(), -1.0);
        for (k, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut v = Vec5::zeros();
            v[k] = 1.0;
            for f in frame.iter().take(slot) {
                v -= f * f.dot(&v);
            }
            let n = v.norm();
            if n > best.2 {
                best = (k, v, n);
            }
        }
        used[best.0] = true;
        let mut v = best.1 / best.2;
        for f in frame.iter().take(slot) {
            v -= f * f.dot(&v);
        }
        frame[slot] = v.normalize();
    }
    let mut m = Mat5::from_columns(&frame);
    if m.determinant() < 0.0 {
        m.set_column(4, &(-frame[4]));
    }
    Ok(Rotation5::from_matrix_unchecked(m.transpose()))
}

/// Solves the locked-inertia system `I_q X = λ` on the complement of `h0`.
pub fn locked_inertia_solve(q: &Pair5, lambda: &SkewMatrix5) -> Result<SkewMatrix5> {
    let basis = h0_perp_basis();
    let fields: [Pair5; 7] = core::array::from_fn(|i| basis[i].matrix() * q);
    let gram = SMatrix::<f64, 7, 7>::from_fn(|i, j| fields[i].dot(&fields[j]));
    let rhs = SVector::<f64, 7>::from_fn(|i, _| pairing(lambda, &basis[i]));
    let chol = gram.cholesky().ok_or(Error::SingularConfig)?;
    let x = chol.solve(&rhs);
    let mut out = SkewMatrix5::zero();
    for (c, b) in x.iter().zip(basis.iter()) {
        out = out + *b * *c;
    }
    Ok(out)
}

/// Velocity generator of the spin at the frame.
pub fn velocity_generator(r: &ReducedState) -> Result<SkewMatrix5> {
    locked_inertia_solve(&r.frame.embed(), &r.spin.representative())
}

/// Unreduced point `(q0, p0 + ζ_X(q0))` over a reduced state.
pub fn lift(r: &ReducedState) -> Result<PhasePoint> {
    let q = r.frame.embed();
    let x = velocity_generator(r)?;
    let p = embed(&r.p0) + x.matrix() * q;
    Ok(PhasePoint::projected(q, p))
}

/// Reduces a regular phase point: rotates it into normal form, splits the
/// covector into orbit-vertical and horizontal parts, and reads the spin
/// class off the rotated momentum. `level`, if given, is the demanded orbit
/// scale `|μ|`.
pub fn project_to_reduced(s: &PhasePoint, level: Option<f64>) -> Result<ReducedState> {
    let g = normal_form_rotation(&s.q)?;
    let norm = mu_full(s).value.norm();
    let scale = match level {
        Some(l) => {
            if (norm - l).abs() > LEVEL_TOL * l.max(1.0) {
                return Err(Error::NotOnOrbit {
                    expected: l,
                    found: norm,
                });
            }
            l
        }
        None => norm,
    };
    let q0 = g.act(&s.q);
    let p = g.act(&s.p);
    let lambda = mu_of(&q0, &p).value;
    let x = locked_inertia_solve(&q0, &lambda)?;
    let p_hor = p - x.matrix() * q0;
    let frame = FramePoint::normalized(unembed(&q0))?;
    let spin = spin_from_momentum(&lambda, scale)?;
    Ok(ReducedState::horizontal_part(frame, unembed(&p_hor), spin).canonical())
}

/// The 4x4 block-diagonal matrix `K` of the coupling quadratic form.
/// Requires `x^2 + y^2 <= s^2`.
pub fn k_matrix(x: f64, y: f64, s: f64) -> Matrix4<f64> {
    let s2 = s * s;
    let mut k = Matrix4::zeros();
    for o in [0, 2] {
        k[(o, o)] = s2 - x * x;
        k[(o, o + 1)] = -x * y;
        k[(o + 1, o)] = -x * y;
        k[(o + 1, o + 1)] = s2 - y * y;
    }
    k
}

/// `|p0|^2 / 2 + <K u, u> / 2`, with `K` built from the velocity generator
/// and `u` the normal-form coordinates of the frame.
pub fn reduced_hamiltonian(r: &ReducedState) -> Result<f64> {
    let xi: Vector3<f64> = velocity_generator(r)?.spin_vector();
    let k = k_matrix(xi[0], xi[1], xi.norm());
    let u = r.frame.normal_form_coords();
    Ok(0.5 * r.p0.norm_squared() + 0.5 * u.dot(&(k * u)))
}

/// Squared frequencies of the coupling term read as a harmonic oscillator:
/// the roots `ω` of `det(K - ω) = 0`, each of multiplicity two. For the
/// velocity generator with spin vector `ξ` they are `ξ_3^2` and `|ξ|^2`,
/// returned in that (ascending) order. Reported as a diagnostic only.
pub fn coupling_frequencies(r: &ReducedState) -> Result<[f64; 2]> {
    let xi: Vector3<f64> = velocity_generator(r)?.spin_vector();
    Ok([xi[2] * xi[2], xi.norm_squared()])
}
