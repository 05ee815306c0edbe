//! Random states for tests, property checks and the seeded experiment
//! suites. Every function is generic over the generator so callers pick a
//! reproducible one.

use nalgebra::{Matrix3, SVector, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bundle::{hopf_unfolded, left_j, left_k, reflect, FramePoint, Vec4};
use crate::dynamics::ReducedState;
use crate::liealg::{Mat5, Pair5, Rotation5, SkewMatrix5, Vec5};
use crate::momenta::PhasePoint;
use crate::strata::{IsotropyType, SpinClass};

pub fn gaussian<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> SVector<f64, N> {
    SVector::<f64, N>::from_fn(|_, _| rng.sample(StandardNormal))
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Uniform point of `S^3`.
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Vec4 {
    loop {
        let v: Vec4 = gaussian(rng);
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

/// Skew matrix with independent Gaussian coordinates times `scale`.
pub fn skew<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> SkewMatrix5 {
    let c: SVector<f64, 10> = gaussian(rng);
    let coords: [f64; 10] = core::array::from_fn(|i| c[i] * scale);
    SkewMatrix5::from_coordinates(&coords)
}

/// Haar-distributed rotation, by Gram-Schmidt on a Gaussian matrix.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation5 {
    loop {
        let cols: [Vec5; 5] = core::array::from_fn(|_| gaussian(rng));
        let mut ortho = [Vec5::zeros(); 5];
        let mut ok = true;
        for i in 0..5 {
            let mut v = cols[i];
            // Two passes keep the columns orthogonal to rounding even when
            // the Gaussian draw is badly conditioned.
            for _ in 0..2 {
                for f in ortho.iter().take(i) {
                    v -= f * f.dot(&v);
                }
            }
            let n = v.norm();
            if n < 1e-6 {
                ok = false;
                break;
            }
            ortho[i] = v / n;
        }
        if !ok {
            continue;
        }
        let mut m = Mat5::from_columns(&ortho);
        if m.determinant() < 0.0 {
            m.set_column(0, &(-ortho[0]));
        }
        return Rotation5::new(m, 1e-12).expect("orthonormal by construction");
    }
}

/// Random element of `H0 = SO(3)` acting on coordinates 3..5.
pub fn h0_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation5 {
    let q = unit_quaternion(rng);
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    let r = Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    );
    Rotation5::from_h0(&r)
}

/// Frame point over the upper hemisphere at height at least `min_height`.
pub fn frame<R: Rng + ?Sized>(rng: &mut R, min_height: f64) -> FramePoint {
    loop {
        let mut q = unit_quaternion(rng);
        if hopf_unfolded(&q).z < 0.0 {
            q = reflect(&q);
        }
        if hopf_unfolded(&q).z >= min_height {
            return FramePoint::new(q).expect("unit by construction");
        }
    }
}

/// Horizontal covector of norm `speed` at the frame.
pub fn horizontal<R: Rng + ?Sized>(rng: &mut R, f: &FramePoint, speed: f64) -> Vec4 {
    let angle = uniform(rng, 0.0, core::f64::consts::TAU);
    let q = f.coords();
    (left_j(q) * libm::cos(angle) + left_k(q) * libm::sin(angle)) * speed
}

/// Spin class with `|(x1, x2)| >= planar * s`.
pub fn regular_spin<R: Rng + ?Sized>(rng: &mut R, s: f64, planar: f64) -> SpinClass {
    loop {
        let v: Vector3<f64> = gaussian(rng);
        let n = v.norm();
        if n < 1e-3 {
            continue;
        }
        let x = v * (s / n);
        if libm::hypot(x[0], x[1]) >= planar * s {
            return SpinClass::new(x, s).expect("on the sphere by construction");
        }
    }
}

/// Ranges for random reduced initial conditions on the regular stratum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularSampling {
    pub scale: (f64, f64),
    pub speed: (f64, f64),
    /// Lower bound on the base height `z`.
    pub min_height: f64,
    /// Lower bound on `|(x1, x2)| / s`.
    pub min_planar: f64,
}

impl Default for RegularSampling {
    fn default() -> Self {
        Self {
            scale: (0.5, 1.5),
            speed: (0.2, 1.0),
            min_height: 0.3,
            min_planar: 0.2,
        }
    }
}

pub fn regular_state<R: Rng + ?Sized>(rng: &mut R, cfg: &RegularSampling) -> ReducedState {
    let s = uniform(rng, cfg.scale.0, cfg.scale.1);
    let speed = uniform(rng, cfg.speed.0, cfg.speed.1);
    let f = frame(rng, cfg.min_height);
    let p0 = horizontal(rng, &f, speed);
    let spin = regular_spin(rng, s, cfg.min_planar);
    ReducedState::new(f, p0, spin)
        .expect("horizontal by construction")
        .canonical()
}

/// Unit configuration with both columns Gaussian.
pub fn config<R: Rng + ?Sized>(rng: &mut R) -> Pair5 {
    let q: SVector<f64, 10> = gaussian(rng);
    Pair5::from_column_slice(q.normalize().as_slice())
}

/// Phase point whose span `{q1, q2, p1, p2}` realizes the given isotropy
/// type; the configuration is regular except for `L3`.
pub fn phase_point<R: Rng + ?Sized>(rng: &mut R, tag: IsotropyType) -> PhasePoint {
    if tag == IsotropyType::L3So4 {
        let e: Vec5 = gaussian::<R, 5>(rng).normalize();
        let phi = uniform(rng, 0.0, core::f64::consts::TAU);
        let c = uniform(rng, 0.5, 2.0);
        let mut q = Pair5::zeros();
        q.set_column(0, &(e * libm::cos(phi)));
        q.set_column(1, &(e * libm::sin(phi)));
        let mut p = Pair5::zeros();
        p.set_column(0, &(e * (-c * libm::sin(phi))));
        p.set_column(1, &(e * (c * libm::cos(phi))));
        return PhasePoint::projected(q, p);
    }
    let q = config(rng);
    let extra: usize = match tag {
        IsotropyType::L0Trivial => 2,
        IsotropyType::L1So2 => 1,
        _ => 0,
    };
    let dirs: [Vec5; 2] = core::array::from_fn(|_| gaussian(rng));
    let mut p = Pair5::zeros();
    for col in 0..2 {
        let mut v = q.column(0) * rng.sample::<f64, _>(StandardNormal)
            + q.column(1) * rng.sample::<f64, _>(StandardNormal);
        if extra == 2 {
            v += dirs[col];
        } else if extra == 1 {
            v += dirs[0] * rng.sample::<f64, _>(StandardNormal);
        }
        p.set_column(col, &v);
    }
    PhasePoint::projected(q, p)
}
