use alloc::vec::Vec;

use nalgebra::SVector;

use crate::bundle::{BasePoint, Vec3};
use crate::{Error, Result};

use super::{check_horizon, rk4, step_count, Diagnostics, Trajectory};

const RADIUS: f64 = 0.5;
/// Largest admissible arc length per step, `h |v|`.
pub const MAX_ARC_STEP: f64 = 0.025;
/// Orientation of the magnetic term relative to `n × v` with `n` the outward
/// normal; fixed by agreement with the projected geodesics of `S^3`.
const TURNING_SIGN: f64 = 1.0;

/// Sample of a charged trajectory on `B0`, folded into the upper hemisphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzState {
    pub position: Vec3,
    pub velocity: Vec3,
    /// `-1` if the unfolded point lies in the southern hemisphere.
    pub fold_sign: f64,
    pub charge: f64,
}

/// Base equation with a constant charge `z`:
/// `∇_{c'} c' = 2 z J(c')` on `S^2(1/2)`.
pub fn lorentz_flow(
    b: &BasePoint,
    v: &Vec3,
    charge: f64,
    t: f64,
    h: f64,
) -> Result<Trajectory<LorentzState>> {
    charged_flow(b, v, charge, t, h)
}

/// Wong's equations for the abelian structure group: the charge is parallel
/// and the base equation is the Lorentz equation with that charge. `s` is
/// the orbit scale bounding `|z|`.
pub fn wong_flow(
    b: &BasePoint,
    v: &Vec3,
    z: f64,
    s: f64,
    t: f64,
    h: f64,
) -> Result<Trajectory<LorentzState>> {
    if z.abs() > s * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument("charge exceeds the orbit scale"));
    }
    charged_flow(b, v, z, t, h)
}

fn acceleration(c: &Vec3, v: &Vec3, charge: f64) -> Vec3 {
    let n = c / c.norm();
    -c * (v.norm_squared() / (RADIUS * RADIUS)) + n.cross(v) * (2.0 * TURNING_SIGN * charge)
}

fn charged_flow(
    b: &BasePoint,
    v: &Vec3,
    charge: f64,
    t: f64,
    h: f64,
) -> Result<Trajectory<LorentzState>> {
    check_horizon(t, h)?;
    let c0 = *b.position();
    let inner = v.dot(&c0);
    if inner.abs() > 1e-10 * v.norm().max(1.0) {
        return Err(Error::NotTangent { inner });
    }
    let speed = v.norm();
    if h * speed > MAX_ARC_STEP {
        return Err(Error::StepTooLarge {
            product: h * speed,
            limit: MAX_ARC_STEP,
        });
    }
    let n = step_count(t, h);
    let dt = t / n as f64;
    let mut y = SVector::<f64, 7>::zeros();
    y.fixed_rows_mut::<3>(0).copy_from(&c0);
    y.fixed_rows_mut::<3>(3).copy_from(v);
    y[6] = charge;
    let rhs = |y: &SVector<f64, 7>| -> Result<SVector<f64, 7>> {
        let c: Vec3 = y.fixed_rows::<3>(0).into();
        let v: Vec3 = y.fixed_rows::<3>(3).into();
        let a = acceleration(&c, &v, y[6]);
        let mut d = SVector::<f64, 7>::zeros();
        d.fixed_rows_mut::<3>(0).copy_from(&v);
        d.fixed_rows_mut::<3>(3).copy_from(&a);
        Ok(d)
    };
    let mut out = Trajectory::new();
    out.push(0.0, folded(&y), diagnostics(&y));
    for k in 1..=n {
        y = rk4(&y, dt, rhs)?;
        let c: Vec3 = y.fixed_rows::<3>(0).into();
        let c = c * (RADIUS / c.norm());
        let nrm = c / RADIUS;
        let mut v: Vec3 = y.fixed_rows::<3>(3).into();
        v -= nrm * v.dot(&nrm);
        let vn = v.norm();
        if vn > 0.0 {
            v *= speed / vn;
        }
        y.fixed_rows_mut::<3>(0).copy_from(&c);
        y.fixed_rows_mut::<3>(3).copy_from(&v);
        out.push(k as f64 * dt, folded(&y), diagnostics(&y));
    }
    Ok(out)
}

fn folded(y: &SVector<f64, 7>) -> LorentzState {
    let mut position: Vec3 = y.fixed_rows::<3>(0).into();
    let mut velocity: Vec3 = y.fixed_rows::<3>(3).into();
    let mut fold_sign = 1.0;
    if position.z < 0.0 {
        position.z = -position.z;
        velocity.z = -velocity.z;
        fold_sign = -1.0;
    }
    LorentzState {
        position,
        velocity,
        fold_sign,
        charge: y[6],
    }
}

fn diagnostics(y: &SVector<f64, 7>) -> Diagnostics {
    let v: Vec3 = y.fixed_rows::<3>(3).into();
    let z = y[6];
    Diagnostics {
        energy: 0.5 * v.norm_squared() + 0.5 * z * z,
        momentum_norm: z.abs(),
        stratum: BasePoint::fold(&y.fixed_rows::<3>(0).into())
            .stratum()
            .label(),
        charge: z,
    }
}

/// Geodesic curvature estimated from the sampled positions by central
/// differences, skipping samples whose stencil straddles a fold.
/// Returns `(time, κ_g)` pairs.
pub fn geodesic_curvature_profile(traj: &Trajectory<LorentzState>) -> Vec<(f64, f64)> {
    let times = traj.times();
    let states = traj.states();
    let mut out = Vec::new();
    for k in 1..states.len().saturating_sub(1) {
        let (a, b, c) = (&states[k - 1], &states[k], &states[k + 1]);
        if a.fold_sign != b.fold_sign || b.fold_sign != c.fold_sign {
            continue;
        }
        let h = 0.5 * (times[k + 1] - times[k - 1]);
        let vel = (c.position - a.position) / (2.0 * h);
        let acc = (c.position - b.position * 2.0 + a.position) / (h * h);
        let n = b.position / b.position.norm();
        let speed2 = vel.norm_squared();
        if speed2 == 0.0 {
            continue;
        }
        let tangent = vel / libm::sqrt(speed2);
        let mut normal = acc - n * acc.dot(&n);
        normal -= tangent * normal.dot(&tangent);
        out.push((times[k], normal.norm() / speed2));
    }
    out
}

/// Incidence and reflection angles at one equator crossing of a folded path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    /// Estimated crossing time.
    pub time: f64,
    /// Angle between incoming velocity and the equator plane.
    pub incidence: f64,
    /// Angle between outgoing velocity and the equator plane.
    pub reflection: f64,
    /// Distance between the two one-sided extrapolations at the crossing.
    pub position_gap: f64,
}

const STENCIL: usize = 4;

/// Cubic extrapolation of the samples on each side of every crossing.
pub fn reflection_residuals(traj: &Trajectory<LorentzState>) -> Vec<Reflection> {
    let times = traj.times();
    let states = traj.states();
    let mut out = Vec::new();
    if states.len() < 2 * STENCIL {
        return out;
    }
    for k in (STENCIL - 1)..(states.len() - STENCIL) {
        if states[k].fold_sign == states[k + 1].fold_sign {
            continue;
        }
        let pre = k + 1 - STENCIL..k + 1;
        let post = k + 1..k + 1 + STENCIL;
        let pre_sign = states[k].fold_sign;
        let post_sign = states[k + 1].fold_sign;
        if pre.clone().any(|i| states[i].fold_sign != pre_sign)
            || post.clone().any(|i| states[i].fold_sign != post_sign)
        {
            continue;
        }
        let pt: Vec<f64> = pre.clone().map(|i| times[i]).collect();
        let pp: Vec<Vec3> = pre.map(|i| states[i].position).collect();
        let qt: Vec<f64> = post.clone().map(|i| times[i]).collect();
        let qp: Vec<Vec3> = post.map(|i| states[i].position).collect();
        // Bisect the incoming height on the sample gap.
        let (mut lo, mut hi) = (times[k], times[k + 1]);
        if lagrange(&pt, &pp, hi).z > 0.0 {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if lagrange(&pt, &pp, mid).z > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let ts = 0.5 * (lo + hi);
        let vin = lagrange_derivative(&pt, &pp, ts);
        let vout = lagrange_derivative(&qt, &qp, ts);
        let angle = |v: &Vec3| libm::atan2(v.z.abs(), libm::hypot(v.x, v.y));
        out.push(Reflection {
            time: ts,
            incidence: angle(&vin),
            reflection: angle(&vout),
            position_gap: (lagrange(&pt, &pp, ts) - lagrange(&qt, &qp, ts)).norm(),
        });
    }
    out
}

fn lagrange(ts: &[f64], ys: &[Vec3], t: f64) -> Vec3 {
    let mut acc = Vec3::zeros();
    for (i, y) in ys.iter().enumerate() {
        let mut w = 1.0;
        for (j, tj) in ts.iter().enumerate() {
            if i != j {
                w *= (t - tj) / (ts[i] - tj);
            }
        }
        acc += y * w;
    }
    acc
}

fn lagrange_derivative(ts: &[f64], ys: &[Vec3], t: f64) -> Vec3 {
    let mut acc = Vec3::zeros();
    for (i, y) in ys.iter().enumerate() {
        let mut denom = 1.0;
        for (j, tj) in ts.iter().enumerate() {
            if i != j {
                denom *= ts[i] - tj;
            }
        }
        let mut num = 0.0;
        for m in 0..ts.len() {
            if m == i {
                continue;
            }
            let mut prod = 1.0;
            for (j, tj) in ts.iter().enumerate() {
                if j != i && j != m {
                    prod *= t - tj;
                }
            }
            num += prod;
        }
        acc += y * (num / denom);
    }
    acc
}
