use nalgebra::{SVector, Vector2};

use crate::bundle::{left_i, FramePoint, Vec3, Vec4};
use crate::strata::{SpinClass, SpinStratum};
use crate::{Error, Result};

use super::kks::reduced_spin_form;
use super::reduction::{reduced_hamiltonian, ReducedState};
use super::{check_horizon, rk4, step_count, Diagnostics, Trajectory};

/// Distance to a pole at which the spin chart is abandoned.
pub const POLE_ALARM: f64 = 1e-6;

type State = SVector<f64, 11>;

/// `u_1 u_1^T + u_2 u_2^T` on the normal-form coordinates.
fn row_gram(u: &Vec4) -> nalgebra::Matrix2<f64> {
    let u1 = Vector2::new(u[0], u[1]);
    let u2 = Vector2::new(u[2], u[3]);
    u1 * u1.transpose() + u2 * u2.transpose()
}

fn normal_form(q: &Vec4) -> Vec4 {
    Vec4::new(q[0], -q[1], q[2], -q[3])
}

/// `Π^{-1} w` with `w = (x2, -x1)`; zero when `w` vanishes.
fn coupling_multiplier(q: &Vec4, x: &Vec3) -> Result<Vector2<f64>> {
    let w = Vector2::new(x[1], -x[0]);
    if w == Vector2::zeros() {
        return Ok(w);
    }
    let inv = row_gram(&normal_form(q))
        .try_inverse()
        .ok_or(Error::SingularConfig)?;
    Ok(inv * w)
}

/// Coupling energy `<w, Π^{-1} w> / 2` of a spin at a frame: the
/// complement part of the locked kinetic energy.
pub fn coupling_potential(q: &Vec4, x: &Vec3) -> Result<f64> {
    let m = coupling_multiplier(q, x)?;
    Ok(0.5 * m.dot(&Vector2::new(x[1], -x[0])))
}

/// Gradients of [`coupling_potential`] in the frame (ambient `R^4`) and
/// in the spin vector.
fn coupling_gradients(q: &Vec4, x: &Vec3) -> Result<(Vec4, Vec3)> {
    let m = coupling_multiplier(q, x)?;
    let u = normal_form(q);
    let u1 = Vector2::new(u[0], u[1]);
    let u2 = Vector2::new(u[2], u[3]);
    let g1 = -m * m.dot(&u1);
    let g2 = -m * m.dot(&u2);
    let dq = Vec4::new(g1[0], -g1[1], g2[0], -g2[1]);
    let dx = Vec3::new(-m[1], m[0], 0.0);
    Ok((dq, dx))
}

/// Hamiltonian vector field on the spin sphere for the differential `dh`,
/// computed from the numerically reduced orbit form.
pub fn spin_velocity(x: &Vec3, dh: &Vec3) -> Result<Vec3> {
    let n = x / x.norm();
    let seed = if n.x.abs() < 0.6 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let ea = (seed - n * n.dot(&seed)).normalize();
    let eb = n.cross(&ea);
    let gab = reduced_spin_form(x, &ea, &eb)?;
    if gab == 0.0 {
        return Err(Error::SectionFailure {
            reason: "degenerate spin form",
        });
    }
    // The spin factor carries the form -γ.
    let xa = -dh.dot(&eb) / gab;
    let xb = dh.dot(&ea) / gab;
    Ok(ea * xa + eb * xb)
}

fn rhs(y: &State) -> Result<State> {
    let q: Vec4 = y.fixed_rows::<4>(0).into();
    let pi: Vec4 = y.fixed_rows::<4>(4).into();
    let x: Vec3 = y.fixed_rows::<3>(8).into();
    let (dq, dx) = coupling_gradients(&q, &x)?;
    let qn = q.norm_squared();
    let force = dq - q * (dq.dot(&q) / qn);
    let xdot = if dx == Vec3::zeros() {
        Vec3::zeros()
    } else {
        spin_velocity(&x, &dx)?
    };
    let mut d = State::zeros();
    d.fixed_rows_mut::<4>(0).copy_from(&pi);
    d.fixed_rows_mut::<4>(4)
        .copy_from(&(-force - q * (pi.norm_squared() / qn)));
    d.fixed_rows_mut::<3>(8).copy_from(&xdot);
    Ok(d)
}

fn pack(r: &ReducedState) -> State {
    let mut y = State::zeros();
    y.fixed_rows_mut::<4>(0).copy_from(r.frame.coords());
    y.fixed_rows_mut::<4>(4).copy_from(&r.lifted_covector());
    y.fixed_rows_mut::<3>(8).copy_from(r.spin.vector());
    y
}

/// Projects back onto the constraint set and the section gauge.
fn unpack(y: &State, s: f64) -> Result<ReducedState> {
    let frame = FramePoint::normalized(y.fixed_rows::<4>(0).into())?;
    let x: Vec3 = y.fixed_rows::<3>(8).into();
    let spin = SpinClass::projected(x, s)?;
    let pi: Vec4 = y.fixed_rows::<4>(4).into();
    Ok(ReducedState::horizontal_part(frame, pi, spin).canonical())
}

fn integrate(
    r: &ReducedState,
    t: f64,
    h: f64,
    mut observe: impl FnMut(f64, &ReducedState) -> Result<()>,
) -> Result<()> {
    check_horizon(t, h)?;
    let s = r.spin.scale();
    let n = step_count(t, h);
    let dt = t / n as f64;
    let mut state = r.canonical();
    observe(0.0, &state)?;
    for k in 1..=n {
        let y = rk4(&pack(&state), dt, rhs)?;
        state = unpack(&y, s)?;
        observe(k as f64 * dt, &state)?;
    }
    Ok(())
}

/// Minimal-coupling flow on the regular spin stratum, integrated in the
/// section gauge with per-step re-projection onto `J_W^{-1}(0)`.
pub fn mcf_flow(r: &ReducedState, t: f64, h: f64) -> Result<Trajectory<ReducedState>> {
    if r.spin.stratum() == SpinStratum::Pole || r.spin.pole_distance() < POLE_ALARM {
        return Err(Error::PoleCrossing {
            time: 0.0,
            distance: r.spin.pole_distance(),
        });
    }
    let mut out = Trajectory::new();
    integrate(r, t, h, |time, st| {
        let distance = st.spin.pole_distance();
        if distance < POLE_ALARM {
            return Err(Error::PoleCrossing { time, distance });
        }
        out.push(
            time,
            *st,
            Diagnostics {
                energy: reduced_hamiltonian(st)?,
                momentum_norm: st.spin.vector().norm(),
                stratum: st.spin.stratum().label(),
                charge: st.spin.charge(),
            },
        );
        Ok(())
    })?;
    Ok(out)
}

/// The same upstairs integrator with the spin pinned at a pole: the frame
/// follows a geodesic of `S^3` with vertical momentum equal to the charge.
pub fn pole_frame_flow(r: &ReducedState, t: f64, h: f64) -> Result<Trajectory<ReducedState>> {
    if r.spin.stratum() != SpinStratum::Pole {
        return Err(Error::InvalidArgument("spin is not at a pole"));
    }
    let mut out = Trajectory::new();
    integrate(r, t, h, |time, st| {
        let z = st.spin.charge();
        let iq = left_i(st.frame.coords());
        debug_assert!(st.p0.dot(&iq).abs() < 1e-10);
        out.push(
            time,
            *st,
            Diagnostics {
                energy: 0.5 * st.p0.norm_squared() + 0.5 * z * z,
                momentum_norm: st.spin.scale(),
                stratum: st.spin.stratum().label(),
                charge: z,
            },
        );
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::reduction::{lift, locked_inertia_solve};
    use crate::liealg::pairing;

    fn state() -> ReducedState {
        let f = FramePoint::normalized(Vec4::new(0.7, 0.2, 0.3, -0.6)).unwrap();
        let spin = SpinClass::projected(Vec3::new(0.4, -0.3, 0.5), 1.2).unwrap();
        ReducedState::horizontal_part(f, Vec4::new(0.1, 0.5, -0.2, 0.3), spin)
    }

    #[test]
    fn potential_matches_locked_inertia() {
        let r = state();
        let lambda = r.spin.representative();
        let x = locked_inertia_solve(&r.frame.embed(), &lambda).unwrap();
        let full = 0.5 * pairing(&lambda, &x);
        let z = r.spin.charge();
        let v = coupling_potential(r.frame.coords(), r.spin.vector()).unwrap();
        assert!((full - 0.5 * z * z - v).abs() < 1e-13);
        let s = lift(&r).unwrap();
        assert!((s.energy() - 0.5 * r.lifted_covector().norm_squared() - v).abs() < 1e-13);
    }

    #[test]
    fn gradients_match_difference_quotients() {
        let r = state();
        let (q, x) = (*r.frame.coords(), *r.spin.vector());
        let (dq, dx) = coupling_gradients(&q, &x).unwrap();
        let e = 1e-6;
        for i in 0..4 {
            let mut d = Vec4::zeros();
            d[i] = e;
            let fd = (coupling_potential(&(q + d), &x).unwrap()
                - coupling_potential(&(q - d), &x).unwrap())
                / (2.0 * e);
            assert!((fd - dq[i]).abs() < 1e-7);
        }
        for i in 0..3 {
            let mut d = Vec3::zeros();
            d[i] = e;
            let fd = (coupling_potential(&q, &(x + d)).unwrap()
                - coupling_potential(&q, &(x - d)).unwrap())
                / (2.0 * e);
            assert!((fd - dx[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn spin_velocity_is_tangent() {
        let x = Vec3::new(0.4, -0.3, 0.5);
        let v = spin_velocity(&x, &Vec3::new(0.2, 0.7, -0.1)).unwrap();
        assert!(v.dot(&x).abs() < 1e-12);
    }

    #[test]
    fn pole_is_rejected() {
        let f = FramePoint::normalized(Vec4::new(0.7, 0.2, 0.3, -0.6)).unwrap();
        let spin = SpinClass::new(Vec3::new(0.0, 0.0, 1.0), 1.0).unwrap();
        let r = ReducedState::horizontal_part(f, Vec4::zeros(), spin);
        assert!(matches!(
            mcf_flow(&r, 1.0, 1e-3),
            Err(Error::PoleCrossing { .. })
        ));
    }
}
