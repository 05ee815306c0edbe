use crate::liealg::Pair5;
use crate::momenta::{mu_full, PhasePoint};
use crate::strata::classify_phase;
use crate::{Error, Result};

use super::{check_horizon, step_count, Diagnostics, Trajectory};

const MAX_NEWTON: usize = 50;

/// `SO(5)`-invariant Hamiltonians `|p|^2 / 2 + U(q)` on `T*S^9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hamiltonian {
    Free,
    /// `U = strength * (|q1|^2 |q2|^2 - (q1·q2)^2)`, the Gram determinant.
    GramCoupling {
        strength: f64,
    },
}

impl Hamiltonian {
    pub fn potential(&self, q: &Pair5) -> f64 {
        match *self {
            Self::Free => 0.0,
            Self::GramCoupling { strength } => {
                let (q1, q2) = (q.column(0), q.column(1));
                strength
                    * (q1.norm_squared() * q2.norm_squared() - {
                        let c = q1.dot(&q2);
                        c * c
                    })
            }
        }
    }

    pub fn gradient(&self, q: &Pair5) -> Pair5 {
        match *self {
            Self::Free => Pair5::zeros(),
            Self::GramCoupling { strength } => {
                let (q1, q2) = (q.column(0), q.column(1));
                let c = q1.dot(&q2);
                let mut g = Pair5::zeros();
                g.set_column(0, &((q1 * q2.norm_squared() - q2 * c) * (2.0 * strength)));
                g.set_column(1, &((q2 * q1.norm_squared() - q1 * c) * (2.0 * strength)));
                g
            }
        }
    }

    pub fn energy(&self, s: &PhasePoint) -> f64 {
        s.energy() + self.potential(&s.q)
    }
}

/// One RATTLE step for the holonomic constraint `|q| = 1`.
pub fn rattle_step(s: &PhasePoint, h: f64, hamiltonian: &Hamiltonian) -> Result<PhasePoint> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    let c = 0.5 * h * h;
    let free = s.q + (s.p - hamiltonian.gradient(&s.q) * (0.5 * h)) * h;
    // |free - c Λ q|^2 = 1, solved for the position multiplier Λ.
    let mut lambda = 0.0;
    let mut converged = false;
    for _ in 0..MAX_NEWTON {
        let r = free - s.q * (c * lambda);
        let f = r.norm_squared() - 1.0;
        if f.abs() < 1e-15 {
            converged = true;
            break;
        }
        let df = -2.0 * c * r.dot(&s.q);
        if df == 0.0 {
            break;
        }
        lambda -= f / df;
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            iterations: MAX_NEWTON,
        });
    }
    let p_half = s.p - (hamiltonian.gradient(&s.q) + s.q * lambda) * (0.5 * h);
    let q = s.q + p_half * h;
    let q = q / q.norm();
    let p = p_half - hamiltonian.gradient(&q) * (0.5 * h);
    // The velocity multiplier has a closed form.
    let p = p - q * q.dot(&p);
    Ok(PhasePoint { q, p })
}

/// Runs `ceil(t / h)` RATTLE steps, recording every sample.
pub fn rattle_trajectory(
    s: &PhasePoint,
    t: f64,
    h: f64,
    hamiltonian: &Hamiltonian,
) -> Result<Trajectory<PhasePoint>> {
    check_horizon(t, h)?;
    let n = step_count(t, h);
    let dt = t / n as f64;
    let mut out = Trajectory::new();
    let mut state = *s;
    out.push(0.0, state, phase_diagnostics(&state, hamiltonian));
    for k in 1..=n {
        state = rattle_step(&state, dt, hamiltonian)?;
        out.push(k as f64 * dt, state, phase_diagnostics(&state, hamiltonian));
    }
    Ok(out)
}

/// Energy, `|μ|`, isotropy label and w0-charge of a phase point.
pub fn phase_diagnostics(s: &PhasePoint, hamiltonian: &Hamiltonian) -> Diagnostics {
    let m = mu_full(s).value;
    Diagnostics {
        energy: hamiltonian.energy(s),
        momentum_norm: m.norm(),
        stratum: classify_phase(s).tag.label(),
        charge: crate::momenta::w0_coordinate(&m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::geodesic_flow;

    fn sample() -> PhasePoint {
        let q = Pair5::from_column_slice(&[0.3, -0.1, 0.5, 0.2, 0.0, 0.4, 0.1, -0.6, 0.2, 0.1]);
        let p = Pair5::from_column_slice(&[1.0, 0.2, -0.3, 0.5, 0.7, -0.2, 0.4, 0.1, 0.0, -0.9]);
        let s = PhasePoint::projected(q, p);
        PhasePoint {
            q: s.q,
            p: s.p / s.p.norm(),
        }
    }

    #[test]
    fn free_matches_great_circle() {
        let s = sample();
        let mut r = s;
        for _ in 0..1000 {
            r = rattle_step(&r, 1e-3, &Hamiltonian::Free).unwrap();
        }
        let exact = geodesic_flow(&s, 1.0);
        assert!((r.q - exact.q).norm() < 1e-6);
    }

    #[test]
    fn constraints_hold_each_step() {
        let h = Hamiltonian::GramCoupling { strength: 2.0 };
        let mut r = sample();
        for _ in 0..200 {
            r = rattle_step(&r, 1e-2, &h).unwrap();
            assert!((r.q.norm() - 1.0).abs() < 1e-12);
            assert!(r.q.dot(&r.p).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_difference_quotient() {
        let h = Hamiltonian::GramCoupling { strength: 1.5 };
        let q = sample().q;
        let g = h.gradient(&q);
        for i in 0..10 {
            let mut e = Pair5::zeros();
            e[i] = 1e-6;
            let fd = (h.potential(&(q + e)) - h.potential(&(q - e))) / 2e-6;
            assert!((fd - g[i]).abs() < 1e-8);
        }
    }
}
