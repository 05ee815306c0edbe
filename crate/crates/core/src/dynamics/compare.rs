use alloc::vec::Vec;

use nalgebra::Vector3;

use crate::bundle::Vec3;
use crate::strata::{spin_from_momentum, SpinStratum};
use crate::{Error, Result};

use super::geodesic::geodesic_flow;
use super::lorentz::lorentz_flow;
use super::mcf::mcf_flow;
use super::reduction::{
    base_of_config, lift, project_to_reduced, reduced_hamiltonian, ReducedState,
};
use super::step_count;
use crate::momenta::mu_full;

/// One engine's view of a sample: folded base point, canonical spin vector
/// (absent where the reduction is undefined) and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSample {
    pub t: f64,
    pub base: Vec3,
    pub spin: Option<Vector3<f64>>,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub base: f64,
    pub spin: f64,
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            base: 1e-4,
            spin: 1e-4,
            energy: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareReport {
    pub aligned: usize,
    pub max_base_distance: f64,
    pub max_spin_distance: f64,
    pub max_energy_discrepancy: f64,
    pub pass: bool,
}

/// The uniform grid used by every engine for horizon `t` and step `h`.
pub fn sample_times(t: f64, h: f64) -> Vec<f64> {
    let n = step_count(t, h);
    let dt = t / n as f64;
    (0..=n).map(|k| k as f64 * dt).collect()
}

/// Engine (a): lift, exact geodesic flow, reduction of each sample.
pub fn full_engine_samples(r0: &ReducedState, times: &[f64]) -> Result<Vec<EngineSample>> {
    let s0 = lift(r0)?;
    let level = r0.spin.scale();
    times
        .iter()
        .map(|&t| {
            let s = geodesic_flow(&s0, t);
            let spin = match project_to_reduced(&s, Some(level)) {
                Ok(r) => Some(*r.spin.vector()),
                Err(Error::SingularConfig) => {
                    // On the configuration boundary only the pole spins occur;
                    // read the charge off the momentum directly.
                    let m = mu_full(&s).value;
                    spin_from_momentum(&m, level).ok().map(|c| *c.vector())
                }
                Err(e) => return Err(e),
            };
            Ok(EngineSample {
                t,
                base: *base_of_config(&s.q).position(),
                spin,
                energy: s.energy(),
            })
        })
        .collect()
}

/// Engine (b): the minimal-coupling flow, or the Lorentz flow at a pole.
pub fn reduced_engine_samples(r0: &ReducedState, t: f64, h: f64) -> Result<Vec<EngineSample>> {
    if r0.spin.stratum() == SpinStratum::Pole {
        let tr = lorentz_flow(&r0.base(), &r0.base_velocity(), r0.spin.charge(), t, h)?;
        let x = *r0.spin.vector();
        return Ok(tr
            .iter()
            .map(|(t, st, d)| EngineSample {
                t,
                base: st.position,
                spin: Some(x),
                energy: d.energy,
            })
            .collect());
    }
    let tr = mcf_flow(r0, t, h)?;
    tr.iter()
        .map(|(t, st, _)| {
            Ok(EngineSample {
                t,
                base: *st.base().position(),
                spin: Some(*st.spin.vector()),
                energy: reduced_hamiltonian(st)?,
            })
        })
        .collect()
}

fn quotient_distance(x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    let flipped = Vector3::new(-y[0], -y[1], y[2]);
    (x - y).norm().min((x - flipped).norm())
}

fn worst(acc: &mut f64, d: f64) {
    *acc = if d.is_nan() {
        f64::INFINITY
    } else {
        acc.max(d)
    };
}

/// Aligns samples by time and reports the worst discrepancies.
pub fn compare_samples(
    full: &[EngineSample],
    reduced: &[EngineSample],
    tol: &Tolerances,
) -> CompareReport {
    let mut report = CompareReport {
        aligned: 0,
        max_base_distance: 0.0,
        max_spin_distance: 0.0,
        max_energy_discrepancy: 0.0,
        pass: false,
    };
    let mut j = 0;
    for a in full {
        while j < reduced.len() && reduced[j].t < a.t - 1e-9 * a.t.abs().max(1.0) {
            j += 1;
        }
        let Some(b) = reduced.get(j) else { break };
        if (b.t - a.t).abs() > 1e-9 * a.t.abs().max(1.0) {
            continue;
        }
        report.aligned += 1;
        worst(&mut report.max_base_distance, (a.base - b.base).norm());
        if let (Some(x), Some(y)) = (a.spin, b.spin) {
            worst(&mut report.max_spin_distance, quotient_distance(&x, &y));
        }
        worst(
            &mut report.max_energy_discrepancy,
            (a.energy - b.energy).abs(),
        );
    }
    report.pass = report.aligned > 0
        && report.max_base_distance < tol.base
        && report.max_spin_distance < tol.spin
        && report.max_energy_discrepancy < tol.energy;
    report
}

/// Runs both engines from `r0` over `[0, t]` and compares them. The full
/// engine is sampled on the grid of `h_full`; the reduced engine steps with
/// `h_reduced`, and only common sample times are compared.
pub fn compare_engines(
    r0: &ReducedState,
    t: f64,
    h_full: f64,
    h_reduced: f64,
    tol: &Tolerances,
) -> Result<CompareReport> {
    let full = full_engine_samples(r0, &sample_times(t, h_full))?;
    let reduced = reduced_engine_samples(r0, t, h_reduced)?;
    Ok(compare_samples(&full, &reduced, tol))
}
