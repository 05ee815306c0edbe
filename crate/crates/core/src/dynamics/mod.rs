//! The two dynamics engines and their comparison.
//!
//! Engine (a) is the free geodesic flow on `T*S^9` (closed form, plus a
//! RATTLE integrator for invariant potentials) followed by reduction of each
//! sample. Engine (b) integrates the reduced systems directly: the
//! minimal-coupling system on the regular spin stratum, and Lorentz or Wong
//! motion on `B0` when the spin sits at a pole.

use alloc::vec::Vec;

use nalgebra::SVector;

use crate::Result;

mod compare;
mod geodesic;
mod kks;
mod lorentz;
mod mcf;
mod rattle;
mod reduction;

pub use compare::{
    compare_engines, compare_samples, full_engine_samples, reduced_engine_samples, sample_times,
    CompareReport, EngineSample, Tolerances,
};
pub use geodesic::geodesic_flow;
pub use kks::{kks_form, kks_reduced_form, orbit_tangent_preimage, reduced_spin_form};
pub use lorentz::{
    geodesic_curvature_profile, lorentz_flow, reflection_residuals, wong_flow, LorentzState,
    Reflection, MAX_ARC_STEP,
};
pub use mcf::{coupling_potential, mcf_flow, pole_frame_flow, spin_velocity, POLE_ALARM};
pub use rattle::{phase_diagnostics, rattle_step, rattle_trajectory, Hamiltonian};
pub use reduction::{
    base_of_config, coupling_frequencies, k_matrix, lift, locked_inertia_solve,
    normal_form_rotation, project_to_reduced, reduced_hamiltonian, velocity_generator,
    ReducedState,
};

/// Per-sample diagnostics recorded alongside a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub energy: f64,
    /// Norm of the conserved momentum (`|μ|` upstairs, the orbit scale or
    /// `|charge|` downstairs).
    pub momentum_norm: f64,
    pub stratum: &'static str,
    /// The w0-charge, where meaningful.
    pub charge: f64,
}

/// Sampled trajectory with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    times: Vec<f64>,
    states: Vec<S>,
    diagnostics: Vec<Diagnostics>,
}

impl<S> Default for Trajectory<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> Trajectory<S> {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Appends a sample.
    ///
    /// # Panics
    /// If `t` does not exceed the previous time.
    pub fn push(&mut self, t: f64, state: S, diag: Diagnostics) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "trajectory times must increase");
        }
        self.times.push(t);
        self.states.push(state);
        self.diagnostics.push(diag);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn diagnostics(&self) -> &[Diagnostics] {
        &self.diagnostics
    }

    pub fn last(&self) -> Option<(&f64, &S)> {
        self.times.last().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S, &Diagnostics)> {
        self.times
            .iter()
            .zip(self.states.iter())
            .zip(self.diagnostics.iter())
            .map(|((t, s), d)| (*t, s, d))
    }
}

/// Number of uniform steps covering `[0, t]` with step at most `h`.
pub(crate) fn step_count(t: f64, h: f64) -> usize {
    let n = libm::ceil(t / h - 1e-9);
    if n < 1.0 {
        1
    } else {
        n as usize
    }
}

pub(crate) fn check_horizon(t: f64, h: f64) -> Result<()> {
    if !t.is_finite() || t <= 0.0 {
        return Err(crate::Error::InvalidArgument("horizon must be positive"));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(crate::Error::InvalidArgument("step must be positive"));
    }
    Ok(())
}

/// Classical fourth-order Runge-Kutta step.
pub(crate) fn rk4<const N: usize>(
    y: &SVector<f64, N>,
    h: f64,
    f: impl Fn(&SVector<f64, N>) -> Result<SVector<f64, N>>,
) -> Result<SVector<f64, N>> {
    let k1 = f(y)?;
    let k2 = f(&(y + k1 * (0.5 * h)))?;
    let k3 = f(&(y + k2 * (0.5 * h)))?;
    let k4 = f(&(y + k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}
