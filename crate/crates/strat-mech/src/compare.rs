//! Seeded suite comparing the lift-flow-project engine with the reduced
//! engine. The two engines of each case run on separate threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use strat_mech_core::dynamics::{
    compare_samples, full_engine_samples, reduced_engine_samples, sample_times, ReducedState,
    Tolerances,
};
use strat_mech_core::sample::{self, RegularSampling};

use crate::config::{CompareConfig, SpinRegion};
use crate::error::CliResult;
use crate::simulate::random_reduced;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub seed: u64,
    pub scale: f64,
    pub spin_stratum: &'static str,
    pub aligned: usize,
    pub max_base_distance: f64,
    pub max_spin_distance: f64,
    pub max_energy_discrepancy: f64,
    pub pass: bool,
    /// Engine failure, if either engine refused to run.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    pub horizon: f64,
    pub step: f64,
    pub reduced_step: f64,
    pub tol_base: f64,
    pub tol_spin: f64,
    pub tol_energy: f64,
    pub cases: Vec<CaseReport>,
    pub max_base_distance: f64,
    pub max_spin_distance: f64,
    pub max_energy_discrepancy: f64,
    pub pass: bool,
}

impl CompareSummary {
    pub fn engine_failed(&self) -> bool {
        self.cases.iter().any(|c| c.error.is_some())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "compare: horizon {}, step {} (reduced {}), tolerances base {:e} spin {:e} energy {:e}\n",
            self.horizon, self.step, self.reduced_step, self.tol_base, self.tol_spin, self.tol_energy
        );
        for c in &self.cases {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  seed {:>4} s={:.4} {:<7} base {:.3e} spin {:.3e} energy {:.3e} {verdict}",
                c.seed,
                c.scale,
                c.spin_stratum,
                c.max_base_distance,
                c.max_spin_distance,
                c.max_energy_discrepancy
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!(" ({e})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "worst: base {:.3e} spin {:.3e} energy {:.3e}\n{}\n",
            self.max_base_distance,
            self.max_spin_distance,
            self.max_energy_discrepancy,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Initial condition of one case, drawn from its own seed.
pub fn case_state(cfg: &CompareConfig, seed: u64) -> ReducedState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (cfg.scale, cfg.region) {
        (None, SpinRegion::Regular) => sample::regular_state(&mut rng, &RegularSampling::default()),
        (Some(s), region) => random_reduced(&mut rng, s, region, None),
        (None, SpinRegion::Pole) => {
            let (lo, hi) = RegularSampling::default().scale;
            let s = rng.random_range(lo..hi);
            random_reduced(&mut rng, s, SpinRegion::Pole, None)
        }
    }
}

fn run_case(cfg: &CompareConfig, seed: u64) -> CaseReport {
    let r0 = case_state(cfg, seed);
    let reduced_step = cfg.reduced_step.unwrap_or(cfg.step);
    let tol = Tolerances {
        base: cfg.tol_base,
        spin: cfg.tol_spin,
        energy: cfg.tol_energy,
    };
    let times = sample_times(cfg.horizon, cfg.step);
    let (full, reduced) = std::thread::scope(|scope| {
        let full = scope.spawn(|| full_engine_samples(&r0, &times));
        let reduced = scope.spawn(|| reduced_engine_samples(&r0, cfg.horizon, reduced_step));
        (
            full.join().expect("full engine thread panicked"),
            reduced.join().expect("reduced engine thread panicked"),
        )
    });
    let mut report = CaseReport {
        seed,
        scale: r0.spin.scale(),
        spin_stratum: r0.spin.stratum().label(),
        aligned: 0,
        max_base_distance: f64::INFINITY,
        max_spin_distance: f64::INFINITY,
        max_energy_discrepancy: f64::INFINITY,
        pass: false,
        error: None,
    };
    match (full, reduced) {
        (Ok(a), Ok(b)) => {
            let r = compare_samples(&a, &b, &tol);
            report.aligned = r.aligned;
            report.max_base_distance = r.max_base_distance;
            report.max_spin_distance = r.max_spin_distance;
            report.max_energy_discrepancy = r.max_energy_discrepancy;
            report.pass = r.pass;
        }
        (Err(e), _) => report.error = Some(format!("full engine: {e}")),
        (_, Err(e)) => report.error = Some(format!("reduced engine: {e}")),
    }
    log::debug!("case seed {seed}: pass = {}", report.pass);
    report
}

/// Runs every case; cases are processed in parallel batches, each case
/// joining its two engine threads before reporting.
pub fn run(cfg: &CompareConfig, base_seed: u64) -> CliResult<CompareSummary> {
    cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.cases as u64)
        .map(|i| base_seed.wrapping_add(i))
        .collect();
    let batch = std::thread::available_parallelism()
        .map(|n| (n.get() / 2).max(1))
        .unwrap_or(1);
    let mut cases = Vec::with_capacity(seeds.len());
    for chunk in seeds.chunks(batch) {
        let done: Vec<CaseReport> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&seed| scope.spawn(move || run_case(cfg, seed)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("case thread panicked"))
                .collect()
        });
        cases.extend(done);
    }
    let worst = |f: fn(&CaseReport) -> f64| cases.iter().map(f).fold(0.0, f64::max);
    Ok(CompareSummary {
        horizon: cfg.horizon,
        step: cfg.step,
        reduced_step: cfg.reduced_step.unwrap_or(cfg.step),
        tol_base: cfg.tol_base,
        tol_spin: cfg.tol_spin,
        tol_energy: cfg.tol_energy,
        max_base_distance: worst(|c| c.max_base_distance),
        max_spin_distance: worst(|c| c.max_spin_distance),
        max_energy_discrepancy: worst(|c| c.max_energy_discrepancy),
        pass: cases.iter().all(|c| c.pass),
        cases,
    })
}
