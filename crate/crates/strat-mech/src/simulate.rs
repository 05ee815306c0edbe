//! Initial conditions and the four trajectory engines.

use nalgebra::{Vector3, Vector4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strat_mech_core::bundle::{BasePoint, FramePoint};
use strat_mech_core::dynamics::{
    base_of_config, coupling_frequencies, geodesic_curvature_profile, geodesic_flow, lift,
    lorentz_flow, mcf_flow, phase_diagnostics, pole_frame_flow, project_to_reduced, rattle_step,
    sample_times, wong_flow, Diagnostics, Hamiltonian, LorentzState, ReducedState, Trajectory,
};
use strat_mech_core::liealg::Pair5;
use strat_mech_core::momenta::PhasePoint;
use strat_mech_core::sample::{self, RegularSampling};
use strat_mech_core::strata::{SpinClass, SpinStratum};
use strat_mech_core::Error;

use crate::config::{Engine, FullMethod, InitialSpec, SimulateConfig, SpinRegion};
use crate::error::{CliError, CliResult};
use crate::io::{Cell, Table};

/// Minimum base height of seeded frames.
const RANDOM_MIN_HEIGHT: f64 = 0.3;

/// Seeded reduced state over the requested spin region at orbit scale `s`.
pub fn random_reduced(
    rng: &mut ChaCha8Rng,
    s: f64,
    region: SpinRegion,
    speed: Option<f64>,
) -> ReducedState {
    let defaults = RegularSampling::default();
    let speed = speed.map_or(defaults.speed, |v| (v, v));
    match region {
        SpinRegion::Regular => sample::regular_state(
            rng,
            &RegularSampling {
                scale: (s, s),
                speed,
                ..defaults
            },
        ),
        SpinRegion::Pole => {
            let f = sample::frame(rng, RANDOM_MIN_HEIGHT);
            let v = if speed.1 > speed.0 {
                rng.random_range(speed.0..speed.1)
            } else {
                speed.0
            };
            let p0 = sample::horizontal(rng, &f, v);
            let z = if rng.random_bool(0.5) { s } else { -s };
            let spin = SpinClass::new(Vector3::new(0.0, 0.0, z), s).expect("pole on the sphere");
            ReducedState::new(f, p0, spin).expect("horizontal by construction")
        }
    }
}

fn phase_point(
    q1: &[f64; 5],
    q2: &[f64; 5],
    p1: &[f64; 5],
    p2: &[f64; 5],
) -> CliResult<PhasePoint> {
    let q = Pair5::from_columns(&[(*q1).into(), (*q2).into()]);
    let p = Pair5::from_columns(&[(*p1).into(), (*p2).into()]);
    PhasePoint::new(q, p).map_err(|e| CliError::invalid("phase point", e))
}

fn reduced_state(
    frame: &[f64; 4],
    p0: &[f64; 4],
    spin: &[f64; 3],
    s: f64,
) -> CliResult<ReducedState> {
    let f = FramePoint::new(Vector4::from(*frame)).map_err(|e| CliError::invalid("frame", e))?;
    let spin = SpinClass::new(Vector3::from(*spin), s).map_err(|e| CliError::invalid("spin", e))?;
    ReducedState::new(f, Vector4::from(*p0), spin)
        .map_err(|e| CliError::invalid("reduced state", e))
}

/// Initial data in the form each engine consumes.
#[derive(Debug, Clone, Copy)]
enum Start {
    Phase(PhasePoint),
    Reduced(ReducedState),
    Base {
        base: BasePoint,
        velocity: Vector3<f64>,
        charge: f64,
    },
}

fn base_from_reduced(r: &ReducedState) -> Start {
    Start::Base {
        base: r.base(),
        velocity: r.base_velocity(),
        charge: r.spin.charge(),
    }
}

fn build_start(cfg: &SimulateConfig, rng: &mut ChaCha8Rng) -> CliResult<Start> {
    let s = cfg.scale;
    let wants_base = matches!(cfg.engine, Engine::ReducedLorentz | Engine::Wong);
    let start = match &cfg.initial {
        InitialSpec::Random { region, speed } => {
            let region = match (cfg.engine, region) {
                (Engine::ReducedLorentz, Some(SpinRegion::Regular)) => {
                    return Err(CliError::Validation(
                        "the Lorentz engine needs a pole spin region".into(),
                    ))
                }
                (Engine::ReducedLorentz | Engine::Wong, _) => SpinRegion::Pole,
                (_, r) => r.unwrap_or_default(),
            };
            let r = random_reduced(rng, s, region, *speed);
            match cfg.engine {
                Engine::Full => Start::Phase(lift(&r).map_err(|e| CliError::invalid("lift", e))?),
                Engine::ReducedMcf => Start::Reduced(r),
                Engine::ReducedLorentz => base_from_reduced(&r),
                Engine::Wong => Start::Base {
                    base: r.base(),
                    velocity: r.base_velocity(),
                    charge: rng.random_range(-s..=s),
                },
            }
        }
        InitialSpec::Reduced { frame, p0, spin } => {
            let r = reduced_state(frame, p0, spin, s)?;
            match cfg.engine {
                Engine::Full => Start::Phase(lift(&r).map_err(|e| CliError::invalid("lift", e))?),
                _ if wants_base => base_from_reduced(&r),
                _ => Start::Reduced(r),
            }
        }
        InitialSpec::Phase { q1, q2, p1, p2 } => {
            let p = phase_point(q1, q2, p1, p2)?;
            if cfg.engine == Engine::Full {
                Start::Phase(p)
            } else {
                let r = project_to_reduced(&p, Some(s))
                    .map_err(|e| CliError::invalid("reduction of the phase point", e))?;
                if wants_base {
                    base_from_reduced(&r)
                } else {
                    Start::Reduced(r)
                }
            }
        }
        InitialSpec::Base {
            position,
            velocity,
            charge,
        } => {
            if !wants_base {
                return Err(CliError::Validation(format!(
                    "a base initial condition needs engine reduced-lorentz or wong, not {}",
                    cfg.engine.label()
                )));
            }
            let [x, y, z] = *position;
            let base = BasePoint::new(x, y, z).map_err(|e| CliError::invalid("base point", e))?;
            Start::Base {
                base,
                velocity: Vector3::from(*velocity),
                charge: *charge,
            }
        }
    };
    if let (Engine::ReducedLorentz, Start::Base { charge, .. }) = (cfg.engine, &start) {
        if (charge.abs() - s).abs() > 1e-12 * s {
            return Err(CliError::Validation(format!(
                "the Lorentz engine needs charge = ±s = ±{s}, got {charge}"
            )));
        }
    }
    if let (Engine::ReducedMcf, Start::Reduced(r)) = (cfg.engine, &start) {
        if r.spin.stratum() == SpinStratum::Regular
            && r.spin.pole_distance() <= strat_mech_core::dynamics::POLE_ALARM
        {
            return Err(CliError::Validation(
                "spin is within the pole alarm distance; start exactly at the pole instead".into(),
            ));
        }
    }
    Ok(start)
}

fn integrator_error(e: Error) -> CliError {
    match e {
        Error::PoleCrossing { .. } | Error::ConvergenceFailure { .. } => {
            CliError::Integrator(e.to_string())
        }
        other => CliError::invalid("integrator precondition", other),
    }
}

const TAIL: [&str; 4] = ["energy", "momentum_norm", "stratum", "charge"];

fn tail(d: &Diagnostics) -> [Cell; 4] {
    [
        Cell::Num(d.energy),
        Cell::Num(d.momentum_norm),
        Cell::Tag(d.stratum.to_string()),
        Cell::Num(d.charge),
    ]
}

fn header(state: &[&str]) -> Table {
    let mut cols = vec!["t"];
    cols.extend_from_slice(state);
    cols.extend_from_slice(&TAIL);
    Table::new(&cols)
}

const PHASE_COLUMNS: [&str; 23] = [
    "q1_1", "q1_2", "q1_3", "q1_4", "q1_5", "q2_1", "q2_2", "q2_3", "q2_4", "q2_5", "p1_1", "p1_2",
    "p1_3", "p1_4", "p1_5", "p2_1", "p2_2", "p2_3", "p2_4", "p2_5", "base_x", "base_y", "base_z",
];

fn phase_row(t: f64, s: &PhasePoint, d: &Diagnostics) -> Vec<Cell> {
    let mut row = vec![Cell::Num(t)];
    row.extend(s.q.iter().chain(s.p.iter()).map(|v| Cell::Num(*v)));
    row.extend(
        base_of_config(&s.q)
            .position()
            .iter()
            .map(|v| Cell::Num(*v)),
    );
    row.extend(tail(d));
    row
}

fn full_table(start: &PhasePoint, cfg: &SimulateConfig) -> CliResult<Table> {
    let mut table = header(&PHASE_COLUMNS);
    let times = sample_times(cfg.horizon, cfg.step);
    match cfg.method {
        FullMethod::Exact => {
            for &t in &times {
                let s = geodesic_flow(start, t);
                table.push(phase_row(t, &s, &phase_diagnostics(&s, &Hamiltonian::Free)));
            }
        }
        FullMethod::Rattle => {
            let ham = if cfg.coupling == 0.0 {
                Hamiltonian::Free
            } else {
                Hamiltonian::GramCoupling {
                    strength: cfg.coupling,
                }
            };
            let dt = times[1] - times[0];
            let mut s = *start;
            table.push(phase_row(0.0, &s, &phase_diagnostics(&s, &ham)));
            for &t in &times[1..] {
                s = rattle_step(&s, dt, &ham)
                    .map_err(|e| CliError::Integrator(format!("{e} (step ending at t = {t})")))?;
                table.push(phase_row(t, &s, &phase_diagnostics(&s, &ham)));
            }
        }
    }
    Ok(table)
}

/// The last two columns are the squared coupling frequencies.
const REDUCED_COLUMNS: [&str; 16] = [
    "frame_1",
    "frame_2",
    "frame_3",
    "frame_4",
    "p0_1",
    "p0_2",
    "p0_3",
    "p0_4",
    "spin_1",
    "spin_2",
    "spin_3",
    "base_x",
    "base_y",
    "base_z",
    "omega2_polar",
    "omega2_total",
];

fn reduced_table(tr: &Trajectory<ReducedState>) -> CliResult<Table> {
    let mut table = header(&REDUCED_COLUMNS);
    for (t, st, d) in tr.iter() {
        let mut row = vec![Cell::Num(t)];
        let base = st.base();
        let nums = st
            .frame
            .coords()
            .iter()
            .chain(st.p0.iter())
            .chain(st.spin.vector().iter())
            .chain(base.position().iter());
        row.extend(nums.map(|v| Cell::Num(*v)));
        let omega = coupling_frequencies(st).map_err(integrator_error)?;
        row.extend(omega.map(Cell::Num));
        row.extend(tail(d));
        table.push(row);
    }
    Ok(table)
}

const BASE_COLUMNS: [&str; 8] = [
    "base_x",
    "base_y",
    "base_z",
    "vel_x",
    "vel_y",
    "vel_z",
    "fold_sign",
    "curvature",
];

fn base_table(tr: &Trajectory<LorentzState>) -> Table {
    let profile = geodesic_curvature_profile(tr);
    let mut curvature = vec![f64::NAN; tr.len()];
    let mut k = 0;
    for (i, &t) in tr.times().iter().enumerate() {
        if k < profile.len() && profile[k].0 == t {
            curvature[i] = profile[k].1;
            k += 1;
        }
    }
    let mut table = header(&BASE_COLUMNS);
    for ((t, st, d), kappa) in tr.iter().zip(curvature) {
        let mut row = vec![Cell::Num(t)];
        row.extend(
            st.position
                .iter()
                .chain(st.velocity.iter())
                .map(|v| Cell::Num(*v)),
        );
        row.push(Cell::Num(st.fold_sign));
        row.push(Cell::Num(kappa));
        row.extend(tail(d));
        table.push(row);
    }
    table
}

/// Runs the configured engine from its initial condition.
pub fn run(cfg: &SimulateConfig, rng: &mut ChaCha8Rng) -> CliResult<Table> {
    cfg.validate()?;
    let start = build_start(cfg, rng)?;
    let (t, h) = (cfg.horizon, cfg.step);
    match (cfg.engine, start) {
        (Engine::Full, Start::Phase(p)) => full_table(&p, cfg),
        (Engine::ReducedMcf, Start::Reduced(r)) => {
            let tr = if r.spin.stratum() == SpinStratum::Pole {
                pole_frame_flow(&r, t, h)
            } else {
                mcf_flow(&r, t, h)
            };
            tr.map_err(integrator_error)
                .and_then(|tr| reduced_table(&tr))
        }
        (
            Engine::ReducedLorentz,
            Start::Base {
                base,
                velocity,
                charge,
            },
        ) => lorentz_flow(&base, &velocity, charge, t, h)
            .map(|tr| base_table(&tr))
            .map_err(integrator_error),
        (
            Engine::Wong,
            Start::Base {
                base,
                velocity,
                charge,
            },
        ) => wong_flow(&base, &velocity, charge, cfg.scale, t, h)
            .map(|tr| base_table(&tr))
            .map_err(integrator_error),
        (engine, _) => unreachable!("initial data built for {}", engine.label()),
    }
}

/// Checks every row of an emitted table against the invariants of the
/// engine's state type; returns the first violation.
pub fn validate_table(engine: Engine, scale: f64, table: &Table) -> Result<(), String> {
    let col = |name: &str| {
        table
            .numbers(name)
            .ok_or_else(|| format!("missing column {name}"))
    };
    let block = |names: &[&str]| -> Result<Vec<Vec<f64>>, String> {
        names.iter().map(|n| col(n)).collect()
    };
    let at = |cols: &[Vec<f64>], i: usize| -> Vec<f64> { cols.iter().map(|c| c[i]).collect() };
    let fail = |i: usize, e: &dyn std::fmt::Display| format!("row {}: {e}", i + 1);
    let momentum = col("momentum_norm")?;
    for w in momentum.windows(2) {
        if (w[1] - w[0]).abs() > 1e-8 * w[0].abs().max(1.0) {
            return Err(format!("momentum norm drifted from {} to {}", w[0], w[1]));
        }
    }
    match engine {
        Engine::Full => {
            let cols = block(&PHASE_COLUMNS[..20])?;
            for i in 0..table.rows.len() {
                let v = at(&cols, i);
                let q = Pair5::from_column_slice(&v[..10]);
                let p = Pair5::from_column_slice(&v[10..]);
                PhasePoint::new(q, p).map_err(|e| fail(i, &e))?;
            }
        }
        Engine::ReducedMcf => {
            let cols = block(&REDUCED_COLUMNS[..11])?;
            for i in 0..table.rows.len() {
                let v = at(&cols, i);
                reduced_state(
                    &[v[0], v[1], v[2], v[3]],
                    &[v[4], v[5], v[6], v[7]],
                    &[v[8], v[9], v[10]],
                    scale,
                )
                .map_err(|e| fail(i, &e))?;
            }
        }
        Engine::ReducedLorentz | Engine::Wong => {
            let cols = block(&BASE_COLUMNS[..6])?;
            let mut speed0 = None;
            for i in 0..table.rows.len() {
                let v = at(&cols, i);
                let base = BasePoint::new(v[0], v[1], v[2]).map_err(|e| fail(i, &e))?;
                let vel = Vector3::new(v[3], v[4], v[5]);
                let inner = vel.dot(base.position());
                if inner.abs() > 1e-10 * vel.norm().max(1.0) {
                    return Err(fail(i, &Error::NotTangent { inner }));
                }
                let speed = *speed0.get_or_insert(vel.norm());
                if (vel.norm() - speed).abs() > 1e-10 * speed.max(1.0) {
                    return Err(fail(i, &"speed not conserved"));
                }
            }
        }
    }
    Ok(())
}
