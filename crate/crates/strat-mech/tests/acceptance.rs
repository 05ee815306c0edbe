//! Acceptance criteria 1 to 10, one PASS/FAIL line each with its runtime
//! against the budget. Runs without the test harness so the lines always
//! print; any failure makes the process exit nonzero.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strat_mech_core::bundle::{curvature_fd, frame_fields, inertia, BasePoint, FramePoint};
use strat_mech_core::dynamics::{
    compare_engines, geodesic_curvature_profile, geodesic_flow, k_matrix, kks_reduced_form,
    lorentz_flow, mcf_flow, rattle_trajectory, reflection_residuals, Hamiltonian, ReducedState,
    Tolerances,
};
use strat_mech_core::momenta::{mu_full, PhasePoint};
use strat_mech_core::sample::{self, RegularSampling};
use strat_mech_core::strata::{
    classify_phase, spin_from_momentum, spin_generator, stratum_table, IsotropyType,
};

type Check = Result<String, String>;

/// Name, runtime budget in seconds and the check itself.
type Criterion = (&'static str, f64, fn() -> Check);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curvature_constant() -> Check {
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = FramePoint::new(sample::unit_quaternion(&mut r)).map_err(|e| e.to_string())?;
        let [_, x2, x3] = frame_fields(&f);
        let c = curvature_fd(&f, &x2, &x3).map_err(|e| e.to_string())?;
        worst = worst.max((c - 2.0).abs());
    }
    ensure(worst < 1e-5, || {
        format!("worst |dA(X2,X3) - 2| = {worst:e}")
    })?;
    Ok(format!("worst error {worst:.1e}"))
}

fn inertia_constancy() -> Check {
    let mut r = rng(102);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let f = FramePoint::new(sample::unit_quaternion(&mut r)).map_err(|e| e.to_string())?;
        let (x, y) = (r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
        worst = worst.max((inertia(&f, x, y) - x * y).abs());
    }
    ensure(worst < 1e-14, || format!("worst |I(X,Y) - XY| = {worst:e}"))?;
    Ok(format!("worst error {worst:.1e}"))
}

fn determinant_identity() -> Check {
    let mut r = rng(103);
    let (mut det_err, mut ev_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let s: f64 = r.random_range(0.1..2.0);
        let rho = s * r.random::<f64>().sqrt();
        let phi = r.random_range(0.0..2.0 * PI);
        let (x, y) = (rho * phi.cos(), rho * phi.sin());
        let z2 = s * s - x * x - y * y;
        let k = k_matrix(x, y, s);
        det_err = det_err.max((k.determinant() - s.powi(4) * z2 * z2).abs());
        let mut ev: Vec<f64> = k.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut expect = [s * s, s * s, z2, z2];
        expect.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expect) {
            ev_err = ev_err.max((a - b).abs());
        }
    }
    ensure(det_err < 1e-12, || format!("determinant error {det_err:e}"))?;
    ensure(ev_err < 1e-12, || format!("eigenvalue error {ev_err:e}"))?;
    Ok(format!(
        "determinant {det_err:.1e}, eigenvalues {ev_err:.1e}"
    ))
}

fn momentum_conservation() -> Check {
    let mut r = rng(104);
    let mut drift: f64 = 0.0;
    for _ in 0..10 {
        let s = sample::phase_point(&mut r, IsotropyType::L0Trivial);
        let m0 = mu_full(&s).value;
        for k in 0..=1000 {
            let f = geodesic_flow(&s, 0.1 * k as f64);
            drift = drift.max((mu_full(&f).value - m0).norm());
        }
    }
    let mut equi: f64 = 0.0;
    let s = sample::phase_point(&mut r, IsotropyType::L0Trivial);
    let m = mu_full(&s).value;
    for _ in 0..100 {
        let g = sample::rotation(&mut r);
        equi = equi.max((mu_full(&s.transform(&g)).value - m.conjugate(&g)).norm());
    }
    ensure(drift < 1e-10, || format!("drift {drift:e}"))?;
    ensure(equi < 1e-12, || format!("equivariance residual {equi:e}"))?;
    Ok(format!("drift {drift:.1e}, equivariance {equi:.1e}"))
}

fn lorentz_curvature() -> Check {
    let b = BasePoint::new(0.0, 0.3, 0.4).map_err(|e| e.to_string())?;
    let v = Vector3::new(1.0, 0.0, 0.0);
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.0, 2.0] {
        for charge in [s, -s] {
            let tr = lorentz_flow(&b, &v, charge, 4.0, 1e-3).map_err(|e| e.to_string())?;
            let prof = geodesic_curvature_profile(&tr);
            ensure(prof.len() > 3000, || {
                format!("only {} curvature samples", prof.len())
            })?;
            for (_, k) in prof {
                worst = worst.max((k - 2.0 * s).abs());
            }
        }
    }
    ensure(worst < 1e-4, || format!("curvature error {worst:e}"))?;

    let b = BasePoint::new(0.0, 0.45, (0.25f64 - 0.45 * 0.45).sqrt()).map_err(|e| e.to_string())?;
    let n = b.position() / 0.5;
    let raw = Vector3::new(0.3, -0.2, -1.0);
    let v = (raw - n * raw.dot(&n)).normalize();
    let tr = lorentz_flow(&b, &v, 0.5, 10.0, 1e-3).map_err(|e| e.to_string())?;
    let refl = reflection_residuals(&tr);
    ensure(refl.len() >= 2, || {
        format!("{} equator crossings", refl.len())
    })?;
    let mut angle: f64 = 0.0;
    for c in &refl {
        angle = angle.max((c.incidence - c.reflection).abs());
        ensure(c.position_gap < 1e-6, || {
            format!("fold gap {:e}", c.position_gap)
        })?;
    }
    ensure(angle < 1e-4, || {
        format!("incidence minus reflection {angle:e}")
    })?;
    let jump = tr
        .states()
        .windows(2)
        .map(|w| (w[1].position - w[0].position).norm())
        .fold(0.0, f64::max);
    ensure(jump < 2e-3, || format!("folded path jumps by {jump:e}"))?;
    Ok(format!(
        "curvature {worst:.1e}, {} crossings, angle {angle:.1e}",
        refl.len()
    ))
}

fn reduction_oracle() -> Check {
    let tol = Tolerances::default();
    let (mut base, mut spin, mut energy): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for seed in 0..20 {
        let r0 = sample::regular_state(&mut rng(seed), &RegularSampling::default());
        let rep = compare_engines(&r0, 1.0, 1e-3, 1e-3, &tol).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("seed {seed}: {rep:?}"))?;
        base = base.max(rep.max_base_distance);
        spin = spin.max(rep.max_spin_distance);
        energy = energy.max(rep.max_energy_discrepancy);
    }
    Ok(format!(
        "base {base:.1e}, spin {spin:.1e}, energy {energy:.1e}"
    ))
}

fn reduced_kks() -> Check {
    let mut r = rng(107);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s = r.random_range(0.3..2.0);
        let spin = sample::regular_spin(&mut r, s, 0.05);
        let x = *spin.vector();
        let g: Vector3<f64> = sample::gaussian(&mut r);
        let v = g - x * (x.dot(&g) / x.norm_squared());
        let w = kks_reduced_form(&spin, &spin_generator(&x), &v).map_err(|e| e.to_string())?;
        worst = worst.max((w - v[2]).abs());
    }
    ensure(worst < 1e-5, || format!("worst residual {worst:e}"))?;
    Ok(format!("worst residual {worst:.1e}"))
}

fn strata_suite() -> Check {
    const TAGS: [IsotropyType; 4] = [
        IsotropyType::L0Trivial,
        IsotropyType::L1So2,
        IsotropyType::L2So3,
        IsotropyType::L3So4,
    ];
    let mut r = rng(108);
    for k in 0..100 {
        let s = sample::phase_point(&mut r, TAGS[k % 4]);
        let g = sample::rotation(&mut r);
        let (a, b) = (classify_phase(&s), classify_phase(&s.transform(&g)));
        ensure(a == b, || {
            format!("class changed under rotation: {a:?} vs {b:?}")
        })?;
    }
    let t = stratum_table();
    let tags: Vec<_> = t.iter().map(|row| row.isotropy).collect();
    ensure(tags == TAGS, || format!("table rows {tags:?}"))?;
    ensure(t[3].empty && t[3].dimension.is_none(), || {
        "L3 row is not empty".into()
    })?;
    ensure(t[0].flow_invariant == Some(true), || {
        "L0 row is not flow invariant".into()
    })?;
    let mut worst: f64 = 0.0;
    let st = sample::regular_state(&mut r, &RegularSampling::default());
    let lambda = st.spin.representative();
    let s = st.spin.scale();
    let base = spin_from_momentum(&lambda, s).map_err(|e| e.to_string())?;
    for _ in 0..50 {
        let h = sample::h0_rotation(&mut r);
        let moved = spin_from_momentum(&lambda.conjugate(&h), s).map_err(|e| e.to_string())?;
        worst = worst.max(moved.distance(&base));
    }
    ensure(worst < 1e-8, || format!("spin moved by {worst:e}"))?;
    Ok(format!("spin spread {worst:.1e}"))
}

fn within(ratio: f64, nominal: f64) -> bool {
    (ratio / nominal - 1.0).abs() <= 0.1
}

fn integrator_orders() -> Check {
    let p = sample::phase_point(&mut rng(2), IsotropyType::L0Trivial);
    let s = PhasePoint {
        q: p.q,
        p: p.p / p.p.norm(),
    };
    let ham = Hamiltonian::GramCoupling { strength: 1.5 };
    let end = |h: f64| -> Result<PhasePoint, String> {
        let tr = rattle_trajectory(&s, 1.0, h, &ham).map_err(|e| e.to_string())?;
        Ok(*tr.last().expect("nonempty").1)
    };
    let (a, b, c) = (end(0.02)?, end(0.01)?, end(0.005)?);
    let rattle = (a.q - b.q).norm() / (b.q - c.q).norm();
    ensure(within(rattle, 4.0), || format!("RATTLE ratio {rattle}"))?;

    let b0 = BasePoint::new(0.3, 0.0, 0.4).map_err(|e| e.to_string())?;
    let v = Vector3::new(0.0, 1.0, 0.0);
    let lend = |h: f64| -> Result<Vector3<f64>, String> {
        let tr = lorentz_flow(&b0, &v, 1.0, 2.0, h).map_err(|e| e.to_string())?;
        Ok(tr.last().expect("nonempty").1.position)
    };
    let (a, b, c) = (lend(0.02)?, lend(0.01)?, lend(0.005)?);
    let lorentz = (a - b).norm() / (b - c).norm();
    ensure(within(lorentz, 16.0), || {
        format!("RK4 Lorentz ratio {lorentz}")
    })?;

    let st = sample::regular_state(&mut rng(4), &RegularSampling::default());
    let mend = |h: f64| -> Result<ReducedState, String> {
        let tr = mcf_flow(&st, 1.0, h).map_err(|e| e.to_string())?;
        Ok(*tr.last().expect("nonempty").1)
    };
    let dist = |x: &ReducedState, y: &ReducedState| {
        (x.frame.coords() - y.frame.coords()).norm()
            + (x.p0 - y.p0).norm()
            + x.spin.distance(&y.spin)
    };
    let (a, b, c) = (mend(0.02)?, mend(0.01)?, mend(0.005)?);
    let mcf = dist(&a, &b) / dist(&b, &c);
    ensure(within(mcf, 16.0), || {
        format!("RK4 minimal-coupling ratio {mcf}")
    })?;
    Ok(format!("RATTLE {rattle:.2}, RK4 {lorentz:.2} / {mcf:.2}"))
}

fn cli(dir: &Path, command: &str, config: &str) -> Result<i32, String> {
    let path = dir.join(format!("{command}.toml"));
    fs::write(&path, config).map_err(|e| e.to_string())?;
    let status = Command::new(env!("CARGO_BIN_EXE_strat-mech"))
        .arg(command)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir)
        .env("STRAT_MECH_LOG", "quiet")
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    status
        .code()
        .ok_or_else(|| "killed by a signal".to_string())
}

fn determinism(elapsed_before: Duration) -> Check {
    let started = Instant::now();
    let sim = r#"
[simulate]
engine = "reduced-mcf"
horizon = 1.0
seed = 5
formats = ["csv", "json"]
initial = { kind = "random" }
"#;
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let code = cli(dir.path(), "simulate", sim)?;
        ensure(code == 0, || format!("simulate exited {code}"))?;
        let csv = fs::read(dir.path().join("trajectory.csv")).map_err(|e| e.to_string())?;
        let json = fs::read(dir.path().join("trajectory.json")).map_err(|e| e.to_string())?;
        outputs.push((csv, json));
    }
    ensure(outputs[0] == outputs[1], || "simulate reruns differ".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let code = cli(dir.path(), "compare", "")?;
    ensure(code == 0, || format!("default compare suite exited {code}"))?;
    let total = elapsed_before + started.elapsed();
    ensure(total < Duration::from_secs(90), || {
        format!("whole suite took {:.1} s", total.as_secs_f64())
    })?;
    Ok(format!("suite total {:.1} s", total.as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("curvature constant", 1.0, curvature_constant),
        ("inertia constancy", 1.0, inertia_constancy),
        ("determinant identity", 1.0, determinant_identity),
        (
            "momentum conservation and equivariance",
            5.0,
            momentum_conservation,
        ),
        ("Lorentz curvature and folding", 10.0, lorentz_curvature),
        ("lift-flow-project oracle", 60.0, reduction_oracle),
        ("reduced KKS form", 5.0, reduced_kks),
        ("strata suite", 5.0, strata_suite),
        ("integrator orders", 10.0, integrator_orders),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, budget: f64, elapsed: f64, outcome: Check| {
        let outcome = outcome.and_then(|detail| {
            if elapsed < budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; over the {budget} s budget"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS {name} ({elapsed:.2} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name} ({elapsed:.2} s): {why}");
            }
        }
    };
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        report(i + 1, name, *budget, t.elapsed().as_secs_f64(), outcome);
    }
    let t = Instant::now();
    let outcome = determinism(suite.elapsed());
    report(
        10,
        "determinism",
        90.0,
        suite.elapsed().as_secs_f64().max(t.elapsed().as_secs_f64()),
        outcome,
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
