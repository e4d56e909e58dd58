//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use anisoreg_cli::commands;
use anisoreg_cli::config::{Settings, SimulateSettings, VerifySettings};
use anisoreg_core::inequality::{lemma1_ratio, Lemma2Exponents, Suite, TestFunctionKind, TestFunctionSpec};
use anisoreg_core::mixed_norm::{lp_norm, mixed_norm};
use anisoreg_core::quadrature::cumulative_trapezoid;
use anisoreg_core::monitor::{
    criterion_integrand, energy_balances, energy_inequality_profile, energy_residual, MonitorRecord,
    RegularityMonitor,
};
use anisoreg_core::solver::{
    nonlinear_rhs, random_divfree, run, single_mode, taylor_green, InitialData, NavierStokes, SolverConfig,
    SolverState,
};
use anisoreg_core::{Exponent, Grid3, MixedExponents, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use Exponent::{Finite, Infinite};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn cube(n: usize) -> Grid3 {
    Grid3::cubic(n).unwrap()
}

fn monitored(config: &SolverConfig, exps: MixedExponents) -> Vec<MonitorRecord> {
    let mut m = RegularityMonitor::new(config.grid, exps);
    run(config, |s| m.observe(s).map(|_| ())).unwrap();
    m.into_records()
}

fn final_state(config: &SolverConfig) -> SolverState {
    let mut last = None;
    run(config, |s| {
        last = Some(s.clone());
        Ok(())
    })
    .unwrap();
    last.unwrap()
}

fn l2_distance(a: &VectorField, b: &VectorField) -> f64 {
    let mut sum = 0.0;
    for i in 0..3 {
        for (x, y) in a.components()[i].values().iter().zip(b.components()[i].values()) {
            sum += (x - y) * (x - y);
        }
    }
    (sum * a.grid().cell_volume()).sqrt()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let tuples = [
        (Finite(2.0), Finite(2.0), Finite(2.0)),
        (Finite(4.0), Finite(3.0), Finite(6.0)),
        (Infinite, Finite(4.0), Infinite),
        (Finite(3.0), Finite(3.0), Finite(3.0)),
    ];
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let f = oracles::random_scalar(cube(8), seed);
        for &(p, q, r) in &tuples {
            worst = worst.max(rel(mixed_norm(&f, p, q, r).unwrap(), oracles::mixed_norm(&f, p, q, r)));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-13 && elapsed < Duration::from_secs(10),
        format!("max relative deviation {worst:.2e} (tol 1e-13), {:.2} s (budget 10 s)", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let f = oracles::random_scalar(cube(8), 1000 + seed);
        for s in [Finite(2.0), Finite(3.0), Finite(4.0), Infinite] {
            let m = mixed_norm(&f, s, s, s).unwrap();
            worst = worst.max(rel(m, lp_norm(&f, s).unwrap())).max(rel(m, oracles::lp_norm(&f, s)));
        }
    }
    verdict(worst <= 1e-13, format!("max relative deviation {worst:.2e} (tol 1e-13)"))
}

const KINDS: [TestFunctionKind; 4] = [
    TestFunctionKind::GaussianBump,
    TestFunctionKind::PolynomialBump,
    TestFunctionKind::Separable,
    TestFunctionKind::RandomBump,
];

fn criterion_3() -> Verdict {
    let exps = MixedExponents::uniform(Infinite).unwrap();
    let mut worst = 0.0f64;
    for (k, kind) in KINDS.into_iter().enumerate() {
        let spec = TestFunctionSpec::new(kind, 30 + k as u64);
        for i in 0..5 {
            let f = spec.sample(cube(32), i).unwrap();
            worst = worst.max((lemma1_ratio(&f, &exps).unwrap() - 1.0).abs());
        }
    }
    verdict(worst <= 1e-12, format!("20 functions, max |ratio - 1| = {worst:.2e} (tol 1e-12)"))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let suites = [
        Suite::Lemma1(MixedExponents::uniform(Finite(4.0)).unwrap()),
        Suite::Lemma2(Lemma2Exponents::new(2.0, 2.0, 3.0).unwrap()),
    ];
    let grids = [cube(32), cube(64)];
    let mut pass = true;
    let mut parts = Vec::new();
    for suite in &suites {
        let spec = TestFunctionSpec::new(TestFunctionKind::GaussianBump, 4);
        let mut sups = [0.0f64; 2];
        let mut worst_scale = 0.0f64;
        let mut all_positive = true;
        for i in 0..100 {
            let tf = spec.function(i).unwrap();
            for (g, &grid) in grids.iter().enumerate() {
                let f = tf.on_grid(grid).unwrap();
                let a = suite.evaluate(&f).unwrap().ratio;
                let b = suite.evaluate(&f.scaled(10.0)).unwrap().ratio;
                all_positive &= a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0;
                worst_scale = worst_scale.max(rel(a, b));
                sups[g] = sups[g].max(a);
            }
        }
        let drift = (sups[1] - sups[0]).abs() / sups[0];
        pass &= all_positive && worst_scale <= 1e-12 && drift < 0.05;
        parts.push(format!(
            "{}: 10f deviation {worst_scale:.2e}, sup {:.6} -> {:.6}, drift {:.2e}{}",
            suite.label(),
            sups[0],
            sups[1],
            drift,
            if all_positive { "" } else { ", NON-POSITIVE RATIO" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    parts.push(format!("{:.1} s (budget 120 s)", elapsed.as_secs_f64()));
    verdict(pass, parts.join("; "))
}

fn single_mode_error(dt: f64) -> f64 {
    let grid = cube(16);
    let config = SolverConfig {
        grid,
        dt,
        t_end: 0.1,
        nu: 1.0,
        init: InitialData::SingleMode,
        ..SolverConfig::default()
    };
    let s = final_state(&config);
    let exact = single_mode(grid, (-s.t()).exp()).unwrap();
    l2_distance(s.velocity(), &exact) / exact.l2_norm()
}

/// L² errors of a nonlinear Taylor-Green run against a step 16 times
/// smaller. Reported alongside criterion 5 for context only.
fn nonlinear_order_ratios() -> Vec<f64> {
    let grid = cube(16);
    let u0 = taylor_green(grid, 4.0).unwrap();
    let solve = |dt: f64| {
        let ns = NavierStokes::new(grid, 0.2, dt, true).unwrap();
        let mut s = ns.initial_state(&u0).unwrap();
        for _ in 0..(0.4 / dt).round() as usize {
            s = ns.step(&s).unwrap();
        }
        s.velocity().clone()
    };
    let reference = solve(0.01 / 16.0);
    let errs: Vec<f64> = [0.04, 0.02, 0.01].iter().map(|&dt| l2_distance(&solve(dt), &reference)).collect();
    errs.windows(2).map(|w| w[0] / w[1]).collect()
}

fn criterion_5() -> Verdict {
    let coarse = single_mode_error(1e-3);
    let fine = single_mode_error(5e-4);
    let ratio = coarse / fine;
    let exact_ok = coarse <= 1e-8;
    let order_ok = (8.0..=32.0).contains(&ratio);
    let nonlinear: Vec<String> = nonlinear_order_ratios().iter().map(|r| format!("{r:.2}")).collect();
    verdict(
        exact_ok && order_ok,
        format!(
            "relative L2 error {coarse:.2e} at dt=1e-3 (tol 1e-8: {}), {fine:.2e} at dt=5e-4, \
             ratio {ratio:.3} (want [8, 32]: {}); nonlinear Taylor-Green ratios [{}]",
            if exact_ok { "ok" } else { "exceeded" },
            if order_ok { "ok" } else { "outside" },
            nonlinear.join(", ")
        ),
    )
}

fn exps(p: Exponent, q: Exponent, r: Exponent) -> MixedExponents {
    MixedExponents::new(p, q, r).unwrap()
}

/// Taylor-Green at 32³, dt 1e-3, to t = 1, every step recorded.
fn taylor_green_records() -> Vec<MonitorRecord> {
    let config = SolverConfig {
        grid: cube(32),
        dt: 1e-3,
        t_end: 1.0,
        nu: 1.0,
        ..SolverConfig::default()
    };
    monitored(&config, exps(Finite(4.0), Finite(4.0), Finite(4.0)))
}

fn criterion_6(records: &[MonitorRecord], elapsed: Duration) -> Verdict {
    let nu = 1.0;
    let balances = energy_balances(records, nu).unwrap();
    let worst = balances.iter().map(|b| b.relative()).fold(0.0, f64::max);
    let literal = records
        .windows(2)
        .map(|w| (energy_residual(&w[0], &w[1], 1e-3, nu) / (nu * w[0].grad_sq)).abs())
        .fold(0.0, f64::max);
    let e0 = records[0].energy;
    let slack = energy_inequality_profile(records, nu)
        .unwrap()
        .iter()
        .map(|c| c.slack)
        .fold(f64::INFINITY, f64::min);
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let g: Vec<f64> = records.iter().map(|r| r.grad_sq).collect();
    let trapezoid_slack = cumulative_trapezoid(&t, &g)
        .unwrap()
        .iter()
        .zip(records)
        .map(|(d, r)| e0 - r.energy - 2.0 * nu * d)
        .fold(f64::INFINITY, f64::min);
    let pass = worst <= 1e-6 && slack >= -1e-6 * e0 && elapsed < Duration::from_secs(120);
    verdict(
        pass,
        format!(
            "{} steps, max per-step residual {worst:.2e} (tol 1e-6; two-point trapezoid form {literal:.2e}), \
             min inequality slack {:.2e} E(0) (tol -1e-6; trapezoid dissipation {:.2e} E(0)), \
             {:.1} s (budget 120 s)",
            balances.len(),
            slack / e0,
            trapezoid_slack / e0,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Verdict {
    let grid = cube(8);
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let u = random_divfree(grid, 70 + seed, -1.0);
        let got = nonlinear_rhs(&u);
        let want = oracles::nonlinear_convolution(&u);
        for i in 0..3 {
            let want_real = oracles::idft(grid, &want[i]);
            let scale = want_real.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = got.components()[i]
                .values()
                .iter()
                .zip(&want_real)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(err / scale);
        }
    }
    verdict(worst <= 1e-12, format!("10 seeds, max relative deviation {worst:.2e} (tol 1e-12)"))
}

fn random_exponent(rng: &mut ChaCha8Rng) -> Exponent {
    if rng.random_bool(0.15) {
        Infinite
    } else {
        Finite(2.0 + 10f64.powf(rng.random_range(-3.0..3.0)))
    }
}

fn criterion_8(trajectories: &[&[MonitorRecord]]) -> Verdict {
    let mut decreases = 0;
    for records in trajectories {
        decreases += records.windows(2).filter(|w| w[1].cumulative < w[0].cumulative).count();
    }

    let grid = cube(16);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut nonzero = 0;
    let tuples = [
        exps(Finite(4.0), Finite(4.0), Finite(4.0)),
        exps(Finite(3.0), Infinite, Finite(7.0)),
        exps(Finite(3.0), Finite(3.0), Finite(3.0)),
    ];
    for _ in 0..5 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let u = VectorField::from_fn(grid, |x1, x2, _| {
            [c[0] * x2.sin() + c[1] * (2.0 * x2).cos(), c[2] * x1.cos() + c[3] * (x1 - x2).sin(), c[4] * (x1 + 3.0 * x2).cos() + c[5]]
        })
        .unwrap();
        for e in &tuples {
            // Boundary exponents have no integrand; the monitor tracks the norm itself.
            if !e.is_boundary() && criterion_integrand(&u, e).unwrap() != 0.0 {
                nonzero += 1;
            }
            let mut m = RegularityMonitor::new(grid, *e);
            if m.observe_field(0.0, &u).unwrap().integrand != 0.0 {
                nonzero += 1;
            }
        }
    }

    let mut worst = 0.0f64;
    let mut tried = 0;
    let mut valid = 0;
    while valid < 1000 {
        tried += 1;
        let (p, q, r) = (random_exponent(&mut rng), random_exponent(&mut rng), random_exponent(&mut rng));
        let Ok(e) = MixedExponents::new(p, q, r) else { continue };
        valid += 1;
        let beta = e.beta().value();
        worst = worst.max((2.0 / beta + p.reciprocal() + q.reciprocal() + r.reciprocal() - 1.0).abs());
    }
    verdict(
        decreases == 0 && nonzero == 0 && worst <= 1e-14,
        format!(
            "{} trajectories with {decreases} cumulative decreases; {nonzero} nonzero x3-independent integrands; \
             beta relation max deviation {worst:.2e} over 1000 valid tuples ({tried} drawn, tol 1e-14)",
            trajectories.len()
        ),
    )
}

/// 20 short random trajectories at 32³ under a rotating set of exponents.
fn random_records() -> Vec<Vec<MonitorRecord>> {
    let tuples = [
        exps(Finite(4.0), Finite(4.0), Finite(4.0)),
        exps(Finite(3.0), Finite(6.0), Infinite),
        exps(Finite(3.0), Finite(3.0), Finite(3.0)),
        exps(Infinite, Infinite, Finite(5.0)),
    ];
    (0..20)
        .map(|seed| {
            let config = SolverConfig {
                grid: cube(32),
                dt: 1e-3,
                t_end: 0.01,
                init: InitialData::RandomDivFree,
                seed,
                ..SolverConfig::default()
            };
            monitored(&config, tuples[seed as usize % tuples.len()])
        })
        .collect()
}

fn criterion_9(tg: &[MonitorRecord], random: &[Vec<MonitorRecord>]) -> Verdict {
    let all = std::iter::once(tg).chain(random.iter().map(|r| r.as_slice()));
    let (mut states, mut fail24, mut fail210) = (0, 0, 0);
    let (mut margin24, mut margin210) = (0.0f64, 0.0f64);
    for records in all {
        for r in records {
            states += 1;
            fail24 += usize::from(!r.audit24.holds);
            fail210 += usize::from(!r.audit210.holds);
            if r.audit24.b > 0.0 {
                margin24 = margin24.max(r.audit24.a / r.audit24.b);
            }
            if r.audit210.rhs > 0.0 {
                margin210 = margin210.max(r.audit210.lhs / r.audit210.rhs);
            }
        }
    }
    verdict(
        fail24 + fail210 == 0,
        format!(
            "{states} states; Holder step failures {fail24} (max a/b {margin24:.3}), \
             L3 interpolation failures {fail210} (max lhs/rhs {margin210:.3})"
        ),
    )
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();

    let out = dir.path().join("sim.csv").display().to_string();
    let flags: Vec<(&str, String)> = [
        ("grid", "16"),
        ("init", "random"),
        ("seed", "5"),
        ("t_end", "0.02"),
        ("r", "5"),
        ("out", out.as_str()),
    ]
    .into_iter()
    .map(|(k, v)| (k, v.to_string()))
    .collect();
    let first = commands::simulate(&SimulateSettings::resolve(None, &flags).unwrap()).unwrap();
    let bytes = |o: &commands::Outputs| (std::fs::read(&o.csv).unwrap(), std::fs::read(&o.summary).unwrap());
    let a = bytes(&first.outputs);
    for _ in 0..2 {
        let again = commands::simulate(&SimulateSettings::resolve(Some(&first.outputs.manifest), &[]).unwrap()).unwrap();
        if bytes(&again.outputs) != a {
            mismatches.push("simulate");
        }
    }

    let out = dir.path().join("verify.csv").display().to_string();
    let flags = vec![("samples", "10".to_string()), ("kind", "random-bump".to_string()), ("grid", "16".to_string()), ("out", out)];
    let first = commands::verify(&VerifySettings::resolve(None, &flags).unwrap()).unwrap();
    let a = bytes(&first.outputs);
    let again = commands::verify(&VerifySettings::resolve(Some(&first.outputs.manifest), &[]).unwrap()).unwrap();
    if bytes(&again.outputs) != a {
        mismatches.push("verify");
    }
    verdict(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "simulate (3 runs) and verify (2 runs) from one manifest each: CSV and JSON byte-identical".into()
        } else {
            format!("byte differences in {mismatches:?}")
        },
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, &str, Verdict)> = Vec::new();
    let mut record = |id: &'static str, name: &'static str, v: Verdict| {
        println!("criterion {id:>2} {name}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        results.push((id, name, v));
    };

    record("1", "mixed-norm oracle equivalence", criterion_1());
    record("2", "definition collapse", criterion_2());
    record("3", "infinite-exponent ratio collapse", criterion_3());
    record("4", "ratio homogeneity and grid drift", criterion_4());
    record("5", "solver exactness and temporal order", criterion_5());
    let start = Instant::now();
    let tg = taylor_green_records();
    record("6", "energy identity and inequality", criterion_6(&tg, start.elapsed()));
    record("7", "nonlinear-term oracle", criterion_7());
    let random = random_records();
    let mut trajectories: Vec<&[MonitorRecord]> = vec![&tg];
    trajectories.extend(random.iter().map(|r| r.as_slice()));
    record("8", "criterion bookkeeping", criterion_8(&trajectories));
    record("9", "constant-free audits", criterion_9(&tg, &random));
    record("10", "determinism", criterion_10());

    let failed: Vec<&str> = results.iter().filter(|(_, _, v)| !v.pass).map(|(id, _, _)| *id).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}

