//! Acceptance criteria, one line each. Runs as a plain binary so the table
//! is printed even when every criterion passes.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use intellistate::linalg::{eig, overlap, I, ONE};
use intellistate::{
    certify_transport, covariance_angle, forward_map, inverse_map, make_pair, make_spin_observables,
    moments_unchecked, optical_unitary, padded_moment_delta, puri_state, schwinger_su2, solve_intelligent,
    transport, working_pair, AlgebraKind, AmplifierGenerator, Error, HalfInteger, OpticalElement,
    PairSelector, Parity, PhaseMode, RotationKind, SolveOptions, Spin, TolerancePolicy, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| min + (max - min) * k as f64 / (n - 1) as f64).collect()
}

fn complex_grid(min: f64, max: f64, n: usize) -> Vec<C64> {
    let axis = linspace(min, max, n);
    axis.iter().flat_map(|&x| axis.iter().map(move |&y| C64::new(x, y))).collect()
}

fn spins(max_twice: i64) -> impl Iterator<Item = Spin> {
    (1..=max_twice).map(|t| Spin::from_half_integer(HalfInteger::from_twice(t)).unwrap())
}

fn spin_pair(j: Spin, selector: PairSelector) -> intellistate::ObservablePair {
    make_pair(AlgebraKind::Su2Spin(j), selector).unwrap()
}

fn single_mode(parity: Parity, selector: PairSelector) -> intellistate::ObservablePair {
    make_pair(AlgebraKind::Su11SingleMode { parity, cutoff: 64 }, selector).unwrap()
}

fn srr_equality() -> Outcome {
    let start = Instant::now();
    let grid = complex_grid(-2.0, 2.0, 20);
    let opts = SolveOptions::default();
    let (mut states, mut worst) = (0usize, 0.0f64);
    for j in spins(20) {
        let pair = spin_pair(j, PairSelector::J1J2);
        for &lambda in &grid {
            if lambda.im == 0.0 && (lambda.re.abs() - 1.0).abs() < 1e-12 {
                continue;
            }
            for s in solve_intelligent(&pair, lambda, &opts).unwrap().genuine() {
                worst = worst.max(moments_unchecked(&pair, &s.psi).srr_residual.abs());
                states += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        states > 0 && worst <= 1e-9 && elapsed <= Duration::from_secs(30),
        format!("{states} genuine states, max |srr_residual| {worst:.2e}, {:.1} s (limit 30 s)", elapsed.as_secs_f64()),
    )
}

fn ois_suite() -> Outcome {
    let reals: Vec<f64> = linspace(-2.0, 2.0, 20)
        .into_iter()
        .filter(|x| (x.abs() - 1.0).abs() > 1e-12)
        .collect();
    let opts = SolveOptions::default();
    let (mut states, mut cov, mut hur) = (0usize, 0.0f64, 0.0f64);
    for j in spins(20) {
        let pair = spin_pair(j, PairSelector::J1J2);
        for &x in &reals {
            for s in solve_intelligent(&pair, C64::new(x, 0.0), &opts).unwrap().genuine() {
                let m = moments_unchecked(&pair, &s.psi);
                cov = cov.max(m.cov_s.abs());
                hur = hur.max(m.hur_residual.abs());
                states += 1;
            }
        }
    }
    outcome(
        states > 0 && cov <= 1e-10 && hur <= 1e-9,
        format!("{states} genuine states, max |covS| {cov:.2e}, max |HUR residual| {hur:.2e}"),
    )
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut report = Vec::new();
    let mut passed = true;
    for (kind, limit) in [(RotationKind::Circular, 1e-12), (RotationKind::Hyperbolic, 1e-10)] {
        let (mut worst, mut skipped, mut failures) = (0.0f64, 0usize, 0usize);
        for _ in 0..10_000 {
            let big = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            if kind == RotationKind::Hyperbolic && ((big - I).norm() < 1e-3 || (big + I).norm() < 1e-3) {
                skipped += 1;
                continue;
            }
            let err = inverse_map(kind, big, &tol).and_then(|inv| {
                let (fwd, _) = forward_map(kind, inv.lambda, inv.phi, ONE, &tol)?;
                Ok((fwd - big).norm() / big.norm().max(1.0))
            });
            match err {
                Ok(e) => worst = worst.max(e),
                Err(_) => failures += 1,
            }
        }
        passed &= failures == 0 && worst <= limit;
        report.push(format!("{kind}: max {worst:.2e} (limit {limit:.0e}), {failures} errors, {skipped} skipped"));
    }
    let elapsed = start.elapsed();
    passed &= elapsed <= Duration::from_secs(5);
    report.push(format!("{:.2} s (limit 5 s)", elapsed.as_secs_f64()));
    outcome(passed, report.join("; "))
}

/// Shared by the two theorem criteria.
#[derive(Default)]
struct TheoremStats {
    branches: usize,
    cases_without_branches: Vec<String>,
    unexpected_errors: Vec<String>,
    residual_exact: f64,
    residual_truncated: f64,
    beta_prime_err: f64,
    cov_after: f64,
    det_gap: f64,
    angle_failures: usize,
    boundary_points: usize,
    empty_points: usize,
}

fn theorem_stats() -> &'static TheoremStats {
    static STATS: OnceLock<TheoremStats> = OnceLock::new();
    STATS.get_or_init(|| {
        let mut stats = TheoremStats::default();
        let mut cases = Vec::new();
        for j in spins(10) {
            for sel in [PairSelector::J1J2, PairSelector::J2J3, PairSelector::J3J1] {
                cases.push((spin_pair(j, sel), complex_grid(-2.0, 2.0, 21)));
            }
        }
        for parity in [Parity::Even, Parity::Odd] {
            for sel in [PairSelector::K1K2, PairSelector::K1K3, PairSelector::K2K3] {
                cases.push((single_mode(parity, sel), complex_grid(-2.0, 2.0, 9)));
            }
        }
        let opts = SolveOptions::default();
        for (pair, grid) in cases {
            let label = format!("{:?} {}", pair.algebra, pair.selector);
            let prop = working_pair(&pair).unwrap().0.rotation_propagator().unwrap();
            let mut found = 0;
            for big in grid {
                let t = match transport(&pair, big, &opts) {
                    Ok(t) => t,
                    Err(Error::BoundaryOrbit { .. }) => {
                        stats.boundary_points += 1;
                        continue;
                    }
                    Err(Error::NoGenuineState(_)) => {
                        stats.empty_points += 1;
                        continue;
                    }
                    Err(e) => {
                        stats.unexpected_errors.push(format!("{label} at {big}: {e}"));
                        continue;
                    }
                };
                for b in t.branches.iter().filter(|b| b.gis.is_genuine()) {
                    found += 1;
                    let r = b.record.gis_residual;
                    if pair.is_truncated() {
                        stats.residual_truncated = stats.residual_truncated.max(r);
                    } else {
                        stats.residual_exact = stats.residual_exact.max(r);
                    }
                    stats.beta_prime_err = stats.beta_prime_err.max(b.record.beta_prime_err);
                    let m = moments_unchecked(&t.pair, &b.gis.psi);
                    match covariance_angle(t.pair.kind, &m, &opts.tol) {
                        Ok(angle) => {
                            let back = moments_unchecked(&t.pair, &prop.apply(-angle.phi, &b.gis.psi));
                            stats.cov_after = stats.cov_after.max(back.cov_s.abs());
                            stats.det_gap = stats
                                .det_gap
                                .max((back.det_c - back.var_a * back.var_b).abs())
                                .max((back.det_c - back.commutator_bound()).abs());
                        }
                        Err(_) => stats.angle_failures += 1,
                    }
                }
            }
            stats.branches += found;
            if found == 0 {
                stats.cases_without_branches.push(label);
            }
        }
        stats
    })
}

fn theorem_one() -> Outcome {
    let s = theorem_stats();
    let passed = s.unexpected_errors.is_empty()
        && s.cases_without_branches.is_empty()
        && s.residual_exact <= 1e-9
        && s.residual_truncated <= 1e-6
        && s.beta_prime_err <= 1e-6;
    let mut detail = format!(
        "{} GIS branches; max residual {:.2e} exact (limit 1e-9), {:.2e} truncated (limit 1e-6); \
         {} boundary and {} no-genuine points skipped",
        s.branches, s.residual_exact, s.residual_truncated, s.boundary_points, s.empty_points
    );
    for e in s.unexpected_errors.iter().chain(&s.cases_without_branches).take(3) {
        detail.push_str(&format!("; {e}"));
    }
    outcome(passed, detail)
}

fn theorem_two() -> Outcome {
    let s = theorem_stats();
    outcome(
        s.branches > 0 && s.angle_failures == 0 && s.cov_after <= 1e-10 && s.det_gap <= 1e-9,
        format!(
            "{} GIS rotated back; max |covS| {:.2e} (limit 1e-10), max detC gap {:.2e} (limit 1e-9), {} angle failures",
            s.branches, s.cov_after, s.det_gap, s.angle_failures
        ),
    )
}

fn spectrum_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut solved = 0usize;
    let opts = SolveOptions::default();
    for j in spins(20) {
        let pair = spin_pair(j, PairSelector::J1J2);
        for lambda in [-0.9, -0.6, -0.2, 0.2, 0.6, 0.9] {
            let scale = (1.0f64 - lambda * lambda).sqrt();
            let expected: Vec<f64> = (0..j.dim()).map(|k| (k as f64 - j.value()) * scale).collect();
            let mut dense: Vec<C64> = eig(&pair.ladder(C64::new(lambda, 0.0))).unwrap().eigenvalues();
            dense.sort_by(|a, b| a.re.total_cmp(&b.re));
            let solver: Vec<C64> = solve_intelligent(&pair, C64::new(lambda, 0.0), &opts)
                .unwrap()
                .states
                .iter()
                .map(|s| s.beta)
                .collect();
            for ((d, s), e) in dense.iter().zip(&solver).zip(&expected) {
                worst = worst.max((d - e).norm()).max((s - e).norm());
            }
            solved += 1;
        }
    }
    outcome(worst <= 1e-9, format!("{solved} spectra, max deviation {worst:.2e} (limit 1e-9)"))
}

fn schwinger() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=20usize {
        let g = schwinger_su2(n).unwrap();
        let (j1, j2, j3) = make_spin_observables(Spin::new(n as f64 / 2.0).unwrap());
        for (x, y) in [(&g.x1, &j1), (&g.x2, &j2), (&g.x3, &j3)] {
            worst = worst.max((x - y).max_abs());
        }
    }
    outcome(worst <= 1e-12, format!("N = 1..20, max entry gap {worst:.2e} (limit 1e-12)"))
}

fn puri() -> Outcome {
    let mut lowest = 1.0f64;
    let mut count = 0usize;
    let mut ok = true;
    for j in spins(8) {
        let pair = spin_pair(j, PairSelector::J1J2);
        for phi in [0.1f64, 0.4, 0.9] {
            let t = transport(&pair, I * phi.tan(), &SolveOptions::default()).unwrap();
            ok &= t.branches.len() == j.dim();
            for b in &t.branches {
                let m = HalfInteger::new(b.ois.beta.re).unwrap();
                lowest = lowest.min(overlap(&puri_state(j, m, phi).unwrap(), &b.gis.psi));
                count += 1;
            }
        }
    }
    outcome(
        ok && lowest >= 1.0 - 1e-9,
        format!("{count} states, min overlap 1 - {:.2e} (limit 1 - 1e-9)", 1.0 - lowest),
    )
}

fn truncation_certificate() -> Outcome {
    let opts = SolveOptions::default();
    let algebras = [
        AlgebraKind::Su11SingleMode {
            parity: Parity::Even,
            cutoff: 64,
        },
        AlgebraKind::Su11SingleMode {
            parity: Parity::Odd,
            cutoff: 64,
        },
        AlgebraKind::Su11TwoMode {
            sector_diff: 0,
            cutoff: 48,
        },
        AlgebraKind::Su11TwoMode {
            sector_diff: 1,
            cutoff: 48,
        },
    ];
    let points = [
        (PairSelector::K1K2, C64::new(-0.5, 0.3)),
        (PairSelector::K1K3, C64::new(0.5, 0.3)),
        (PairSelector::K2K3, C64::new(0.3, -0.4)),
    ];
    let (mut transport_delta, mut state_delta, mut optics_delta) = (0.0f64, 0.0f64, 0.0f64);
    let (mut states, mut failures) = (0usize, Vec::new());
    for algebra in algebras {
        for (sel, big) in points {
            let pair = make_pair(algebra, sel).unwrap();
            match certify_transport(&pair, big, &opts) {
                Ok(d) => transport_delta = transport_delta.max(d),
                Err(e) => failures.push(format!("{sel} transport: {e}")),
            }
            for s in solve_intelligent(&pair, big, &opts).unwrap().genuine() {
                state_delta = state_delta.max(padded_moment_delta(&pair, &s.psi).unwrap());
                states += 1;
            }
        }
        let space = algebra.fock_space().unwrap();
        for generator in [AmplifierGenerator::K1, AmplifierGenerator::K2] {
            for phi in [0.5, 1.0] {
                match optical_unitary(&OpticalElement::Parametric { generator, phi }, &space) {
                    Ok(out) => optics_delta = optics_delta.max(out.leakage.cutoff_doubling_delta),
                    Err(e) => failures.push(format!("{generator:?} phi {phi}: {e}")),
                }
            }
        }
        let phase = OpticalElement::PhaseShift {
            mode: PhaseMode::A,
            phi: 0.7,
        };
        optics_delta = optics_delta.max(optical_unitary(&phase, &space).unwrap().leakage.cutoff_doubling_delta);
    }
    let passed = failures.is_empty() && states > 0 && transport_delta.max(state_delta).max(optics_delta) <= 1e-6;
    let mut detail = format!(
        "transport {transport_delta:.2e}, {states} solved states {state_delta:.2e}, optics {optics_delta:.2e} (limit 1e-6)"
    );
    for f in failures.iter().take(3) {
        detail.push_str(&format!("; {f}"));
    }
    outcome(passed, detail)
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_intellistate"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn json_results(stdout: &str) -> Vec<Value> {
    let v: Value = serde_json::from_str(stdout).expect("JSON report");
    v["results"].as_array().cloned().unwrap_or_default()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

/// The documented CLI examples, each with its expected exit code and a
/// check on the report.
fn cli_examples(dir: &Path) -> Vec<String> {
    type Check = Box<dyn Fn(&str) -> bool>;
    let mut failures = Vec::new();
    let sweep_a = dir.join("sweep_a.csv");
    let sweep_b = dir.join("sweep_b.csv");
    let (sweep_a, sweep_b) = (sweep_a.to_str().unwrap(), sweep_b.to_str().unwrap());
    let header = "Lx,Ly,phi,lambda,roundtrip_err,gis_residual,detC_err,cov_after_rotation";
    let cases: Vec<(Vec<&str>, i32, Check)> = vec![
        (
            vec!["states", "--algebra", "su2", "--j", "1", "--pair", "J1J2", "--lambda", "0.6"],
            0,
            Box::new(|out| {
                let r = json_results(out);
                let betas: Vec<f64> = r.iter().map(|x| num(&x["beta"]["re"])).collect();
                r.len() == 3 && betas.iter().zip([-0.8, 0.0, 0.8]).all(|(b, e)| (b - e).abs() < 1e-9)
            }),
        ),
        (
            vec!["states", "--algebra", "su2", "--j", "0.5", "--pair", "J1J2", "--lambda", "0"],
            0,
            Box::new(|out| {
                let r = json_results(out);
                r.len() == 2 && r.iter().all(|x| num(&x["var_a"]).abs() < 1e-12)
            }),
        ),
        (
            vec![
                "states", "--algebra", "su11-single", "--parity", "even", "--cutoff", "64", "--pair", "K1K2",
                "--lambda", "0.5+0.3i",
            ],
            0,
            Box::new(|out| {
                let r = json_results(out);
                !r.is_empty() && r.iter().all(|x| num(&x["srr_residual"]).abs() <= 1e-6)
            }),
        ),
        (
            vec!["map", "--kind", "circular", "--Lambda", "0.8+0.6i"],
            0,
            Box::new(|out| {
                let r = &json_results(out)[0];
                (num(&r["lambda"]) - 0.5).abs() < 1e-12 && (num(&r["phi"]) - std::f64::consts::FRAC_PI_4).abs() < 1e-12
            }),
        ),
        (
            vec!["map", "--kind", "circular", "--Lambda", "0.3"],
            0,
            Box::new(|out| {
                let r = &json_results(out)[0];
                (num(&r["lambda"]) - 0.3).abs() < 1e-15 && num(&r["phi"]) == 0.0
            }),
        ),
        (
            vec!["map", "--kind", "hyperbolic", "--Lambda", "0.5i"],
            0,
            Box::new(|out| {
                let r = &json_results(out)[0];
                num(&r["lambda"]).abs() < 1e-15 && (num(&r["phi"]).tanh() - 0.5).abs() < 1e-12
            }),
        ),
        (
            vec!["map", "--kind", "hyperbolic", "--Lambda", "-i"],
            0,
            Box::new(|out| json_results(out)[0]["status"] == "boundary"),
        ),
        (
            vec!["verify", "--algebra", "su2", "--j", "1.5", "--grid", "-2:2:21,-2:2:21"],
            0,
            Box::new(|out| {
                let r = json_results(out);
                r.iter()
                    .filter(|x| x["status"] == "checked")
                    .all(|x| num(&x["gis_residual"]) <= 1e-9)
                    && r.iter().filter(|x| x["status"] == "checked").count() >= 21 * 21 - 2
            }),
        ),
        (
            vec!["verify", "--algebra", "su2", "--j", "1.5", "--grid", "-2:2:21,0:0:1"],
            0,
            Box::new(|out| {
                json_results(out)
                    .iter()
                    .filter(|x| x["status"] == "checked")
                    .all(|x| num(&x["phi"]) == 0.0 && num(&x["overlap"]) >= 1.0 - 1e-12)
            }),
        ),
        (
            vec!["verify", "--algebra", "su11-single", "--cutoff", "64", "--pair", "K1K3", "--exclude-radius", "0.05"],
            0,
            Box::new(|out| {
                let v: Value = serde_json::from_str(out).unwrap();
                v["summary"]["passed"] == true && num(&v["summary"]["branches"]) > 0.0
            }),
        ),
        (
            vec!["sweep", "--algebra", "su2", "--j", "1", "--grid", "-1:1:3,-1:1:3", "--out", sweep_a],
            0,
            Box::new(|_| true),
        ),
        (
            vec!["sweep", "--algebra", "su2", "--j", "1", "--grid", "-1:1:3,-1:1:3", "--out", sweep_b],
            0,
            Box::new(|_| true),
        ),
        (
            vec!["bosonic", "--algebra", "su11-single", "--element", "amplifier-k2", "--phi", "0.5"],
            0,
            Box::new(|out| num(&json_results(out)[0]["cutoff_doubling_delta"]) <= 1e-8),
        ),
        (
            vec!["bosonic", "--algebra", "su2", "--j", "0.5", "--element", "phase-relative", "--phi", "0.4"],
            0,
            Box::new(|out| num(&json_results(out)[0]["tail_mass"]) == 0.0),
        ),
        (vec!["states", "--lambda", "1+"], 2, Box::new(|_| true)),
        (
            vec!["bosonic", "--algebra", "su11-single", "--cutoff", "16", "--element", "amplifier-k2", "--phi", "2"],
            3,
            Box::new(|_| true),
        ),
    ];
    for (args, code, check) in cases {
        let (got, stdout) = cli(&args);
        if got != code || !check(&stdout) {
            failures.push(format!("`{}` exit {got} (want {code})", args.join(" ")));
        }
    }
    let a = std::fs::read(sweep_a).unwrap_or_default();
    let b = std::fs::read(sweep_b).unwrap_or_default();
    let text = String::from_utf8_lossy(&a);
    if a.is_empty() || a != b {
        failures.push("sweep reruns differ".into());
    }
    if text.lines().next() != Some(header) || text.lines().count() != 10 {
        failures.push("sweep layout".into());
    }
    failures
}

fn determinism_and_runtime() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let mut failures = cli_examples(dir.path());
    let elapsed = start.elapsed();
    // A larger truncated sweep, twice.
    let big: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let path = dir.path().join(format!("su11_{k}.csv"));
            let p = path.to_str().unwrap();
            let (code, _) = cli(&[
                "sweep", "--algebra", "su11-single", "--pair", "K2K3", "--grid", "-1:1:5,-1.5:1.5:5", "--out", p,
            ]);
            if code != 0 {
                failures.push(format!("su11 sweep exit {code}"));
            }
            std::fs::read(&path).unwrap_or_default()
        })
        .collect();
    if big[0].is_empty() || big[0] != big[1] {
        failures.push("su11 sweep reruns differ".into());
    }
    let passed = failures.is_empty() && elapsed < Duration::from_secs(120);
    let mut detail = format!("CLI suite {:.1} s (limit 120 s), byte-identical sweeps", elapsed.as_secs_f64());
    if !failures.is_empty() {
        detail = format!("{detail}; {}", failures.join("; "));
    }
    outcome(passed, detail)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("SRR equality", srr_equality),
        ("OIS suite", ois_suite),
        ("round trip", round_trip),
        ("theorem (i) transport", theorem_one),
        ("theorem (ii) covariance zeroing", theorem_two),
        ("spectrum oracle", spectrum_oracle),
        ("Schwinger equivalence", schwinger),
        ("Puri states", puri),
        ("truncation certificate", truncation_certificate),
        ("determinism and CLI runtime", determinism_and_runtime),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} ({}) [{:.1} s]",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
