//! The five subcommands. Each returns a [`Report`]; rendering and exit codes
//! live in the caller.

use intellistate::bosonic::TRUNCATION_BUDGET;
use intellistate::linalg::overlap;
use intellistate::{
    classify, covariance_angle, inverse_map, make_pair, moments_unchecked, optical_unitary, solve_intelligent,
    transport, working_pair, Error, InverseMap, ObservablePair, RotationKind, RotationPropagator, SolveOptions, StateStatus, TransportBranch, C64,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output::Record;
use crate::CliError;

pub const SWEEP_HEADER: [&str; 8] = [
    "Lx",
    "Ly",
    "phi",
    "lambda",
    "roundtrip_err",
    "gis_residual",
    "detC_err",
    "cov_after_rotation",
];

const MAP_HEADER: [&str; 7] = ["Lx", "Ly", "lambda", "phi", "branch", "roundtrip_err", "status"];

#[derive(Debug, Clone)]
pub struct Report {
    pub results: Vec<Record>,
    pub summary: Record,
    pub passed: bool,
    /// CSV header to use when there are no result rows.
    pub header: Vec<&'static str>,
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        tol: cfg.tol,
        leakage_threshold: cfg.leakage,
    }
}

/// Residual tolerance: `rtol` for exact representations; truncated ones
/// are held to the truncation budget instead.
fn residual_tol(pair: &ObservablePair, cfg: &RunConfig) -> f64 {
    if pair.is_truncated() {
        cfg.tol.rtol.max(TRUNCATION_BUDGET)
    } else {
        cfg.tol.rtol
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

pub fn states(cfg: &RunConfig) -> Result<Report, CliError> {
    let lambda = cfg
        .lambda
        .ok_or_else(|| CliError::Usage("states needs --lambda".into()))?;
    let pair = make_pair(cfg.algebra, cfg.selector)?;
    let solution = solve_intelligent(&pair, lambda, &solve_options(cfg))?;
    let srr_tol = residual_tol(&pair, cfg);
    let mut failed = 0usize;
    let mut max_srr: f64 = 0.0;
    let results = solution
        .states
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let m = moments_unchecked(&pair, &s.psi);
            let srr_err = relative_gap(m.var_a * m.var_b, m.commutator_bound() + m.cov_s * m.cov_s);
            let srr_pass = srr_err <= srr_tol;
            if s.is_genuine() {
                max_srr = max_srr.max(srr_err);
                if !srr_pass {
                    failed += 1;
                }
            }
            Record::new()
                .with("index", index)
                .with("beta", s.beta)
                .with("status", s.status.to_string())
                .with("classification", classify(&m, lambda, &cfg.tol).to_string())
                .with("eigen_residual", s.residual)
                .with("tail_mass", s.tail_mass)
                .with("mean_a", m.mean_a)
                .with("mean_b", m.mean_b)
                .with("var_a", m.var_a)
                .with("var_b", m.var_b)
                .with("cov_s", m.cov_s)
                .with("comm_expect", m.comm_ab_expect)
                .with("det_c", m.det_c)
                .with("vc", m.vc)
                .with("hur_residual", m.hur_residual)
                .with("srr_residual", m.srr_residual)
                .with("srr_err", srr_err)
                .with("srr_pass", srr_pass)
        })
        .collect::<Vec<_>>();
    let genuine = solution.states.iter().filter(|s| s.is_genuine()).count();
    let mut summary = Record::new()
        .with("command", "states")
        .with("states", solution.states.len())
        .with("genuine", genuine)
        .with("failed", failed)
        .with("max_srr_err", max_srr)
        .with("passed", failed == 0);
    if let Some(d) = solution.diagnostic {
        summary = summary.with("diagnostic", d);
    }
    Ok(Report {
        results,
        summary,
        passed: failed == 0,
        header: Vec::new(),
    })
}

pub fn map(cfg: &RunConfig) -> Result<Report, CliError> {
    let points = cfg.big_lambdas();
    let (mut ok, mut boundary, mut failed) = (0usize, 0usize, 0usize);
    let mut max_err: f64 = 0.0;
    let mut results = Vec::with_capacity(points.len());
    for big in points {
        let row = Record::new().with("Lx", big.re).with("Ly", big.im);
        let row = match inverse_map(cfg.kind, big, &cfg.tol) {
            Ok(inv) => {
                let pass = inv.roundtrip_err <= cfg.tol.rtol;
                if pass {
                    ok += 1;
                } else {
                    failed += 1;
                }
                max_err = max_err.max(inv.roundtrip_err);
                row.with("lambda", inv.lambda)
                    .with("phi", inv.phi)
                    .with("branch", inv.branch.to_string())
                    .with("roundtrip_err", inv.roundtrip_err)
                    .with("status", if pass { "ok" } else { "fail" })
            }
            Err(e) => {
                let status = match e {
                    Error::BoundaryOrbit { .. } => {
                        boundary += 1;
                        "boundary".to_string()
                    }
                    other => {
                        failed += 1;
                        log::warn!("map at Lambda = {big}: {other}");
                        "error".to_string()
                    }
                };
                row.with("lambda", f64::NAN)
                    .with("phi", f64::NAN)
                    .with("branch", "")
                    .with("roundtrip_err", f64::NAN)
                    .with("status", status)
            }
        };
        results.push(row);
    }
    Ok(Report {
        summary: Record::new()
            .with("command", "map")
            .with("kind", cfg.kind.to_string())
            .with("rows", results.len())
            .with("ok", ok)
            .with("boundary", boundary)
            .with("failed", failed)
            .with("max_roundtrip_err", max_err)
            .with("passed", failed == 0),
        results,
        passed: failed == 0,
        header: MAP_HEADER.to_vec(),
    })
}

/// Outcome of checking one `Λ`.
#[derive(Debug, Clone)]
pub struct PointCheck {
    pub big_lambda: C64,
    pub status: PointStatus,
    pub inverse: Option<InverseMap>,
    pub branches: Vec<BranchCheck>,
    /// Branches whose GIS was not genuine.
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Checked,
    Excluded,
    Boundary,
    NoGenuineState,
    Error,
}

impl PointStatus {
    fn label(self) -> &'static str {
        match self {
            Self::Checked => "checked",
            Self::Excluded => "excluded",
            Self::Boundary => "boundary",
            Self::NoGenuineState => "no-genuine-state",
            Self::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchCheck {
    pub beta: C64,
    pub beta_prime: C64,
    pub gis_residual: f64,
    pub beta_prime_err: f64,
    pub tail_mass: f64,
    pub overlap: f64,
    pub cov_before: f64,
    pub zeroing_phi: f64,
    pub cov_after_rotation: f64,
    pub det_c_err: f64,
    pub srr_err: f64,
    pub passed: bool,
}

impl PointCheck {
    pub fn passed(&self) -> bool {
        self.status != PointStatus::Error && self.branches.iter().all(|b| b.passed)
    }
}

fn excluded(cfg: &RunConfig, big: C64) -> bool {
    cfg.kind == RotationKind::Hyperbolic
        && ((big - C64::i()).norm() < cfg.exclude_radius || (big + C64::i()).norm() < cfg.exclude_radius)
}

fn check_branch(
    work: &ObservablePair,
    prop: &RotationPropagator,
    b: &TransportBranch,
    res_tol: f64,
    cfg: &RunConfig,
) -> BranchCheck {
    let m = moments_unchecked(work, &b.gis.psi);
    let srr_err = relative_gap(m.var_a * m.var_b, m.commutator_bound() + m.cov_s * m.cov_s);
    // Rotating back by the covariance-zeroing angle should land on an OIS.
    let (zeroing_phi, cov_after, det_c_err) = match covariance_angle(work.kind, &m, &cfg.tol) {
        Ok(angle) => {
            let back = moments_unchecked(work, &prop.apply(-angle.phi, &b.gis.psi));
            let err = relative_gap(back.det_c, back.var_a * back.var_b)
                .max(relative_gap(back.det_c, back.commutator_bound()));
            (angle.phi, back.cov_s, err)
        }
        Err(e) => {
            log::warn!("covariance angle at Lambda = {}: {e}", b.record.big_lambda);
            (f64::NAN, f64::NAN, f64::NAN)
        }
    };
    let passed = b.record.roundtrip_err <= cfg.tol.rtol
        && b.record.gis_residual <= res_tol
        && b.record.beta_prime_err <= res_tol
        && srr_err <= res_tol
        && cov_after.abs() <= cfg.tol.atol
        && det_c_err <= cfg.tol.rtol;
    BranchCheck {
        beta: b.record.beta,
        beta_prime: b.record.beta_prime,
        gis_residual: b.record.gis_residual,
        beta_prime_err: b.record.beta_prime_err,
        tail_mass: b.gis.tail_mass,
        overlap: overlap(&b.ois.psi, &b.gis.psi),
        cov_before: m.cov_s,
        zeroing_phi,
        cov_after_rotation: cov_after,
        det_c_err,
        srr_err,
        passed,
    }
}

/// `prop` factorizes the generator of the working pair that `transport`
/// solves in.
pub fn check_point(pair: &ObservablePair, prop: &RotationPropagator, big: C64, cfg: &RunConfig) -> PointCheck {
    let mut out = PointCheck {
        big_lambda: big,
        status: PointStatus::Checked,
        inverse: None,
        branches: Vec::new(),
        skipped: 0,
    };
    if excluded(cfg, big) {
        out.status = PointStatus::Excluded;
        return out;
    }
    out.inverse = inverse_map(pair.kind, big, &cfg.tol).ok();
    let t = match transport(pair, big, &solve_options(cfg)) {
        Ok(t) => t,
        Err(e) => {
            out.status = match e {
                Error::BoundaryOrbit { .. } => PointStatus::Boundary,
                Error::NoGenuineState(_) => PointStatus::NoGenuineState,
                other => {
                    log::warn!("transport at Lambda = {big}: {other}");
                    PointStatus::Error
                }
            };
            return out;
        }
    };
    let res_tol = residual_tol(pair, cfg);
    for b in &t.branches {
        if b.gis.status == StateStatus::Genuine {
            out.branches.push(check_branch(&t.pair, prop, b, res_tol, cfg));
        } else {
            out.skipped += 1;
        }
    }
    if out.branches.is_empty() {
        out.status = PointStatus::NoGenuineState;
    }
    out
}

fn check_grid(cfg: &RunConfig) -> Result<(ObservablePair, Vec<PointCheck>), CliError> {
    if cfg.kind != cfg.selector.kind() {
        return Err(CliError::Usage(format!(
            "--kind {} does not match pair {} ({})",
            cfg.kind,
            cfg.selector,
            cfg.selector.kind()
        )));
    }
    let pair = make_pair(cfg.algebra, cfg.selector)?;
    let prop = working_pair(&pair)?.0.rotation_propagator()?;
    let checks = cfg
        .big_lambdas()
        .par_iter()
        .map(|&big| check_point(&pair, &prop, big, cfg))
        .collect::<Vec<_>>();
    Ok((pair, checks))
}

fn grid_summary(command: &'static str, checks: &[PointCheck]) -> (Record, bool) {
    let count = |s: PointStatus| checks.iter().filter(|c| c.status == s).count();
    let branches: usize = checks.iter().map(|c| c.branches.len()).sum();
    let failed_branches = checks.iter().flat_map(|c| &c.branches).filter(|b| !b.passed).count();
    let max = |f: fn(&BranchCheck) -> f64| {
        checks
            .iter()
            .flat_map(|c| &c.branches)
            .map(f)
            .fold(0.0, |acc: f64, x| if x.is_nan() { f64::NAN } else { acc.max(x) })
    };
    let errors = count(PointStatus::Error);
    let passed = errors == 0 && failed_branches == 0;
    let summary = Record::new()
        .with("command", command)
        .with("points", checks.len())
        .with("checked", count(PointStatus::Checked))
        .with("excluded", count(PointStatus::Excluded))
        .with("boundary", count(PointStatus::Boundary))
        .with("no_genuine_state", count(PointStatus::NoGenuineState))
        .with("errors", errors)
        .with("branches", branches)
        .with("failed_branches", failed_branches)
        .with("skipped_branches", checks.iter().map(|c| c.skipped).sum::<usize>())
        .with("max_gis_residual", max(|b| b.gis_residual))
        .with("max_beta_prime_err", max(|b| b.beta_prime_err))
        .with("max_cov_after_rotation", max(|b| b.cov_after_rotation.abs()))
        .with("max_detC_err", max(|b| b.det_c_err))
        .with("max_srr_err", max(|b| b.srr_err))
        .with("passed", passed);
    (summary, passed)
}

fn inverse_fields(row: Record, inv: Option<&InverseMap>) -> Record {
    match inv {
        Some(inv) => row
            .with("lambda", inv.lambda)
            .with("phi", inv.phi)
            .with("branch", inv.branch.to_string())
            .with("roundtrip_err", inv.roundtrip_err),
        None => row
            .with("lambda", f64::NAN)
            .with("phi", f64::NAN)
            .with("branch", "")
            .with("roundtrip_err", f64::NAN),
    }
}

pub fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let (_, checks) = check_grid(cfg)?;
    let mut results = Vec::new();
    for c in &checks {
        let base = || {
            let row = Record::new()
                .with("Lx", c.big_lambda.re)
                .with("Ly", c.big_lambda.im)
                .with("status", c.status.label());
            inverse_fields(row, c.inverse.as_ref())
        };
        if c.branches.is_empty() {
            let nan = C64::new(f64::NAN, f64::NAN);
            results.push(
                base()
                    .with("ois", -1i64)
                    .with("beta", nan)
                    .with("beta_prime", nan)
                    .with("gis_residual", f64::NAN)
                    .with("beta_prime_err", f64::NAN)
                    .with("tail_mass", f64::NAN)
                    .with("overlap", f64::NAN)
                    .with("cov_before", f64::NAN)
                    .with("zeroing_phi", f64::NAN)
                    .with("cov_after_rotation", f64::NAN)
                    .with("detC_err", f64::NAN)
                    .with("srr_err", f64::NAN)
                    .with("pass", c.status != PointStatus::Error),
            );
        }
        for (k, b) in c.branches.iter().enumerate() {
            results.push(
                base()
                    .with("ois", k as i64)
                    .with("beta", b.beta)
                    .with("beta_prime", b.beta_prime)
                    .with("gis_residual", b.gis_residual)
                    .with("beta_prime_err", b.beta_prime_err)
                    .with("tail_mass", b.tail_mass)
                    .with("overlap", b.overlap)
                    .with("cov_before", b.cov_before)
                    .with("zeroing_phi", b.zeroing_phi)
                    .with("cov_after_rotation", b.cov_after_rotation)
                    .with("detC_err", b.det_c_err)
                    .with("srr_err", b.srr_err)
                    .with("pass", b.passed),
            );
        }
    }
    let (summary, passed) = grid_summary("verify", &checks);
    Ok(Report {
        results,
        summary,
        passed,
        header: Vec::new(),
    })
}

/// One row per grid point; residuals are the worst over genuine branches.
pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let (_, checks) = check_grid(cfg)?;
    let worst = |c: &PointCheck, f: fn(&BranchCheck) -> f64| {
        if c.branches.is_empty() {
            f64::NAN
        } else {
            c.branches.iter().map(f).fold(0.0, f64::max)
        }
    };
    let results = checks
        .iter()
        .map(|c| {
            let (phi, lambda, rt) = match &c.inverse {
                Some(inv) if c.status != PointStatus::Excluded => (inv.phi, inv.lambda, inv.roundtrip_err),
                _ => (f64::NAN, f64::NAN, f64::NAN),
            };
            Record::new()
                .with("Lx", c.big_lambda.re)
                .with("Ly", c.big_lambda.im)
                .with("phi", phi)
                .with("lambda", lambda)
                .with("roundtrip_err", rt)
                .with("gis_residual", worst(c, |b| b.gis_residual))
                .with("detC_err", worst(c, |b| b.det_c_err))
                .with("cov_after_rotation", worst(c, |b| b.cov_after_rotation.abs()))
        })
        .collect();
    let (summary, passed) = grid_summary("sweep", &checks);
    Ok(Report {
        results,
        summary,
        passed,
        header: SWEEP_HEADER.to_vec(),
    })
}

pub fn bosonic(cfg: &RunConfig) -> Result<Report, CliError> {
    let element = cfg.optical_element()?;
    let space = cfg.fock_space();
    let out = optical_unitary(&element, &space)?;
    let dim = space.dim();
    let unitarity_err = out.unitary.unitary_deviation();
    let mean_photons: f64 = space
        .basis()
        .iter()
        .zip(&out.probe_output)
        .map(|(n, c)| c.norm_sqr() * (n[0] + n[1]) as f64)
        .sum();
    let passed = unitarity_err <= cfg.tol.rtol * dim as f64;
    let row = Record::new()
        .with("phi", cfg.phi.unwrap_or(f64::NAN))
        .with("dim", dim)
        .with("unitarity_err", unitarity_err)
        .with("tail_mass", out.leakage.tail_mass)
        .with("cutoff_doubling_delta", out.leakage.cutoff_doubling_delta)
        .with("probe_mean_photons", mean_photons)
        .with("pass", passed);
    Ok(Report {
        results: vec![row],
        summary: Record::new().with("command", "bosonic").with("passed", passed),
        passed,
        header: Vec::new(),
    })
}
