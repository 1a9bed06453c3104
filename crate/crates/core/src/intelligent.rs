//! Intelligent states: eigenvectors of `A + iλB`, their first and second
//! moments, and the uncertainty-relation bookkeeping built on them.

use std::fmt;

use crate::algebra::ObservablePair;
use crate::error::{Error, Result};
use crate::linalg::{eig, inner, norm, residual_scaled, TolerancePolicy, C64};

/// Default ceiling on tail mass for a truncated state to count as genuine.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: TolerancePolicy,
    pub leakage_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: TolerancePolicy::default(),
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: TolerancePolicy) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateStatus {
    Genuine,
    /// Eigenvector of a defective eigenvalue (e.g. `λ = ±1` for su(2)).
    BoundaryDefective,
    /// Too much weight near the cutoff to represent the untruncated state.
    TruncationUnsafe,
}

impl fmt::Display for StateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Genuine => "genuine",
            Self::BoundaryDefective => "boundary-defective",
            Self::TruncationUnsafe => "truncation-unsafe",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntelligentState {
    pub psi: Vec<C64>,
    pub lambda: C64,
    pub beta: C64,
    pub status: StateStatus,
    /// `‖(A + iλB)ψ − βψ‖`.
    pub residual: f64,
    /// Probability in the top levels; zero for untruncated algebras.
    pub tail_mass: f64,
}

impl IntelligentState {
    pub fn is_genuine(&self) -> bool {
        self.status == StateStatus::Genuine
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub states: Vec<IntelligentState>,
    /// Set when no genuine state was found.
    pub diagnostic: Option<String>,
}

impl Solution {
    pub fn genuine(&self) -> impl Iterator<Item = &IntelligentState> {
        self.states.iter().filter(|s| s.is_genuine())
    }
}

/// Orders by `Re β`, then `Im β`, on a grid fine enough to be far below any
/// tolerance but coarse enough that round-off does not reorder ties.
fn ordering_key(beta: C64) -> (i64, i64) {
    const GRID: f64 = 1e9;
    ((beta.re * GRID).round() as i64, (beta.im * GRID).round() as i64)
}

/// Every eigenvector of `A + iλB`, labelled genuine, defective or
/// truncation-unsafe, sorted by `β`.
pub fn solve_intelligent(pair: &ObservablePair, lambda: C64, opts: &SolveOptions) -> Result<Solution> {
    if !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
    }
    let m = pair.ladder(lambda);
    let system = eig(&m)?;
    let mut states: Vec<IntelligentState> = system
        .into_pairs()
        .into_iter()
        .map(|p| {
            let tail_mass = pair.tail_mass(&p.vector);
            let status = if p.is_defective() {
                StateStatus::BoundaryDefective
            } else if tail_mass > opts.leakage_threshold {
                StateStatus::TruncationUnsafe
            } else {
                StateStatus::Genuine
            };
            IntelligentState {
                residual: residual_scaled(&m, &p.vector, p.value, 1.0),
                psi: p.vector,
                lambda,
                beta: p.value,
                status,
                tail_mass,
            }
        })
        .collect();
    states.sort_by_key(|s| ordering_key(s.beta));

    let diagnostic = if states.iter().any(|s| s.is_genuine()) {
        None
    } else {
        let defective = states.iter().filter(|s| s.status == StateStatus::BoundaryDefective).count();
        let leaky = states.iter().filter(|s| s.status == StateStatus::TruncationUnsafe).count();
        Some(format!(
            "no genuine eigenvector of A + i({lambda})B: {defective} defective, {leaky} above leakage threshold {:e}",
            opts.leakage_threshold
        ))
    };
    if let Some(d) = &diagnostic {
        log::warn!("{d}");
    }
    Ok(Solution { states, diagnostic })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `½⟨{ΔA, ΔB}⟩`.
    pub cov_s: f64,
    /// `⟨[A, B]⟩`, purely imaginary for Hermitian `A, B`.
    pub comm_ab_expect: C64,
    /// `var_a · var_b − cov_s²`.
    pub det_c: f64,
    /// Critical variance `sqrt(|⟨[A,B]⟩|²/4 + cov_s²)`.
    pub vc: f64,
    /// `var_a · var_b − |⟨[A,B]⟩|²/4`.
    pub hur_residual: f64,
    /// `var_a · var_b − (|⟨[A,B]⟩|²/4 + cov_s²)`.
    pub srr_residual: f64,
}

impl MomentSummary {
    pub fn covariance_matrix(&self) -> [[f64; 2]; 2] {
        [[self.var_a, self.cov_s], [self.cov_s, self.var_b]]
    }

    /// `|⟨[A,B]⟩|² / 4`.
    pub fn commutator_bound(&self) -> f64 {
        self.comm_ab_expect.norm_sqr() / 4.0
    }
}

/// Moments without normalization or leakage checks.
pub fn moments_unchecked(pair: &ObservablePair, psi: &[C64]) -> MomentSummary {
    let mean_a = pair.a.expectation(psi).re;
    let mean_b = pair.b.expectation(psi).re;
    let f: Vec<C64> = pair.a.mul_vec(psi).iter().zip(psi).map(|(x, p)| x - p * mean_a).collect();
    let g: Vec<C64> = pair.b.mul_vec(psi).iter().zip(psi).map(|(x, p)| x - p * mean_b).collect();
    let var_a = norm(&f).powi(2);
    let var_b = norm(&g).powi(2);
    let cov_s = inner(&f, &g).re;
    let comm_ab_expect = pair.comm.expectation(psi);
    let bound = comm_ab_expect.norm_sqr() / 4.0;
    let product = var_a * var_b;
    MomentSummary {
        mean_a,
        mean_b,
        var_a,
        var_b,
        cov_s,
        comm_ab_expect,
        det_c: product - cov_s * cov_s,
        vc: (bound + cov_s * cov_s).sqrt(),
        hur_residual: product - bound,
        srr_residual: product - (bound + cov_s * cov_s),
    }
}

pub fn moments(pair: &ObservablePair, psi: &[C64], opts: &SolveOptions) -> Result<MomentSummary> {
    if psi.len() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            actual: psi.len(),
        });
    }
    let n = norm(psi);
    if (n - 1.0).abs() > opts.tol.rtol {
        return Err(Error::InvalidInput(format!("state is not normalized: norm {n}")));
    }
    let tail_mass = pair.tail_mass(psi);
    if tail_mass > opts.leakage_threshold {
        return Err(Error::TruncationUnsafe {
            tail_mass,
            threshold: opts.leakage_threshold,
        });
    }
    Ok(moments_unchecked(pair, psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Squeezing {
    Coherent,
    ASqueezed,
    BSqueezed,
    UnsqueezedIntelligent,
}

impl fmt::Display for Squeezing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Coherent => "coherent",
            Self::ASqueezed => "A-squeezed",
            Self::BSqueezed => "B-squeezed",
            Self::UnsqueezedIntelligent => "unsqueezed-intelligent",
        })
    }
}

pub fn classify(m: &MomentSummary, lambda: C64, tol: &TolerancePolicy) -> Squeezing {
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() <= tol.atol {
        Squeezing::Coherent
    } else if modulus < 1.0 && m.var_a < m.vc - tol.atol {
        Squeezing::ASqueezed
    } else if modulus > 1.0 && m.var_b < m.vc - tol.atol {
        Squeezing::BSqueezed
    } else {
        Squeezing::UnsqueezedIntelligent
    }
}
