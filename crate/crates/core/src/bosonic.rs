//! Truncated Fock-space realizations of su(2) and su(1,1), and the optical
//! elements generated by them.
//!
//! Operators are assembled by applying ladder-operator monomials to
//! occupation-number labels and keeping only the matrix elements between
//! retained basis states. Products such as `a†a` are therefore exact even on
//! the top level; only couplings that leave the retained basis are lost.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::algebra::{Generators, Parity};
use crate::error::{Error, Result};
use crate::linalg::{mat_exp, norm, ComplexSquareMatrix, C64, I, ONE, ZERO};

/// Smallest cutoff accepted by the su(1,1) constructors.
pub const MIN_CUTOFF: usize = 16;

/// Levels at the top of a truncated basis that count as "tail".
pub const TAIL_LEVELS: usize = 5;

/// Largest cutoff-doubling change tolerated for an optical element's probe.
pub const TRUNCATION_BUDGET: f64 = 1e-6;

/// Occupation numbers `(n_a, n_b)`; single-mode spaces keep `n_b = 0`.
pub type Occupation = [usize; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    A,
    ADag,
    B,
    BDag,
}

/// A sum of ladder monomials, each applied right to left.
#[derive(Debug, Clone, Default)]
pub struct FockOperator {
    terms: Vec<(C64, Vec<Ladder>)>,
}

impl FockOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, coeff: C64, word: &[Ladder]) -> Self {
        self.terms.push((coeff, word.to_vec()));
        self
    }

    pub fn real_term(self, coeff: f64, word: &[Ladder]) -> Self {
        self.term(C64::new(coeff, 0.0), word)
    }

    fn apply(word: &[Ladder], state: Occupation) -> Option<(f64, Occupation)> {
        let mut amp = 1.0;
        let mut occ = state;
        for op in word.iter().rev() {
            let (mode, raise) = match op {
                Ladder::A => (0, false),
                Ladder::ADag => (0, true),
                Ladder::B => (1, false),
                Ladder::BDag => (1, true),
            };
            if raise {
                occ[mode] += 1;
                amp *= (occ[mode] as f64).sqrt();
            } else {
                if occ[mode] == 0 {
                    return None;
                }
                amp *= (occ[mode] as f64).sqrt();
                occ[mode] -= 1;
            }
        }
        Some((amp, occ))
    }

    /// Compression of the operator onto `basis`.
    pub fn matrix(&self, basis: &[Occupation]) -> ComplexSquareMatrix {
        let mut m = ComplexSquareMatrix::zeros(basis.len());
        for (col, &state) in basis.iter().enumerate() {
            for (coeff, word) in &self.terms {
                if let Some((amp, image)) = Self::apply(word, state) {
                    if let Some(row) = basis.iter().position(|&b| b == image) {
                        m[(row, col)] += coeff * amp;
                    }
                }
            }
        }
        m
    }
}

/// A truncated (or exactly invariant) subspace of one or two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockSpace {
    /// Single mode, states `|n⟩` with `n ≡ parity (mod 2)`, `cutoff` levels.
    SingleModeParity { parity: Parity, cutoff: usize },
    /// Two modes with fixed `n_a − n_b = sector_diff`, `cutoff` levels.
    TwoModeDifference { sector_diff: i64, cutoff: usize },
    /// Two modes with fixed `n_a + n_b = total`; exactly invariant under su(2).
    TwoModeNumber { total: usize },
}

impl FockSpace {
    pub fn modes(&self) -> usize {
        match self {
            Self::SingleModeParity { .. } => 1,
            _ => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::SingleModeParity { cutoff, .. } | Self::TwoModeDifference { cutoff, .. } => cutoff,
            Self::TwoModeNumber { total } => total + 1,
        }
    }

    pub fn is_truncated(&self) -> bool {
        !matches!(self, Self::TwoModeNumber { .. })
    }

    /// Basis labels, ordered by increasing `K₃` for the su(1,1) sectors and by
    /// decreasing `J₃` (i.e. `n_a = N, …, 0`) for the su(2) sector.
    pub fn basis(&self) -> Vec<Occupation> {
        match *self {
            Self::SingleModeParity { parity, cutoff } => (0..cutoff)
                .map(|j| [2 * j + parity.offset(), 0])
                .collect(),
            Self::TwoModeDifference { sector_diff, cutoff } => {
                let q = sector_diff.unsigned_abs() as usize;
                (0..cutoff)
                    .map(|j| if sector_diff >= 0 { [j + q, j] } else { [j, j + q] })
                    .collect()
            }
            Self::TwoModeNumber { total } => (0..=total).rev().map(|na| [na, total - na]).collect(),
        }
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        match *self {
            Self::SingleModeParity { parity, .. } => Self::SingleModeParity { parity, cutoff },
            Self::TwoModeDifference { sector_diff, .. } => Self::TwoModeDifference { sector_diff, cutoff },
            s @ Self::TwoModeNumber { .. } => s,
        }
    }

    pub fn operator(&self, op: &FockOperator) -> ComplexSquareMatrix {
        op.matrix(&self.basis())
    }

    /// Probability in the top [`TAIL_LEVELS`] levels; zero for untruncated spaces.
    pub fn tail_mass(&self, psi: &[C64]) -> f64 {
        if !self.is_truncated() {
            return 0.0;
        }
        tail_mass(psi)
    }
}

/// Probability carried by the last [`TAIL_LEVELS`] components of `psi`.
pub fn tail_mass(psi: &[C64]) -> f64 {
    let start = psi.len().saturating_sub(TAIL_LEVELS);
    psi[start..].iter().map(|z| z.norm_sqr()).sum()
}

/// Ladder matrices on the full truncated Fock space (`cutoff` levels per mode,
/// two-mode states ordered `n_a · cutoff + n_b`).
#[derive(Debug, Clone)]
pub struct LadderSet {
    pub a: ComplexSquareMatrix,
    pub a_dag: ComplexSquareMatrix,
    pub b: Option<ComplexSquareMatrix>,
    pub b_dag: Option<ComplexSquareMatrix>,
}

impl LadderSet {
    pub fn single_mode(cutoff: usize) -> Self {
        let basis: Vec<Occupation> = (0..cutoff).map(|n| [n, 0]).collect();
        let a = FockOperator::new().real_term(1.0, &[Ladder::A]).matrix(&basis);
        Self {
            a_dag: a.adjoint(),
            a,
            b: None,
            b_dag: None,
        }
    }

    pub fn two_mode(cutoff: usize) -> Self {
        let basis: Vec<Occupation> = (0..cutoff)
            .flat_map(|na| (0..cutoff).map(move |nb| [na, nb]))
            .collect();
        let a = FockOperator::new().real_term(1.0, &[Ladder::A]).matrix(&basis);
        let b = FockOperator::new().real_term(1.0, &[Ladder::B]).matrix(&basis);
        Self {
            a_dag: a.adjoint(),
            a,
            b_dag: Some(b.adjoint()),
            b: Some(b),
        }
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::InvalidInput(format!(
            "cutoff must be at least {MIN_CUTOFF}, got {cutoff}"
        )));
    }
    Ok(())
}

fn half_i() -> C64 {
    C64::new(0.0, -0.5)
}

/// `J₁ = ½(a†b + ab†)`, `J₂ = (1/2i)(a†b − ab†)`, `J₃ = ½(a†a − b†b)`.
pub fn schwinger_operators() -> [FockOperator; 3] {
    use Ladder::*;
    [
        FockOperator::new()
            .real_term(0.5, &[ADag, B])
            .real_term(0.5, &[A, BDag]),
        FockOperator::new()
            .term(half_i(), &[ADag, B])
            .term(-half_i(), &[A, BDag]),
        FockOperator::new()
            .real_term(0.5, &[ADag, A])
            .real_term(-0.5, &[BDag, B]),
    ]
}

/// `K₁ = ½(a†b† + ab)`, `K₂ = (1/2i)(a†b† − ab)`, `K₃ = ½(a†a + b†b + 1)`.
pub fn two_mode_su11_operators() -> [FockOperator; 3] {
    use Ladder::*;
    [
        FockOperator::new()
            .real_term(0.5, &[ADag, BDag])
            .real_term(0.5, &[A, B]),
        FockOperator::new()
            .term(half_i(), &[ADag, BDag])
            .term(-half_i(), &[A, B]),
        FockOperator::new()
            .real_term(0.5, &[ADag, A])
            .real_term(0.5, &[BDag, B])
            .real_term(0.5, &[]),
    ]
}

/// `K₁ = ¼(a†² + a²)`, `K₂ = (1/4i)(a†² − a²)`, `K₃ = ¼(2a†a + 1)`.
pub fn single_mode_su11_operators() -> [FockOperator; 3] {
    use Ladder::*;
    let quarter_i = C64::new(0.0, -0.25);
    [
        FockOperator::new()
            .real_term(0.25, &[ADag, ADag])
            .real_term(0.25, &[A, A]),
        FockOperator::new()
            .term(quarter_i, &[ADag, ADag])
            .term(-quarter_i, &[A, A]),
        FockOperator::new()
            .real_term(0.5, &[ADag, A])
            .real_term(0.25, &[]),
    ]
}

fn build(space: FockSpace, ops: &[FockOperator; 3]) -> Generators {
    let basis = space.basis();
    Generators {
        x1: ops[0].matrix(&basis),
        x2: ops[1].matrix(&basis),
        x3: ops[2].matrix(&basis),
    }
}

/// su(2) on the `N`-photon sector of two modes, basis `|n_a, N − n_a⟩` with
/// `n_a = N, …, 0` (so `m = n_a − N/2` descends like the spin basis).
pub fn schwinger_su2(total: usize) -> Result<Generators> {
    if total == 0 {
        return Err(Error::InvalidInput("photon number must be at least 1".into()));
    }
    Ok(build(FockSpace::TwoModeNumber { total }, &schwinger_operators()))
}

pub fn su11_two_mode(sector_diff: i64, cutoff: usize) -> Result<Generators> {
    check_cutoff(cutoff)?;
    Ok(build(
        FockSpace::TwoModeDifference { sector_diff, cutoff },
        &two_mode_su11_operators(),
    ))
}

pub fn su11_single_mode(parity: Parity, cutoff: usize) -> Result<Generators> {
    check_cutoff(cutoff)?;
    Ok(build(
        FockSpace::SingleModeParity { parity, cutoff },
        &single_mode_su11_operators(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    A,
    B,
    /// `e^{iφJ₃}`: opposite half-phases on the two modes.
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitterGenerator {
    J1,
    J2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplifierGenerator {
    K1,
    K2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement {
    PhaseShift { mode: PhaseMode, phi: f64 },
    BeamSplitter { generator: SplitterGenerator, phi: f64 },
    Parametric { generator: AmplifierGenerator, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    /// Probability of the probe output in the top levels.
    pub tail_mass: f64,
    /// `‖U_c|probe⟩ ⊕ 0 − U_{2c}|probe⟩‖` between cutoffs `c` and `2c`.
    pub cutoff_doubling_delta: f64,
}

#[derive(Debug, Clone)]
pub struct OpticalOutput {
    pub unitary: ComplexSquareMatrix,
    pub leakage: LeakageReport,
    /// `U|probe⟩`, with the probe being the lowest basis state of the space.
    pub probe_output: Vec<C64>,
}

fn element_generator(element: &OpticalElement, space: &FockSpace) -> Result<(FockOperator, f64)> {
    use Ladder::*;
    let mismatch = |what: &str| {
        Err(Error::InvalidInput(format!("{what} is not defined on {space:?}")))
    };
    match *element {
        OpticalElement::PhaseShift { mode, phi } => {
            let op = match (mode, space.modes()) {
                (PhaseMode::A, _) => FockOperator::new().real_term(1.0, &[ADag, A]),
                (PhaseMode::B, 2) => FockOperator::new().real_term(1.0, &[BDag, B]),
                (PhaseMode::Relative, 2) => schwinger_operators()[2].clone(),
                _ => return mismatch("a second-mode phase shift"),
            };
            Ok((op, phi))
        }
        OpticalElement::BeamSplitter { generator, phi } => {
            if !matches!(space, FockSpace::TwoModeNumber { .. }) {
                return mismatch("a beam splitter");
            }
            let [j1, j2, _] = schwinger_operators();
            let op = match generator {
                SplitterGenerator::J1 => j1,
                SplitterGenerator::J2 => j2,
            };
            Ok((op, phi))
        }
        OpticalElement::Parametric { generator, phi } => {
            if phi.abs() > 2.0 {
                return Err(Error::InvalidInput(format!(
                    "parametric gain |phi| = {} exceeds 2",
                    phi.abs()
                )));
            }
            let [k1, k2, _] = match space {
                FockSpace::SingleModeParity { .. } => single_mode_su11_operators(),
                FockSpace::TwoModeDifference { .. } => two_mode_su11_operators(),
                FockSpace::TwoModeNumber { .. } => return mismatch("parametric amplification"),
            };
            let op = match generator {
                AmplifierGenerator::K1 => k1,
                AmplifierGenerator::K2 => k2,
            };
            Ok((op, phi))
        }
    }
}

fn exp_i_phi(space: &FockSpace, op: &FockOperator, phi: f64) -> Result<ComplexSquareMatrix> {
    mat_exp(&space.operator(op).scale(I * phi))
}

/// `U = e^{iφG}` for the element's generator `G`, exponentiated on the
/// truncated space, with a leakage report for the lowest basis state.
pub fn optical_unitary(element: &OpticalElement, space: &FockSpace) -> Result<OpticalOutput> {
    if let FockSpace::SingleModeParity { cutoff, .. } | FockSpace::TwoModeDifference { cutoff, .. } = *space {
        check_cutoff(cutoff)?;
    }
    let (op, phi) = element_generator(element, space)?;
    let unitary = exp_i_phi(space, &op, phi)?;
    let probe_output: Vec<C64> = (0..space.dim()).map(|i| unitary[(i, 0)]).collect();

    let leakage = if space.is_truncated() {
        let doubled = space.with_cutoff(2 * space.dim());
        let big = exp_i_phi(&doubled, &op, phi)?;
        let diff: Vec<C64> = (0..doubled.dim())
            .map(|i| {
                let small = probe_output.get(i).copied().unwrap_or(ZERO);
                small - big[(i, 0)]
            })
            .collect();
        LeakageReport {
            tail_mass: space.tail_mass(&probe_output),
            cutoff_doubling_delta: norm(&diff),
        }
    } else {
        LeakageReport {
            tail_mass: 0.0,
            cutoff_doubling_delta: 0.0,
        }
    };
    if leakage.cutoff_doubling_delta > TRUNCATION_BUDGET {
        return Err(Error::TruncationBudget {
            delta: leakage.cutoff_doubling_delta,
            limit: TRUNCATION_BUDGET,
        });
    }
    Ok(OpticalOutput {
        unitary,
        leakage,
        probe_output,
    })
}

/// Balanced 50:50 splitter, `e^{iπ/2·J₁}`, on the single-photon sector.
pub fn balanced_splitter() -> ComplexSquareMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexSquareMatrix::from_rows(&[vec![h * ONE, h * I], vec![h * I, h * ONE]])
}
