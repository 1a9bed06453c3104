//! The correspondence between generalized and ordinary intelligent states:
//! parameter maps `(λ, φ) ↔ Λ`, transport `|Ψ⟩ = U|Φ⟩`, covariance-zeroing
//! angles, and the Puri construction for su(2).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use crate::algebra::{make_pair, make_spin_observables, HalfInteger, ObservablePair, RotationKind, Spin};
use crate::error::{Error, Result};
use crate::intelligent::{moments_unchecked, solve_intelligent, IntelligentState, MomentSummary, SolveOptions, StateStatus};
use crate::linalg::{basis_vector, mat_exp, residual_scaled, TolerancePolicy, C64, I, ZERO};

/// Round-trip error above which the circular map tries the shifted branch.
const BRANCH_TRIGGER: f64 = 64.0 * f64::EPSILON;

fn denominator(kind: RotationKind, lambda: f64, phi: f64) -> C64 {
    match kind {
        RotationKind::Circular => C64::new(phi.cos(), lambda * phi.sin()),
        RotationKind::Hyperbolic => C64::new(phi.cosh(), -lambda * phi.sinh()),
    }
}

/// `(Λ, β')` for an OIS with real parameter `λ` rotated by `e^{iφG}`.
///
/// Circular: `Λ = (λ cos φ + i sin φ)/(cos φ + iλ sin φ)`, `β' = β/(cos φ + iλ sin φ)`.
/// Hyperbolic: `Λ = (λ cosh φ + i sinh φ)/(cosh φ − iλ sinh φ)`, `β' = β/(cosh φ − iλ sinh φ)`.
pub fn forward_map(
    kind: RotationKind,
    lambda: f64,
    phi: f64,
    beta: C64,
    tol: &TolerancePolicy,
) -> Result<(C64, C64)> {
    if !lambda.is_finite() || !phi.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidInput("forward map needs finite lambda, phi and beta".into()));
    }
    let den = denominator(kind, lambda, phi);
    if den.norm() <= tol.atol {
        return Err(Error::SingularMap { denominator: den.norm() });
    }
    let num = match kind {
        RotationKind::Circular => C64::new(lambda * phi.cos(), phi.sin()),
        RotationKind::Hyperbolic => C64::new(lambda * phi.cosh(), phi.sinh()),
    };
    let big = num / den;
    let beta_prime = beta / den;
    if !big.is_finite() || !beta_prime.is_finite() {
        return Err(Error::SingularMap { denominator: den.norm() });
    }
    Ok((big, beta_prime))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `φ` in the principal interval (`(−π/4, π/4]` for circular maps).
    Principal,
    /// `φ ± π/2` with `λ → 1/λ`; used when the principal branch cannot close.
    Shifted,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Principal => "principal",
            Self::Shifted => "shifted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMap {
    pub lambda: f64,
    pub phi: f64,
    pub branch: Branch,
    /// `|forward(λ, φ) − Λ| / max(1, |Λ|)`.
    pub roundtrip_err: f64,
}

fn roundtrip(kind: RotationKind, big: C64, lambda: f64, phi: f64, tol: &TolerancePolicy) -> f64 {
    match forward_map(kind, lambda, phi, C64::new(1.0, 0.0), tol) {
        Ok((back, _)) => (back - big).norm() / big.norm().max(1.0),
        Err(_) => f64::INFINITY,
    }
}

fn circular_candidate(big: C64, phi: f64, tol: &TolerancePolicy) -> f64 {
    let den = 1.0 + big.im * phi.tan();
    if den.abs() <= tol.atol && big.re.abs() <= tol.atol {
        0.0
    } else {
        big.re / den
    }
}

/// `(λ, φ)` with `forward_map(λ, φ) = Λ`.
pub fn inverse_map(kind: RotationKind, big: C64, tol: &TolerancePolicy) -> Result<InverseMap> {
    if !big.is_finite() {
        return Err(Error::InvalidInput(format!("Lambda must be finite, got {big}")));
    }
    match kind {
        RotationKind::Circular => inverse_circular(big, tol),
        RotationKind::Hyperbolic => inverse_hyperbolic(big, tol),
    }
}

fn inverse_circular(big: C64, tol: &TolerancePolicy) -> Result<InverseMap> {
    let (x, y) = (big.re, big.im);
    let r = x.hypot(y);
    let num = 2.0 * y;
    let den = (1.0 - r) * (1.0 + r);
    // tan 2φ = 2Λ_y / (1 − |Λ|²) with 2φ ∈ (−π/2, π/2].
    let two_phi = if num == 0.0 && den == 0.0 {
        0.0
    } else if den.abs() <= 4.0 * f64::EPSILON * num.abs() {
        FRAC_PI_2
    } else {
        (num / den).atan()
    };
    let phi0 = two_phi / 2.0;
    let lambda0 = circular_candidate(big, phi0, tol);
    let err0 = roundtrip(RotationKind::Circular, big, lambda0, phi0, tol);
    let principal = InverseMap {
        lambda: lambda0,
        phi: phi0,
        branch: Branch::Principal,
        roundtrip_err: err0,
    };
    let chosen = if err0 > BRANCH_TRIGGER || !lambda0.is_finite() {
        let phi1 = if phi0 > 0.0 { phi0 - FRAC_PI_2 } else { phi0 + FRAC_PI_2 };
        let lambda1 = circular_candidate(big, phi1, tol);
        let err1 = roundtrip(RotationKind::Circular, big, lambda1, phi1, tol);
        if lambda1.is_finite() && err1 < err0 {
            InverseMap {
                lambda: lambda1,
                phi: phi1,
                branch: Branch::Shifted,
                roundtrip_err: err1,
            }
        } else {
            principal
        }
    } else {
        principal
    };
    if chosen.roundtrip_err.is_nan() || chosen.roundtrip_err > tol.rtol {
        return Err(Error::NumericFailure {
            routine: "inverse_map",
            iterations: 2,
            detail: format!("round trip for Lambda = {big} does not close: {:e}", chosen.roundtrip_err),
        });
    }
    debug_assert!(chosen.branch == Branch::Shifted || (phi0 > -FRAC_PI_4 && phi0 <= FRAC_PI_4));
    Ok(chosen)
}

fn inverse_hyperbolic(big: C64, tol: &TolerancePolicy) -> Result<InverseMap> {
    let (x, y) = (big.re, big.im);
    let plus = (big + I).norm();
    let minus = (big - I).norm();
    if plus <= tol.atol || minus <= tol.atol {
        return Err(Error::BoundaryOrbit { lambda: big });
    }
    // tanh 2φ = 2Λ_y / (1 + |Λ|²), i.e. e^{2φ} = |Λ + i| / |Λ − i|.
    let phi = 0.5 * (plus / minus).ln();
    // λ = Λ_x / (1 − Λ_y tanh φ) = Λ_x (|Λ+i| + |Λ−i|) / N, with N arranged
    // to avoid cancellation on either side of |Λ_y| = 1.
    let n = if y.abs() <= 1.0 {
        plus * (1.0 - y) + minus * (1.0 + y)
    } else {
        4.0 * y * x * x / (minus * (1.0 + y) + plus * (y - 1.0))
    };
    let lambda = x * (plus + minus) / n;
    let lambda = if x == 0.0 && y.abs() <= 1.0 { 0.0 } else { lambda };
    if !lambda.is_finite() {
        // Λ = iy with |y| > 1 needs λ = ∞.
        return Err(Error::BoundaryOrbit { lambda: big });
    }
    let roundtrip_err = roundtrip(RotationKind::Hyperbolic, big, lambda, phi, tol);
    if roundtrip_err.is_nan() || roundtrip_err > tol.rtol {
        return Err(Error::BoundaryOrbit { lambda: big });
    }
    Ok(InverseMap {
        lambda,
        phi,
        branch: Branch::Principal,
        roundtrip_err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceRecord {
    pub big_lambda: C64,
    pub lambda: f64,
    pub phi: f64,
    pub beta: C64,
    pub beta_prime: C64,
    pub kind: RotationKind,
    pub branch: Branch,
    pub roundtrip_err: f64,
    /// `‖(A + iΛB)ψ − β'ψ‖`.
    pub gis_residual: f64,
    /// `|β' − (⟨A⟩ + iΛ⟨B⟩)| / max(1, |β'|)` for the transported state.
    pub beta_prime_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportBranch {
    pub ois: IntelligentState,
    pub gis: IntelligentState,
    pub record: EquivalenceRecord,
}

/// GIS branches together with the representation their vectors live in.
#[derive(Debug, Clone)]
pub struct Transport {
    /// Working pair: the input pair for exact algebras, twice the cutoff for
    /// truncated ones.
    pub pair: ObservablePair,
    /// Levels of the working space that lie inside the caller's interior.
    pub trusted: Vec<bool>,
    pub branches: Vec<TransportBranch>,
}

/// The pair a truncated computation is carried out in, plus the mask of
/// working levels that belong to the caller's interior.
pub fn working_pair(pair: &ObservablePair) -> Result<(ObservablePair, Vec<bool>)> {
    if !pair.is_truncated() {
        return Ok((pair.clone(), pair.interior.clone()));
    }
    let work = make_pair(pair.algebra.with_cutoff(2 * pair.dim()), pair.selector)?;
    let mut trusted = pair.interior.clone();
    trusted.resize(work.dim(), false);
    Ok((work, trusted))
}

fn leakage(trusted: &[bool], psi: &[C64]) -> f64 {
    psi.iter().zip(trusted).filter(|(_, &t)| !t).fold(0.0, |acc, (z, _)| acc + z.norm_sqr())
}

/// Builds GISs with parameter `Λ` by rotating the OISs of the preimage `λ`,
/// one branch per OIS.
///
/// Truncated pairs are solved and rotated at twice their cutoff, and a branch
/// is genuine only if both its OIS and GIS keep all but
/// `opts.leakage_threshold` of their probability inside the caller's
/// interior. Fails if no OIS is genuine; otherwise every branch is returned
/// with its status.
pub fn transport(pair: &ObservablePair, big: C64, opts: &SolveOptions) -> Result<Transport> {
    let inv = inverse_map(pair.kind, big, &opts.tol)?;
    let (work, trusted) = working_pair(pair)?;
    let lambda = C64::new(inv.lambda, 0.0);
    let solution = solve_intelligent(&work, lambda, opts)?;
    let classify = |status: StateStatus, leak: f64| match status {
        StateStatus::BoundaryDefective => StateStatus::BoundaryDefective,
        _ if leak > opts.leakage_threshold => StateStatus::TruncationUnsafe,
        _ => StateStatus::Genuine,
    };
    let oises: Vec<IntelligentState> = solution
        .states
        .into_iter()
        .map(|mut s| {
            s.tail_mass = leakage(&trusted, &s.psi);
            s.status = classify(s.status, s.tail_mass);
            s
        })
        .collect();
    if !oises.iter().any(|s| s.is_genuine()) {
        return Err(Error::NoGenuineState(format!(
            "no genuine OIS at lambda = {} for Lambda = {big}",
            inv.lambda
        )));
    }
    let u = work.rotation_unitary(inv.phi)?;
    let ladder = work.ladder(big);
    let branches = oises
        .into_iter()
        .map(|ois| {
            let (_, beta_prime) = forward_map(pair.kind, inv.lambda, inv.phi, ois.beta, &opts.tol)?;
            let psi = u.mul_vec(&ois.psi);
            let gis_residual = residual_scaled(&ladder, &psi, beta_prime, 1.0);
            let m = moments_unchecked(&work, &psi);
            let recomputed = C64::new(m.mean_a, 0.0) + I * big * m.mean_b;
            let beta_prime_err = (beta_prime - recomputed).norm() / beta_prime.norm().max(1.0);
            let tail_mass = leakage(&trusted, &psi);
            let status = match ois.status {
                StateStatus::Genuine => classify(StateStatus::Genuine, tail_mass),
                s => s,
            };
            let record = EquivalenceRecord {
                big_lambda: big,
                lambda: inv.lambda,
                phi: inv.phi,
                beta: ois.beta,
                beta_prime,
                kind: pair.kind,
                branch: inv.branch,
                roundtrip_err: inv.roundtrip_err,
                gis_residual,
                beta_prime_err,
            };
            let gis = IntelligentState {
                psi,
                lambda: big,
                beta: beta_prime,
                status,
                residual: gis_residual,
                tail_mass,
            };
            Ok(TransportBranch { ois, gis, record })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Transport {
        pair: work,
        trusted,
        branches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceAngle {
    pub phi: f64,
    pub predicted_cov_after: f64,
}

/// Symmetric covariance of `e^{−iφG}|ψ⟩` predicted from the moments of `|ψ⟩`.
///
/// Circular: `½ sin 2φ (var_A − var_B) + cos 2φ · cov`.
/// Hyperbolic: `cosh 2φ · cov − ½ sinh 2φ (var_A + var_B)`.
pub fn predict_rotated_cov(kind: RotationKind, m: &MomentSummary, phi: f64) -> f64 {
    let two = 2.0 * phi;
    match kind {
        RotationKind::Circular => 0.5 * two.sin() * (m.var_a - m.var_b) + two.cos() * m.cov_s,
        RotationKind::Hyperbolic => two.cosh() * m.cov_s - 0.5 * two.sinh() * (m.var_a + m.var_b),
    }
}

/// Angle `φ` for which `e^{−iφG}|ψ⟩` has vanishing symmetric covariance.
pub fn covariance_angle(kind: RotationKind, m: &MomentSummary, tol: &TolerancePolicy) -> Result<CovarianceAngle> {
    let phi = match kind {
        RotationKind::Circular => {
            let num = 2.0 * m.cov_s;
            let den = m.var_b - m.var_a;
            if num.abs() <= tol.atol && den.abs() <= tol.atol {
                0.0
            } else if den == 0.0 {
                FRAC_PI_4
            } else {
                0.5 * (num / den).atan()
            }
        }
        RotationKind::Hyperbolic => {
            let den = m.var_a + m.var_b;
            if den.is_nan() || den <= 0.0 {
                return Err(Error::DegenerateState(format!(
                    "var_A + var_B = {den} leaves the boost angle undefined"
                )));
            }
            let t = 2.0 * m.cov_s / den;
            if t.abs() >= 1.0 - tol.atol {
                return Err(Error::DegenerateState(format!("tanh 2phi = {t} is not reachable")));
            }
            0.5 * t.atanh()
        }
    };
    Ok(CovarianceAngle {
        phi,
        predicted_cov_after: predict_rotated_cov(kind, m, phi),
    })
}

/// `e^{iφJ₃} e^{−iπ/2·J₂} |J, m⟩`.
pub fn puri_state(j: Spin, m: HalfInteger, phi: f64) -> Result<Vec<C64>> {
    if !phi.is_finite() {
        return Err(Error::InvalidInput("phi must be finite".into()));
    }
    let index = j.index_of(m)?;
    let (_, j2, j3) = make_spin_observables(j);
    let tilt = mat_exp(&j2.scale(-I * FRAC_PI_2))?;
    let turn = mat_exp(&j3.scale(I * phi))?;
    Ok(turn.mul_vec(&tilt.mul_vec(&basis_vector(j.dim(), index))))
}

/// Largest change of the reported moments when `psi` is zero-padded into the
/// representation with twice the cutoff.
pub fn padded_moment_delta(pair: &ObservablePair, psi: &[C64]) -> Result<f64> {
    if !pair.is_truncated() {
        return Ok(0.0);
    }
    let big = make_pair(pair.algebra.with_cutoff(2 * pair.dim()), pair.selector)?;
    let mut padded = psi.to_vec();
    padded.resize(big.dim(), C64::new(0.0, 0.0));
    Ok(moment_distance(&moments_unchecked(pair, psi), &moments_unchecked(&big, &padded)))
}

fn moment_distance(a: &MomentSummary, b: &MomentSummary) -> f64 {
    [
        a.mean_a - b.mean_a,
        a.mean_b - b.mean_b,
        a.var_a - b.var_a,
        a.var_b - b.var_b,
        a.cov_s - b.cov_s,
        (a.comm_ab_expect - b.comm_ab_expect).norm(),
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max)
}

/// Cutoff-doubling certificate for a transport.
///
/// Each genuine GIS is embedded, unchanged, into the working space of the
/// doubled pair, where its eigen-residual, `β'` and moments are recomputed.
/// Returns the largest residual or change. Re-solving at the doubled cutoff
/// and matching eigenvalues would not work: when the ladder operator is
/// dominated by the lowering generator, every complex `β` has a normalizable
/// eigenvector, and which ones a truncation returns depends on the cutoff.
pub fn certify_transport(pair: &ObservablePair, big: C64, opts: &SolveOptions) -> Result<f64> {
    if !pair.is_truncated() {
        return Ok(0.0);
    }
    let small = transport(pair, big, opts)?;
    let doubled = make_pair(pair.algebra.with_cutoff(2 * pair.dim()), pair.selector)?;
    let (large, _) = working_pair(&doubled)?;
    let ladder = large.ladder(big);
    let mut delta: f64 = 0.0;
    for b in small.branches.iter().filter(|b| b.gis.is_genuine()) {
        let mut padded = b.gis.psi.clone();
        padded.resize(large.dim(), ZERO);
        let beta_prime = b.record.beta_prime;
        let ms = moments_unchecked(&small.pair, &b.gis.psi);
        let ml = moments_unchecked(&large, &padded);
        let recomputed = C64::new(ml.mean_a, 0.0) + I * big * ml.mean_b;
        delta = delta
            .max(residual_scaled(&ladder, &padded, beta_prime, 1.0))
            .max((recomputed - beta_prime).norm())
            .max(moment_distance(&ms, &ml));
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraKind, PairSelector};
    use crate::linalg::{normalized, overlap, ONE};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn circular_forward_examples() {
        let phi = 0.37;
        let beta = C64::new(0.3, -0.2);
        let (big, bp) = forward_map(RotationKind::Circular, 0.0, phi, beta, &tol()).unwrap();
        assert!((big - I * phi.tan()).norm() < 1e-15);
        assert!((bp - beta / phi.cos()).norm() < 1e-15);
        let (big, _) = forward_map(RotationKind::Circular, 1.0, 1.1, ONE, &tol()).unwrap();
        assert!((big - ONE).norm() < 1e-15);
        let (big, _) = forward_map(RotationKind::Circular, 0.5, FRAC_PI_4, ONE, &tol()).unwrap();
        assert!((big - C64::new(0.8, 0.6)).norm() < 1e-15);
    }

    #[test]
    fn circular_singular_denominator() {
        let err = forward_map(RotationKind::Circular, 0.0, FRAC_PI_2, ONE, &tol()).unwrap_err();
        assert!(matches!(err, Error::SingularMap { .. }));
    }

    #[test]
    fn hyperbolic_forward_example() {
        let phi = 0.5f64.atanh();
        let (big, _) = forward_map(RotationKind::Hyperbolic, 0.0, phi, ONE, &tol()).unwrap();
        assert!((big - I * 0.5).norm() < 1e-15);
    }

    #[test]
    fn circular_inverse_examples() {
        let r = inverse_map(RotationKind::Circular, I * 0.7, &tol()).unwrap();
        assert!((r.phi - 0.7f64.atan()).abs() < 1e-15 && r.lambda == 0.0);
        let r = inverse_map(RotationKind::Circular, C64::new(0.3, 0.0), &tol()).unwrap();
        assert!(r.phi == 0.0 && (r.lambda - 0.3).abs() < 1e-15);
        let r = inverse_map(RotationKind::Circular, C64::new(0.8, 0.6), &tol()).unwrap();
        assert!((r.phi - FRAC_PI_4).abs() < 1e-15 && (r.lambda - 0.5).abs() < 1e-15);
        assert_eq!(r.branch, Branch::Principal);
    }

    #[test]
    fn circular_inverse_outside_unit_disk_on_imaginary_axis_uses_shifted_branch() {
        let r = inverse_map(RotationKind::Circular, I * 0.9f64.tan(), &tol()).unwrap();
        assert_eq!(r.branch, Branch::Shifted);
        assert!((r.phi - 0.9).abs() < 1e-14 && r.lambda == 0.0);
    }

    #[test]
    fn hyperbolic_inverse_example_and_boundary() {
        let r = inverse_map(RotationKind::Hyperbolic, I * 0.5, &tol()).unwrap();
        assert!((r.phi.tanh() - 0.5).abs() < 1e-15 && r.lambda == 0.0);
        for big in [I, -I, I * 2.0, I * -3.0] {
            let err = inverse_map(RotationKind::Hyperbolic, big, &tol()).unwrap_err();
            assert!(matches!(err, Error::BoundaryOrbit { .. }), "{big}");
        }
        let r = inverse_map(RotationKind::Hyperbolic, C64::new(0.3, 2.0), &tol()).unwrap();
        assert!(r.roundtrip_err < 1e-14);
    }

    #[test]
    fn spin_half_transport_matches_puri() {
        let pair = make_pair(AlgebraKind::Su2Spin(Spin::new(0.5).unwrap()), PairSelector::J1J2).unwrap();
        let phi: f64 = 0.6;
        let branches = transport(&pair, I * phi.tan(), &SolveOptions::default()).unwrap().branches;
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!(b.record.gis_residual < 1e-13);
            let m = HalfInteger::new(if b.ois.beta.re > 0.0 { 0.5 } else { -0.5 }).unwrap();
            let puri = puri_state(Spin::new(0.5).unwrap(), m, phi).unwrap();
            assert!(overlap(&puri, &b.gis.psi) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn real_lambda_transport_is_identity() {
        let pair = make_pair(AlgebraKind::Su2Spin(Spin::new(1.5).unwrap()), PairSelector::J2J3).unwrap();
        for b in transport(&pair, C64::new(0.4, 0.0), &SolveOptions::default()).unwrap().branches {
            assert_eq!(b.record.phi, 0.0);
            assert!(b.gis.psi.iter().zip(&b.ois.psi).all(|(x, y)| (x - y).norm() < 1e-15));
        }
    }

    #[test]
    fn puri_examples() {
        let s = puri_state(Spin::new(0.5).unwrap(), HalfInteger::new(0.5).unwrap(), 0.0).unwrap();
        assert!(overlap(&s, &normalized(&[ONE, ONE])) > 1.0 - 1e-15);
        let j = Spin::new(1.0).unwrap();
        let s = puri_state(j, HalfInteger::new(0.0).unwrap(), 0.4).unwrap();
        let (_, _, j3) = make_spin_observables(j);
        assert!(j3.expectation(&s).norm() < 1e-15);
        assert!(puri_state(j, HalfInteger::new(0.5).unwrap(), 0.1).is_err());
        assert!(puri_state(j, HalfInteger::new(2.0).unwrap(), 0.1).is_err());
    }

    #[test]
    fn covariance_angle_trivial_case() {
        let pair = make_pair(AlgebraKind::Su2Spin(Spin::new(1.0).unwrap()), PairSelector::J1J2).unwrap();
        let s = solve_intelligent(&pair, C64::new(0.3, 0.0), &SolveOptions::default()).unwrap();
        let m = moments_unchecked(&pair, &s.states[2].psi);
        let a = covariance_angle(RotationKind::Circular, &m, &tol()).unwrap();
        assert!(a.phi.abs() < 1e-12 && a.predicted_cov_after.abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_angle_rejects_degenerate_moments() {
        let m = MomentSummary {
            mean_a: 0.0,
            mean_b: 0.0,
            var_a: 0.0,
            var_b: 0.0,
            cov_s: 0.0,
            comm_ab_expect: C64::new(0.0, 0.0),
            det_c: 0.0,
            vc: 0.0,
            hur_residual: 0.0,
            srr_residual: 0.0,
        };
        assert!(covariance_angle(RotationKind::Hyperbolic, &m, &tol()).is_err());
        let m = MomentSummary { var_a: 1.0, var_b: 1.0, cov_s: 1.0, ..m };
        assert!(covariance_angle(RotationKind::Hyperbolic, &m, &tol()).is_err());
    }

    #[test]
    fn certificate_accepts_genuine_and_flags_leaky_states() {
        let pair = make_pair(
            AlgebraKind::Su11SingleMode {
                parity: crate::algebra::Parity::Even,
                cutoff: 32,
            },
            PairSelector::K1K2,
        )
        .unwrap();
        let big = C64::new(-0.5, 0.3);
        let strict = certify_transport(&pair, big, &SolveOptions::default()).unwrap();
        assert!(strict < 1e-9, "{strict:e}");
        // Letting every branch through admits states that live at the cutoff.
        let lax = SolveOptions {
            leakage_threshold: 1.0,
            ..SolveOptions::default()
        };
        assert!(certify_transport(&pair, big, &lax).unwrap() > 1e-6);
    }
}
