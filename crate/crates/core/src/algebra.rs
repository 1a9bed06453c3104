//! Hermitian generator triples for su(2) and su(1,1), the observable pairs
//! drawn from them, and the one-parameter rotations that mix each pair.

use std::fmt;
use std::str::FromStr;

use crate::bosonic::{self, FockSpace, TAIL_LEVELS};
use crate::error::{Error, Result};
use crate::linalg::{mat_exp, schur, ComplexSquareMatrix, C64, I};

/// A non-negative multiple of ½, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("{value} is not a multiple of 1/2")));
        }
        Ok(Self { twice: twice.round() as i64 })
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Spin quantum number `J ≥ ½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin(HalfInteger);

impl Spin {
    pub fn new(j: f64) -> Result<Self> {
        let h = HalfInteger::new(j)?;
        Self::from_half_integer(h)
    }

    pub fn from_half_integer(h: HalfInteger) -> Result<Self> {
        if h.twice < 1 {
            return Err(Error::InvalidInput(format!("spin must be at least 1/2, got {h}")));
        }
        Ok(Self(h))
    }

    pub fn value(self) -> f64 {
        self.0.value()
    }

    pub fn twice(self) -> i64 {
        self.0.twice
    }

    pub fn dim(self) -> usize {
        self.0.twice as usize + 1
    }

    /// Basis index of `|J, m⟩` in the descending-`m` ordering.
    pub fn index_of(self, m: HalfInteger) -> Result<usize> {
        let (j2, m2) = (self.0.twice, m.twice);
        if m2.abs() > j2 || (j2 - m2) % 2 != 0 {
            return Err(Error::InvalidInput(format!("m = {m} is not a projection of J = {}", self.0)));
        }
        Ok(((j2 - m2) / 2) as usize)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> usize {
        match self {
            Self::Even => 0,
            Self::Odd => 1,
        }
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" | "0" => Ok(Self::Even),
            "odd" | "1" => Ok(Self::Odd),
            other => Err(Error::InvalidInput(format!("unknown parity '{other}'"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Even => "even",
            Self::Odd => "odd",
        })
    }
}

/// Which representation the operators act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Su2Spin(Spin),
    Su11TwoMode { sector_diff: i64, cutoff: usize },
    Su11SingleMode { parity: Parity, cutoff: usize },
}

impl AlgebraKind {
    pub fn dim(&self) -> usize {
        match *self {
            Self::Su2Spin(j) => j.dim(),
            Self::Su11TwoMode { cutoff, .. } | Self::Su11SingleMode { cutoff, .. } => cutoff,
        }
    }

    pub fn is_truncated(&self) -> bool {
        !matches!(self, Self::Su2Spin(_))
    }

    /// Lowest `K₃` eigenvalue of the su(1,1) irrep; `None` for su(2).
    pub fn bargmann_index(&self) -> Option<f64> {
        match *self {
            Self::Su2Spin(_) => None,
            Self::Su11TwoMode { sector_diff, .. } => Some((1.0 + sector_diff.unsigned_abs() as f64) / 2.0),
            Self::Su11SingleMode { parity, .. } => Some(0.25 + 0.5 * parity.offset() as f64),
        }
    }

    pub fn fock_space(&self) -> Option<FockSpace> {
        match *self {
            Self::Su2Spin(_) => None,
            Self::Su11TwoMode { sector_diff, cutoff } => Some(FockSpace::TwoModeDifference { sector_diff, cutoff }),
            Self::Su11SingleMode { parity, cutoff } => Some(FockSpace::SingleModeParity { parity, cutoff }),
        }
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        match *self {
            s @ Self::Su2Spin(_) => s,
            Self::Su11TwoMode { sector_diff, .. } => Self::Su11TwoMode { sector_diff, cutoff },
            Self::Su11SingleMode { parity, .. } => Self::Su11SingleMode { parity, cutoff },
        }
    }

    /// `true` on levels far enough from the cutoff to be trusted.
    pub fn interior_mask(&self) -> Vec<bool> {
        let d = self.dim();
        if self.is_truncated() {
            (0..d).map(|i| i + TAIL_LEVELS < d).collect()
        } else {
            vec![true; d]
        }
    }

    pub fn generators(&self) -> Result<Generators> {
        match *self {
            Self::Su2Spin(j) => {
                let (x1, x2, x3) = make_spin_observables(j);
                Ok(Generators { x1, x2, x3 })
            }
            Self::Su11TwoMode { sector_diff, cutoff } => bosonic::su11_two_mode(sector_diff, cutoff),
            Self::Su11SingleMode { parity, cutoff } => bosonic::su11_single_mode(parity, cutoff),
        }
    }
}

/// `(X₁, X₂, X₃)`: `(J₁, J₂, J₃)` or `(K₁, K₂, K₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub x1: ComplexSquareMatrix,
    pub x2: ComplexSquareMatrix,
    pub x3: ComplexSquareMatrix,
}

impl Generators {
    pub fn get(&self, index: usize) -> &ComplexSquareMatrix {
        match index {
            1 => &self.x1,
            2 => &self.x2,
            _ => &self.x3,
        }
    }
}

/// Spin matrices in the `|J, m⟩` basis with `m = J, J − 1, …, −J`.
pub fn make_spin_observables(j: Spin) -> (ComplexSquareMatrix, ComplexSquareMatrix, ComplexSquareMatrix) {
    let dim = j.dim();
    let jv = j.value();
    let m_of = |k: usize| jv - k as f64;
    // J₊|m⟩ = sqrt(J(J+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits one index up.
    let jp = ComplexSquareMatrix::from_fn(dim, |r, c| {
        if r + 1 == c {
            let m = m_of(c);
            C64::new((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let jm = jp.adjoint();
    let j1 = (&jp + &jm).scale_real(0.5);
    let j2 = (&jp - &jm).scale(C64::new(0.0, -0.5));
    let j3 = ComplexSquareMatrix::from_real_diag(&(0..dim).map(m_of).collect::<Vec<_>>());
    (j1, j2, j3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationKind {
    /// `U A U† = A cos φ − B sin φ`, `U B U† = B cos φ + A sin φ`.
    Circular,
    /// `U A U† = A cosh φ − B sinh φ`, `U B U† = B cosh φ − A sinh φ`.
    Hyperbolic,
}

impl fmt::Display for RotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Circular => "circular",
            Self::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for RotationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "circular" => Ok(Self::Circular),
            "hyperbolic" => Ok(Self::Hyperbolic),
            other => Err(Error::InvalidInput(format!("unknown rotation kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSelector {
    J1J2,
    J2J3,
    J3J1,
    K1K2,
    K1K3,
    K2K3,
}

impl PairSelector {
    pub const ALL: [Self; 6] = [Self::J1J2, Self::J2J3, Self::J3J1, Self::K1K2, Self::K1K3, Self::K2K3];

    pub fn is_su2(self) -> bool {
        matches!(self, Self::J1J2 | Self::J2J3 | Self::J3J1)
    }

    /// `(a, b, g, sign of g, kind)` as generator indices.
    fn layout(self) -> (usize, usize, usize, f64, RotationKind) {
        use RotationKind::*;
        match self {
            Self::J1J2 => (1, 2, 3, 1.0, Circular),
            Self::J2J3 => (2, 3, 1, 1.0, Circular),
            Self::J3J1 => (3, 1, 2, 1.0, Circular),
            Self::K1K2 => (1, 2, 3, 1.0, Circular),
            Self::K1K3 => (1, 3, 2, 1.0, Hyperbolic),
            // With G = +K₁ the boost mixes the pair with the opposite sign;
            // −K₁ keeps one hyperbolic convention for both su(1,1) pairs.
            Self::K2K3 => (2, 3, 1, -1.0, Hyperbolic),
        }
    }

    pub fn kind(self) -> RotationKind {
        self.layout().4
    }
}

impl fmt::Display for PairSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::J1J2 => "J1J2",
            Self::J2J3 => "J2J3",
            Self::J3J1 => "J3J1",
            Self::K1K2 => "K1K2",
            Self::K1K3 => "K1K3",
            Self::K2K3 => "K2K3",
        })
    }
}

impl FromStr for PairSelector {
    type Err = Error;
    /// Accepts `J1J2`, `(J1,J2)`, `j1-j2` and the `x/y/z` spelling of the
    /// su(1,1) labels (`KxKz` is `K1K3`).
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| match c.to_ascii_lowercase() {
                'x' => '1',
                'y' => '2',
                'z' => '3',
                other => other,
            })
            .collect();
        match key.as_str() {
            "j1j2" => Ok(Self::J1J2),
            "j2j3" => Ok(Self::J2J3),
            "j3j1" => Ok(Self::J3J1),
            "k1k2" => Ok(Self::K1K2),
            "k1k3" => Ok(Self::K1K3),
            "k2k3" => Ok(Self::K2K3),
            _ => Err(Error::InvalidInput(format!("unknown observable pair '{s}'"))),
        }
    }
}

/// Two Hermitian observables `A, B` and the generator `G` of the rotation
/// that mixes them.
#[derive(Debug, Clone)]
pub struct ObservablePair {
    pub a: ComplexSquareMatrix,
    pub b: ComplexSquareMatrix,
    pub g: ComplexSquareMatrix,
    /// `[A, B]`, cached for moment calculations.
    pub comm: ComplexSquareMatrix,
    pub kind: RotationKind,
    pub algebra: AlgebraKind,
    pub selector: PairSelector,
    pub interior: Vec<bool>,
}

impl ObservablePair {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn is_truncated(&self) -> bool {
        self.algebra.is_truncated()
    }

    /// `e^{iφG}`.
    pub fn rotation_unitary(&self, phi: f64) -> Result<ComplexSquareMatrix> {
        mat_exp(&self.g.scale(I * phi))
    }

    /// Spectral factorization of `G`, for applying `e^{iφG}` to many states
    /// without one matrix exponential each.
    pub fn rotation_propagator(&self) -> Result<RotationPropagator> {
        let s = schur(&self.g)?;
        Ok(RotationPropagator {
            mu: s.t.diag().iter().map(|z| z.re).collect(),
            q_adj: s.q.adjoint(),
            q: s.q,
        })
    }

    /// `A + iλB`.
    pub fn ladder(&self, lambda: C64) -> ComplexSquareMatrix {
        &self.a + &self.b.scale(I * lambda)
    }

    /// Tail probability of `psi`; zero for untruncated algebras.
    pub fn tail_mass(&self, psi: &[C64]) -> f64 {
        if self.is_truncated() {
            bosonic::tail_mass(psi)
        } else {
            0.0
        }
    }

    /// `(cos φ, sin φ)` or `(cosh φ, sinh φ)`.
    pub fn rotation_coefficients(&self, phi: f64) -> (f64, f64) {
        match self.kind {
            RotationKind::Circular => (phi.cos(), phi.sin()),
            RotationKind::Hyperbolic => (phi.cosh(), phi.sinh()),
        }
    }

    /// Predicted `(U A U†, U B U†)` for `U = e^{iφG}`.
    pub fn rotated_pair(&self, phi: f64) -> (ComplexSquareMatrix, ComplexSquareMatrix) {
        let (c, s) = self.rotation_coefficients(phi);
        let b_sign = match self.kind {
            RotationKind::Circular => 1.0,
            RotationKind::Hyperbolic => -1.0,
        };
        (
            &self.a.scale_real(c) - &self.b.scale_real(s),
            &self.b.scale_real(c) + &self.a.scale_real(b_sign * s),
        )
    }
}

/// `G = Q diag(μ) Q†` for the Hermitian rotation generator.
#[derive(Debug, Clone)]
pub struct RotationPropagator {
    q: ComplexSquareMatrix,
    q_adj: ComplexSquareMatrix,
    mu: Vec<f64>,
}

impl RotationPropagator {
    /// `e^{iφG}|ψ⟩`.
    pub fn apply(&self, phi: f64, psi: &[C64]) -> Vec<C64> {
        let mut c = self.q_adj.mul_vec(psi);
        for (ck, mu) in c.iter_mut().zip(&self.mu) {
            *ck *= C64::from_polar(1.0, phi * mu);
        }
        self.q.mul_vec(&c)
    }
}

pub fn make_pair(algebra: AlgebraKind, selector: PairSelector) -> Result<ObservablePair> {
    if selector.is_su2() != matches!(algebra, AlgebraKind::Su2Spin(_)) {
        return Err(Error::InvalidInput(format!(
            "pair {selector} does not belong to {algebra:?}"
        )));
    }
    let gens = algebra.generators()?;
    let (ia, ib, ig, sign, kind) = selector.layout();
    let a = gens.get(ia).clone();
    let b = gens.get(ib).clone();
    let g = gens.get(ig).scale_real(sign);
    let comm = a.commutator(&b);
    Ok(ObservablePair {
        a,
        b,
        g,
        comm,
        kind,
        algebra,
        selector,
        interior: algebra.interior_mask(),
    })
}

/// Largest working-cutoff multiple tried by [`check_rotation`].
pub const MAX_ROTATION_ENLARGEMENT: usize = 8;

/// Largest entry of `U A U† − A'` and `U B U† − B'` against the predicted
/// rotation, restricted to the interior.
///
/// For truncated pairs the rotation is carried out in a larger copy of the
/// representation: boosts push the upper interior levels well beyond the
/// cutoff, so the working cutoff is doubled until the interior deviation stops
/// changing or [`MAX_ROTATION_ENLARGEMENT`] is reached.
pub fn check_rotation(pair: &ObservablePair, phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::InvalidInput("rotation angle must be finite".into()));
    }
    if !pair.is_truncated() {
        return rotation_deviation(pair, phi, &pair.interior);
    }
    let mut previous = f64::INFINITY;
    let mut factor = 2;
    loop {
        let big = make_pair(pair.algebra.with_cutoff(factor * pair.dim()), pair.selector)?;
        let mut mask = pair.interior.clone();
        mask.resize(big.dim(), false);
        let dev = rotation_deviation(&big, phi, &mask)?;
        let settled = (dev - previous).abs() <= 1e-12 * (1.0 + previous.min(dev));
        if settled || dev <= 1e-11 || factor >= MAX_ROTATION_ENLARGEMENT {
            return Ok(dev);
        }
        previous = dev;
        factor *= 2;
    }
}

fn rotation_deviation(work: &ObservablePair, phi: f64, mask: &[bool]) -> Result<f64> {
    let u = work.rotation_unitary(phi)?;
    let ud = u.adjoint();
    let a_rot = u.matmul(&work.a).matmul(&ud);
    let b_rot = u.matmul(&work.b).matmul(&ud);
    let (a_pred, b_pred) = work.rotated_pair(phi);
    let da = (&a_rot - &a_pred).compress(mask).max_abs();
    let db = (&b_rot - &b_pred).compress(mask).max_abs();
    Ok(da.max(db))
}
