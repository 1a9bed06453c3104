//! Eigendecomposition of general complex matrices.
//!
//! The matrix is reduced to upper Hessenberg form by Householder reflectors,
//! then to complex Schur form `M = Q T Q†` by single-shift QR sweeps with
//! Wilkinson shifts (and exceptional shifts when a block stagnates).
//! Eigenvectors come from back-substitution on `T`.
//!
//! Eigenvalues that coalesce within [`CLUSTER_RTOL`] are examined together:
//! the null space of `M − β̄I` is extracted directly, and if it is smaller
//! than the cluster the eigenvalue is defective. Only genuine eigenvectors are
//! returned in that case.

use super::decomp::{null_space, Reflector};
use super::matrix::{fix_phase, norm, normalized, ComplexSquareMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative distance below which eigenvalues are checked for a shared,
/// possibly defective, eigenspace. Loose enough to catch the
/// `ε^{1/k}` splitting of small Jordan blocks.
const CLUSTER_RTOL: f64 = 1e-5;

/// Relative threshold on the pivoted-QR diagonal that decides null directions.
const NULL_RTOL: f64 = 1e-10;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// One genuine eigenvector with the multiplicities of its eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C64,
    /// Unit norm; largest-magnitude component real and positive.
    pub vector: Vec<C64>,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
}

impl EigenPair {
    pub fn is_defective(&self) -> bool {
        self.geometric_multiplicity < self.algebraic_multiplicity
    }
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    pairs: Vec<EigenPair>,
}

impl EigenSystem {
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<EigenPair> {
        self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn eigenvectors(&self) -> Vec<&[C64]> {
        self.pairs.iter().map(|p| p.vector.as_slice()).collect()
    }

    pub fn geometric_multiplicities(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.geometric_multiplicity).collect()
    }

    pub fn is_defective(&self) -> bool {
        self.pairs.iter().any(EigenPair::is_defective)
    }
}

/// Schur form `M = Q T Q†` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexSquareMatrix,
    pub t: ComplexSquareMatrix,
}

pub fn hessenberg(m: &ComplexSquareMatrix) -> (ComplexSquareMatrix, ComplexSquareMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut q = ComplexSquareMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let col: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        if let Some(r) = Reflector::new(&col) {
            r.apply_left(&mut h, k + 1, k..n);
            r.apply_right(&mut h, k + 1, 0..n);
            r.apply_right(&mut q, k + 1, 0..n);
            for i in k + 2..n {
                h[(i, k)] = ZERO;
            }
        }
    }
    (h, q)
}

/// Rotation `[c s; −s̄ c]` with real `c` taking `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let xn = x.norm();
    let r = xn.hypot(y.norm());
    (xn / r, (x / xn) * y.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (s1, s2) = (mid + disc, mid - disc);
    if (s1 - d).norm() <= (s2 - d).norm() {
        s1
    } else {
        s2
    }
}

pub fn schur(m: &ComplexSquareMatrix) -> Result<Schur> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("eig: non-finite matrix entry".into()));
    }
    let n = m.dim();
    let (mut h, mut q) = hessenberg(m);
    if n == 1 {
        return Ok(Schur { q, t: h });
    }
    let eps = f64::EPSILON;
    let fallback_scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut ihi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;

    while ihi > 0 {
        let mut l = ihi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = fallback_scale;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }

        its += 1;
        total += 1;
        if its > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NumericFailure {
                routine: "complex QR",
                iterations: total,
                detail: format!(
                    "no deflation of row {ihi} (active block {l}..={ihi}) after {} sweeps; subdiagonal = {:e}",
                    its - 1,
                    h[(ihi, ihi - 1)].norm()
                ),
            });
        }

        let shift = if its % 10 == 0 {
            h[(ihi, ihi)] + C64::new(0.75 * h[(ihi, ihi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        for k in l..ihi {
            let (x, y) = if k == l {
                (h[(l, l)] - shift, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k > l { k - 1 } else { l };
            for j in first_col..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            let last_row = (k + 2).min(ihi);
            for i in 0..=last_row {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
            for i in 0..n {
                let a = q[(i, k)];
                let b = q[(i, k + 1)];
                q[(i, k)] = a * c + b * s.conj();
                q[(i, k + 1)] = -a * s + b * c;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t: h })
}

/// Eigenvector of upper-triangular `t` for its `k`-th diagonal entry.
fn triangular_eigenvector(t: &ComplexSquareMatrix, k: usize, smin: f64) -> Vec<C64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let mut x = vec![ZERO; n];
    x[k] = ONE;
    for i in (0..k).rev() {
        let mut acc = ZERO;
        for j in i + 1..=k {
            acc += t[(i, j)] * x[j];
        }
        let mut d = t[(i, i)] - lambda;
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        x[i] = -acc / d;
        if x[i].norm() > 1e150 {
            let s = 1.0 / x[i].norm();
            for z in x.iter_mut() {
                *z *= s;
            }
        }
    }
    x
}

fn finish_vector(v: Vec<C64>) -> Vec<C64> {
    let mut v = normalized(&v);
    fix_phase(&mut v);
    v
}

/// All eigenvalues of `m` with genuine eigenvectors; defective eigenvalues
/// carry `geometric_multiplicity < algebraic_multiplicity`.
pub fn eig(m: &ComplexSquareMatrix) -> Result<EigenSystem> {
    let n = m.dim();
    let Schur { q, t } = schur(m)?;
    let scale = t.frobenius_norm().max(1.0);
    let smin = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE * 1e10);
    let values = t.diag();

    // Single-linkage clusters of nearby eigenvalues.
    let mut cluster_of: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= CLUSTER_RTOL * scale {
                let (ri, rj) = (root(&mut cluster_of, i), root(&mut cluster_of, j));
                if ri != rj {
                    cluster_of[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut cluster_of, i);
        if slot[r] == usize::MAX {
            slot[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[r]].push(i);
    }

    let schur_vector = |k: usize| finish_vector(q.mul_vec(&triangular_eigenvector(&t, k, smin)));

    let mut pairs = Vec::with_capacity(n);
    for members in clusters {
        let singles = |pairs: &mut Vec<EigenPair>| {
            for &k in &members {
                pairs.push(EigenPair {
                    value: values[k],
                    vector: schur_vector(k),
                    algebraic_multiplicity: 1,
                    geometric_multiplicity: 1,
                });
            }
        };
        if members.len() == 1 {
            singles(&mut pairs);
            continue;
        }
        let size = members.len();
        let mean = members.iter().map(|&k| values[k]).sum::<C64>() / size as f64;
        let basis = null_space(&m.shift(-mean), NULL_RTOL * scale);
        if basis.is_empty() {
            // Close but distinct eigenvalues.
            singles(&mut pairs);
            continue;
        }
        let geometric = basis.len().min(size);
        if geometric < size {
            log::debug!(
                "defective eigenvalue {mean}: algebraic {size}, geometric {geometric}"
            );
        }
        for v in basis.into_iter().take(geometric) {
            pairs.push(EigenPair {
                value: mean,
                vector: finish_vector(v),
                algebraic_multiplicity: size,
                geometric_multiplicity: geometric,
            });
        }
    }
    pairs.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(EigenSystem { pairs })
}

/// Largest singular value, by power iteration on `M†M`.
pub fn spectral_norm(m: &ComplexSquareMatrix) -> f64 {
    let n = m.dim();
    let mh = m.adjoint();
    let mut v: Vec<C64> = (0..n)
        .map(|k| C64::new(1.0 + 0.1 * (k as f64).sin(), 0.05 * k as f64))
        .collect();
    v = normalized(&v);
    let mut estimate = 0.0;
    for _ in 0..500 {
        let w = mh.mul_vec(&m.mul_vec(&v));
        let wn = norm(&w);
        if wn == 0.0 {
            return 0.0;
        }
        let next = wn.sqrt();
        v = w.into_iter().map(|z| z / wn).collect();
        if (next - estimate).abs() <= 1e-13 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `‖Mv − βv‖ / max(1, ‖M‖₂)` for a unit vector `v`.
pub fn residual(m: &ComplexSquareMatrix, v: &[C64], beta: C64) -> Result<f64> {
    if v.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            actual: v.len(),
        });
    }
    Ok(residual_scaled(m, v, beta, spectral_norm(m).max(1.0)))
}

/// `‖Mv − βv‖ / scale`, for callers that have already computed the scale.
pub(crate) fn residual_scaled(m: &ComplexSquareMatrix, v: &[C64], beta: C64, scale: f64) -> f64 {
    let mv = m.mul_vec(v);
    let r: f64 = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - beta * b).norm_sqr())
        .sum();
    r.sqrt() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::basis_vector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_gives_standard_basis() {
        let m = ComplexSquareMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        let es = eig(&m).unwrap();
        let vals: Vec<f64> = es.eigenvalues().iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        for (p, expect) in es.pairs().iter().zip([1usize, 2, 0]) {
            assert!((p.vector[expect] - ONE).norm() < 1e-15, "{:?}", p.vector);
            assert_eq!(p.geometric_multiplicity, 1);
        }
    }

    #[test]
    fn nilpotent_is_flagged_defective() {
        let m = ComplexSquareMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]);
        let es = eig(&m).unwrap();
        assert_eq!(es.pairs().len(), 1);
        let p = &es.pairs()[0];
        assert!(p.value.norm() < 1e-15);
        assert_eq!(p.algebraic_multiplicity, 2);
        assert_eq!(p.geometric_multiplicity, 1);
        assert!((p.vector[0] - ONE).norm() < 1e-15);
        assert!(es.is_defective());
    }

    #[test]
    fn lower_shift_is_flagged_defective() {
        let m = ComplexSquareMatrix::from_rows(&[
            vec![ZERO, ZERO, ZERO],
            vec![ONE, ZERO, ZERO],
            vec![ZERO, ONE, ZERO],
        ]);
        let es = eig(&m).unwrap();
        assert_eq!(es.pairs().len(), 1);
        assert_eq!(es.pairs()[0].algebraic_multiplicity, 3);
        assert!((es.pairs()[0].vector[2] - ONE).norm() < 1e-12);
    }

    #[test]
    fn degenerate_hermitian_keeps_full_eigenspace() {
        let m = ComplexSquareMatrix::from_rows(&[
            vec![c(2.0, 0.0), ZERO, ZERO],
            vec![ZERO, c(1.0, 0.0), c(0.0, 1.0)],
            vec![ZERO, c(0.0, -1.0), c(1.0, 0.0)],
        ]);
        // Spectrum {0, 2, 2}.
        let es = eig(&m).unwrap();
        assert_eq!(es.pairs().len(), 3);
        assert!(!es.is_defective());
        for p in es.pairs() {
            assert!(residual(&m, &p.vector, p.value).unwrap() < 1e-13);
        }
        let twos = es.pairs().iter().filter(|p| (p.value.re - 2.0).abs() < 1e-9).count();
        assert_eq!(twos, 2);
    }

    #[test]
    fn residual_examples() {
        let id = ComplexSquareMatrix::identity(3);
        let v = normalized(&[c(1.0, 1.0), c(0.0, -2.0), c(0.5, 0.0)]);
        assert_eq!(residual(&id, &v, ONE).unwrap(), 0.0);

        let d = ComplexSquareMatrix::from_real_diag(&[2.0, 3.0]);
        let e0 = basis_vector(2, 0);
        assert_eq!(residual(&d, &e0, c(2.0, 0.0)).unwrap(), 0.0);
        let r = residual(&d, &e0, c(2.1, 0.0)).unwrap();
        assert!((r - 0.1 / 3.0).abs() < 1e-12, "{r}");

        assert!(matches!(
            residual(&d, &[ONE], ONE),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let d = ComplexSquareMatrix::from_real_diag(&[2.0, -3.0, 1.0]);
        assert!((spectral_norm(&d) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn schur_reconstructs() {
        let m = ComplexSquareMatrix::from_fn(5, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let s = schur(&m).unwrap();
        let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
        assert!((&back - &m).frobenius_norm() < 1e-12);
        assert!(s.q.unitary_deviation() < 1e-13);
    }
}
