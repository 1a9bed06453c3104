//! Direct factorizations: LU with partial pivoting, Householder reflectors,
//! column-pivoted QR and the null-space extraction built on it.

use super::matrix::{ComplexSquareMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.dim(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap_or(k);
        if lu[(pivot, k)].norm() <= f64::EPSILON * scale * 1e-3 {
            return Err(Error::InvalidInput("matrix is singular to working precision".into()));
        }
        if pivot != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = t;
                let t = x[(k, j)];
                x[(k, j)] = x[(pivot, j)];
                x[(pivot, j)] = t;
            }
        }
        let inv = ONE / lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] * inv;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = ZERO;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..n {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let inv = ONE / lu[(k, k)];
        for j in 0..n {
            let mut acc = x[(k, j)];
            for p in k + 1..n {
                acc -= lu[(k, p)] * x[(p, j)];
            }
            x[(k, j)] = acc * inv;
        }
    }
    Ok(x)
}

/// A Householder reflector `P = I − τ v v†` with `P x = α e₁`.
#[derive(Debug, Clone)]
pub(crate) struct Reflector {
    pub v: Vec<C64>,
    pub tau: f64,
    pub alpha: C64,
}

impl Reflector {
    /// Returns `None` when `x` is already a multiple of `e₁`.
    pub fn new(x: &[C64]) -> Option<Self> {
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            return None;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Some(Self {
            v,
            tau: 2.0 / vv,
            alpha,
        })
    }

    /// Applies `P` from the left to rows `offset..offset+len` of columns `cols`.
    pub fn apply_left(
        &self,
        m: &mut ComplexSquareMatrix,
        offset: usize,
        cols: std::ops::Range<usize>,
    ) {
        for j in cols {
            let w: C64 = self
                .v
                .iter()
                .enumerate()
                .map(|(p, vp)| vp.conj() * m[(offset + p, j)])
                .sum();
            let w = w * self.tau;
            for (p, vp) in self.v.iter().enumerate() {
                m[(offset + p, j)] -= vp * w;
            }
        }
    }

    /// Applies `P` from the right to columns `offset..offset+len` of rows `rows`.
    pub fn apply_right(
        &self,
        m: &mut ComplexSquareMatrix,
        offset: usize,
        rows: std::ops::Range<usize>,
    ) {
        for i in rows {
            let w: C64 = self
                .v
                .iter()
                .enumerate()
                .map(|(p, vp)| m[(i, offset + p)] * vp)
                .sum();
            let w = w * self.tau;
            for (p, vp) in self.v.iter().enumerate() {
                m[(i, offset + p)] -= w * vp.conj();
            }
        }
    }
}

/// Column-pivoted Householder QR: `X Π = Q R`. Returns the full unitary `Q`
/// and the magnitudes of the diagonal of `R`, which are non-increasing.
pub fn pivoted_qr(x: &ComplexSquareMatrix) -> (ComplexSquareMatrix, Vec<f64>) {
    let n = x.dim();
    let mut r = x.clone();
    let mut reflectors = Vec::with_capacity(n);
    let mut rdiag = Vec::with_capacity(n);
    for k in 0..n {
        // Column norms are recomputed from scratch: n is small and this avoids
        // the downdating cancellation of the textbook scheme.
        let col_norm = |r: &ComplexSquareMatrix, j: usize| -> f64 {
            (k..n).map(|i| r[(i, j)].norm_sqr()).sum::<f64>()
        };
        let pivot = (k..n)
            .max_by(|&a, &b| col_norm(&r, a).total_cmp(&col_norm(&r, b)).then(b.cmp(&a)))
            .unwrap_or(k);
        if pivot != k {
            for i in 0..n {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, pivot)];
                r[(i, pivot)] = t;
            }
        }
        let col: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        match Reflector::new(&col) {
            Some(h) => {
                h.apply_left(&mut r, k, k..n);
                rdiag.push(h.alpha.norm());
                reflectors.push((k, h));
            }
            None => rdiag.push(col[0].norm()),
        }
    }
    let mut q = ComplexSquareMatrix::identity(n);
    for (k, h) in reflectors.iter().rev() {
        h.apply_left(&mut q, *k, 0..n);
    }
    (q, rdiag)
}

/// Orthonormal basis of `{v : X v ≈ 0}`: the directions whose column-pivoted
/// QR diagonal of `X†` falls at or below `tol`.
pub fn null_space(x: &ComplexSquareMatrix, tol: f64) -> Vec<Vec<C64>> {
    let n = x.dim();
    let (q, rdiag) = pivoted_qr(&x.adjoint());
    let rank = rdiag.iter().take_while(|&&d| d > tol).count();
    (rank..n).map(|j| (0..n).map(|i| q[(i, j)]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{inner, norm};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = ComplexSquareMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)],
            vec![c(1.0, -1.0), c(0.5, 0.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
        ]);
        let x = ComplexSquareMatrix::from_fn(3, |i, j| c(i as f64 - j as f64, 0.5 * j as f64));
        let b = a.matmul(&x);
        let got = solve(&a, &b).unwrap();
        assert!((&got - &x).frobenius_norm() < 1e-13);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = ComplexSquareMatrix::from_rows(&[vec![ONE, ONE], vec![ONE, ONE]]);
        assert!(solve(&a, &ComplexSquareMatrix::identity(2)).is_err());
    }

    #[test]
    fn reflector_maps_to_first_axis() {
        let x = vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0)];
        let h = Reflector::new(&x).unwrap();
        let mut m = ComplexSquareMatrix::zeros(3);
        for (i, &xi) in x.iter().enumerate() {
            m[(i, 0)] = xi;
        }
        h.apply_left(&mut m, 0, 0..1);
        assert!((m[(0, 0)] - h.alpha).norm() < 1e-14);
        assert!(m[(1, 0)].norm() < 1e-14 && m[(2, 0)].norm() < 1e-14);
        assert!((h.alpha.norm() - norm(&x)).abs() < 1e-14);
    }

    #[test]
    fn qr_factor_is_unitary_and_rank_revealing() {
        // Rank-2 matrix: third column is a combination of the first two.
        let m = ComplexSquareMatrix::from_fn(3, |i, j| match j {
            0 => c(1.0 + i as f64, 0.0),
            1 => c(0.0, (i * i) as f64 - 1.0),
            _ => c(1.0 + i as f64, 2.0 * ((i * i) as f64 - 1.0)),
        });
        let (q, rdiag) = pivoted_qr(&m);
        assert!(q.unitary_deviation() < 1e-14);
        assert!(rdiag[0] >= rdiag[1] && rdiag[1] > 1e-8);
        assert!(rdiag[2] < 1e-12);
    }

    #[test]
    fn null_space_of_nilpotent_shift() {
        let x = ComplexSquareMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]);
        let ns = null_space(&x, 1e-12);
        assert_eq!(ns.len(), 1);
        assert!((inner(&ns[0], &ns[0]).re - 1.0).abs() < 1e-15);
        assert!((ns[0][0].norm() - 1.0).abs() < 1e-15);
        assert!(norm(&x.mul_vec(&ns[0])) < 1e-15);
    }
}
