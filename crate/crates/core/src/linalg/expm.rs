//! Matrix exponential by scaling and squaring around a degree-13 Padé core.

use super::decomp::solve;
use super::matrix::{ComplexSquareMatrix, C64};
use crate::error::{Error, Result};

/// Largest 1-norm for which the [13/13] Padé approximant of `exp` is accurate
/// to double precision without scaling.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(M)`.
pub fn mat_exp(m: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("mat_exp: non-finite matrix entry".into()));
    }
    let n = m.dim();
    let norm = m.one_norm();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_real(2f64.powi(-squarings));

    let b = |k: usize| C64::new(PADE_13[k], 0.0);
    let id = ComplexSquareMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let lincomb = |c6: usize, c4: usize, c2: usize| -> ComplexSquareMatrix {
        let mut t = a6.scale(b(c6));
        t += &a4.scale(b(c4));
        t += &a2.scale(b(c2));
        t
    };

    let mut u_inner = a6.matmul(&lincomb(13, 11, 9));
    u_inner += &lincomb(7, 5, 3);
    u_inner += &id.scale(b(1));
    let u = a.matmul(&u_inner);

    let mut v = a6.matmul(&lincomb(12, 10, 8));
    v += &lincomb(6, 4, 2);
    v += &id.scale(b(0));

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{I, ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn zero_maps_to_identity() {
        let e = mat_exp(&ComplexSquareMatrix::zeros(4)).unwrap();
        assert!((&e - &ComplexSquareMatrix::identity(4)).max_abs() <= f64::EPSILON);
    }

    #[test]
    fn diagonal_spin_half_phase() {
        let m = ComplexSquareMatrix::from_diag(&[I * (PI / 2.0), -I * (PI / 2.0)]);
        let e = mat_exp(&m).unwrap();
        let expected = ComplexSquareMatrix::from_diag(&[I, -I]);
        assert!((&e - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn nilpotent_truncates_series() {
        // exp([[0,t],[0,0]]) = [[1,t],[0,1]]
        let t = C64::new(3.5, -1.0);
        let m = ComplexSquareMatrix::from_rows(&[vec![ZERO, t], vec![ZERO, ZERO]]);
        let e = mat_exp(&m).unwrap();
        let expected = ComplexSquareMatrix::from_rows(&[vec![ONE, t], vec![ZERO, ONE]]);
        assert!((&e - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn large_norm_scalar_matches_exp() {
        let z = C64::new(-3.0, 40.0);
        let e = mat_exp(&ComplexSquareMatrix::from_diag(&[z])).unwrap();
        assert!((e[(0, 0)] - z.exp()).norm() < 1e-12 * z.exp().norm());
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = ComplexSquareMatrix::zeros(2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(mat_exp(&m), Err(Error::InvalidInput(_))));
    }
}
