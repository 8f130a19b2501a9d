//! Exact solutions of the three-moment systems and the sphere-packing
//! equality.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Solves sum_j x_j * p^i(v_j) = rhs_i for i = 0, 1, 2 (rows 1, v, v^2) by
/// Cramer's rule in exact integers.
fn solve_moments(v: [i64; 3], rhs: [BigInt; 3]) -> Result<[u64; 3]> {
    let row = |e: u32| v.map(|x| BigInt::from(x).pow(e));
    let m = [row(0), row(1), row(2)];
    let det = det3(&m);
    if det.is_zero() {
        return Err(Error::SingularSystem);
    }
    let mut out = [0u64; 3];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut mj = m.clone();
        for i in 0..3 {
            mj[i][j] = rhs[i].clone();
        }
        let (q, r) = det3(&mj).div_rem(&det);
        if !r.is_zero() {
            return Err(Error::NonIntegralSolution);
        }
        if q.is_negative() {
            return Err(Error::NegativeSolution);
        }
        *slot = q.to_u64().ok_or(Error::NonIntegralSolution)?;
    }
    Ok(out)
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

/// Multiplicities (A1, A2, A3) of the nonzero weights of a three-weight
/// [length, k] code whose dual distance is at least 3, from the first three
/// Pless power moments.
pub fn pless_solve_3(weights: [u64; 3], length: u64, k: u32) -> Result<[u64; 3]> {
    let l = BigInt::from(length);
    let exact = |num: BigInt, den: u32| {
        let (q, r) = num.div_rem(&BigInt::from(den));
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonIntegralSolution)
        }
    };
    let rhs = [
        pow2(k) - 1,
        exact(&l * pow2(k), 2)?,
        exact(&l * (&l + 1) * pow2(k), 4)?,
    ];
    solve_moments(weights.map(|w| w as i64), rhs)
}

/// Occurrence counts (X1, X2, X3) of three Walsh values over the (a, b) grid
/// minus the 2^dK1 trivial values.
pub fn spectrum_moments_solve(values: [i64; 3], n: u32, dk1: u32) -> Result<[u64; 3]> {
    let rhs = [
        pow2(2 * n) - pow2(dk1),
        pow2(2 * n) - pow2(dk1 + n),
        pow2(3 * n) - pow2(dk1 + 2 * n),
    ];
    solve_moments(values, rhs)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// True iff sum_{i <= (d-1)/2} C(length, i) = 2^(length - dim): a perfect
/// code.
pub fn sphere_packing_check(length: u64, dim: u64, d: u64) -> bool {
    if dim > length || d == 0 {
        return false;
    }
    let radius = (d - 1) / 2;
    let ball: BigUint = (0..=radius.min(length)).map(|i| binomial(length, i)).sum();
    ball == BigUint::one() << (length - dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pless_examples() {
        assert_eq!(pless_solve_3([28, 32, 36], 63, 7).unwrap(), [36, 63, 28]);
        assert_eq!(pless_solve_3([12, 16, 20], 31, 6).unwrap(), [10, 47, 6]);
        assert_eq!(pless_solve_3([5, 5, 5], 31, 6), Err(Error::SingularSystem));
        assert_eq!(pless_solve_3([1, 2, 3], 31, 6), Err(Error::NegativeSolution));
    }

    #[test]
    fn spectrum_moment_examples() {
        assert_eq!(spectrum_moments_solve([-16, 0, 16], 7, 0).unwrap(), [3556, 8255, 4572]);
        assert_eq!(spectrum_moments_solve([-16, 0, 16], 6, 0).unwrap(), [378, 3087, 630]);
        assert_eq!(spectrum_moments_solve([4, 4, 0], 6, 0), Err(Error::SingularSystem));
    }

    #[test]
    fn sphere_packing_examples() {
        assert!(sphere_packing_check(63, 57, 3));
        assert!(!sphere_packing_check(63, 56, 3));
        assert!(sphere_packing_check(7, 4, 3));
        assert!(sphere_packing_check(23, 12, 7));
        assert!(!sphere_packing_check(15, 7, 5));
    }
}
