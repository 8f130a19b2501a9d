//! Bit-packed arithmetic in GF(2^n) for 2 <= n <= 24.
//!
//! Elements are n-bit words in the polynomial basis `1, x, ..., x^(n-1)`
//! modulo a fixed irreducible polynomial. Addition is XOR; multiplication is
//! shift-and-add with interleaved reduction.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 24;

/// Lexicographically smallest monic irreducible polynomial of each degree
/// 2..=24, top bit included.
const SMALLEST_IRREDUCIBLE: [u64; 23] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003,
    0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

/// One element of GF(2^n), stored as its polynomial-basis bit vector.
#[derive(
    Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
#[repr(transparent)]
pub struct FieldElt(pub u32);

impl FieldElt {
    pub const ZERO: FieldElt = FieldElt(0);
    pub const ONE: FieldElt = FieldElt(1);

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// Addition in characteristic 2 is XOR.
impl std::ops::Add for FieldElt {
    type Output = FieldElt;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElt) -> FieldElt {
        FieldElt(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElt {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElt) {
        self.0 ^= rhs.0;
    }
}

/// The field GF(2^n) together with its reduction polynomial.
///
/// Immutable after construction; every operation is a pure function of its
/// inputs, so one spec can be shared freely across threads.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    n: u32,
    poly: u64,
    /// Bit j is tr(x^j); the absolute trace is then a masked parity.
    trace_mask: u32,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.n, self.poly)
    }
}

impl FieldSpec {
    /// Validates `n` and the reduction polynomial. When `reduction_poly` is
    /// `None` the built-in smallest irreducible of degree `n` is used.
    pub fn new(n: u32, reduction_poly: Option<u64>) -> Result<FieldSpec> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        let poly = match reduction_poly {
            None => SMALLEST_IRREDUCIBLE[(n - MIN_DEGREE) as usize],
            Some(p) => {
                if p >> n != 1 {
                    return Err(Error::NotMonic { poly: p, n });
                }
                if let Some(factor) = smallest_factor(p) {
                    return Err(Error::NotIrreducible { poly: p, factor });
                }
                p
            }
        };
        Ok(Self::from_parts(n, poly))
    }

    /// The standard field of degree `n` (built-in polynomial).
    pub fn standard(n: u32) -> Result<FieldSpec> {
        Self::new(n, None)
    }

    /// GF(2) itself, reduction polynomial x + 1. Outside the range accepted
    /// by [`FieldSpec::new`]; the low-degree factorization routines need it.
    pub fn gf2() -> FieldSpec {
        Self::from_parts(1, 0b11)
    }

    fn from_parts(n: u32, poly: u64) -> FieldSpec {
        let mut spec = FieldSpec {
            n,
            poly,
            trace_mask: 0,
        };
        let mut mask = 0u32;
        for j in 0..n {
            if spec.trace_by_definition(FieldElt(1 << j)) {
                mask |= 1 << j;
            }
        }
        spec.trace_mask = mask;
        spec
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn reduction_poly(&self) -> u64 {
        self.poly
    }

    /// Number of elements, 2^n.
    #[inline]
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// 2^n - 1, the order of the multiplicative group.
    #[inline]
    pub fn group_order(&self) -> u64 {
        self.order() - 1
    }

    #[inline]
    pub fn contains(&self, x: FieldElt) -> bool {
        (x.0 as u64) >> self.n == 0
    }

    /// All elements in ascending integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElt> + Clone {
        (0..self.order() as u32).map(FieldElt)
    }

    #[inline]
    pub fn add(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        x + y
    }

    #[inline]
    pub fn mul(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        let n = self.n;
        let poly = self.poly;
        let mut a = x.0 as u64;
        let mut b = y.0 as u64;
        let mut r = 0u64;
        while b != 0 {
            r ^= a & (b & 1).wrapping_neg();
            b >>= 1;
            a <<= 1;
            a ^= poly & (a >> n).wrapping_neg();
        }
        FieldElt(r as u32)
    }

    #[inline]
    pub fn square(&self, x: FieldElt) -> FieldElt {
        self.mul(x, x)
    }

    /// x^(2^k), k applications of the Frobenius map.
    pub fn frobenius(&self, x: FieldElt, k: u32) -> FieldElt {
        let mut y = x;
        for _ in 0..k % self.n {
            y = self.square(y);
        }
        y
    }

    /// Square-and-multiply with a machine-word exponent; `pow_u64(x, 0) = 1`
    /// for every x, including zero.
    pub fn pow_u64(&self, x: FieldElt, mut e: u64) -> FieldElt {
        let mut base = x;
        let mut acc = FieldElt::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Exponentiation with an arbitrary-size exponent. The exponent is first
    /// reduced modulo 2^n - 1 (see [`FieldSpec::normalize_exponent`]).
    pub fn pow(&self, x: FieldElt, e: &BigUint) -> FieldElt {
        self.pow_u64(x, self.normalize_exponent(e))
    }

    /// Reduces an exponent modulo 2^n - 1 while keeping x^e unchanged as a
    /// function: the literal zero stays 0 (the constant 1), any other multiple
    /// of 2^n - 1 becomes 2^n - 1 (which still maps 0 to 0).
    pub fn normalize_exponent(&self, e: &BigUint) -> u64 {
        if e.is_zero() {
            return 0;
        }
        let q1 = self.group_order();
        let r = (e % q1).to_u64().expect("residue below 2^24");
        if r == 0 {
            q1
        } else {
            r
        }
    }

    pub fn inv(&self, x: FieldElt) -> Result<FieldElt> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u64(x, self.group_order() - 1))
    }

    pub fn div(&self, x: FieldElt, y: FieldElt) -> Result<FieldElt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Absolute trace onto GF(2).
    #[inline]
    pub fn trace(&self, x: FieldElt) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    fn trace_by_definition(&self, x: FieldElt) -> bool {
        let mut acc = x;
        let mut y = x;
        for _ in 1..self.n {
            y = self.square(y);
            acc += y;
        }
        debug_assert!(acc.0 <= 1);
        acc.0 == 1
    }

    /// Relative trace onto GF(2^m): x + x^(2^m) + ... + x^(2^(n-m)).
    pub fn rel_trace(&self, x: FieldElt, m: u32) -> Result<FieldElt> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotASubfield { n: self.n, m });
        }
        let mut acc = x;
        let mut y = x;
        for _ in 1..self.n / m {
            y = self.frobenius(y, m);
            acc += y;
        }
        Ok(acc)
    }

    /// Membership in the subfield GF(2^m), i.e. x^(2^m) = x.
    pub fn in_subfield(&self, x: FieldElt, m: u32) -> bool {
        self.n.is_multiple_of(m) && self.frobenius(x, m) == x
    }

    /// The mask `u` with tr(b*y) = parity(y & u) for every y. Bit j of `u`
    /// is tr(b * x^j). The map b -> mask is a linear bijection (the trace
    /// form is nondegenerate).
    pub fn pairing_mask(&self, b: FieldElt) -> u32 {
        (0..self.n)
            .filter(|&j| self.trace(self.mul(b, FieldElt(1 << j))) == 1)
            .fold(0u32, |mask, j| mask | (1 << j))
    }

    /// Smallest element (ascending integer order) that generates the
    /// multiplicative group.
    pub fn primitive_element(&self) -> FieldElt {
        let q1 = self.group_order();
        let primes = prime_factors(q1);
        (1..self.order() as u32)
            .map(FieldElt)
            .find(|&g| primes.iter().all(|&p| self.pow_u64(g, q1 / p) != FieldElt::ONE))
            .expect("multiplicative group is cyclic")
    }

    /// The element omega of GF(4) \ GF(2), taken as g^((2^n-1)/3) for the
    /// smallest primitive g.
    pub fn omega(&self) -> Result<FieldElt> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::NoGF4Subfield(self.n));
        }
        let g = self.primitive_element();
        Ok(self.pow_u64(g, self.group_order() / 3))
    }
}

/// Smallest nontrivial factor of a binary polynomial, by trial division over
/// all polynomials of degree <= deg/2.
pub fn smallest_factor(p: u64) -> Option<u64> {
    let d = 63 - p.leading_zeros();
    (2u64..(1u64 << (d / 2 + 1)))
        .filter(|q| 63 - q.leading_zeros() <= d / 2)
        .find(|&q| poly_mod(p, q) == 0)
}

/// Remainder of binary polynomial division.
pub fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

pub(crate) fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Carry-less product followed by polynomial reduction; shares nothing
    /// with the interleaved multiplier.
    fn schoolbook_mul(spec: &FieldSpec, x: FieldElt, y: FieldElt) -> FieldElt {
        let mut prod = 0u64;
        for i in 0..32 {
            if (y.0 >> i) & 1 == 1 {
                prod ^= (x.0 as u64) << i;
            }
        }
        FieldElt(poly_mod(prod, spec.reduction_poly()) as u32)
    }

    #[test]
    fn default_polynomials_are_smallest_irreducibles() {
        for n in MIN_DEGREE..=MAX_DEGREE {
            let expected = ((1u64 << n) | 1..1u64 << (n + 1))
                .find(|&p| smallest_factor(p).is_none())
                .unwrap();
            assert_eq!(FieldSpec::standard(n).unwrap().reduction_poly(), expected, "n={n}");
        }
    }

    #[test]
    fn field_new_examples() {
        assert_eq!(FieldSpec::standard(3).unwrap().reduction_poly(), 0b1011);
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert_eq!(
            FieldSpec::new(4, Some(0b10101)),
            Err(Error::NotIrreducible { poly: 0b10101, factor: 0b111 })
        );
        assert_eq!(FieldSpec::standard(1), Err(Error::DegreeOutOfRange(1)));
        assert_eq!(FieldSpec::standard(25), Err(Error::DegreeOutOfRange(25)));
        assert!(matches!(FieldSpec::new(4, Some(0b1011)), Err(Error::NotMonic { .. })));
        assert!(FieldSpec::new(4, Some(0b11001)).is_ok());
    }

    #[test]
    fn alpha_times_alpha_squared() {
        let f = FieldSpec::standard(3).unwrap();
        // x^3 = x + 1 mod x^3 + x + 1
        assert_eq!(f.mul(FieldElt(0b010), FieldElt(0b100)), FieldElt(0b011));
    }

    #[test]
    fn inverses_exhaustive_n6() {
        let f = FieldSpec::standard(6).unwrap();
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElt::ONE);
        }
        assert_eq!(f.inv(FieldElt::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.inv(FieldElt::ONE), Ok(FieldElt::ONE));
    }

    #[test]
    fn mul_matches_schoolbook_n16() {
        let f = FieldSpec::standard(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10_000 {
            let x = FieldElt(rng.gen_range(0..1 << 16));
            let y = FieldElt(rng.gen_range(0..1 << 16));
            assert_eq!(f.mul(x, y), schoolbook_mul(&f, x, y));
        }
    }

    #[test]
    fn field_axioms_small_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=16 {
            let f = FieldSpec::standard(n).unwrap();
            let q = f.order() as u32;
            let samples = if n <= 8 { 20_000 } else { 100_000 };
            for _ in 0..samples {
                let (x, y, z) = (
                    FieldElt(rng.gen_range(0..q)),
                    FieldElt(rng.gen_range(0..q)),
                    FieldElt(rng.gen_range(0..q)),
                );
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                assert_eq!(f.mul(x, y + z), f.mul(x, y) + f.mul(x, z));
            }
        }
        for n in 2..=12 {
            let f = FieldSpec::standard(n).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElt::ONE, "n={n}");
            }
        }
    }

    #[test]
    fn pow_conventions() {
        let f = FieldSpec::standard(8).unwrap();
        for x in f.elements() {
            assert_eq!(f.pow_u64(x, 256), x);
            assert_eq!(f.pow(x, &BigUint::from(256u32)), x);
        }
        assert_eq!(f.pow_u64(FieldElt::ZERO, 0), FieldElt::ONE);
        assert_eq!(f.pow(FieldElt::ZERO, &BigUint::zero()), FieldElt::ONE);
        for x in f.elements().skip(1) {
            assert_eq!(f.pow_u64(x, 255), FieldElt::ONE);
        }
        // a positive multiple of 2^n - 1 keeps 0 -> 0
        assert_eq!(f.pow(FieldElt::ZERO, &BigUint::from(510u32)), FieldElt::ZERO);
        let big = BigUint::from(1u32) << 200usize;
        let x = FieldElt(0x53);
        assert_eq!(f.pow(x, &big), f.frobenius(x, 200 % 8));
    }

    #[test]
    fn trace_examples() {
        let f8 = FieldSpec::standard(8).unwrap();
        assert_eq!(f8.trace(FieldElt::ZERO), 0);
        assert_eq!(f8.elements().filter(|&x| f8.trace(x) == 0).count(), 128);
        let f7 = FieldSpec::standard(7).unwrap();
        assert_eq!(f7.trace(FieldElt::ONE), 1);
        for n in 2..=12 {
            let f = FieldSpec::standard(n).unwrap();
            for x in f.elements() {
                assert_eq!(f.trace(x) == 1, f.trace_by_definition(x));
                assert_eq!(f.trace(f.square(x)), f.trace(x));
            }
        }
    }

    #[test]
    fn rel_trace_examples() {
        let f = FieldSpec::standard(6).unwrap();
        for x in f.elements() {
            assert_eq!(f.rel_trace(x, 6).unwrap(), x);
            let t = f.rel_trace(x, 3).unwrap();
            assert_eq!(f.frobenius(t, 3), t);
            // tr_6 = tr_3 o tr_{6/3}: tr_3 of an element of GF(8) computed as
            // t + t^2 + t^4 inside GF(64)
            let t3 = t + f.square(t) + f.frobenius(t, 2);
            assert_eq!(t3.0 as u8, f.trace(x));
        }
        assert_eq!(f.rel_trace(FieldElt::ONE, 4), Err(Error::NotASubfield { n: 6, m: 4 }));
    }

    #[test]
    fn rel_trace_fibers_are_uniform() {
        for n in 2..=12u32 {
            let f = FieldSpec::standard(n).unwrap();
            for m in (1..=n).filter(|m| n % m == 0) {
                let mut counts = std::collections::HashMap::new();
                for x in f.elements() {
                    *counts.entry(f.rel_trace(x, m).unwrap()).or_insert(0u64) += 1;
                }
                assert_eq!(counts.len() as u64, 1 << m);
                assert!(counts.values().all(|&c| c == 1 << (n - m)));
            }
        }
    }

    #[test]
    fn frobenius_is_additive_bijection() {
        let f = FieldSpec::standard(10).unwrap();
        let mut seen = vec![false; f.size()];
        for x in f.elements() {
            seen[f.square(x).0 as usize] = true;
            let y = FieldElt(x.0.rotate_left(3) & 0x3ff);
            assert_eq!(f.square(x + y), f.square(x) + f.square(y));
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn omega_properties() {
        for n in [2, 4, 6, 8, 10] {
            let f = FieldSpec::standard(n).unwrap();
            let w = f.omega().unwrap();
            assert_eq!(f.square(w) + w, FieldElt::ONE);
            assert_eq!(f.pow_u64(w, 3), FieldElt::ONE);
            assert_ne!(w, FieldElt::ONE);
        }
        assert_eq!(FieldSpec::standard(5).unwrap().omega(), Err(Error::NoGF4Subfield(5)));
    }

    #[test]
    fn pairing_mask_realizes_trace_form() {
        let f = FieldSpec::standard(7).unwrap();
        for b in f.elements() {
            let mask = f.pairing_mask(b);
            for y in f.elements() {
                assert_eq!(f.trace(f.mul(b, y)) as u32, (y.0 & mask).count_ones() & 1);
            }
        }
    }

    #[test]
    fn gf2_is_usable() {
        let f = FieldSpec::gf2();
        assert_eq!(f.mul(FieldElt::ONE, FieldElt::ONE), FieldElt::ONE);
        assert_eq!(f.trace(FieldElt::ONE), 1);
        assert_eq!(f.inv(FieldElt::ONE), Ok(FieldElt::ONE));
    }
}
