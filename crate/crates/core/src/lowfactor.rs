//! Factorization types of x^3 + a x + b and x^4 + a2 x^2 + a1 x + a0 over a
//! binary field, the cubic root formula, and a brute-force oracle.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2mat;
use crate::gf2n::{FieldElt, FieldSpec};

/// Degrees of the irreducible factors, ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorType {
    L111,
    L12,
    L3,
    L1111,
    L22,
    L13,
    L112,
    L4,
}

impl FactorType {
    pub fn parts(self) -> &'static [u32] {
        match self {
            FactorType::L111 => &[1, 1, 1],
            FactorType::L12 => &[1, 2],
            FactorType::L3 => &[3],
            FactorType::L1111 => &[1, 1, 1, 1],
            FactorType::L22 => &[2, 2],
            FactorType::L13 => &[1, 3],
            FactorType::L112 => &[1, 1, 2],
            FactorType::L4 => &[4],
        }
    }

    pub fn degree(self) -> u32 {
        self.parts().iter().sum()
    }

    fn from_parts(parts: &[u32]) -> Option<FactorType> {
        let all = [
            FactorType::L111,
            FactorType::L12,
            FactorType::L3,
            FactorType::L1111,
            FactorType::L22,
            FactorType::L13,
            FactorType::L112,
            FactorType::L4,
        ];
        all.into_iter().find(|t| t.parts() == parts)
    }
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for FactorType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A solution of z^2 + z = c, if tr(c) = 0.
pub fn solve_artin_schreier(field: &FieldSpec, c: FieldElt) -> Option<FieldElt> {
    if field.trace(c) != 0 {
        return None;
    }
    let m = field.degree();
    if m % 2 == 1 {
        // half-trace
        let mut acc = FieldElt::ZERO;
        let mut p = c;
        for _ in 0..=(m - 1) / 2 {
            acc += p;
            p = field.frobenius(p, 2);
        }
        return Some(acc);
    }
    let cols: Vec<u64> = (0..m)
        .map(|j| {
            let b = FieldElt(1 << j);
            (field.square(b) + b).0 as u64
        })
        .collect();
    gf2mat::solve_columns(&cols, c.0 as u64).map(|mask| FieldElt(mask as u32))
}

/// GF(q^2) = GF(q)[θ] / (θ^2 + θ + c) with c the smallest trace-one element.
#[derive(Clone, Copy, Debug)]
struct Ext {
    base: FieldSpec,
    c: FieldElt,
}

/// a0 + a1 θ.
type E = (FieldElt, FieldElt);

const E_ONE: E = (FieldElt::ONE, FieldElt::ZERO);

impl Ext {
    fn new(base: FieldSpec) -> Ext {
        let c = base
            .elements()
            .find(|&x| base.trace(x) == 1)
            .expect("tr(x) = 1 has solutions");
        Ext { base, c }
    }

    fn order(&self) -> u64 {
        1u64 << (2 * self.base.degree())
    }

    fn elt(&self, i: u64) -> E {
        let m = self.base.degree();
        (FieldElt((i & ((1 << m) - 1)) as u32), FieldElt((i >> m) as u32))
    }

    fn mul(&self, x: E, y: E) -> E {
        let f = &self.base;
        let hh = f.mul(x.1, y.1);
        (
            f.mul(x.0, y.0) + f.mul(hh, self.c),
            f.mul(x.0, y.1) + f.mul(x.1, y.0) + hh,
        )
    }

    fn pow(&self, mut x: E, mut e: u64) -> E {
        let mut acc = E_ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, x: E) -> E {
        self.pow(x, self.order() - 2)
    }

    /// z with z^2 + z = c' for c' in the base field; always exists here.
    fn solve_artin_schreier(&self, c: FieldElt) -> E {
        match solve_artin_schreier(&self.base, c) {
            Some(z) => (z, FieldElt::ZERO),
            None => {
                let y = solve_artin_schreier(&self.base, c + self.c).expect("trace is zero");
                (y, FieldElt::ONE)
            }
        }
    }

    /// All cube roots of t != 0, or none if t is not a cube.
    fn cube_roots(&self, t: E) -> Vec<E> {
        let order = self.order() - 1;
        if self.pow(t, order / 3) != E_ONE {
            return Vec::new();
        }
        let mut u = order;
        let mut s = 0;
        while u.is_multiple_of(3) {
            u /= 3;
            s += 1;
        }
        let sylow = 3u64.pow(s);
        let h = (1..self.order())
            .map(|i| self.elt(i))
            .find(|&h| self.pow(h, order / 3) != E_ONE)
            .expect("non-cubes exist");
        let g = self.pow(h, u);
        // 3e = 1 mod u, e in 1..=u
        let e = (1..=u).find(|e| (3 * e) % u == 1 % u).expect("3 is invertible mod u");
        let z_inv = self.inv(self.pow(t, 3 * e - 1));
        let mut acc = E_ONE;
        let mut log = None;
        for k in 0..sylow {
            if acc == z_inv {
                log = Some(k);
                break;
            }
            acc = self.mul(acc, g);
        }
        let log = log.expect("z lies in the Sylow-3 subgroup");
        debug_assert_eq!(log % 3, 0);
        let eps = self.mul(self.pow(t, e), self.pow(g, log / 3));
        let omega = self.pow(g, sylow / 3);
        let eps1 = self.mul(eps, omega);
        vec![eps, eps1, self.mul(eps1, omega)]
    }
}

fn is_cube(field: &FieldSpec, t: FieldElt) -> bool {
    field.pow_u64(t, field.group_order() / 3) == FieldElt::ONE
}

/// Type of x^3 + a x + b.
pub fn cubic_type(a: FieldElt, b: FieldElt, field: &FieldSpec) -> Result<FactorType> {
    if b.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let a3 = field.mul(field.square(a), a);
    let c = field.div(a3, field.square(b))?;
    if field.trace(c) != field.trace(FieldElt::ONE) {
        return Ok(FactorType::L12);
    }
    let cube = if field.degree().is_multiple_of(2) {
        // roots t = b z of t^2 + b t + a^3, both in the base field
        let t = if a.is_zero() {
            b
        } else {
            field.mul(b, solve_artin_schreier(field, c).expect("trace is zero"))
        };
        let verdict = is_cube(field, t);
        debug_assert!(a.is_zero() || verdict == is_cube(field, t + b));
        verdict
    } else {
        let ext = Ext::new(*field);
        let bb = (b, FieldElt::ZERO);
        let t = if a.is_zero() {
            bb
        } else {
            ext.mul(bb, ext.solve_artin_schreier(c))
        };
        let verdict = !ext.cube_roots(t).is_empty();
        debug_assert!(
            a.is_zero() || verdict == !ext.cube_roots((t.0 + b, t.1)).is_empty()
        );
        verdict
    };
    Ok(if cube { FactorType::L111 } else { FactorType::L3 })
}

/// A root of x^3 + a x + b in the field: the smallest among
/// ε + a/ε over the cube roots ε of t.
pub fn cubic_root(a: FieldElt, b: FieldElt, field: &FieldSpec) -> Result<FieldElt> {
    if b.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let f = |r: FieldElt| field.mul(field.square(r), r) + field.mul(a, r) + b;
    let ext = Ext::new(*field);
    let bb = (b, FieldElt::ZERO);
    let t = if a.is_zero() {
        bb
    } else {
        let c = field.div(field.mul(field.square(a), a), field.square(b))?;
        ext.mul(bb, ext.solve_artin_schreier(c))
    };
    ext.cube_roots(t)
        .into_iter()
        .map(|eps| {
            let q = ext.mul((a, FieldElt::ZERO), ext.inv(eps));
            (eps.0 + q.0, eps.1 + q.1)
        })
        .filter(|r| r.1.is_zero() && f(r.0).is_zero())
        .map(|r| r.0)
        .min()
        .ok_or(Error::NoRootInField)
}

/// Type of x^4 + a2 x^2 + a1 x + a0 from its resolvent cubic.
pub fn quartic_type(
    a2: FieldElt,
    a1: FieldElt,
    a0: FieldElt,
    field: &FieldSpec,
) -> Result<FactorType> {
    if a0.is_zero() || a1.is_zero() {
        return Err(Error::DegenerateCoefficients);
    }
    let w_trace = |r: FieldElt| -> Result<u8> {
        let w = field.div(field.mul(a0, field.square(r)), field.square(a1))?;
        Ok(field.trace(w))
    };
    match cubic_type(a2, a1, field)? {
        FactorType::L3 => Ok(FactorType::L13),
        FactorType::L12 => {
            let r1 = cubic_root(a2, a1, field)?;
            Ok(if w_trace(r1)? == 0 {
                FactorType::L112
            } else {
                FactorType::L4
            })
        }
        _ => {
            let r1 = cubic_root(a2, a1, field)?;
            // y^2 + r1 y + (r1^2 + a2) = 0, with y = r1 z
            let r1sq = field.square(r1);
            let z = solve_artin_schreier(field, field.div(r1sq + a2, r1sq)?)
                .ok_or(Error::NoRootInField)?;
            let r2 = field.mul(r1, z);
            let r3 = r2 + r1;
            let zeros = [r1, r2, r3]
                .into_iter()
                .map(w_trace)
                .collect::<Result<Vec<u8>>>()?
                .into_iter()
                .filter(|&t| t == 0)
                .count();
            Ok(if zeros == 3 {
                FactorType::L1111
            } else {
                FactorType::L22
            })
        }
    }
}

fn eval(field: &FieldSpec, coeffs: &[FieldElt], x: FieldElt) -> FieldElt {
    coeffs
        .iter()
        .rev()
        .fold(FieldElt::ZERO, |acc, &c| field.mul(acc, x) + c)
}

/// Quotient of a monic polynomial by (x + r), assuming r is a root.
fn deflate(field: &FieldSpec, coeffs: &[FieldElt], r: FieldElt) -> Vec<FieldElt> {
    let d = coeffs.len() - 1;
    let mut q = vec![FieldElt::ZERO; d];
    let mut carry = FieldElt::ZERO;
    for i in (0..d).rev() {
        carry = coeffs[i + 1] + field.mul(carry, r);
        q[i] = carry;
    }
    q
}

/// Whether x^2 + p x + s divides the monic quartic `c`.
fn quadratic_divides(field: &FieldSpec, c: &[FieldElt], p: FieldElt, s: FieldElt) -> bool {
    let mut rem = c.to_vec();
    for top in (2..rem.len()).rev() {
        let lead = rem[top];
        rem[top] = FieldElt::ZERO;
        rem[top - 1] += field.mul(lead, p);
        rem[top - 2] += field.mul(lead, s);
    }
    rem[0].is_zero() && rem[1].is_zero()
}

/// Oracle: trial roots with multiplicity, then quadratic-factor search for
/// a rootless quartic. `coeffs` is low to high, monic, degree 3 or 4.
pub fn brute_factor_type(coeffs: &[FieldElt], field: &FieldSpec) -> FactorType {
    let degree = coeffs.len() - 1;
    assert!(
        (3..=4).contains(&degree) && coeffs[degree] == FieldElt::ONE,
        "monic cubic or quartic expected"
    );
    let mut rest = coeffs.to_vec();
    let mut parts = Vec::new();
    'outer: while rest.len() > 1 {
        for x in field.elements() {
            if eval(field, &rest, x).is_zero() {
                rest = deflate(field, &rest, x);
                parts.push(1);
                continue 'outer;
            }
        }
        break;
    }
    match rest.len() - 1 {
        0 => {}
        4 => {
            let splits = field.elements().any(|p| {
                field
                    .elements()
                    .any(|s| quadratic_divides(field, &rest, p, s))
            });
            if splits {
                parts.extend([2, 2]);
            } else {
                parts.push(4);
            }
        }
        d => parts.push(d as u32),
    }
    FactorType::from_parts(&parts).expect("parts form a listed pattern")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(m: u32) -> FieldSpec {
        if m == 1 {
            FieldSpec::gf2()
        } else {
            FieldSpec::standard(m).unwrap()
        }
    }

    fn cubic(a: FieldElt, b: FieldElt) -> [FieldElt; 4] {
        [b, a, FieldElt::ZERO, FieldElt::ONE]
    }

    #[test]
    fn artin_schreier_matches_search() {
        for m in 1..=10 {
            let f = field(m);
            for c in f.elements() {
                let found = f.elements().any(|z| f.square(z) + z == c);
                match solve_artin_schreier(&f, c) {
                    Some(z) => assert_eq!(f.square(z) + z, c),
                    None => assert!(!found, "m={m} c={c}"),
                }
            }
        }
    }

    #[test]
    fn cubic_examples() {
        let f = field(1);
        let (zero, one) = (FieldElt::ZERO, FieldElt::ONE);
        assert_eq!(cubic_type(one, one, &f).unwrap(), FactorType::L3);
        assert_eq!(cubic_type(zero, one, &f).unwrap(), FactorType::L12);
        assert_eq!(cubic_root(zero, one, &f).unwrap(), one);
        assert_eq!(cubic_root(one, one, &f), Err(Error::NoRootInField));
        assert_eq!(cubic_type(one, zero, &f), Err(Error::ZeroConstantTerm));
        assert_eq!(brute_factor_type(&cubic(zero, one), &f), FactorType::L12);
    }

    #[test]
    fn cubic_type_matches_brute_force() {
        for m in 1..=6 {
            let f = field(m);
            for a in f.elements() {
                for b in f.elements().skip(1) {
                    let t = cubic_type(a, b, &f).unwrap();
                    assert_eq!(t, brute_factor_type(&cubic(a, b), &f), "m={m} a={a} b={b}");
                    match cubic_root(a, b, &f) {
                        Ok(r) => {
                            assert_ne!(t, FactorType::L3);
                            assert!(eval(&f, &cubic(a, b), r).is_zero());
                        }
                        Err(e) => {
                            assert_eq!(e, Error::NoRootInField);
                            assert_eq!(t, FactorType::L3);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_root_resubstitutes_m7() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 1000 {
            let a = FieldElt(rng.gen_range(0..128));
            let b = FieldElt(rng.gen_range(1..128));
            if let Ok(r) = cubic_root(a, b, &f) {
                assert!(eval(&f, &cubic(a, b), r).is_zero());
                done += 1;
            }
        }
    }

    #[test]
    fn quartic_examples() {
        let one = FieldElt::ONE;
        let q = |f: &FieldSpec| quartic_type(FieldElt::ZERO, one, one, f).unwrap();
        assert_eq!(q(&field(1)), FactorType::L4);
        assert_eq!(q(&field(2)), FactorType::L22);
        assert_eq!(
            quartic_type(one, FieldElt::ZERO, one, &field(2)),
            Err(Error::DegenerateCoefficients)
        );
    }

    fn check_quartic(f: &FieldSpec, a2: FieldElt, a1: FieldElt, a0: FieldElt) {
        let coeffs = [a0, a1, a2, FieldElt::ZERO, FieldElt::ONE];
        assert_eq!(
            quartic_type(a2, a1, a0, f).unwrap(),
            brute_factor_type(&coeffs, f),
            "n={} a2={a2} a1={a1} a0={a0}",
            f.degree()
        );
    }

    #[test]
    fn quartic_type_exhaustive() {
        for n in 2..=4 {
            let f = field(n);
            for a2 in f.elements() {
                for a1 in f.elements().skip(1) {
                    for a0 in f.elements().skip(1) {
                        check_quartic(&f, a2, a1, a0);
                    }
                }
            }
        }
    }

    #[test]
    fn quartic_type_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        for n in [5, 6] {
            let f = field(n);
            let q = f.order() as u32;
            for _ in 0..10_000 {
                let a2 = FieldElt(rng.gen_range(0..q));
                let a1 = FieldElt(rng.gen_range(1..q));
                let a0 = FieldElt(rng.gen_range(1..q));
                check_quartic(&f, a2, a1, a0);
            }
        }
    }

    #[test]
    fn brute_on_constructed_products() {
        let f = field(4);
        let mul_lin = |p: &[FieldElt], r: FieldElt| {
            let mut out = vec![FieldElt::ZERO; p.len() + 1];
            for (i, &c) in p.iter().enumerate() {
                out[i + 1] += c;
                out[i] += f.mul(c, r);
            }
            out
        };
        let (x, y, z) = (FieldElt(3), FieldElt(7), FieldElt(12));
        let p = mul_lin(&mul_lin(&mul_lin(&[FieldElt::ONE], x), y), z);
        assert_eq!(brute_factor_type(&p, &f), FactorType::L111);
        // x^2 + x + c irreducible times (x + 5)
        let c = f.elements().find(|&c| f.trace(c) == 1).unwrap();
        let p = mul_lin(&[c, FieldElt::ONE, FieldElt::ONE], FieldElt(5));
        assert_eq!(brute_factor_type(&p, &f), FactorType::L12);
        assert_eq!(brute_factor_type(&mul_lin(&p, FieldElt(9)), &f), FactorType::L112);
    }

    #[test]
    fn display() {
        assert_eq!(FactorType::L112.to_string(), "(1,1,2)");
        assert_eq!(FactorType::L4.degree(), 4);
    }
}
