//! Symbolic functions GF(2^n) -> GF(2^n).
//!
//! A [`FuncExpr`] is a tree of monomials, sums, products, powers and
//! relative traces bound to a field. Exponents are arbitrary-size integers;
//! they are reduced modulo 2^n - 1 when the expression is bound to a field
//! (see [`FieldSpec::normalize_exponent`]).

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf2n::{FieldElt, FieldSpec};
use crate::par::{self, Exec};

pub use parse::{parse, Bindings};

/// Expression tree. Exponents are kept as written; [`FuncExpr`] holds the
/// normalized form used for evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    /// `coeff * x^exp`.
    Monomial { coeff: FieldElt, exp: BigUint },
    Sum(Vec<Node>),
    Product(Vec<Node>),
    /// `inner^exp`.
    Power { inner: Box<Node>, exp: BigUint },
    /// `tr_{n/m}(inner)`.
    RelTrace { inner: Box<Node>, m: u32 },
}

impl Node {
    pub fn x() -> Node {
        Node::mono(FieldElt::ONE, 1u32)
    }

    pub fn constant(c: FieldElt) -> Node {
        Node::mono(c, 0u32)
    }

    pub fn mono(coeff: FieldElt, exp: impl Into<BigUint>) -> Node {
        Node::Monomial {
            coeff,
            exp: exp.into(),
        }
    }

    pub fn pow(self, exp: impl Into<BigUint>) -> Node {
        Node::Power {
            inner: Box::new(self),
            exp: exp.into(),
        }
    }

    pub fn rel_trace(self, m: u32) -> Node {
        Node::RelTrace {
            inner: Box::new(self),
            m,
        }
    }

    /// Sum of `x^e` over the given exponents.
    pub fn poly<E: Into<BigUint>>(exps: impl IntoIterator<Item = E>) -> Node {
        Node::Sum(exps.into_iter().map(|e| Node::mono(FieldElt::ONE, e)).collect())
    }

    fn substitute_power(&self, d: &BigUint) -> Node {
        match self {
            Node::Monomial { coeff, exp } if exp.is_zero() => Node::constant(*coeff),
            Node::Monomial { coeff, exp } => Node::mono(*coeff, exp * d),
            Node::Sum(v) => Node::Sum(v.iter().map(|c| c.substitute_power(d)).collect()),
            Node::Product(v) => Node::Product(v.iter().map(|c| c.substitute_power(d)).collect()),
            Node::Power { inner, exp } => Node::Power {
                inner: Box::new(inner.substitute_power(d)),
                exp: exp.clone(),
            },
            Node::RelTrace { inner, m } => Node::RelTrace {
                inner: Box::new(inner.substitute_power(d)),
                m: *m,
            },
        }
    }
}

/// Node with exponents reduced for a specific field.
#[derive(Clone, Debug)]
enum Op {
    Mono(FieldElt, u64),
    Sum(Vec<Op>),
    Product(Vec<Op>),
    Power(Box<Op>, u64),
    RelTrace(Box<Op>, u32),
}

impl Op {
    fn eval(&self, f: &FieldSpec, x: FieldElt) -> FieldElt {
        match self {
            Op::Mono(c, e) => f.mul(*c, f.pow_u64(x, *e)),
            Op::Sum(v) => v.iter().fold(FieldElt::ZERO, |acc, o| acc + o.eval(f, x)),
            Op::Product(v) => v.iter().fold(FieldElt::ONE, |acc, o| f.mul(acc, o.eval(f, x))),
            Op::Power(inner, e) => f.pow_u64(inner.eval(f, x), *e),
            Op::RelTrace(inner, m) => {
                f.rel_trace(inner.eval(f, x), *m).expect("validated subfield")
            }
        }
    }
}

/// A function GF(2^n) -> GF(2^n) bound to its field, with a lazily built
/// value table.
#[derive(Clone)]
pub struct FuncExpr {
    field: FieldSpec,
    root: Node,
    op: Op,
    table: OnceLock<Arc<Vec<FieldElt>>>,
}

impl fmt::Debug for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FuncExpr({} over GF(2^{}))", self, self.field.degree())
    }
}

impl PartialEq for FuncExpr {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.root == other.root
    }
}

/// Outcome of the two-to-one test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    TwoToOne,
    /// The smallest nonzero image point whose fiber size is not 2 (zero
    /// only if every nonzero fiber is fine), its smallest preimage, and the
    /// fiber size.
    No {
        witness: FieldElt,
        image: FieldElt,
        fiber_size: u64,
    },
}

impl Verdict {
    pub fn is_two_to_one(&self) -> bool {
        matches!(self, Verdict::TwoToOne)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Verdict::TwoToOne => Ok(()),
            Verdict::No {
                witness,
                image,
                fiber_size,
            } => Err(Error::NotTwoToOne {
                image: image.0,
                witness: witness.0,
                size: fiber_size,
            }),
        }
    }
}

/// Distinct images of a function in ascending integer order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageSet {
    pub elements: Vec<FieldElt>,
    /// True when zero has been removed (the set D(f)).
    pub is_defining_set: bool,
}

impl ImageSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl FuncExpr {
    /// Binds `root` to `field`, checking coefficients and trace degrees.
    pub fn new(field: FieldSpec, root: Node) -> Result<FuncExpr> {
        let op = compile(&field, &root)?;
        Ok(FuncExpr {
            field,
            root,
            op,
            table: OnceLock::new(),
        })
    }

    /// Parses `text` over `field` with the given integer variables (`n` is
    /// always bound to the field degree).
    pub fn parse(field: FieldSpec, text: &str, vars: &Bindings) -> Result<FuncExpr> {
        let node = parse(text, &field, vars)?;
        FuncExpr::new(field, node)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    #[inline]
    pub fn eval(&self, x: FieldElt) -> FieldElt {
        self.op.eval(&self.field, x)
    }

    /// `value_table()[x] = f(x)` for all 2^n inputs, computed once.
    pub fn value_table(&self) -> Arc<Vec<FieldElt>> {
        self.value_table_with(Exec::default())
    }

    pub fn value_table_with(&self, exec: Exec) -> Arc<Vec<FieldElt>> {
        self.table
            .get_or_init(|| {
                let size = self.field.order();
                Arc::new(par::map_range(exec, 0..size, |x| self.eval(FieldElt(x as u32))))
            })
            .clone()
    }

    /// Bit table of x -> tr(b f(x)).
    pub fn trace_table(&self, b: FieldElt) -> Vec<u8> {
        let mask = self.field.pairing_mask(b);
        self.value_table()
            .iter()
            .map(|v| ((v.0 & mask).count_ones() & 1) as u8)
            .collect()
    }

    /// Fiber sizes indexed by image value.
    pub fn fiber_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.field.size()];
        for v in self.value_table().iter() {
            counts[v.0 as usize] += 1;
        }
        counts
    }

    pub fn is_two_to_one(&self) -> Verdict {
        let counts = self.fiber_counts();
        let bad = |y: &usize| counts[*y] != 0 && counts[*y] != 2;
        let Some(image) = (1..counts.len()).find(bad).or(Some(0).filter(bad)) else {
            return Verdict::TwoToOne;
        };
        let table = self.value_table();
        let witness = (0..table.len())
            .find(|&x| table[x].0 as usize == image)
            .expect("image has a preimage");
        Verdict::No {
            witness: FieldElt(witness as u32),
            image: FieldElt(image as u32),
            fiber_size: counts[image] as u64,
        }
    }

    /// All distinct values, ascending.
    pub fn image(&self) -> ImageSet {
        let counts = self.fiber_counts();
        ImageSet {
            elements: (0..counts.len())
                .filter(|&y| counts[y] != 0)
                .map(|y| FieldElt(y as u32))
                .collect(),
            is_defining_set: false,
        }
    }

    /// D(f): distinct nonzero values, ascending.
    pub fn defining_set(&self) -> ImageSet {
        let mut s = self.image();
        s.elements.retain(|e| !e.is_zero());
        s.is_defining_set = true;
        s
    }

    /// The function x -> f(x^d), for d coprime to 2^n - 1.
    pub fn quadratize(&self, d: &BigUint) -> Result<FuncExpr> {
        let q1 = BigUint::from(self.field.group_order());
        if !d.gcd(&q1).is_one() {
            return Err(Error::NotCoprime {
                exponent: d.to_string(),
                n: self.field.degree(),
            });
        }
        if d.is_one() {
            return Ok(self.clone());
        }
        FuncExpr::new(self.field, self.root.substitute_power(d))
    }

    /// Algebraic degree: max binary weight of an exponent in the univariate
    /// expansion, i.e. the degree of the coordinate functions.
    pub fn algebraic_degree(&self) -> u32 {
        match self.expand() {
            Some(poly) => poly
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, _)| e.count_ones())
                .max()
                .unwrap_or(0),
            None => self.anf_degree(),
        }
    }

    /// Degree at most 2 (affine functions included).
    pub fn is_quadratic(&self) -> bool {
        self.algebraic_degree() <= 2
    }

    /// Degree from the algebraic normal form of all coordinates at once
    /// (Moebius transform of the value table).
    pub fn anf_degree(&self) -> u32 {
        let mut t: Vec<u32> = self.value_table().iter().map(|v| v.0).collect();
        let n = self.field.degree();
        for i in 0..n {
            let bit = 1usize << i;
            for x in 0..t.len() {
                if x & bit != 0 {
                    t[x] ^= t[x ^ bit];
                }
            }
        }
        (0..t.len())
            .filter(|&u| t[u] != 0)
            .map(|u| u.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Univariate expansion `exponent -> coefficient` with exponents in
    /// 0..2^n-1, when it can be derived symbolically (monomials, sums,
    /// scalings, relative traces, Frobenius powers). `None` otherwise.
    fn expand(&self) -> Option<BTreeMap<u64, FieldElt>> {
        expand_op(&self.field, &self.op)
    }
}

fn expand_op(f: &FieldSpec, op: &Op) -> Option<BTreeMap<u64, FieldElt>> {
    let q1 = f.group_order();
    let mut out = BTreeMap::new();
    fn add(out: &mut BTreeMap<u64, FieldElt>, e: u64, c: FieldElt) {
        *out.entry(e).or_insert(FieldElt::ZERO) += c;
    }
    match op {
        Op::Mono(c, e) => add(&mut out, *e, *c),
        Op::Sum(v) => {
            for child in v {
                for (e, c) in expand_op(f, child)? {
                    add(&mut out, e, c);
                }
            }
        }
        Op::Product(v) => {
            // Only a scalar times one expandable factor.
            let mut scale = FieldElt::ONE;
            let mut rest: Option<BTreeMap<u64, FieldElt>> = None;
            for child in v {
                let p = expand_op(f, child)?;
                let is_const = p.keys().all(|&e| e == 0);
                if is_const {
                    scale = f.mul(scale, p.get(&0).copied().unwrap_or(FieldElt::ZERO));
                } else if rest.is_none() {
                    rest = Some(p);
                } else {
                    return None;
                }
            }
            match rest {
                None => add(&mut out, 0, scale),
                Some(p) => {
                    for (e, c) in p {
                        add(&mut out, e, f.mul(scale, c));
                    }
                }
            }
        }
        Op::Power(inner, e) => {
            let p = expand_op(f, inner)?;
            if *e == 0 {
                add(&mut out, 0, FieldElt::ONE);
            } else if e.is_power_of_two() {
                let k = e.trailing_zeros();
                for (ei, c) in p {
                    let ne = if ei == 0 { 0 } else { frob_exp(ei, k, q1) };
                    add(&mut out, ne, f.frobenius(c, k));
                }
            } else {
                let mut it = p.into_iter().filter(|(_, c)| !c.is_zero());
                match (it.next(), it.next()) {
                    (None, _) => {}
                    (Some((ei, c)), None) => {
                        let ne = if ei == 0 { 0 } else { mul_exp(ei, *e, q1) };
                        add(&mut out, ne, f.pow_u64(c, *e));
                    }
                    _ => return None,
                }
            }
        }
        Op::RelTrace(inner, m) => {
            let p = expand_op(f, inner)?;
            for j in 0..f.degree() / m {
                for (&ei, &c) in &p {
                    let ne = if ei == 0 { 0 } else { frob_exp(ei, j * m, q1) };
                    add(&mut out, ne, f.frobenius(c, j * m));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Some(out)
}

/// e * 2^k reduced into 1..=q1.
fn frob_exp(e: u64, k: u32, q1: u64) -> u64 {
    mul_exp(e, 1u64 << k, q1)
}

fn mul_exp(e: u64, d: u64, q1: u64) -> u64 {
    let r = ((e as u128 * d as u128) % q1 as u128) as u64;
    if r == 0 {
        q1
    } else {
        r
    }
}

fn compile(f: &FieldSpec, node: &Node) -> Result<Op> {
    Ok(match node {
        Node::Monomial { coeff, exp } => {
            check_elt(f, *coeff)?;
            Op::Mono(*coeff, f.normalize_exponent(exp))
        }
        Node::Sum(v) => Op::Sum(v.iter().map(|c| compile(f, c)).collect::<Result<_>>()?),
        Node::Product(v) => Op::Product(v.iter().map(|c| compile(f, c)).collect::<Result<_>>()?),
        Node::Power { inner, exp } => {
            Op::Power(Box::new(compile(f, inner)?), f.normalize_exponent(exp))
        }
        Node::RelTrace { inner, m } => {
            if *m == 0 || !f.degree().is_multiple_of(*m) {
                return Err(Error::NotASubfield {
                    n: f.degree(),
                    m: *m,
                });
            }
            Op::RelTrace(Box::new(compile(f, inner)?), *m)
        }
    })
}

fn check_elt(f: &FieldSpec, c: FieldElt) -> Result<()> {
    if f.contains(c) {
        Ok(())
    } else {
        Err(Error::Parse {
            position: 0,
            message: format!("coefficient {c} does not lie in GF(2^{})", f.degree()),
        })
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, self.field.degree(), false)
    }
}

fn write_elt(f: &mut fmt::Formatter<'_>, c: FieldElt) -> fmt::Result {
    write!(f, "#{:x}", c.0)
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, n: u32, tight: bool) -> fmt::Result {
    match node {
        Node::Monomial { coeff, exp } => {
            if exp.is_zero() {
                return write_elt(f, *coeff);
            }
            if *coeff != FieldElt::ONE {
                write_elt(f, *coeff)?;
                f.write_str("*")?;
            }
            f.write_str("x")?;
            if !exp.is_one() {
                write!(f, "^{exp}")?;
            }
            Ok(())
        }
        Node::Sum(v) if v.is_empty() => f.write_str("#0"),
        Node::Sum(v) => {
            if tight {
                f.write_str("(")?;
            }
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                write_node(f, c, n, false)?;
            }
            if tight {
                f.write_str(")")?;
            }
            Ok(())
        }
        Node::Product(v) if v.is_empty() => f.write_str("#1"),
        Node::Product(v) => {
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str("*")?;
                }
                write_node(f, c, n, true)?;
            }
            Ok(())
        }
        Node::Power { inner, exp } => {
            f.write_str("(")?;
            write_node(f, inner, n, false)?;
            write!(f, ")^{exp}")
        }
        Node::RelTrace { inner, m } => {
            write!(f, "tr[{n}/{m}](")?;
            write_node(f, inner, n, false)?;
            f.write_str(")")
        }
    }
}

/// Exponent helper: 2^k as a big integer.
pub fn two_pow(k: u32) -> BigUint {
    BigUint::one() << k
}

/// Converts an exponent to u64 when it fits.
pub fn exp_to_u64(e: &BigUint) -> Option<u64> {
    e.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> FieldSpec {
        FieldSpec::standard(n).unwrap()
    }

    fn parse_f(n: u32, s: &str) -> FuncExpr {
        FuncExpr::parse(field(n), s, &Bindings::new()).unwrap()
    }

    /// Independent evaluator: expand to monomials by hand and use pow/mul/add.
    fn naive_eval(f: &FieldSpec, terms: &[(FieldElt, BigUint)], x: FieldElt) -> FieldElt {
        terms
            .iter()
            .fold(FieldElt::ZERO, |acc, (c, e)| acc + f.mul(*c, f.pow(x, e)))
    }

    #[test]
    fn eval_examples() {
        let f = parse_f(5, "x^2+x");
        assert_eq!(f.eval(FieldElt::ONE), FieldElt::ZERO);
        let g = FuncExpr::parse(field(9), "tr[n/m](x^(2^m+1)) + x", &Bindings::from([('m', 3)]))
            .unwrap();
        assert_eq!(g.eval(FieldElt::ZERO), FieldElt::ZERO);
    }

    #[test]
    fn eval_matches_monomial_expansion() {
        let fs = field(9);
        let m = 3u32;
        let f = FuncExpr::parse(fs, "x^(2^(2*m+1)+1) + x^(2^(m+1)+1) + x^4 + x^3", &Bindings::from([('m', 3)]))
            .unwrap();
        let terms: Vec<(FieldElt, BigUint)> = [
            (1u64 << (2 * m + 1)) + 1,
            (1 << (m + 1)) + 1,
            4,
            3,
        ]
        .iter()
        .map(|&e| (FieldElt::ONE, BigUint::from(e)))
        .collect();
        for x in fs.elements() {
            assert_eq!(f.eval(x), naive_eval(&fs, &terms, x));
        }
    }

    #[test]
    fn value_table_and_trace_table() {
        let f = parse_f(6, "x");
        let t = f.value_table();
        assert_eq!(t.len(), 64);
        assert!(t.iter().enumerate().all(|(i, v)| v.0 as usize == i));
        let g = parse_f(6, "x^5 + #3*x^3");
        let b = FieldElt(0x13);
        let tt = g.trace_table(b);
        for x in g.field().elements() {
            assert_eq!(tt[x.0 as usize], g.field().trace(g.field().mul(b, g.eval(x))));
        }
    }

    #[test]
    fn two_to_one_examples() {
        for n in 2..=10 {
            assert!(parse_f(n, "x^2+x").is_two_to_one().is_two_to_one());
        }
        match parse_f(4, "x^3").is_two_to_one() {
            Verdict::No { witness, fiber_size, image } => {
                assert_eq!((witness, image, fiber_size), (FieldElt::ONE, FieldElt::ONE, 3));
            }
            Verdict::TwoToOne => panic!("x^3 is 3-to-1 on GF(16)*"),
        }
        assert!(parse_f(6, "x^13 + x^8 + w*x").is_two_to_one().is_two_to_one());
    }

    #[test]
    fn defining_set_examples() {
        let d = parse_f(3, "x").defining_set();
        assert_eq!(d.len(), 7);
        let fs = field(3);
        let d = parse_f(3, "x^2+x").defining_set();
        let expect: Vec<FieldElt> = fs.elements().filter(|&y| !y.is_zero() && fs.trace(y) == 0).collect();
        assert_eq!(d.elements, expect);
        assert_eq!(parse_f(7, "x^2+x").defining_set().len(), 63);
    }

    #[test]
    fn quadratize_catalog_function() {
        let f = parse_f(6, "x^13 + x^8 + w*x");
        let g = f.quadratize(&BigUint::from(34u32)).unwrap();
        assert!(g.is_quadratic());
        assert!(!f.is_quadratic());
        let mut a: Vec<_> = f.value_table().to_vec();
        let mut b: Vec<_> = g.value_table().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(f.quadratize(&BigUint::one()).unwrap(), f);
        assert!(matches!(
            f.quadratize(&BigUint::from(3u32)),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn degree_examples() {
        assert!(parse_f(8, "x^(2^3+1)").is_quadratic());
        assert!(!parse_f(5, "x^7").is_quadratic());
        assert_eq!(parse_f(5, "x^7").algebraic_degree(), 3);
        let f = FuncExpr::parse(field(9), "x^(2^(2*m+1)+1) + x^(2^(m+1)+1) + x^4 + x^3", &Bindings::from([('m', 3)]))
            .unwrap();
        assert!(f.is_quadratic());
        assert!(parse_f(7, "(x^2+x)^5").is_quadratic());
        assert!(!parse_f(7, "(x^2+x)^13").is_quadratic());
    }

    #[test]
    fn symbolic_degree_matches_anf() {
        let cases = [
            "x^13 + x^8 + w*x",
            "(x^2+x)^5",
            "(x^2+x)^11",
            "tr[6/3](x^9) + x",
            "tr[6/2](x^7) + x^3",
            "x^3 + x^3",
            "#5*(x^2 + x)^4 + x^63",
            "x^0 + x",
        ];
        for c in cases {
            let f = parse_f(6, c);
            assert_eq!(f.algebraic_degree(), f.anf_degree(), "{c}");
        }
    }

    #[test]
    fn display_round_trips() {
        let cases = ["x^13 + x^8 + w*x", "(x^(2^1)+x)^5", "tr[n/3](x^9) + x", "#3*x*(x^2 + #1)"];
        for c in cases {
            let f = parse_f(6, c);
            let g = parse_f(6, &f.to_string());
            assert_eq!(f.value_table(), g.value_table(), "{c} -> {f}");
        }
    }
}
