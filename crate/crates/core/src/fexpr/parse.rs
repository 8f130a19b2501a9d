//! Text syntax for [`Node`](super::Node) trees. The grammar is documented in
//! the repository README; exponent arithmetic is exact integer arithmetic.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::Node;
use crate::error::{Error, Result};
use crate::gf2n::{FieldElt, FieldSpec};

/// Integer variables usable in exponents and trace degrees.
pub type Bindings = BTreeMap<char, i64>;

const VARIABLES: &str = "nmktie";

/// Parses a function expression over `field`.
pub fn parse(text: &str, field: &FieldSpec, vars: &Bindings) -> Result<Node> {
    let mut vars = vars.clone();
    vars.insert('n', field.degree() as i64);
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
        vars: &vars,
    };
    let node = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("expected '+', '*', '^' or end of input"));
    }
    Ok(node)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a FieldSpec,
    vars: &'a Bindings,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .iter()
            .take_while(|c| c.is_ascii_alphabetic())
            .count();
        (len > 0).then(|| std::str::from_utf8(&self.src[start..start + len]).expect("ascii"))
    }

    fn digits(&mut self, radix: u32) -> Option<BigUint> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_digit(radix) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        BigUint::parse_bytes(s.as_bytes(), radix)
    }

    // expr = term { "+" term }
    fn expr(&mut self) -> Result<Node> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Node::Sum(terms)
        })
    }

    // term = factor { "*" factor }
    fn term(&mut self) -> Result<Node> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(fold_product(factors))
    }

    // factor = primary [ "^" ipow ]
    fn factor(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.ipow()?;
        let e = nonneg(e).ok_or(Error::Parse {
            position: at,
            message: "exponent must be non-negative".into(),
        })?;
        Ok(match base {
            Node::Monomial { coeff, exp } if coeff == FieldElt::ONE && !exp.is_zero() => {
                Node::mono(FieldElt::ONE, exp * e)
            }
            other => other.pow(e),
        })
    }

    // primary = "x" | "w" | element | trace | "(" expr ")"
    fn primary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'#') => {
                self.pos += 1;
                let at = self.pos;
                let v = self
                    .digits(16)
                    .ok_or(self.err("expected hexadecimal digits after '#'"))?;
                self.element(v, at)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let v = self.digits(10).expect("at least one digit");
                self.element(v, at)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let w = self.word().expect("alphabetic").to_string();
                let at = self.pos;
                self.pos += w.len();
                match w.as_str() {
                    "x" => Ok(Node::x()),
                    "w" => {
                        let omega = self.field.omega().map_err(|e| Error::Parse {
                            position: at,
                            message: e.to_string(),
                        })?;
                        Ok(Node::constant(omega))
                    }
                    "tr" => self.trace(),
                    _ => Err(Error::Parse {
                        position: at,
                        message: format!("unknown name '{w}'; expected x, w, tr, a number or '('"),
                    }),
                }
            }
            _ => Err(self.err("expected x, w, tr, a number or '('")),
        }
    }

    fn element(&self, v: BigUint, at: usize) -> Result<Node> {
        match v.to_u32().map(FieldElt) {
            Some(c) if self.field.contains(c) => Ok(Node::constant(c)),
            _ => Err(Error::Parse {
                position: at,
                message: format!("constant {v} is not an element of GF(2^{})", self.field.degree()),
            }),
        }
    }

    // trace = "tr" "[" isum "/" isum "]" "(" expr ")"   ('/' inside needs parentheses)
    fn trace(&mut self) -> Result<Node> {
        self.expect(b'[')?;
        let at = self.pos;
        let top = self.isum(false)?;
        self.expect(b'/')?;
        let at_m = self.pos;
        let m = self.isum(false)?;
        self.expect(b']')?;
        let n = self.field.degree();
        if top != BigInt::from(n) {
            return Err(Error::Parse {
                position: at,
                message: format!("trace must start from the field degree {n}"),
            });
        }
        let m = m.to_u32().filter(|&m| m > 0 && n.is_multiple_of(m)).ok_or(Error::Parse {
            position: at_m,
            message: format!("trace target degree must divide {n}"),
        })?;
        self.expect(b'(')?;
        let inner = self.expr()?;
        self.expect(b')')?;
        Ok(if m == n { inner } else { inner.rel_trace(m) })
    }

    // isum = iprod { ("+" | "-") iprod }
    fn isum(&mut self, allow_div: bool) -> Result<BigInt> {
        let mut v = self.iprod(allow_div)?;
        loop {
            if self.eat(b'+') {
                v += self.iprod(allow_div)?;
            } else if self.eat(b'-') {
                v -= self.iprod(allow_div)?;
            } else {
                return Ok(v);
            }
        }
    }

    // iprod = ipow { ("*" | "/") ipow }
    fn iprod(&mut self, allow_div: bool) -> Result<BigInt> {
        let mut v = self.ipow()?;
        loop {
            if self.eat(b'*') {
                v *= self.ipow()?;
            } else if allow_div && self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                let d = self.ipow()?;
                if d.is_zero() {
                    return Err(Error::Parse {
                        position: at,
                        message: "division by zero".into(),
                    });
                }
                let (q, r) = v.div_rem(&d);
                if !r.is_zero() {
                    return Err(Error::Parse {
                        position: at,
                        message: format!("{v} is not divisible by {d}"),
                    });
                }
                v = q;
            } else {
                return Ok(v);
            }
        }
    }

    // ipow = iunary [ "^" ipow ]
    fn ipow(&mut self) -> Result<BigInt> {
        let base = self.iunary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.ipow()?;
        let e = e.to_u32().ok_or(Error::Parse {
            position: at,
            message: "integer exponent must be a non-negative machine-size integer".into(),
        })?;
        if e > 1 << 16 {
            return Err(Error::Parse {
                position: at,
                message: "integer exponent too large".into(),
            });
        }
        Ok(num_traits::pow(base, e as usize))
    }

    // iunary = "-" iunary | iatom
    fn iunary(&mut self) -> Result<BigInt> {
        if self.eat(b'-') {
            return Ok(-self.iunary()?);
        }
        self.iatom()
    }

    // iatom = digits | variable | "(" isum ")"
    fn iatom(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.isum(true)?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(BigInt::from(self.digits(10).expect("digit"))),
            Some(c) if c.is_ascii_alphabetic() => {
                let w = self.word().expect("alphabetic").to_string();
                let var = w.chars().next().filter(|_| w.len() == 1 && VARIABLES.contains(&w));
                let Some(var) = var else {
                    return Err(self.err(format!("'{w}' is not an integer variable (one of n, m, k, t, i, e)")));
                };
                let Some(&v) = self.vars.get(&var) else {
                    return Err(self.err(format!("integer variable '{var}' is not bound")));
                };
                self.pos += 1;
                Ok(BigInt::from(v))
            }
            _ => Err(self.err("expected an integer, a variable or '('")),
        }
    }
}

fn nonneg(v: BigInt) -> Option<BigUint> {
    match v.sign() {
        Sign::Minus => None,
        _ => v.to_biguint(),
    }
}

/// Merges constant and monomial factors into a single monomial when possible.
fn fold_product(factors: Vec<Node>) -> Node {
    if factors.len() == 1 {
        return factors.into_iter().next().expect("one factor");
    }
    let all_const = factors
        .iter()
        .all(|f| matches!(f, Node::Monomial { exp, .. } if exp.is_zero()));
    let mut coeff: Option<FieldElt> = None;
    let mut rest = Vec::new();
    for f in factors {
        match f {
            Node::Monomial { coeff: c, exp } if exp.is_zero() && !all_const && coeff.is_none() => {
                coeff = Some(c);
            }
            other => rest.push(other),
        }
    }
    match (coeff, rest.as_slice()) {
        (Some(c), [Node::Monomial { coeff: one, exp }]) if *one == FieldElt::ONE => {
            Node::mono(c, exp.clone())
        }
        (Some(c), _) => {
            rest.insert(0, Node::constant(c));
            Node::Product(rest)
        }
        (None, _) => Node::Product(rest),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, s: &str, vars: &[(char, i64)]) -> Result<Node> {
        parse(s, &FieldSpec::standard(n).unwrap(), &vars.iter().copied().collect())
    }

    #[test]
    fn exponents_are_exact() {
        assert_eq!(p(6, "x^((2^5+2^3-1)/3)", &[]).unwrap(), Node::mono(FieldElt::ONE, 13u32));
        assert_eq!(
            p(6, "x^((2^(n-1)+2^m-1)/3)", &[('m', 3)]).unwrap(),
            Node::mono(FieldElt::ONE, 13u32)
        );
        assert_eq!(p(4, "x^2^3", &[]).unwrap(), Node::mono(FieldElt::ONE, 8u32));
        assert_eq!(p(4, "x^(2*3-1)", &[]).unwrap(), Node::mono(FieldElt::ONE, 5u32));
        assert_eq!(p(4, "#3*x^2", &[]).unwrap(), Node::mono(FieldElt(3), 2u32));
    }

    #[test]
    fn errors_carry_positions() {
        let e = p(6, "x^((2^5+2^3)/3)", &[]).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e}");
        let e = p(6, "x + y", &[]).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                position: 4,
                message: "unknown name 'y'; expected x, w, tr, a number or '('".into()
            }
        );
        assert!(matches!(p(6, "x^(m)", &[]), Err(Error::Parse { .. })));
        assert!(matches!(p(6, "x^(-1)", &[]), Err(Error::Parse { .. })));
        assert!(matches!(p(5, "w*x", &[]), Err(Error::Parse { .. })));
        assert!(matches!(p(6, "tr[6/4](x)", &[]), Err(Error::Parse { .. })));
        assert!(matches!(p(6, "#40", &[]), Err(Error::Parse { .. })));
        assert!(matches!(p(6, "x)", &[]), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn trace_and_powers() {
        let node = p(9, "tr[n/m](x^(2^m+1)) + x", &[('m', 3)]).unwrap();
        assert_eq!(
            node,
            Node::Sum(vec![Node::mono(FieldElt::ONE, 9u32).rel_trace(3), Node::x()])
        );
        let node = p(7, "(x^(2^t)+x)^e", &[('t', 1), ('e', 5)]).unwrap();
        assert_eq!(node, Node::poly([2u32, 1]).pow(5u32));
        assert_eq!(p(6, "tr[6/6](x)", &[]).unwrap(), Node::x());
    }
}
