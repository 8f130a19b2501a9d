//! The known two-to-one families, their weight-distribution tables, and the
//! conjecture experiments.

mod experiments;
mod tables;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::codes::{self, Check, CodeKind, CodeReport};
use crate::error::{violation, Error, Result};
use crate::fexpr::{Bindings, FuncExpr};
use crate::gf2n::{FieldSpec, MAX_DEGREE};
use crate::Ctx;

pub use experiments::{
    power_identity_violation, run_conjecture, ConjectureId, ExperimentReport, Observation,
};
pub use tables::{expected_wd, expected_weight_set, TableId, WeightSetId};

/// Family parameters. Unused ones stay `None`; `n` and `e` are filled in on
/// resolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub t: Option<u32>,
    pub e: Option<u64>,
    pub k: Option<u32>,
    pub i: Option<u32>,
}

impl Params {
    pub fn n(n: u32) -> Params {
        Params {
            n: Some(n),
            ..Params::default()
        }
    }

    pub fn m(m: u32) -> Params {
        Params {
            m: Some(m),
            ..Params::default()
        }
    }

    pub fn km(k: u32, m: u32) -> Params {
        Params {
            k: Some(k),
            m: Some(m),
            ..Params::default()
        }
    }

    pub fn with_t(self, t: u32) -> Params {
        Params { t: Some(t), ..self }
    }

    pub fn with_i(self, i: u32) -> Params {
        Params { i: Some(i), ..self }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = [
            ("n", self.n.map(u64::from)),
            ("m", self.m.map(u64::from)),
            ("k", self.k.map(u64::from)),
            ("t", self.t.map(u64::from)),
            ("i", self.i.map(u64::from)),
            ("e", self.e),
        ];
        let parts: Vec<String> = fields
            .iter()
            .filter_map(|(name, v)| v.map(|v| format!("{name}={v}")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum FamilyId {
    L31,
    L32_1,
    L32_2,
    L32_3,
    L32_4,
    L33_1,
    L33_2,
    T41,
    T42,
    T53_GOLD,
    AB_GOLD,
    AB_KASAMI,
    AB_WELCH,
    AB_NIHO1,
    AB_NIHO2,
    CONJ1,
}

impl FamilyId {
    pub const ALL: [FamilyId; 16] = [
        FamilyId::L31,
        FamilyId::L32_1,
        FamilyId::L32_2,
        FamilyId::L32_3,
        FamilyId::L32_4,
        FamilyId::L33_1,
        FamilyId::L33_2,
        FamilyId::T41,
        FamilyId::T42,
        FamilyId::T53_GOLD,
        FamilyId::AB_GOLD,
        FamilyId::AB_KASAMI,
        FamilyId::AB_WELCH,
        FamilyId::AB_NIHO1,
        FamilyId::AB_NIHO2,
        FamilyId::CONJ1,
    ];

    pub const AB: [FamilyId; 5] = [
        FamilyId::AB_GOLD,
        FamilyId::AB_KASAMI,
        FamilyId::AB_WELCH,
        FamilyId::AB_NIHO1,
        FamilyId::AB_NIHO2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::L31 => "L31",
            FamilyId::L32_1 => "L32_1",
            FamilyId::L32_2 => "L32_2",
            FamilyId::L32_3 => "L32_3",
            FamilyId::L32_4 => "L32_4",
            FamilyId::L33_1 => "L33_1",
            FamilyId::L33_2 => "L33_2",
            FamilyId::T41 => "T41",
            FamilyId::T42 => "T42",
            FamilyId::T53_GOLD => "T53_GOLD",
            FamilyId::AB_GOLD => "AB_GOLD",
            FamilyId::AB_KASAMI => "AB_KASAMI",
            FamilyId::AB_WELCH => "AB_WELCH",
            FamilyId::AB_NIHO1 => "AB_NIHO1",
            FamilyId::AB_NIHO2 => "AB_NIHO2",
            FamilyId::CONJ1 => "CONJ1",
        }
    }

    /// The polynomial, in expression syntax over the bound parameters.
    pub fn template(self) -> &'static str {
        match self {
            FamilyId::L31 => "x^((2^(n-1)+2^m-1)/3) + x^(2^m) + w*x",
            FamilyId::L32_1 => "x^(2^(m+1)+2) + x^(2^(m+1)) + x^2 + x",
            FamilyId::L32_2 => "x^(2^(m+1)+2) + x^(2^(m+1)+1) + x^2 + x",
            FamilyId::L32_3 => "x^(2^(m+2)+4) + x^(2^(m+1)+2) + x^2 + x",
            FamilyId::L32_4 => "x^(2^n-2^(m+1)+2) + x^(2^(m+1)) + x^2 + x",
            FamilyId::L33_1 => "x^(2^(2*m)+1) + x^(2^(m+1)) + x^(2^m+1) + x",
            FamilyId::L33_2 => "x^(2^(2*m)+2^m) + x^(2^(2*m)+1) + x^(2^m+1) + x",
            FamilyId::T41 => "tr[n/m](x^(2^m+1)) + x",
            FamilyId::T42 => "x^(2^(2*m+1)+1) + x^(2^(m+1)+1) + x^4 + x^3",
            FamilyId::CONJ1 => "x^(3*2^(m+1)) + x^(2^(m+2)+1) + x^(2^(m+1)+1) + x",
            _ => "(x^(2^t)+x)^e",
        }
    }

    /// Which parameters the family takes from the user.
    pub fn inputs(self) -> &'static [char] {
        match self {
            FamilyId::T41 => &['k', 'm'],
            FamilyId::T53_GOLD | FamilyId::AB_GOLD | FamilyId::AB_KASAMI => &['n', 't', 'i'],
            FamilyId::AB_WELCH | FamilyId::AB_NIHO1 | FamilyId::AB_NIHO2 => &['n', 't'],
            _ => &['m'],
        }
    }

    /// Stated distributions or weight sets per code.
    pub fn expectations(self, params: &Params) -> Vec<(CodeKind, Expectation)> {
        use Expectation::{Table, WeightSet};
        let m = params.m.unwrap_or(0);
        match self {
            FamilyId::L31 => vec![
                (CodeKind::Cf, Table(TableId::T1)),
                (CodeKind::CDf, Table(TableId::T2)),
            ],
            FamilyId::L32_1 => vec![
                (CodeKind::Cf, Table(TableId::T3)),
                (CodeKind::CDf, Table(TableId::T4)),
            ],
            FamilyId::L32_2 | FamilyId::L32_3 => vec![
                (CodeKind::Cf, Table(TableId::T5)),
                (CodeKind::CDf, Table(TableId::OneWeight)),
            ],
            FamilyId::L32_4 => vec![
                (CodeKind::Cf, WeightSet(WeightSetId::FiveOdd)),
                (CodeKind::CDf, Table(TableId::T4)),
            ],
            FamilyId::L33_1 if m.is_multiple_of(3) => vec![
                (CodeKind::Cf, Table(TableId::T6)),
                (CodeKind::CDf, Table(TableId::OneWeight)),
            ],
            FamilyId::T41 => vec![
                (CodeKind::Cf, Table(TableId::T7)),
                (CodeKind::CDf, Table(TableId::T8)),
            ],
            FamilyId::T42 => vec![
                (CodeKind::Cf, WeightSet(WeightSetId::FiveThreeM)),
                (CodeKind::CDf, Table(TableId::T44D)),
            ],
            FamilyId::T53_GOLD => vec![
                (CodeKind::Cf, WeightSet(WeightSetId::FiveOdd)),
                (CodeKind::CDf, Table(TableId::T52)),
            ],
            FamilyId::AB_GOLD
            | FamilyId::AB_KASAMI
            | FamilyId::AB_WELCH
            | FamilyId::AB_NIHO1
            | FamilyId::AB_NIHO2 => vec![(CodeKind::CDf, Table(TableId::T52))],
            _ => Vec::new(),
        }
    }

    /// Valid parameter sets with n at most `max_n`, ascending n.
    pub fn param_sets(self, max_n: u32) -> Vec<Params> {
        let max_n = max_n.min(MAX_DEGREE);
        let mut candidates = Vec::new();
        match self.inputs() {
            ['k', 'm'] => {
                for k in 1..=max_n {
                    for m in 1..=max_n / k {
                        candidates.push(Params::km(k, m));
                    }
                }
            }
            ['m'] => candidates.extend((1..=max_n).map(Params::m)),
            ['n', 't', 'i'] => {
                for n in 2..=max_n {
                    for t in 1..n {
                        candidates.extend((1..n).map(|i| Params::n(n).with_t(t).with_i(i)));
                    }
                }
            }
            _ => {
                for n in 2..=max_n {
                    candidates.extend((1..n).map(|t| Params::n(n).with_t(t)));
                }
            }
        }
        let mut out: Vec<Params> = candidates
            .into_iter()
            .filter_map(|p| resolve(self, &p).ok())
            .filter(|p| p.n.is_some_and(|n| n <= max_n))
            .collect();
        out.sort_by_key(|p| (p.n, p.m, p.k, p.t, p.i));
        out
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyId> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<&str> = FamilyId::ALL.iter().map(|id| id.as_str()).collect();
                violation(s, format!("unknown family; expected one of {}", known.join(", ")))
            })
    }
}

/// What is stated about one of the codes: a full distribution or only its weight set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expectation {
    Table(TableId),
    WeightSet(WeightSetId),
}

fn require(id: FamilyId, v: Option<u32>, name: char) -> Result<u32> {
    v.ok_or_else(|| violation(id.as_str(), format!("parameter {name} is required")))
}

fn ensure(id: FamilyId, ok: bool, condition: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(violation(id.as_str(), condition))
    }
}

fn two_pow(e: u32) -> u64 {
    1u64 << e
}

/// Checks the family's conditions and fills in n (and e for the power
/// families).
pub fn resolve(id: FamilyId, params: &Params) -> Result<Params> {
    let mut p = *params;
    let n = match id {
        FamilyId::L31 => {
            let m = require(id, p.m, 'm')?;
            ensure(id, m % 2 == 1, "m must be odd")?;
            ensure(id, m > 1, "m must be greater than 1")?;
            2 * m
        }
        FamilyId::L32_1 | FamilyId::L32_2 | FamilyId::L32_3 | FamilyId::L32_4 | FamilyId::CONJ1 => {
            let m = require(id, p.m, 'm')?;
            ensure(id, m >= 1, "m must be positive")?;
            2 * m + 1
        }
        FamilyId::L33_1 | FamilyId::L33_2 => {
            let m = require(id, p.m, 'm')?;
            ensure(id, m >= 1, "m must be positive")?;
            if id == FamilyId::L33_1 {
                ensure(id, m % 3 != 1, "m must not be 1 mod 3")?;
            }
            3 * m
        }
        FamilyId::T41 => {
            let k = require(id, p.k, 'k')?;
            let m = require(id, p.m, 'm')?;
            ensure(id, k % 2 == 1 && m % 2 == 1, "k and m must be odd")?;
            ensure(id, k >= 3, "k must be at least 3")?;
            k * m
        }
        FamilyId::T42 => {
            let m = require(id, p.m, 'm')?;
            ensure(id, m % 2 == 1, "m must be odd")?;
            3 * m
        }
        _ => {
            let n = require(id, p.n, 'n')?;
            ensure(id, n % 2 == 1 && n >= 3, "n must be odd and at least 3")?;
            let t = p.t.unwrap_or(1);
            ensure(id, t >= 1 && t.gcd(&n) == 1, "gcd(t, n) must be 1")?;
            p.t = Some(t);
            let m = (n - 1) / 2;
            let e = match id {
                FamilyId::AB_GOLD | FamilyId::T53_GOLD | FamilyId::AB_KASAMI => {
                    let i = p.i.unwrap_or(1);
                    ensure(id, i >= 1 && i.gcd(&n) == 1, "gcd(i, n) must be 1")?;
                    ensure(id, 2 * i < 64, "i too large")?;
                    p.i = Some(i);
                    if id == FamilyId::AB_KASAMI {
                        two_pow(2 * i) - two_pow(i) + 1
                    } else {
                        two_pow(i) + 1
                    }
                }
                FamilyId::AB_WELCH => {
                    p.m = Some(m);
                    two_pow(m) + 3
                }
                FamilyId::AB_NIHO1 => {
                    ensure(id, m % 2 == 0, "m = (n-1)/2 must be even")?;
                    p.m = Some(m);
                    two_pow(m) + two_pow(m / 2) - 1
                }
                _ => {
                    ensure(id, m % 2 == 1, "m = (n-1)/2 must be odd")?;
                    p.m = Some(m);
                    two_pow(m) + two_pow((3 * m).div_ceil(2)) - 1
                }
            };
            if p.e.is_some_and(|given| given != e) {
                return Err(violation(id.as_str(), format!("e must be {e}")));
            }
            p.e = Some(e);
            n
        }
    };
    if !(2..=MAX_DEGREE).contains(&n) {
        return Err(violation(
            id.as_str(),
            format!("n = {n} outside the supported range 2..={MAX_DEGREE}"),
        ));
    }
    p.n = Some(n);
    Ok(p)
}

/// A catalog function with its resolved parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub id: FamilyId,
    pub params: Params,
    pub f: FuncExpr,
}

impl Family {
    /// Exponent d, coprime to 2^n - 1, with f(x^d) quadratic.
    pub fn quadratizer(&self) -> Option<BigUint> {
        let m = self.params.m?;
        match self.id {
            FamilyId::L31 => Some(BigUint::from(two_pow(m + 2) + 2)),
            FamilyId::L32_4 => Some(BigUint::from(two_pow(m) + 1)),
            _ => None,
        }
    }

    /// f itself when quadratic, else f(x^d) for the family's quadratizer.
    pub fn quadratic_form(&self) -> Result<Option<FuncExpr>> {
        if self.f.is_quadratic() {
            return Ok(Some(self.f.clone()));
        }
        match self.quadratizer() {
            Some(d) => Ok(Some(self.f.quadratize(&d)?)),
            None => Ok(None),
        }
    }

    pub fn expectations(&self) -> Vec<(CodeKind, Expectation)> {
        self.id.expectations(&self.params)
    }

    /// The code report for `kind`, with one extra check per stated
    /// distribution or weight set.
    pub fn report(&self, kind: CodeKind, ctx: &Ctx) -> Result<CodeReport> {
        let mut r = codes::analyze(&self.f, kind, ctx)?;
        r.family = Some(self.id.to_string());
        r.params = self.params;
        for (k, exp) in self.expectations() {
            if k != kind {
                continue;
            }
            let check = match exp {
                Expectation::Table(t) => {
                    Check::new(format!("wd_matches_{t}"), r.wd() == expected_wd(t, &self.params)?)
                }
                Expectation::WeightSet(s) => {
                    let allowed = expected_weight_set(s, &self.params)?;
                    Check::new(
                        format!("weights_within_{s:?}"),
                        r.weights.iter().all(|e| allowed.contains(&e.w)),
                    )
                }
            };
            r.checks.push(check);
        }
        Ok(r)
    }
}

/// The family's polynomial over the standard field of its degree.
pub fn build(id: FamilyId, params: &Params) -> Result<Family> {
    let p = resolve(id, params)?;
    let field = FieldSpec::standard(p.n.expect("resolved"))?;
    let mut vars = Bindings::new();
    for (name, v) in [('m', p.m), ('k', p.k), ('t', p.t), ('i', p.i)] {
        if let Some(v) = v {
            vars.insert(name, v as i64);
        }
    }
    if let Some(e) = p.e {
        vars.insert('e', e as i64);
    }
    let f = FuncExpr::parse(field, id.template(), &vars)?;
    Ok(Family { id, params: p, f })
}
