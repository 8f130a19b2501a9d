//! The codes C_f and C_D(f): dimensions, weight distributions from Walsh
//! spectra, literal codeword enumeration, moment systems and dual codes.

mod dual;
mod moments;
mod report;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fexpr::FuncExpr;
use crate::gf2n::{FieldElt, FieldSpec};
use crate::walsh::{self, WalshSpectrum};
use crate::{check_cap, Ctx};

pub use dual::{
    dual_analysis, min_dependent_columns, oracle_columns, DualDistance, DualReport,
};
pub use moments::{pless_solve_3, sphere_packing_check, spectrum_moments_solve};
pub use report::{analyze, CodeReport, Check, DualSummary, WeightEntry};

/// Which generic construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeKind {
    /// Length 2^n - 1, codewords (tr(a x + b f(x)))_{x != 0}.
    #[serde(rename = "cf")]
    Cf,
    /// Length |D(f)|, codewords (tr(b d))_{d in D(f)}.
    #[serde(rename = "cdf")]
    CDf,
}

impl CodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeKind::Cf => "cf",
            CodeKind::CDf => "cdf",
        }
    }
}

/// Weight -> multiplicity, zero word included.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub length: u64,
    pub entries: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn new(length: u64, entries: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut wd = WeightDistribution {
            length,
            entries: BTreeMap::new(),
        };
        for (w, m) in entries {
            if m != 0 {
                *wd.entries.entry(w).or_insert(0) += m;
            }
        }
        wd
    }

    /// Number of codewords.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn mult(&self, w: u64) -> u64 {
        self.entries.get(&w).copied().unwrap_or(0)
    }

    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.entries.keys().copied().filter(|&w| w != 0).collect()
    }

    /// Number of distinct nonzero weights.
    pub fn t_weights(&self) -> usize {
        self.nonzero_weights().len()
    }

    pub fn min_distance(&self) -> Option<u64> {
        self.nonzero_weights().first().copied()
    }

    /// log2 of the number of codewords, when it is a power of two.
    pub fn dimension(&self) -> Option<u32> {
        let t = self.total();
        t.is_power_of_two().then(|| t.trailing_zeros())
    }

    /// `1 + A z^w + ...` in ascending weight order.
    pub fn enumerator(&self) -> String {
        self.entries
            .iter()
            .map(|(&w, &m)| if w == 0 { m.to_string() } else { format!("{m}z^{w}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Dimensions of both codes and the kernel dimensions d_K1, d_K2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub dim_cf: u32,
    pub dim_cdf: u32,
    pub dk1: u32,
    pub dk2: u32,
}

/// log2 of the count of the trivial value 2^n.
pub fn kernel_dim(spec: &WalshSpectrum) -> Result<u32> {
    let count = spec.count_full();
    if !count.is_power_of_two() {
        return Err(Error::NonPowerOfTwoCount { count });
    }
    Ok(count.trailing_zeros())
}

pub fn dims(f: &FuncExpr, ctx: &Ctx) -> Result<Dims> {
    let n = f.field().degree();
    let dk1 = kernel_dim(&walsh::spectrum_full(f, ctx)?)?;
    let dk2 = kernel_dim(&walsh::spectrum_b_slice(f, ctx)?)?;
    Ok(Dims {
        dim_cf: 2 * n - dk1,
        dim_cdf: n - dk2,
        dk1,
        dk2,
    })
}

/// C_f distribution from a full spectrum: value v with count X gives weight
/// 2^(n-1) - v/2 with multiplicity X / 2^dK1.
pub fn wd_cf_from_spectrum(spec: &WalshSpectrum) -> Result<(WeightDistribution, u32)> {
    let n = spec.n;
    let dk = kernel_dim(spec)?;
    let half = 1i64 << (n - 1);
    let mut entries = Vec::new();
    for (&v, &x) in &spec.counts {
        if x % (1u64 << dk) != 0 {
            return Err(Error::DivisibilityBreach { count: x, dk });
        }
        entries.push(((half - v / 2) as u64, x >> dk));
    }
    Ok((WeightDistribution::new((1u64 << n) - 1, entries), dk))
}

/// C_D(f) distribution from a b-slice: weight 2^(n-2) - W(b)/4 with
/// multiplicity count / 2^dK2.
pub fn wd_cdf_from_slice(spec: &WalshSpectrum) -> Result<(WeightDistribution, u32)> {
    let n = spec.n;
    let dk = kernel_dim(spec)?;
    let quarter = 1i64 << (n - 2);
    let mut entries = Vec::new();
    for (&v, &x) in &spec.counts {
        if x % (1u64 << dk) != 0 {
            return Err(Error::DivisibilityBreach { count: x, dk });
        }
        entries.push(((quarter - v / 4) as u64, x >> dk));
    }
    Ok((WeightDistribution::new((1u64 << (n - 1)) - 1, entries), dk))
}

pub fn wd_cf(f: &FuncExpr, ctx: &Ctx) -> Result<WeightDistribution> {
    Ok(wd_cf_from_spectrum(&walsh::spectrum_full(f, ctx)?)?.0)
}

/// Requires f two-to-one with f(0) = 0.
pub fn wd_cdf(f: &FuncExpr, ctx: &Ctx) -> Result<WeightDistribution> {
    check_cdf_input(f)?;
    Ok(wd_cdf_from_slice(&walsh::spectrum_b_slice(f, ctx)?)?.0)
}

pub(crate) fn check_cdf_input(f: &FuncExpr) -> Result<()> {
    if !f.eval(FieldElt::ZERO).is_zero() {
        return Err(Error::NonZeroAtZero);
    }
    f.is_two_to_one().into_result()
}

/// Packed rows: `rows[c][i] = tr(c * cols[i])` for every c in the field.
fn packed_rows(field: &FieldSpec, cols: &[FieldElt]) -> Vec<Vec<u64>> {
    let words = cols.len().div_ceil(64);
    field
        .elements()
        .map(|c| {
            let mut row = vec![0u64; words];
            for (i, &x) in cols.iter().enumerate() {
                row[i / 64] |= (field.trace(field.mul(c, x)) as u64) << (i % 64);
            }
            row
        })
        .collect()
}

fn tally(words: impl Iterator<Item = Vec<u64>>, length: u64) -> (WeightDistribution, u64) {
    let distinct: HashSet<Vec<u64>> = words.collect();
    let wd = WeightDistribution::new(
        length,
        distinct
            .iter()
            .map(|w| (w.iter().map(|x| x.count_ones() as u64).sum(), 1)),
    );
    let count = distinct.len() as u64;
    (wd, count)
}

/// Literal enumeration of C_f: every (a, b), deduplicated. Also returns the
/// number of distinct codewords.
pub fn wd_bruteforce_cf(f: &FuncExpr, ctx: &Ctx) -> Result<(WeightDistribution, u64)> {
    let field = *f.field();
    check_cap(field.degree(), ctx.caps.brute_cf)?;
    let xs: Vec<FieldElt> = field.elements().skip(1).collect();
    let fx: Vec<FieldElt> = xs.iter().map(|&x| f.eval(x)).collect();
    let a_rows = packed_rows(&field, &xs);
    let b_rows = packed_rows(&field, &fx);
    let words = a_rows.iter().flat_map(|ra| {
        b_rows
            .iter()
            .map(move |rb| ra.iter().zip(rb).map(|(p, q)| p ^ q).collect::<Vec<u64>>())
    });
    Ok(tally(words, xs.len() as u64))
}

/// Literal enumeration of C_D(f) over the sorted defining set.
pub fn wd_bruteforce_cdf(f: &FuncExpr, ctx: &Ctx) -> Result<(WeightDistribution, u64)> {
    let field = *f.field();
    check_cap(field.degree(), ctx.caps.brute_cdf)?;
    let d: Vec<FieldElt> = f.defining_set().elements;
    let words = packed_rows(&field, &d).into_iter();
    Ok(tally(words, d.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fexpr::Bindings;

    fn func(n: u32, s: &str) -> FuncExpr {
        FuncExpr::parse(FieldSpec::standard(n).unwrap(), s, &Bindings::new()).unwrap()
    }

    #[test]
    fn example_two_distribution() {
        let f = func(7, "x^18 + x^16 + x^2 + x");
        let ctx = Ctx::default();
        let wd = wd_cf(&f, &ctx).unwrap();
        assert_eq!(wd, WeightDistribution::new(127, [(0, 1), (56, 4572), (64, 8255), (72, 3556)]));
        let d = dims(&f, &ctx).unwrap();
        assert_eq!((d.dim_cf, d.dim_cdf), (14, 7));
        let cdf = wd_cdf(&f, &ctx).unwrap();
        assert_eq!(cdf, WeightDistribution::new(63, [(0, 1), (28, 36), (32, 63), (36, 28)]));
        assert_eq!(wd_bruteforce_cdf(&f, &ctx).unwrap(), (cdf, 128));
    }

    #[test]
    fn constant_weight_family() {
        let f = func(7, "x^18 + x^17 + x^2 + x");
        let ctx = Ctx::default();
        assert_eq!(
            wd_cf(&f, &ctx).unwrap(),
            WeightDistribution::new(127, [(0, 1), (56, 2268), (64, 4159), (72, 1764)])
        );
        assert_eq!(wd_cdf(&f, &ctx).unwrap(), WeightDistribution::new(63, [(0, 1), (32, 63)]));
        let d = dims(&f, &ctx).unwrap();
        assert_eq!((d.dim_cf, d.dim_cdf, d.dk1, d.dk2), (13, 6, 1, 1));
    }

    #[test]
    fn bruteforce_agrees_small() {
        let ctx = Ctx::default();
        for (n, s) in [(5, "x^6 + x^4 + x^2 + x"), (6, "x^13 + x^8 + w*x"), (5, "(x^2+x)^3")] {
            let f = func(n, s);
            let (wd, count) = wd_bruteforce_cf(&f, &ctx).unwrap();
            assert_eq!(wd, wd_cf(&f, &ctx).unwrap(), "{s}");
            assert_eq!(count, 1 << dims(&f, &ctx).unwrap().dim_cf);
            let (wd, _) = wd_bruteforce_cdf(&f, &ctx).unwrap();
            assert_eq!(wd, wd_cdf(&f, &ctx).unwrap(), "{s}");
        }
    }

    #[test]
    fn cdf_rejects_bad_input() {
        let ctx = Ctx::default();
        assert!(matches!(wd_cdf(&func(4, "x^3"), &ctx), Err(Error::NotTwoToOne { .. })));
        assert_eq!(wd_cdf(&func(4, "x^2 + x + 1"), &ctx), Err(Error::NonZeroAtZero));
    }

    #[test]
    fn caps_are_enforced() {
        let ctx = Ctx::default();
        let f = func(10, "x^3");
        assert_eq!(
            wd_bruteforce_cf(&f, &ctx).map(|_| ()),
            Err(Error::SizeCapExceeded { n: 10, cap: 9 })
        );
    }
}
