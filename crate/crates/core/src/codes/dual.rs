//! Minimum distance of the dual codes.
//!
//! A set S of coordinates supports a dual codeword iff the corresponding
//! generator columns sum to zero. For C_f the column of x is (x, f(x)); for
//! C_D(f) the column of d is d itself.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{check_cdf_input, CodeKind};
use crate::error::Result;
use crate::fexpr::FuncExpr;
use crate::gf2n::{FieldElt, FieldSpec};
use crate::par;
use crate::Ctx;

/// Exact value or closed interval; `Trivial` when the dual is the zero code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DualDistance {
    Exact(u32),
    Range(u32, u32),
    Trivial,
}

impl DualDistance {
    pub fn exact(self) -> Option<u32> {
        match self {
            DualDistance::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// Bounds on the distance; a trivial dual gives (u32::MAX, u32::MAX).
    pub fn bounds(self) -> (u32, u32) {
        match self {
            DualDistance::Exact(d) => (d, d),
            DualDistance::Range(lo, hi) => (lo, hi),
            DualDistance::Trivial => (u32::MAX, u32::MAX),
        }
    }
}

/// Lengths at or below this bound get the column-dependency oracle.
pub const ORACLE_MAX_LENGTH: u64 = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualReport {
    pub kind: CodeKind,
    pub length: u64,
    pub dim: u64,
    /// Distance from the characterization (weight-3 search plus the general
    /// bounds), refined by the oracle when it ran.
    pub dmin: DualDistance,
    /// What the characterization alone gives.
    pub characterized: DualDistance,
    /// Witness of a weight-3 dual codeword: (x1, x2, x1+x2) for C_f or
    /// (d1, d2, d3) for C_D(f).
    pub weight3_witness: Option<[FieldElt; 3]>,
    /// Smallest dependent column set up to size 4, `Some(None)` meaning
    /// "more than 4"; `None` when the oracle did not run.
    pub oracle: Option<Option<u32>>,
    /// Sphere-packing equality for the dual, when its distance is exact.
    pub sphere_packing: Option<bool>,
}

impl DualReport {
    /// Whether the characterization and the oracle agree (vacuous when the
    /// oracle did not run).
    pub fn oracle_agrees(&self) -> bool {
        let Some(found) = self.oracle else {
            return true;
        };
        if self.characterized == DualDistance::Trivial {
            return found.is_none();
        }
        let (lo, hi) = self.characterized.bounds();
        match found {
            Some(d) => lo <= d && d <= hi,
            None => hi > 4,
        }
    }
}

fn weight3_cf(f: &FuncExpr, ctx: &Ctx) -> Option<[FieldElt; 3]> {
    let table = f.value_table();
    let q = f.field().order();
    let hit = |x1: u64| {
        (x1 + 1..q).find(|&x2| {
            let x3 = x1 ^ x2;
            x3 > x2 && table[x1 as usize] + table[x2 as usize] + table[x3 as usize] == FieldElt::ZERO
        })
    };
    let x1 = par::find_first(ctx.exec, 1..q, |x1| hit(x1).is_some())?;
    let x2 = hit(x1).expect("found above");
    Some([FieldElt(x1 as u32), FieldElt(x2 as u32), FieldElt((x1 ^ x2) as u32)])
}

fn weight3_cdf(d: &[FieldElt], field: &FieldSpec, ctx: &Ctx) -> Option<[FieldElt; 3]> {
    let mut member = vec![false; field.size()];
    for e in d {
        member[e.0 as usize] = true;
    }
    let hit = |i: usize| {
        d[i + 1..]
            .iter()
            .find(|&&e| {
                let s = d[i] + e;
                s > e && member[s.0 as usize]
            })
            .copied()
    };
    let i = par::find_first(ctx.exec, 0..d.len() as u64, |i| hit(i as usize).is_some())? as usize;
    let e = hit(i).expect("found above");
    Some([d[i], e, d[i] + e])
}

/// Generator-matrix columns computed literally from trace evaluations on the
/// polynomial basis: bit i of a column is tr(x^i * c) for each component c.
pub fn oracle_columns(f: &FuncExpr, kind: CodeKind) -> Vec<u64> {
    let field = *f.field();
    let n = field.degree();
    let coord = |v: FieldElt| -> u64 {
        (0..n).fold(0u64, |acc, i| {
            acc | ((field.trace(field.mul(FieldElt(1 << i), v)) as u64) << i)
        })
    };
    match kind {
        CodeKind::Cf => field
            .elements()
            .skip(1)
            .map(|x| coord(x) | (coord(f.eval(x)) << n))
            .collect(),
        CodeKind::CDf => f.defining_set().elements.into_iter().map(coord).collect(),
    }
}

/// Size of the smallest linearly dependent set of columns if it is at most 4.
pub fn min_dependent_columns(cols: &[u64]) -> Option<u32> {
    if cols.contains(&0) {
        return Some(1);
    }
    let set: HashSet<u64> = cols.iter().copied().collect();
    if set.len() < cols.len() {
        return Some(2);
    }
    for (i, &a) in cols.iter().enumerate() {
        if cols[i + 1..].iter().any(|&b| set.contains(&(a ^ b))) {
            return Some(3);
        }
    }
    // Two different pairs with equal sums are disjoint since columns are
    // distinct, so they give four dependent columns.
    let mut sums: HashMap<u64, ()> = HashMap::with_capacity(cols.len() * cols.len() / 2);
    for (i, &a) in cols.iter().enumerate() {
        for &b in &cols[i + 1..] {
            if sums.insert(a ^ b, ()).is_some() {
                return Some(4);
            }
        }
    }
    None
}

/// Dual-distance analysis for `kind`, given the code dimension.
pub fn dual_analysis(f: &FuncExpr, kind: CodeKind, dim: u32, ctx: &Ctx) -> Result<DualReport> {
    let field = *f.field();
    let n = field.degree();
    let (length, witness, characterized) = match kind {
        CodeKind::Cf => {
            crate::check_cap(n, ctx.caps.full)?;
            let length = field.order() - 1;
            let w = weight3_cf(f, ctx);
            let dk1 = 2 * n - dim;
            let c = match (w, dk1 >= 2) {
                (Some(_), _) => DualDistance::Exact(3),
                (None, true) => DualDistance::Exact(4),
                (None, false) => DualDistance::Range(4, 6),
            };
            (length, w, c)
        }
        CodeKind::CDf => {
            check_cdf_input(f)?;
            crate::check_cap(n, ctx.caps.full)?;
            let d = f.defining_set().elements;
            let w = weight3_cdf(&d, &field, ctx);
            let len = d.len() as u64;
            // Without a weight-3 word, more pairs than nonzero sums force two
            // disjoint pairs with equal sums.
            let c = if w.is_some() {
                DualDistance::Exact(3)
            } else if len * (len - 1) / 2 > field.order() - 1 {
                DualDistance::Exact(4)
            } else {
                DualDistance::Range(4, (len - u64::from(dim) + 1).max(4) as u32)
            };
            (len, w, c)
        }
    };
    let oracle = (length <= ORACLE_MAX_LENGTH)
        .then(|| min_dependent_columns(&oracle_columns(f, kind)));
    let dual_dim = length - dim as u64;
    let characterized = if dual_dim == 0 { DualDistance::Trivial } else { characterized };
    let dmin = match (characterized, oracle) {
        (DualDistance::Range(..), Some(Some(d))) => DualDistance::Exact(d),
        (DualDistance::Range(_, hi), Some(None)) => DualDistance::Range(5, hi),
        (c, _) => c,
    };
    let sphere_packing = dmin
        .exact()
        .map(|d| super::sphere_packing_check(length, dual_dim, d as u64));
    Ok(DualReport {
        kind,
        length,
        dim: dual_dim,
        dmin,
        characterized,
        weight3_witness: witness,
        oracle,
        sphere_packing,
    })
}
