//! Walsh spectra, the fast Walsh-Hadamard transform and kernels of quadratic
//! forms.
//!
//! The trace pairing tr(a*x) is realized as a dot product: for every a there
//! is a mask `u = pairing_mask(a)` with tr(a*x) = parity(x & u), and a -> u is
//! a linear bijection. A standard FWHT indexed by u therefore produces
//! W_f(a, b) for all a at once, and multisets over a (or b) may be taken over
//! masks directly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fexpr::FuncExpr;
use crate::gf2mat;
use crate::gf2n::{FieldElt, FieldSpec};
use crate::par;
use crate::{check_cap, Ctx};

/// Which part of the (a, b) grid a spectrum covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// All (a, b), 2^(2n) values.
    Full,
    /// a = 0, all b: the values W_f(b).
    BSlice,
}

/// Value -> occurrence count multiset of Walsh values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub n: u32,
    pub kind: SpectrumKind,
    pub includes_b0: bool,
    pub counts: BTreeMap<i64, u64>,
}

impl WalshSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count_of(&self, v: i64) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    /// Occurrences of the trivial value 2^n.
    pub fn count_full(&self) -> u64 {
        self.count_of(1i64 << self.n)
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.counts.keys().copied()
    }
}

/// In-place unnormalized Walsh-Hadamard transform:
/// out[u] = sum_y v[y] (-1)^(popcount(u & y)).
pub fn fwht(v: &mut [i32]) -> Result<()> {
    if !v.len().is_power_of_two() {
        return Err(Error::BadLength(v.len()));
    }
    fwht_unchecked(v);
    Ok(())
}

#[inline]
fn fwht_unchecked(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for chunk in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x, *y);
                *x = s + d;
                *y = s - d;
            }
        }
        h *= 2;
    }
}

/// Pairing masks of every element: `masks[a] = pairing_mask(a)`, built by
/// linearity from the basis.
pub fn pairing_masks(field: &FieldSpec) -> Vec<u32> {
    let basis: Vec<u32> = (0..field.degree())
        .map(|j| field.pairing_mask(FieldElt(1 << j)))
        .collect();
    let mut masks = vec![0u32; field.size()];
    for a in 1..masks.len() {
        masks[a] = masks[a & (a - 1)] ^ basis[a.trailing_zeros() as usize];
    }
    masks
}

/// Transform of the sign table x -> (-1)^(parity(f(x) & v)), indexed by the
/// mask of a.
fn masked_row(table: &[FieldElt], v: u32, buf: &mut [i32]) {
    for (s, y) in buf.iter_mut().zip(table) {
        *s = 1 - 2 * ((y.0 & v).count_ones() & 1) as i32;
    }
    fwht_unchecked(buf);
}

/// W_f(a, b) for every a, indexed by a.
pub fn walsh_row(f: &FuncExpr, b: FieldElt) -> Vec<i32> {
    let field = f.field();
    let table = f.value_table();
    let mut buf = vec![0i32; field.size()];
    masked_row(&table, field.pairing_mask(b), &mut buf);
    let masks = pairing_masks(field);
    masks.iter().map(|&u| buf[u as usize]).collect()
}

/// Direct evaluation of W_f(a, b) as an exponential sum.
pub fn walsh_at(f: &FuncExpr, a: FieldElt, b: FieldElt) -> i64 {
    let field = f.field();
    let table = f.value_table();
    field
        .elements()
        .map(|x| {
            let t = field.trace(field.mul(a, x)) ^ field.trace(field.mul(b, table[x.0 as usize]));
            1 - 2 * t as i64
        })
        .sum()
}

/// Dense counter over the even values in [-2^n, 2^n].
struct Tally {
    n: u32,
    counts: Vec<u64>,
}

impl Tally {
    fn new(n: u32) -> Tally {
        Tally {
            n,
            counts: vec![0; (1usize << n) + 1],
        }
    }

    #[inline]
    fn add(&mut self, w: i32) {
        // Every Walsh value is even for n >= 1.
        self.counts[((w + (1 << self.n)) >> 1) as usize] += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    fn into_map(self) -> BTreeMap<i64, u64> {
        let offset = 1i64 << self.n;
        self.counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (2 * i as i64 - offset, c))
            .collect()
    }
}

/// The multiset {W_f(a, b) : a, b in GF(2^n)}, one FWHT per b.
pub fn spectrum_full(f: &FuncExpr, ctx: &Ctx) -> Result<WalshSpectrum> {
    let field = *f.field();
    let n = field.degree();
    check_cap(n, ctx.caps.full)?;
    let table = f.value_table_with(ctx.exec);
    let size = field.size();
    let tally = par::fold_range(
        ctx.exec,
        0..field.order(),
        || (Tally::new(n), vec![0i32; size]),
        |(tally, buf), v| {
            masked_row(&table, v as u32, buf);
            for &w in buf.iter() {
                tally.add(w);
            }
        },
        |(a, buf), (b, _)| (a.merge(b), buf),
    )
    .0;
    Ok(WalshSpectrum {
        n,
        kind: SpectrumKind::Full,
        includes_b0: true,
        counts: tally.into_map(),
    })
}

/// W_f(b) for every b, indexed by b: one FWHT of the fiber-count vector.
pub fn b_slice_row(f: &FuncExpr) -> Vec<i32> {
    let field = f.field();
    let mut buf: Vec<i32> = f.fiber_counts().into_iter().map(|c| c as i32).collect();
    fwht_unchecked(&mut buf);
    pairing_masks(field).iter().map(|&u| buf[u as usize]).collect()
}

/// The multiset {W_f(b) : b in GF(2^n)}.
pub fn spectrum_b_slice(f: &FuncExpr, ctx: &Ctx) -> Result<WalshSpectrum> {
    let n = f.field().degree();
    check_cap(n, ctx.caps.slice)?;
    let mut buf: Vec<i32> = f.fiber_counts().into_iter().map(|c| c as i32).collect();
    fwht_unchecked(&mut buf);
    let mut tally = Tally::new(n);
    for &w in &buf {
        tally.add(w);
    }
    Ok(WalshSpectrum {
        n,
        kind: SpectrumKind::BSlice,
        includes_b0: true,
        counts: tally.into_map(),
    })
}

/// Kernel V of the bilinear form of phi(x) = tr(b f(x)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadKernel {
    pub b: FieldElt,
    pub basis: Vec<FieldElt>,
    pub dim: u32,
}

/// Gram matrix of B(x, y) = phi(x+y) + phi(x) + phi(y) + phi(0) on the
/// polynomial basis, rows as bit masks.
fn bilinear_rows(f: &FuncExpr, b: FieldElt) -> Vec<u64> {
    let field = f.field();
    let table = f.value_table();
    let mask = field.pairing_mask(b);
    let phi = |x: u32| (table[x as usize].0 & mask).count_ones() & 1;
    let n = field.degree();
    (0..n)
        .map(|i| {
            (0..n).fold(0u64, |row, j| {
                let (bi, bj) = (1u32 << i, 1u32 << j);
                let bit = phi(bi ^ bj) ^ phi(bi) ^ phi(bj) ^ phi(0);
                row | ((bit as u64) << j)
            })
        })
        .collect()
}

pub fn quad_kernel(f: &FuncExpr, b: FieldElt) -> Result<QuadKernel> {
    if !f.is_quadratic() {
        return Err(Error::NotQuadratic);
    }
    Ok(quad_kernel_unchecked(f, b))
}

fn quad_kernel_unchecked(f: &FuncExpr, b: FieldElt) -> QuadKernel {
    let rows = bilinear_rows(f, b);
    let basis: Vec<FieldElt> = gf2mat::null_space(&rows, f.field().degree())
        .into_iter()
        .map(|v| FieldElt(v as u32))
        .collect();
    QuadKernel {
        b,
        dim: basis.len() as u32,
        basis,
    }
}

/// n - dim V; even for every quadratic form.
pub fn quad_rank(f: &FuncExpr, b: FieldElt) -> Result<u32> {
    Ok(f.field().degree() - quad_kernel(f, b)?.dim)
}

/// A counterexample to |W_f(a, b)| in {0, 2^((n + d_b)/2)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub a: FieldElt,
    pub b: FieldElt,
    pub value: i64,
    pub d_b: u32,
}

/// Checks the quadratic Walsh law on every (a, b) with b != 0. Returns the
/// violation with the smallest b (then a), if any.
pub fn check_quadratic_law(f: &FuncExpr, ctx: &Ctx) -> Result<Option<LawViolation>> {
    if !f.is_quadratic() {
        return Err(Error::NotQuadratic);
    }
    let field = *f.field();
    let n = field.degree();
    check_cap(n, ctx.caps.full)?;
    let table = f.value_table_with(ctx.exec);
    let masks = pairing_masks(&field);
    let row_violation = |b: u64| -> Option<LawViolation> {
        let b = FieldElt(b as u32);
        let d_b = quad_kernel_unchecked(f, b).dim;
        let mut buf = vec![0i32; field.size()];
        masked_row(&table, masks[b.0 as usize], &mut buf);
        let allowed = (n + d_b).is_multiple_of(2).then(|| 1i64 << ((n + d_b) / 2));
        field.elements().find_map(|a| {
            let w = buf[masks[a.0 as usize] as usize] as i64;
            let ok = w == 0 || Some(w.abs()) == allowed;
            (!ok).then_some(LawViolation { a, b, value: w, d_b })
        })
    };
    let first = par::find_first(ctx.exec, 1..field.order(), |b| row_violation(b).is_some());
    Ok(first.and_then(row_violation))
}
