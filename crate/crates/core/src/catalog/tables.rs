//! Closed-form weight distributions and weight sets, instantiated with exact
//! integers.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Params;
use crate::codes::WeightDistribution;
use crate::error::{violation, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T44D,
    T52,
    /// 1 + (2^(n-1) - 1) z^(2^(n-2)).
    OneWeight,
}

impl TableId {
    pub const ALL: [TableId; 11] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
        TableId::T8,
        TableId::T44D,
        TableId::T52,
        TableId::OneWeight,
    ];
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Weight sets stated without multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightSetId {
    /// n odd: 0, 2^(n-1), 2^(n-1) ± 2^((n-1)/2), 2^(n-1) ± 2^((n+1)/2).
    FiveOdd,
    /// n = 3m: 0, 2^(n-1), 2^(n-1) ± 2^((n+2m-1)/2), 2^(n-1) ± 2^((n+m-2)/2).
    FiveThreeM,
    /// n odd: 0, 2^(n-2), 2^(n-2) ± 2^((n-3)/2), 2^(n-2) ± 2^((n-1)/2).
    Conj1,
}

fn p2(e: i64) -> i128 {
    assert!((0..120).contains(&e), "exponent {e} out of range");
    1i128 << e
}

fn need(table: impl fmt::Display, v: Option<u32>, name: char) -> Result<i64> {
    v.map(i64::from)
        .ok_or_else(|| violation(table.to_string(), format!("parameter {name} is required")))
}

/// Three-weight table: (weight, multiplicity) for centre - delta, centre,
/// centre + delta.
fn three(
    table: TableId,
    length: i128,
    dim: i64,
    centre: i128,
    delta: i128,
    mults: [i128; 3],
) -> Result<WeightDistribution> {
    let rows = [
        (centre - delta, mults[0]),
        (centre, mults[1]),
        (centre + delta, mults[2]),
    ];
    if rows.iter().any(|&(w, a)| w < 0 || a < 0) {
        return Err(violation(table.to_string(), "parameters give a negative entry"));
    }
    let wd = WeightDistribution::new(
        length as u64,
        std::iter::once((0u64, 1u64)).chain(rows.iter().map(|&(w, a)| (w as u64, a as u64))),
    );
    if wd.total() as i128 != p2(dim) {
        return Err(violation(
            table.to_string(),
            format!("multiplicities do not sum to 2^{dim}"),
        ));
    }
    Ok(wd)
}

/// The table's distribution at the given (resolved) parameters.
pub fn expected_wd(table: TableId, params: &Params) -> Result<WeightDistribution> {
    use TableId::*;
    let m = params.m.map(i64::from);
    let n = match (table, params.n, m) {
        (_, Some(n), _) => n as i64,
        (T1 | T2, None, Some(m)) => 2 * m,
        (T3 | T4 | T5 | T52, None, Some(m)) => 2 * m + 1,
        (T6 | T44D, None, Some(m)) => 3 * m,
        (T7 | T8, None, Some(m)) => need(table, params.k, 'k')? * m,
        _ => need(table, None, 'n')?,
    };
    let m = match (table, m) {
        (_, Some(m)) => m,
        (T52 | T3 | T4 | T5, None) => (n - 1) / 2,
        (OneWeight, None) => 0,
        _ => need(table, None, 'm')?,
    };
    let min_ok = match table {
        T1 | T2 => m >= 2,
        T44D => m >= 3,
        T7 | T8 => n >= 3 * m,
        OneWeight => n >= 2,
        _ => m >= 1,
    };
    if !min_ok {
        return Err(violation(table.to_string(), "parameters below the table's range"));
    }
    let full = p2(n) - 1;
    let half = p2(n - 1) - 1;
    match table {
        T1 => three(
            table,
            full,
            2 * n,
            p2(n - 1),
            p2(m),
            [
                p2(4 * m - 3) + p2(3 * m - 2) - p2(2 * m - 3) - p2(m - 2),
                3 * p2(4 * m - 2) + p2(2 * m - 2) - 1,
                p2(4 * m - 3) + p2(m - 2) - p2(3 * m - 2) - p2(2 * m - 3),
            ],
        ),
        T2 => three(
            table,
            half,
            n,
            p2(n - 2),
            p2(m - 1),
            [p2(n - 3) + p2(m - 2), 3 * p2(n - 2) - 1, p2(n - 3) - p2(m - 2)],
        ),
        T3 => three(
            table,
            full,
            2 * n,
            p2(n - 1),
            p2(m),
            [
                p2(4 * m) + p2(3 * m) - p2(2 * m - 1) - p2(m - 1),
                p2(4 * m + 1) + p2(2 * m) - 1,
                p2(4 * m) + p2(m - 1) - p2(3 * m) - p2(2 * m - 1),
            ],
        ),
        T4 | T52 => three(
            table,
            half,
            n,
            p2(n - 2),
            p2(m - 1),
            [p2(n - 2) + p2(m - 1), p2(n - 1) - 1, p2(n - 2) - p2(m - 1)],
        ),
        T5 => three(
            table,
            full,
            2 * n - 1,
            p2(n - 1),
            p2(m),
            [
                p2(4 * m - 1) + p2(3 * m - 1) - p2(2 * m - 1) - p2(m - 1),
                p2(4 * m) + p2(2 * m) - 1,
                p2(4 * m - 1) + p2(m - 1) - p2(3 * m - 1) - p2(2 * m - 1),
            ],
        ),
        T6 => three(
            table,
            full,
            5 * m,
            p2(n - 1),
            p2(2 * m - 1),
            [
                p2(4 * m - 1) + p2(3 * m - 1) - p2(2 * m - 1) - p2(m - 1),
                p2(5 * m) + p2(2 * m) - p2(4 * m) - 1,
                p2(4 * m - 1) + p2(m - 1) - p2(3 * m - 1) - p2(2 * m - 1),
            ],
        ),
        // The printed weight exponent (n+m-1)/2 is not an integer for n + m
        // even; the Walsh values ±2^((n+m)/2) give (n+m-2)/2.
        T7 => three(
            table,
            full,
            n + m,
            p2(n - 1),
            p2((n + m - 2) / 2),
            [
                p2(n - 1) + p2((n + m) / 2 - 1) - p2(n - m - 1) - p2((n - m) / 2 - 1),
                p2(n + m) + p2(n - m) - p2(n) - 1,
                p2((n - m) / 2 - 1) + p2(n - 1) - p2((n + m) / 2 - 1) - p2(n - m - 1),
            ],
        ),
        T8 => three(
            table,
            half,
            n,
            p2(n - 2),
            p2((n + m - 4) / 2),
            [
                p2(n - m - 1) + p2((n - m - 2) / 2),
                p2(n) - p2(n - m) - 1,
                p2(n - m - 1) - p2((n - m - 2) / 2),
            ],
        ),
        T44D => three(
            table,
            half,
            n,
            p2(n - 2),
            p2((n + 2 * m - 3) / 2),
            [
                p2(m - 2) + p2((m - 3) / 2),
                p2(n) - p2(m - 1) - 1,
                p2(m - 2) - p2((m - 3) / 2),
            ],
        ),
        OneWeight => Ok(WeightDistribution::new(
            half as u64,
            [(0, 1), (p2(n - 2) as u64, half as u64)],
        )),
    }
}

/// The stated weight set, zero included.
pub fn expected_weight_set(set: WeightSetId, params: &Params) -> Result<Vec<u64>> {
    let n = need("weight set", params.n, 'n')?;
    let (centre, deltas) = match set {
        WeightSetId::FiveOdd => (p2(n - 1), [p2((n - 1) / 2), p2((n + 1) / 2)]),
        WeightSetId::FiveThreeM => {
            let m = need("weight set", params.m, 'm')?;
            (p2(n - 1), [p2((n + 2 * m - 1) / 2), p2((n + m - 2) / 2)])
        }
        WeightSetId::Conj1 => (p2(n - 2), [p2((n - 3) / 2), p2((n - 1) / 2)]),
    };
    let mut out = vec![0, centre as u64];
    for d in deltas {
        out.push((centre - d) as u64);
        out.push((centre + d) as u64);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wd(length: u64, rows: &[(u64, u64)]) -> WeightDistribution {
        WeightDistribution::new(length, rows.iter().copied())
    }

    #[test]
    fn instantiated_examples() {
        assert_eq!(
            expected_wd(TableId::T1, &Params::m(3)).unwrap(),
            wd(63, &[(0, 1), (24, 630), (32, 3087), (40, 378)])
        );
        assert_eq!(
            expected_wd(TableId::T3, &Params::m(3)).unwrap(),
            wd(127, &[(0, 1), (56, 4572), (64, 8255), (72, 3556)])
        );
        assert_eq!(
            expected_wd(TableId::T5, &Params::m(3)).unwrap(),
            wd(127, &[(0, 1), (56, 2268), (64, 4159), (72, 1764)])
        );
        assert_eq!(
            expected_wd(TableId::T8, &Params::km(3, 3)).unwrap(),
            wd(255, &[(0, 1), (112, 36), (128, 447), (144, 28)])
        );
        assert_eq!(
            expected_wd(TableId::T52, &Params::n(5)).unwrap(),
            wd(15, &[(0, 1), (6, 10), (8, 15), (10, 6)])
        );
        assert_eq!(
            expected_wd(TableId::OneWeight, &Params::n(7)).unwrap(),
            wd(63, &[(0, 1), (32, 63)])
        );
    }

    #[test]
    fn every_table_sums_to_a_power_of_two() {
        for m in [3, 5, 7] {
            for t in [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6, TableId::T44D] {
                assert!(expected_wd(t, &Params::m(m)).is_ok(), "{t} m={m}");
            }
            for k in [3, 5] {
                assert!(expected_wd(TableId::T7, &Params::km(k, m)).is_ok());
                assert!(expected_wd(TableId::T8, &Params::km(k, m)).is_ok());
            }
        }
    }

    #[test]
    fn weight_sets() {
        assert_eq!(
            expected_weight_set(WeightSetId::FiveOdd, &Params::n(7)).unwrap(),
            vec![0, 48, 56, 64, 72, 80]
        );
        let p = Params { n: Some(9), m: Some(3), ..Params::default() };
        assert_eq!(
            expected_weight_set(WeightSetId::FiveThreeM, &p).unwrap(),
            vec![0, 128, 224, 256, 288, 384]
        );
    }
}
