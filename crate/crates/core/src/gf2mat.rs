//! Dense GF(2) linear algebra on bit-packed rows (at most 64 columns).

/// Rank of the row set.
#[cfg(test)]
pub(crate) fn rank(rows: &[u64]) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

/// Basis of {y : <row, y> = 0 for every row}, vectors over `ncols` bits.
pub(crate) fn null_space(rows: &[u64], ncols: u32) -> Vec<u64> {
    // Reduced row echelon form with pivot bookkeeping.
    let mut m: Vec<u64> = rows.iter().map(|r| r & low_mask(ncols)).collect();
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let bit = 1u64 << col;
        let Some(p) = (row..m.len()).find(|&i| m[i] & bit != 0) else {
            continue;
        };
        m.swap(row, p);
        for i in 0..m.len() {
            if i != row && m[i] & bit != 0 {
                m[i] ^= m[row];
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: u64 = pivots.iter().fold(0, |acc, &(_, c)| acc | (1 << c));
    (0..ncols)
        .filter(|c| pivot_cols & (1 << c) == 0)
        .map(|free| {
            let mut v = 1u64 << free;
            for &(r, c) in &pivots {
                if m[r] & (1 << free) != 0 {
                    v |= 1 << c;
                }
            }
            v
        })
        .collect()
}

/// Finds a subset s of the columns with XOR over s equal to `target`,
/// returned as a bit mask over column indices.
pub(crate) fn solve_columns(cols: &[u64], target: u64) -> Option<u64> {
    // Each basis entry carries the combination of original columns it is.
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (j, &c) in cols.iter().enumerate() {
        let (mut v, mut tag) = (c, 1u64 << j);
        for &(b, t) in &basis {
            if v ^ b < v {
                v ^= b;
                tag ^= t;
            }
        }
        if v != 0 {
            basis.push((v, tag));
            basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
        }
    }
    let (mut v, mut tag) = (target, 0u64);
    for &(b, t) in &basis {
        if v ^ b < v {
            v ^= b;
            tag ^= t;
        }
    }
    (v == 0).then_some(tag)
}

#[inline]
pub(crate) fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}
