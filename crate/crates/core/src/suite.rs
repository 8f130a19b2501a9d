//! The verification suite: twelve criteria, each a list of checked lines.
//!
//! Shared by the `acceptance` test target and `fewweight verify-paper`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{
    self, build, expected_wd, expected_weight_set, ConjectureId, Expectation, Family, FamilyId,
    Params, TableId, WeightSetId,
};
use crate::codes::{self, CodeKind, DualDistance, WeightDistribution};
use crate::error::Result;
use crate::gf2n::{FieldElt, FieldSpec};
use crate::lowfactor::{brute_factor_type, cubic_root, cubic_type, quartic_type, FactorType};
use crate::walsh;
use crate::Ctx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Observation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Observation => "OBSERVATION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub status: Status,
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub group: &'static str,
    pub title: &'static str,
    pub status: Status,
    /// Wall time; left out of the JSON so runs compare byte for byte.
    #[serde(skip)]
    pub seconds: f64,
    pub lines: Vec<Line>,
}

impl CriterionResult {
    pub fn failures(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(|l| l.status == Status::Fail)
    }
}

/// (id, group, title) for every criterion, in run order.
pub const CRITERIA: [(u8, &str, &str); 12] = [
    (1, "examples", "L31 m=3 C_f enumerator"),
    (2, "examples", "L32_1 m=3 C_f enumerator"),
    (3, "examples", "L32_2 and L32_3 m=3 enumerators"),
    (4, "tables", "weight-distribution tables"),
    (5, "oracle", "spectrum distributions equal codeword enumeration"),
    (6, "two-to-one", "catalog families are two-to-one"),
    (7, "quadratic", "quadratic Walsh law"),
    (8, "dual", "dual distances"),
    (9, "factor", "cubic and quartic factorization types"),
    (10, "identity", "power-family Walsh identity"),
    (11, "five-weight", "five-weight containments"),
    (12, "conjectures", "conjecture experiments"),
];

/// Whether criterion `id` is selected by `only` (ids or group names).
pub fn selected(id: u8, only: &[String]) -> bool {
    if only.is_empty() {
        return true;
    }
    let group = CRITERIA[(id - 1) as usize].1;
    only.iter().any(|s| s == group || s.parse::<u8>() == Ok(id))
}

struct Lines(Vec<Line>);

impl Lines {
    fn check(&mut self, pass: bool, name: impl Into<String>, detail: impl Into<String>) {
        self.0.push(Line {
            status: if pass { Status::Pass } else { Status::Fail },
            name: name.into(),
            detail: detail.into(),
        });
    }

    fn observe(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.0.push(Line {
            status: Status::Observation,
            name: name.into(),
            detail: detail.into(),
        });
    }

    /// Runs `f`, recording an error as a failed line.
    fn scoped(&mut self, name: &str, f: impl FnOnce(&mut Lines) -> Result<()>) {
        let r = f(self);
        self.attempt(name, r);
    }

    /// Records an error as a failed line.
    fn attempt(&mut self, name: &str, r: Result<()>) {
        if let Err(e) = r {
            self.check(false, name, format!("error: {e}"));
        }
    }
}

pub fn run_criterion(id: u8, ctx: &Ctx) -> CriterionResult {
    let start = Instant::now();
    let mut lines = Lines(Vec::new());
    match id {
        1 => examples_l31(&mut lines, ctx),
        2 => examples_l32_1(&mut lines, ctx),
        3 => examples_one_weight(&mut lines, ctx),
        4 => tables(&mut lines, ctx),
        5 => oracle(&mut lines, ctx),
        6 => two_to_one(&mut lines),
        7 => quadratic_law(&mut lines, ctx),
        8 => dual(&mut lines, ctx),
        9 => factorization(&mut lines),
        10 => power_identity(&mut lines),
        11 => five_weight(&mut lines, ctx),
        12 => conjectures(&mut lines, ctx),
        _ => lines.check(false, "criterion", format!("no criterion {id}")),
    }
    let (_, group, title) = CRITERIA[(id.clamp(1, 12) - 1) as usize];
    let status = if lines.0.iter().any(|l| l.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    CriterionResult {
        id,
        group,
        title,
        status,
        seconds: start.elapsed().as_secs_f64(),
        lines: lines.0,
    }
}

/// Runs the selected criteria in order, handing each result to `sink` as it
/// completes.
pub fn run(ctx: &Ctx, only: &[String], mut sink: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    for (id, _, _) in CRITERIA {
        if selected(id, only) {
            let r = run_criterion(id, ctx);
            sink(&r);
            out.push(r);
        }
    }
    out
}

fn label(fam: &Family) -> String {
    format!("{} {}", fam.id, fam.params)
}

fn params_line(wd: &WeightDistribution, dim: u32) -> String {
    match wd.min_distance() {
        Some(d) => format!("[{}, {}, {}]", wd.length, dim, d),
        None => format!("[{}, {}]", wd.length, dim),
    }
}

fn literal(
    lines: &mut Lines,
    what: &str,
    wd: &WeightDistribution,
    dim: u32,
    expected_params: [u64; 3],
    expected: &[(u64, u64)],
) {
    let expected_wd = WeightDistribution::new(expected_params[0], expected.iter().copied());
    let [len, k, d] = expected_params;
    lines.check(
        params_line(wd, dim) == format!("[{len}, {k}, {d}]"),
        format!("{what} is [{len}, {k}, {d}]"),
        format!("observed {}", params_line(wd, dim)),
    );
    lines.check(
        *wd == expected_wd,
        format!("{what} enumerator {}", expected_wd.enumerator()),
        format!("observed {}", wd.enumerator()),
    );
}

fn examples_l31(lines: &mut Lines, ctx: &Ctx) {
    lines.scoped("L31 m=3", |lines| {
        let fam = build(FamilyId::L31, &Params::m(3))?;
        let wd = codes::wd_cf(&fam.f, ctx)?;
        let dim = codes::dims(&fam.f, ctx)?.dim_cf;
        literal(
            lines,
            "C_f",
            &wd,
            dim,
            [63, 12, 24],
            &[(0, 1), (24, 630), (32, 3087), (36, 378)],
        );
        let table = expected_wd(TableId::T1, &fam.params)?;
        lines.check(
            wd == table,
            "C_f equals T1 at m=3",
            format!("T1 gives {}", table.enumerator()),
        );
        Ok(())
    });
}

fn examples_l32_1(lines: &mut Lines, ctx: &Ctx) {
    lines.scoped("L32_1 m=3", |lines| {
        let fam = build(FamilyId::L32_1, &Params::m(3))?;
        let wd = codes::wd_cf(&fam.f, ctx)?;
        let dim = codes::dims(&fam.f, ctx)?.dim_cf;
        literal(
            lines,
            "C_f",
            &wd,
            dim,
            [127, 14, 56],
            &[(0, 1), (56, 4572), (64, 8255), (72, 3556)],
        );
        Ok(())
    });
}

fn examples_one_weight(lines: &mut Lines, ctx: &Ctx) {
    for id in [FamilyId::L32_2, FamilyId::L32_3] {
        lines.scoped(id.as_str(), |lines| {
            let fam = build(id, &Params::m(3))?;
            let d = codes::dims(&fam.f, ctx)?;
            let cf = codes::wd_cf(&fam.f, ctx)?;
            literal(
                lines,
                &format!("{id} C_f"),
                &cf,
                d.dim_cf,
                [127, 13, 56],
                &[(0, 1), (56, 2268), (64, 4159), (72, 1764)],
            );
            let cdf = codes::wd_cdf(&fam.f, ctx)?;
            literal(lines, &format!("{id} C_D(f)"), &cdf, d.dim_cdf, [63, 6, 32], &[(0, 1), (32, 63)]);
            Ok(())
        });
    }
}

fn wd_of(fam: &Family, kind: CodeKind, ctx: &Ctx) -> Result<WeightDistribution> {
    match kind {
        CodeKind::Cf => codes::wd_cf(&fam.f, ctx),
        CodeKind::CDf => codes::wd_cdf(&fam.f, ctx),
    }
}

fn kind_name(kind: CodeKind) -> &'static str {
    match kind {
        CodeKind::Cf => "C_f",
        CodeKind::CDf => "C_D(f)",
    }
}

fn compare_table(lines: &mut Lines, fam: &Family, kind: CodeKind, table: TableId, ctx: &Ctx) {
    let name = format!("{} {} = {table}", label(fam), kind_name(kind));
    let r = (|| {
        let wd = wd_of(fam, kind, ctx)?;
        let expected = expected_wd(table, &fam.params)?;
        let detail = if wd == expected {
            wd.enumerator()
        } else {
            format!("observed {} expected {}", wd.enumerator(), expected.enumerator())
        };
        lines.check(wd == expected, name.clone(), detail);
        Ok(())
    })();
    lines.attempt(&name, r);
}

fn ab_instances(ns: &[u32], ts: &[u32], with_i2: bool) -> Vec<Family> {
    let mut out = Vec::new();
    for &n in ns {
        for id in FamilyId::AB {
            for &t in ts {
                let is = if with_i2 && matches!(id, FamilyId::AB_GOLD | FamilyId::AB_KASAMI) {
                    vec![1, 2]
                } else {
                    vec![1]
                };
                for i in is {
                    if let Ok(fam) = build(id, &Params::n(n).with_t(t).with_i(i)) {
                        out.push(fam);
                    }
                }
            }
        }
    }
    out
}

fn tables(lines: &mut Lines, ctx: &Ctx) {
    let mut jobs: Vec<(FamilyId, Params)> = Vec::new();
    jobs.extend([3, 5].map(|m| (FamilyId::L31, Params::m(m))));
    for m in 2..=5 {
        for id in [FamilyId::L32_1, FamilyId::L32_2, FamilyId::L32_3, FamilyId::L32_4] {
            jobs.push((id, Params::m(m)));
        }
    }
    jobs.push((FamilyId::L33_1, Params::m(3)));
    jobs.extend([(3, 3), (3, 5), (5, 3)].map(|(k, m)| (FamilyId::T41, Params::km(k, m))));
    jobs.extend([3, 5].map(|m| (FamilyId::T42, Params::m(m))));
    for (id, p) in jobs {
        match build(id, &p) {
            Ok(fam) => {
                for (kind, exp) in fam.expectations() {
                    let Expectation::Table(table) = exp else {
                        continue;
                    };
                    let n = fam.params.n.unwrap_or(0);
                    let cap = match kind {
                        CodeKind::Cf => ctx.caps.full,
                        CodeKind::CDf => ctx.caps.slice,
                    };
                    if n > cap {
                        lines.observe(
                            format!("{} {} = {table}", label(&fam), kind_name(kind)),
                            format!("skipped: n = {n} above cap {cap}"),
                        );
                        continue;
                    }
                    compare_table(lines, &fam, kind, table, ctx);
                }
            }
            Err(e) => lines.check(false, format!("{id} {p}"), format!("error: {e}")),
        }
    }
    for fam in ab_instances(&[5, 7, 9], &[1, 2], true) {
        compare_table(lines, &fam, CodeKind::CDf, TableId::T52, ctx);
    }
}

/// Every catalog instance with n <= max_n except the conjectured family:
/// all parameter sets for the m- and (k, m)-families, and t in {1, 2}, i = 1
/// for the power families.
fn instances(max_n: u32) -> Vec<Family> {
    let mut out = Vec::new();
    for id in FamilyId::ALL {
        if id == FamilyId::CONJ1 || FamilyId::AB.contains(&id) || id == FamilyId::T53_GOLD {
            continue;
        }
        for p in id.param_sets(max_n) {
            if let Ok(fam) = build(id, &p) {
                out.push(fam);
            }
        }
    }
    let odd: Vec<u32> = (3..=max_n).step_by(2).collect();
    out.extend(ab_instances(&odd, &[1, 2], false));
    out.sort_by_key(|f| (f.params.n, f.id));
    out
}

fn oracle(lines: &mut Lines, ctx: &Ctx) {
    let ctx = Ctx {
        caps: crate::Caps {
            brute_cf: ctx.caps.brute_cf.max(8),
            brute_cdf: ctx.caps.brute_cdf.max(12),
            ..ctx.caps
        },
        ..*ctx
    };
    for fam in instances(12) {
        let n = fam.params.n.unwrap_or(0);
        let name = label(&fam);
        let r = (|| {
            if n <= 8 {
                let (brute, count) = codes::wd_bruteforce_cf(&fam.f, &ctx)?;
                let (wd, dk1) = codes::wd_cf_from_spectrum(&walsh::spectrum_full(&fam.f, &ctx)?)?;
                lines.check(
                    brute == wd && count == 1u64 << (2 * n - dk1),
                    format!("{name} C_f"),
                    format!("{} codewords", count),
                );
            }
            let (brute, count) = codes::wd_bruteforce_cdf(&fam.f, &ctx)?;
            let wd = codes::wd_cdf(&fam.f, &ctx)?;
            lines.check(brute == wd, format!("{name} C_D(f)"), format!("{count} codewords"));
            Ok(())
        })();
        lines.attempt(&name, r);
    }
}

fn two_to_one(lines: &mut Lines) {
    for id in FamilyId::ALL {
        if id == FamilyId::CONJ1 {
            continue;
        }
        for p in id.param_sets(crate::gf2n::MAX_DEGREE).into_iter().take(2) {
            match build(id, &p) {
                Ok(fam) => {
                    let v = fam.f.is_two_to_one();
                    lines.check(v.is_two_to_one(), label(&fam), format!("{v:?}"));
                }
                Err(e) => lines.check(false, format!("{id} {p}"), format!("error: {e}")),
            }
        }
    }
}

fn quadratic_law(lines: &mut Lines, ctx: &Ctx) {
    for fam in instances(9) {
        let name = label(&fam);
        let r = (|| {
            let Some(q) = fam.quadratic_form()? else {
                return Ok(());
            };
            let what = if q == fam.f { "f" } else { "f(x^d)" };
            let v = walsh::check_quadratic_law(&q, ctx)?;
            lines.check(v.is_none(), format!("{name} {what}"), format!("{v:?}"));
            Ok(())
        })();
        lines.attempt(&name, r);
    }
}

fn dual(lines: &mut Lines, ctx: &Ctx) {
    for fam in instances(10) {
        let name = label(&fam);
        let one_weight = fam
            .expectations()
            .contains(&(CodeKind::CDf, Expectation::Table(TableId::OneWeight)));
        let r = (|| {
            let d = codes::dims(&fam.f, ctx)?;
            let cf = codes::dual_analysis(&fam.f, CodeKind::Cf, d.dim_cf, ctx)?;
            let (lo, hi) = cf.dmin.bounds();
            let refined = d.dk1 < 2 || hi <= 4;
            lines.check(
                3 <= lo && hi <= 6 && refined && cf.oracle_agrees(),
                format!("{name} C_f dual"),
                format!(
                    "d = {:?}, dK1 = {}, oracle {:?}",
                    cf.dmin, d.dk1, cf.oracle
                ),
            );
            let cdf = codes::dual_analysis(&fam.f, CodeKind::CDf, d.dim_cdf, ctx)?;
            lines.check(
                matches!(cdf.dmin, DualDistance::Exact(3 | 4) | DualDistance::Trivial)
                    && cdf.oracle_agrees(),
                format!("{name} C_D(f) dual"),
                format!("d = {:?}, oracle {:?}", cdf.dmin, cdf.oracle),
            );
            if one_weight {
                let n = u64::from(fam.params.n.unwrap_or(0));
                let len = (1u64 << (n - 1)) - 1;
                let hamming = cdf.length == len
                    && cdf.dim == len + 1 - n
                    && cdf.dmin == DualDistance::Exact(3)
                    && cdf.sphere_packing == Some(true);
                lines.check(
                    hamming,
                    format!("{name} C_D(f) dual is the Hamming code"),
                    format!(
                        "[{}, {}, {:?}], perfect = {:?}",
                        cdf.length, cdf.dim, cdf.dmin, cdf.sphere_packing
                    ),
                );
            }
            Ok(())
        })();
        lines.attempt(&name, r);
    }
}

fn small_field(m: u32) -> FieldSpec {
    if m == 1 {
        FieldSpec::gf2()
    } else {
        FieldSpec::standard(m).expect("degree in range")
    }
}

fn factorization(lines: &mut Lines) {
    for m in 1..=6 {
        let f = small_field(m);
        let (mut mismatches, mut bad_roots, mut total) = (0u64, 0u64, 0u64);
        for a in f.elements() {
            for b in f.elements().skip(1) {
                total += 1;
                let coeffs = [b, a, FieldElt::ZERO, FieldElt::ONE];
                let t = cubic_type(a, b, &f);
                if t.as_ref().ok() != Some(&brute_factor_type(&coeffs, &f)) {
                    mismatches += 1;
                }
                match cubic_root(a, b, &f) {
                    Ok(r) => {
                        let v = f.mul(f.square(r), r) + f.mul(a, r) + b;
                        if !v.is_zero() {
                            bad_roots += 1;
                        }
                    }
                    Err(_) if t == Ok(FactorType::L3) => {}
                    Err(_) => bad_roots += 1,
                }
            }
        }
        lines.check(
            mismatches == 0,
            format!("cubic types m={m}"),
            format!("{mismatches} of {total} differ"),
        );
        lines.check(
            bad_roots == 0,
            format!("cubic roots m={m}"),
            format!("{bad_roots} of {total} fail resubstitution"),
        );
    }
    let quartic = |f: &FieldSpec, a2, a1, a0| {
        let coeffs = [a0, a1, a2, FieldElt::ZERO, FieldElt::ONE];
        quartic_type(a2, a1, a0, f).ok() == Some(brute_factor_type(&coeffs, f))
    };
    for n in 2..=4 {
        let f = small_field(n);
        let mut mismatches = 0u64;
        let mut total = 0u64;
        for a2 in f.elements() {
            for a1 in f.elements().skip(1) {
                for a0 in f.elements().skip(1) {
                    total += 1;
                    if !quartic(&f, a2, a1, a0) {
                        mismatches += 1;
                    }
                }
            }
        }
        lines.check(
            mismatches == 0,
            format!("quartic types n={n} (exhaustive)"),
            format!("{mismatches} of {total} differ"),
        );
    }
    for n in [5, 6] {
        let f = small_field(n);
        let q = f.order() as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(n));
        let mismatches = (0..10_000)
            .filter(|_| {
                let a2 = FieldElt(rng.gen_range(0..q));
                let a1 = FieldElt(rng.gen_range(1..q));
                let a0 = FieldElt(rng.gen_range(1..q));
                !quartic(&f, a2, a1, a0)
            })
            .count();
        lines.check(
            mismatches == 0,
            format!("quartic types n={n} (10000 random)"),
            format!("{mismatches} differ"),
        );
    }
}

fn power_identity(lines: &mut Lines) {
    for fam in ab_instances(&[5, 7, 9], &[1, 2], false) {
        let name = label(&fam);
        let p = fam.params;
        let r = (|| {
            let v = catalog::power_identity_violation(
                *fam.f.field(),
                p.t.unwrap_or(1),
                p.e.unwrap_or(1),
            )?;
            lines.check(v.is_none(), name.clone(), format!("first differing b: {v:?}"));
            Ok(())
        })();
        lines.attempt(&name, r);
    }
}

fn five_weight(lines: &mut Lines, ctx: &Ctx) {
    let mut jobs: Vec<(FamilyId, Params)> = [2, 3, 4].map(|m| (FamilyId::L32_4, Params::m(m))).to_vec();
    jobs.push((FamilyId::T42, Params::m(3)));
    jobs.extend([5, 7, 9].map(|n| (FamilyId::T53_GOLD, Params::n(n))));
    for (id, p) in jobs {
        let name = format!("{id} {p}");
        let r = (|| {
            let fam = build(id, &p)?;
            let set = fam
                .expectations()
                .into_iter()
                .find_map(|(kind, e)| match (kind, e) {
                    (CodeKind::Cf, Expectation::WeightSet(s)) => Some(s),
                    _ => None,
                })
                .unwrap_or(WeightSetId::FiveOdd);
            let allowed = expected_weight_set(set, &fam.params)?;
            let wd = codes::wd_cf(&fam.f, ctx)?;
            let weights: Vec<u64> = wd.entries.keys().copied().collect();
            lines.check(
                weights.iter().all(|w| allowed.contains(w)),
                format!("{} C_f weights in {allowed:?}", label(&fam)),
                format!("observed {weights:?}, {} nonzero weights", wd.t_weights()),
            );
            Ok(())
        })();
        lines.attempt(&name, r);
    }
}

fn conjectures(lines: &mut Lines, ctx: &Ctx) {
    let runs = [3, 4, 5]
        .map(|m| (ConjectureId::CONJ1, Params::m(m)))
        .into_iter()
        .chain([5, 7, 9].map(|n| (ConjectureId::CONJ2, Params::n(n))));
    for (id, p) in runs {
        match catalog::run_conjecture(id, &p, ctx) {
            Ok(report) => {
                for o in report.observations {
                    lines.observe(
                        format!("{id} {}: {}", report.params, o.claim),
                        format!("holds = {}; {}", o.holds, o.detail),
                    );
                }
            }
            Err(e) => lines.check(false, format!("{id} {p}"), format!("error: {e}")),
        }
    }
}
