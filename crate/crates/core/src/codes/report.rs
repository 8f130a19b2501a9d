//! One-code summaries and their JSON / CSV / text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{
    check_cdf_input, dual_analysis, wd_bruteforce_cdf, wd_bruteforce_cf, wd_cdf_from_slice,
    wd_cf_from_spectrum, CodeKind, DualDistance, DualReport, WeightDistribution,
};
use crate::catalog::Params;
use crate::error::Result;
use crate::fexpr::FuncExpr;
use crate::walsh;
use crate::Ctx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub w: u64,
    pub mult: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSummary {
    pub dim: u64,
    pub dmin: DualDistance,
    pub sphere_packing: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Check {
        Check {
            name: name.into(),
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub family: Option<String>,
    pub params: Params,
    pub kind: CodeKind,
    pub length: u64,
    pub dimension: u32,
    pub weights: Vec<WeightEntry>,
    pub t_weights: usize,
    pub dual: DualSummary,
    pub checks: Vec<Check>,
    pub source: String,
}

impl CodeReport {
    pub fn wd(&self) -> WeightDistribution {
        WeightDistribution::new(self.length, self.weights.iter().map(|e| (e.w, e.mult)))
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `[length, dimension, d]` with d the minimum nonzero weight.
    pub fn parameters(&self) -> String {
        match self.wd().min_distance() {
            Some(d) => format!("[{}, {}, {}]", self.length, self.dimension, d),
            None => format!("[{}, {}]", self.length, self.dimension),
        }
    }

    /// `weight,multiplicity` rows under a `#` comment header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# kind: {}", self.kind.as_str());
        if let Some(fam) = &self.family {
            let _ = writeln!(out, "# family: {fam}");
            let _ = writeln!(out, "# params: {}", self.params);
        }
        let _ = writeln!(out, "# source: {}", self.source);
        let _ = writeln!(out, "# length: {}", self.length);
        let _ = writeln!(out, "# dimension: {}", self.dimension);
        out.push_str("weight,multiplicity\n");
        for e in &self.weights {
            let _ = writeln!(out, "{},{}", e.w, e.mult);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = match self.kind {
            CodeKind::Cf => "C_f",
            CodeKind::CDf => "C_D(f)",
        };
        let fam = self.family.as_deref().map(|f| format!(" ({f})")).unwrap_or_default();
        let _ = writeln!(out, "{name}{fam}: {}", self.parameters());
        let _ = writeln!(out, "  f(x) = {}", self.source);
        let _ = writeln!(out, "  enumerator: {}", self.wd().enumerator());
        let _ = writeln!(out, "  nonzero weights: {}", self.t_weights);
        let dmin = match self.dual.dmin {
            DualDistance::Exact(d) => d.to_string(),
            DualDistance::Range(lo, hi) => format!("{lo}..{hi}"),
            DualDistance::Trivial => "-".to_string(),
        };
        let sp = match self.dual.sphere_packing {
            Some(true) => ", perfect",
            _ => "",
        };
        let _ = writeln!(out, "  dual: [{}, {}, {}]{}", self.length, self.dual.dim, dmin, sp);
        for c in &self.checks {
            let _ = writeln!(out, "  {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        }
        out
    }
}

/// Full pipeline for one code: spectrum, weight distribution, dual analysis,
/// and the brute-force cross-checks that fit in the caps.
pub fn analyze(f: &FuncExpr, kind: CodeKind, ctx: &Ctx) -> Result<CodeReport> {
    let n = f.field().degree();
    let mut checks = Vec::new();
    let (wd, dim) = match kind {
        CodeKind::Cf => {
            let (wd, dk1) = wd_cf_from_spectrum(&walsh::spectrum_full(f, ctx)?)?;
            (wd, 2 * n - dk1)
        }
        CodeKind::CDf => {
            check_cdf_input(f)?;
            let (wd, dk2) = wd_cdf_from_slice(&walsh::spectrum_b_slice(f, ctx)?)?;
            (wd, n - dk2)
        }
    };
    let brute = match kind {
        CodeKind::Cf if n <= ctx.caps.brute_cf => Some(wd_bruteforce_cf(f, ctx)?),
        CodeKind::CDf if n <= ctx.caps.brute_cdf => Some(wd_bruteforce_cdf(f, ctx)?),
        _ => None,
    };
    if let Some((bwd, distinct)) = brute {
        checks.push(Check::new("wd_matches_enumeration", bwd == wd));
        checks.push(Check::new("distinct_codewords_2^dim", distinct == 1u64 << dim));
    }
    let dual: Option<DualReport> = if n <= ctx.caps.full {
        Some(dual_analysis(f, kind, dim, ctx)?)
    } else {
        None
    };
    if let Some(d) = &dual {
        if d.oracle.is_some() {
            checks.push(Check::new("dual_distance_matches_oracle", d.oracle_agrees()));
        }
    }
    let length = wd.length;
    let dual = match dual {
        Some(d) => DualSummary {
            dim: d.dim,
            dmin: d.dmin,
            sphere_packing: d.sphere_packing,
        },
        None => DualSummary {
            dim: length - dim as u64,
            dmin: match kind {
                CodeKind::Cf => DualDistance::Range(3, 6),
                CodeKind::CDf => DualDistance::Range(3, 4),
            },
            sphere_packing: None,
        },
    };
    Ok(CodeReport {
        family: None,
        params: Params {
            n: Some(n),
            ..Params::default()
        },
        kind,
        length,
        dimension: dim,
        t_weights: wd.t_weights(),
        weights: wd
            .entries
            .iter()
            .map(|(&w, &mult)| WeightEntry { w, mult })
            .collect(),
        dual,
        checks,
        source: f.to_string(),
    })
}
