mod cache;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fewweight::catalog::{build, Family, FamilyId, Params};
use fewweight::codes::{self, CodeKind, CodeReport};
use fewweight::fexpr::Bindings;
use fewweight::suite::{self, Status};
use fewweight::{Caps, Ctx, Error, Exec, FieldSpec, FuncExpr};
use serde::Serialize;

use cache::Cache;

#[derive(Parser)]
#[command(name = "fewweight")]
#[command(about = "Few-weight binary codes from two-to-one functions over GF(2^n)")]
#[command(version)]
struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Cache directory (default: $XDG_CACHE_HOME/fewweight or ~/.cache/fewweight)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Disable the report cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads (1 runs everything inline)
    #[arg(long, global = true, default_value_t = default_jobs(), value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,

    /// Largest n for the full (a, b) Walsh grid
    #[arg(long, global = true, default_value_t = Caps::default().full, value_parser = clap::value_parser!(u32).range(1..))]
    cap_full: u32,

    /// Largest n for the b-slice spectrum
    #[arg(long, global = true, default_value_t = Caps::default().slice, value_parser = clap::value_parser!(u32).range(1..))]
    cap_slice: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Code {
    Cf,
    Cdf,
    Both,
}

impl Code {
    fn kinds(self) -> &'static [CodeKind] {
        match self {
            Code::Cf => &[CodeKind::Cf],
            Code::Cdf => &[CodeKind::CDf],
            Code::Both => &[CodeKind::Cf, CodeKind::CDf],
        }
    }
}

#[derive(clap::Args)]
struct ParamArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    e: Option<u64>,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params {
            n: self.n,
            m: self.m,
            t: self.t,
            e: self.e,
            k: self.k,
            i: self.i,
        }
    }

    fn given(&self) -> impl Iterator<Item = char> + '_ {
        let p = self.params();
        [
            ('n', p.n.is_some()),
            ('m', p.m.is_some()),
            ('k', p.k.is_some()),
            ('t', p.t.is_some()),
            ('i', p.i.is_some()),
            ('e', p.e.is_some()),
        ]
        .into_iter()
        .filter(|&(_, set)| set)
        .map(|(c, _)| c)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a function given as an expression over GF(2^n)
    Analyze {
        /// Expression in x, e.g. "x^13 + x^8 + w*x"; m, k, t, i, e may appear
        /// in exponents and are bound by the matching flags
        expr: String,

        #[command(flatten)]
        params: ParamArgs,

        /// Reduction polynomial as an integer (default: the built-in one)
        #[arg(long, value_parser = parse_poly)]
        poly: Option<u64>,

        #[arg(long, value_enum, default_value = "both")]
        code: Code,
    },

    /// Build a catalog family and compare it with its stated distributions
    Family {
        /// Family id, e.g. L31, T41, AB_GOLD
        id: String,

        #[command(flatten)]
        params: ParamArgs,

        #[arg(long, value_enum, default_value = "both")]
        code: Code,
    },

    /// Run the verification suite
    VerifyPaper {
        /// Comma-separated criterion numbers or groups (examples, tables,
        /// oracle, two-to-one, quadratic, dual, factor, identity,
        /// five-weight, conjectures)
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,

        /// Print a JSON summary instead of text
        #[arg(long)]
        json: bool,
    },
}

fn default_jobs() -> u32 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u32)
}

fn parse_poly(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

/// Input errors exit with 2, failed computations with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::DegreeOutOfRange(_)
        | Error::NotMonic { .. }
        | Error::NotIrreducible { .. }
        | Error::NotASubfield { .. }
        | Error::NoGF4Subfield(_)
        | Error::ConstraintViolation { .. } => 2,
        _ => 1,
    }
}

struct Runner {
    ctx: Ctx,
    cache: Option<Cache>,
    format: Format,
}

impl Runner {
    fn cached(
        &self,
        key: String,
        compute: impl FnOnce() -> fewweight::Result<CodeReport>,
    ) -> fewweight::Result<CodeReport> {
        let caps = self.ctx.caps;
        let key = format!(
            "{key}\ncaps {} {} {} {}",
            caps.full, caps.slice, caps.brute_cf, caps.brute_cdf
        );
        match &self.cache {
            Some(c) => c.get_or_compute(&key, compute),
            None => compute(),
        }
    }

    fn analyze(&self, f: &FuncExpr, kind: CodeKind) -> fewweight::Result<CodeReport> {
        let key = format!(
            "analyze\n{}\n{:#x}\n{}",
            f,
            f.field().reduction_poly(),
            kind.as_str()
        );
        self.cached(key, || codes::analyze(f, kind, &self.ctx))
    }

    fn family(&self, fam: &Family, kind: CodeKind) -> fewweight::Result<CodeReport> {
        let params = serde_json::to_string(&fam.params).expect("params serialize");
        let key = format!("family\n{}\n{params}\n{}", fam.id, kind.as_str());
        self.cached(key, || fam.report(kind, &self.ctx))
    }

    /// Runs each selected code, streaming text and CSV reports as they
    /// finish. With `both`, a C_f above the full cap is skipped with a note.
    fn run_codes(
        &self,
        code: Code,
        n: u32,
        mut one: impl FnMut(CodeKind) -> fewweight::Result<CodeReport>,
    ) -> ExitCode {
        let mut reports = Vec::new();
        let mut status = 0u8;
        for &kind in code.kinds() {
            if code == Code::Both && kind == CodeKind::Cf && n > self.ctx.caps.full {
                eprintln!(
                    "note: C_f skipped, n = {n} is above --cap-full {}",
                    self.ctx.caps.full
                );
                continue;
            }
            match one(kind) {
                Ok(r) => {
                    if !r.all_pass() {
                        status = status.max(1);
                    }
                    self.emit(&r, reports.is_empty());
                    reports.push(r);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    status = status.max(exit_code(&e));
                }
            }
        }
        if self.format == Format::Json {
            println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
        }
        ExitCode::from(status)
    }

    fn emit(&self, r: &CodeReport, first: bool) {
        let text = match self.format {
            Format::Json => return,
            Format::Csv => r.to_csv(),
            Format::Text => r.to_text(),
        };
        let mut out = std::io::stdout().lock();
        if !first {
            let _ = writeln!(out);
        }
        let _ = write!(out, "{text}");
        let _ = out.flush();
    }
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    pass: bool,
    criteria: &'a [suite::CriterionResult],
}

fn verify(ctx: &Ctx, only: &[String], json: bool) -> ExitCode {
    let known: Vec<String> = suite::CRITERIA
        .iter()
        .flat_map(|&(id, group, _)| [id.to_string(), group.to_string()])
        .collect();
    if let Some(bad) = only.iter().find(|s| !known.contains(s)) {
        eprintln!("error: unknown criterion or group '{bad}'");
        return ExitCode::from(2);
    }
    let results = suite::run(ctx, only, |r| {
        if json {
            return;
        }
        let mut out = std::io::stdout().lock();
        for l in &r.lines {
            let _ = writeln!(out, "{} [{}] {}: {}", l.status, r.id, l.name, l.detail);
        }
        let _ = writeln!(
            out,
            "{} criterion {} ({}): {} [{:.2}s]",
            r.status, r.id, r.group, r.title, r.seconds
        );
        let _ = out.flush();
    });
    let pass = results.iter().all(|r| r.status != Status::Fail);
    if json {
        let summary = SuiteSummary { pass, criteria: &results };
        println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    }
    ExitCode::from(if pass { 0 } else { 1 })
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    if let Some(d) = &cli.cache_dir {
        return Some(d.clone());
    }
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("fewweight"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.jobs > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs as usize)
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
        Exec::Parallel
    } else {
        Exec::Sequential
    };
    let ctx = Ctx {
        exec,
        caps: Caps {
            full: cli.cap_full,
            slice: cli.cap_slice,
            ..Caps::default()
        },
    };
    let runner = Runner {
        ctx,
        cache: cache_dir(&cli).map(Cache::new),
        format: cli.format,
    };
    let fail = |e: Error| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    };
    match &cli.command {
        Command::Analyze { expr, params, poly, code } => {
            let Some(n) = params.n else {
                eprintln!("error: --n is required");
                return ExitCode::from(2);
            };
            let field = match FieldSpec::new(n, *poly) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let mut vars = Bindings::new();
            let p = params.params();
            for (c, v) in [('m', p.m), ('k', p.k), ('t', p.t), ('i', p.i)] {
                if let Some(v) = v {
                    vars.insert(c, i64::from(v));
                }
            }
            if let Some(e) = p.e {
                let Ok(e) = i64::try_from(e) else {
                    eprintln!("error: --e is too large");
                    return ExitCode::from(2);
                };
                vars.insert('e', e);
            }
            let f = match FuncExpr::parse(field, expr, &vars) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            runner.run_codes(*code, n, |kind| runner.analyze(&f, kind))
        }
        Command::Family { id, params, code } => {
            let id: FamilyId = match id.parse() {
                Ok(id) => id,
                Err(e) => return fail(e),
            };
            let mut allowed = id.inputs().to_vec();
            if FamilyId::AB.contains(&id) || id == FamilyId::T53_GOLD {
                allowed.push('e');
            }
            if let Some(c) = params.given().find(|c| !allowed.contains(c)) {
                let names: Vec<String> = allowed.iter().map(|c| format!("--{c}")).collect();
                eprintln!("error: {id} does not take --{c} (accepted: {})", names.join(", "));
                return ExitCode::from(2);
            }
            let fam = match build(id, &params.params()) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let n = fam.params.n.expect("resolved");
            runner.run_codes(*code, n, |kind| runner.family(&fam, kind))
        }
        Command::VerifyPaper { only, json } => verify(&runner.ctx, only, *json),
    }
}
