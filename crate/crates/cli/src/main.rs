//! `ranklab` command-line front end.

mod cache;
mod error;
mod suites;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ranklab::perm::GroupSpec;
use ranklab::permgroup::{DEFAULT_CAP, DEFAULT_CLASS_BUDGET};
use ranklab::verify::{gl_rank_formula, rank_report, Budget, RankReport, Status};
use ranklab::{Descriptor, InvariantTriple};

use cache::Cache;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "ranklab",
    version,
    about = "Ranks of finite groups and the constructions around them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print m(p, ell), a(p, ell) and, when defined, c(p).
    Invariants {
        #[arg(long)]
        p: u64,
        #[arg(long = "l")]
        ell: u64,
    },
    /// Build a group and write its group file.
    Build {
        /// Output path; standard output when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        target: BuildTarget,
    },
    /// Rank of the group in a group file.
    Rank(RankArgs),
    /// Run a named verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Tabulate rk_ell(GL_d(F_p)).
    Table {
        #[arg(long, default_value = "3,5")]
        p: String,
        #[arg(long = "l", default_value = "2")]
        ell: String,
        #[arg(long, default_value = "1..3")]
        d: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand, Clone)]
#[command(rename_all = "kebab-case")]
enum BuildTarget {
    Cyclic {
        #[arg(long)]
        n: u64,
    },
    Semidihedral {
        #[arg(long)]
        c: u32,
    },
    IteratedWreath {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u32,
    },
    Xgroup {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        r: u32,
    },
    Ygroup {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        r: u32,
    },
    SylowSym {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
    },
    GlSylow {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
    },
    RemarkS {
        #[arg(long)]
        p: u64,
    },
    RemarkAffine {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
    },
    Dihedral {
        #[arg(long)]
        k: u32,
    },
    DihedralPower {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        count: u32,
    },
    Symmetric {
        #[arg(long)]
        n: u64,
    },
    GeneralLinear {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: u64,
    },
    Heisenberg {
        #[arg(long)]
        p: u64,
    },
}

impl From<BuildTarget> for Descriptor {
    fn from(t: BuildTarget) -> Self {
        use BuildTarget as B;
        match t {
            B::Cyclic { n } => Descriptor::Cyclic { n },
            B::Semidihedral { c } => Descriptor::Semidihedral { c },
            B::IteratedWreath { l, r } => Descriptor::IteratedWreath { l, r },
            B::Xgroup { l, a, r } => Descriptor::Xgroup { l, a, r },
            B::Ygroup { c, r } => Descriptor::Ygroup { c, r },
            B::SylowSym { n, l } => Descriptor::SylowSym { n, l },
            B::GlSylow { d, p, l } => Descriptor::GlSylow { d, p, l },
            B::RemarkS { p } => Descriptor::SwapScalar { p },
            B::RemarkAffine { p, m, d, k } => Descriptor::AffineExtension { p, m, d, k },
            B::Dihedral { k } => Descriptor::Dihedral { k },
            B::DihedralPower { k, count } => Descriptor::DihedralPower { k, count },
            B::Symmetric { n } => Descriptor::Symmetric { n },
            B::GeneralLinear { d, p } => Descriptor::GeneralLinear { d, p },
            B::Heisenberg { p } => Descriptor::Heisenberg { p },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Brute,
    Formula,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Largest group order enumerated.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    element_cap: usize,
    /// Largest number of subgroup classes enumerated before giving up.
    #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
    class_budget: usize,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            element_cap: self.element_cap,
            class_budget: self.class_budget,
            ..Budget::default()
        }
    }
}

#[derive(Args)]
struct RankArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Bypass the result cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
#[command(rename_all = "kebab-case")]
enum Suite {
    /// Brute rank of X_{a,r}(ell) against its formula.
    Xgroups {
        #[arg(long = "l", default_value_t = 2)]
        ell: u64,
        #[arg(long, default_value_t = 2)]
        amax: u32,
        #[arg(long, default_value_t = 1)]
        rmax: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Brute rank of Y_{c,r} against its formula.
    Ygroups {
        #[arg(long, default_value_t = 3)]
        cmin: u32,
        #[arg(long, default_value_t = 4)]
        cmax: u32,
        #[arg(long, default_value_t = 0)]
        rmax: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Brute rank of explicit Sylow subgroups of GL_d(F_p).
    Gl {
        #[arg(long, default_value = "5")]
        p: String,
        #[arg(long, default_value = "2")]
        d: String,
        #[arg(long = "l", default_value = "2")]
        ell: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Sampled monomial modules against d(M) <= 2n/ell.
    LemmaMonomial {
        #[arg(long = "l", default_value = "2,3")]
        ell: String,
        /// Defaults to ell and 2 ell.
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value = "2,3")]
        k: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// d(G) + d_RG(M) <= rank M on generated lattice instances.
    PropKey {
        /// Restrict to these primes.
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
    },
    /// rk_ell(GL_d(F_p)) against the dimension bounds.
    GlBound {
        #[arg(long, default_value = "3,5,7,11,13")]
        p: String,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
        #[arg(long, default_value_t = 13)]
        lmax: u64,
        /// Also brute-force Sylow 2-subgroups of order at most 512 acting on at most 729 points.
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// The examples showing the bounds are sharp.
    RemarkExamples {
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Sylow rank bound and odd-order properties on the group corpus.
    Corpus {
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Parse `3`, `1,2,5` or `1..4` (inclusive).
fn parse_list<T: TryFrom<u64>>(s: &str) -> Result<Vec<T>, CliError> {
    let bad = || {
        CliError::domain(format!(
            "malformed range '{s}': expected N, N,M,... or A..B"
        ))
    };
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    let values: Vec<u64> = match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad());
            }
            (lo..=hi).collect()
        }
        None => s.split(',').map(num).collect::<Result<_, _>>()?,
    };
    values
        .into_iter()
        .map(|v| T::try_from(v).map_err(|_| bad()))
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serializes")
}

fn cmd_invariants(p: u64, ell: u64) -> Result<String, CliError> {
    if p == 2 {
        return Err(CliError::domain("p must be an odd prime"));
    }
    let t = InvariantTriple::compute(p, ell).map_err(|e| CliError::domain(e.to_string()))?;
    Ok(to_json(&t) + "\n")
}

fn cmd_build(target: BuildTarget, out: Option<PathBuf>) -> Result<String, CliError> {
    let desc: Descriptor = target.into();
    let text = desc.build()?.to_file_string();
    match out {
        Some(path) => {
            fs::write(&path, &text)
                .map_err(|e| CliError::domain(format!("writing {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

#[derive(Serialize)]
struct CacheRequest<'a> {
    spec: &'a GroupSpec,
    method: Method,
    element_cap: usize,
    class_budget: usize,
}

fn compute_rank(spec: &GroupSpec, args: &RankArgs) -> Result<RankReport, CliError> {
    let budget = args.budget.budget();
    let use_formula = args.method != Method::Brute;
    let use_brute = args.method != Method::Formula;
    let key = Cache::key(&to_json(&CacheRequest {
        spec,
        method: args.method,
        element_cap: budget.element_cap,
        class_budget: budget.class_budget,
    }));
    let cache = Cache::from_env();
    if !args.no_cache {
        if let Some(hit) = cache.get(&key) {
            return Ok(hit);
        }
    }
    let report = rank_report(spec, use_formula, use_brute, &budget)?;
    if !args.no_cache {
        if let Err(e) = cache.put(&key, &report) {
            eprintln!("warning: cache write failed: {e:#}");
        }
    }
    Ok(report)
}

fn cmd_rank(args: RankArgs) -> Result<String, CliError> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| CliError::domain(format!("reading {}: {e}", args.file.display())))?;
    let spec = GroupSpec::from_file_str(&text).map_err(|e| CliError::domain(e.to_string()))?;
    let mut report = compute_rank(&spec, &args)?;
    if let Some(ms) = report.wall_ms.take() {
        eprintln!("wall time: {ms} ms");
    }
    let line = to_json(&report) + "\n";
    match report.status {
        Status::Mismatch => {
            print!("{line}");
            Err(CliError::mismatch(line.trim_end().to_string()))
        }
        Status::BruteSkipped if args.method != Method::Formula => {
            print!("{line}");
            Err(CliError::cap("brute force skipped: resource cap reached"))
        }
        _ => Ok(line),
    }
}

fn cmd_verify(suite: Suite) -> Result<(String, u8), CliError> {
    let rows = match suite {
        Suite::Xgroups {
            ell,
            amax,
            rmax,
            budget,
        } => suites::xgroups(ell, amax, rmax, &budget.budget())?,
        Suite::Ygroups {
            cmin,
            cmax,
            rmax,
            budget,
        } => suites::ygroups(cmin, cmax, rmax, &budget.budget())?,
        Suite::Gl { p, d, ell, budget } => suites::gl(
            &parse_list::<u64>(&p)?,
            &parse_list::<u32>(&d)?,
            &parse_list::<u64>(&ell)?,
            &budget.budget(),
        )?,
        Suite::LemmaMonomial {
            ell,
            n,
            k,
            trials,
            seed,
        } => {
            let ns = n.as_deref().map(parse_list::<usize>).transpose()?;
            suites::lemma_monomial(
                &parse_list::<u64>(&ell)?,
                ns.as_deref(),
                &parse_list::<u32>(&k)?,
                trials,
                seed,
            )?
        }
        Suite::PropKey { p, max_rank } => {
            let ps = p.as_deref().map(parse_list::<u64>).transpose()?;
            suites::generator_sum(ps.as_deref(), max_rank)?
        }
        Suite::GlBound {
            p,
            dmax,
            lmax,
            brute,
            budget,
        } => suites::gl_bound(&parse_list::<u64>(&p)?, dmax, lmax, brute, &budget.budget())?,
        Suite::RemarkExamples { budget } => suites::sharpness_examples(&budget.budget())?,
        Suite::Corpus { budget } => suites::corpus(&budget.budget())?,
    };
    Ok((suites::render(&rows), suites::exit_code(&rows)))
}

#[derive(Serialize)]
struct TableRow {
    p: u64,
    ell: u64,
    d: u32,
    value: u32,
    case: &'static str,
}

fn cmd_table(p: &str, ell: &str, d: &str, format: Format) -> Result<String, CliError> {
    let mut ps = parse_list::<u64>(p)?;
    let mut ls = parse_list::<u64>(ell)?;
    let mut ds = parse_list::<u32>(d)?;
    for v in [&mut ps, &mut ls] {
        v.sort_unstable();
        v.dedup();
    }
    ds.sort_unstable();
    ds.dedup();
    let mut rows = Vec::new();
    for &p in &ps {
        if p == 2 {
            return Err(CliError::domain("p must be an odd prime"));
        }
        for &l in &ls {
            if l == p {
                continue;
            }
            for &d in &ds {
                let (value, case) = gl_rank_formula(p, l, d)?;
                rows.push(TableRow {
                    p,
                    ell: l,
                    d,
                    value,
                    case: case.tag(),
                });
            }
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("p,ell,d,value,case\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.p, r.ell, r.d, r.value, r.case
                ));
            }
            out
        }
        Format::Structured => to_json(&rows) + "\n",
    })
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match cli.command {
        Command::Invariants { p, ell } => cmd_invariants(p, ell).map(|s| (s, 0)),
        Command::Build { out, target } => cmd_build(target, out).map(|s| (s, 0)),
        Command::Rank(args) => cmd_rank(args).map(|s| (s, 0)),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Table { p, ell, d, format } => cmd_table(&p, &ell, &d, format).map(|s| (s, 0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
