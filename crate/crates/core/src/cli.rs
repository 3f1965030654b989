//! The `richlines` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a checked
//! invariant fails. Reports go to `--out` (written atomically) or stdout.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::{general_position_check, AffineMap, LineRecord};
use crate::caps::Caps;
use crate::construct::folner::verify_folner;
use crate::construct::{folner_grid, klawe_select_lines, klawe_slopes, prime_params, FolnerParams};
use crate::error::{Error, Result};
use crate::grid::{rich_threshold, richness_sweep, GroundSet};
use crate::growth::{bsg_pipeline, ruzsa_check, triple_product, RuzsaCheck};
use crate::oracle::{rlgp_exact, sym_fp_oracle};
use crate::product_thm::{
    asym_experiment, dichotomy_check, expander_check, lemma6_decomposition, nine_fold_check,
    DichotomyReport, Lemma6Report, NineFoldCheck, NINE_FOLD_MAX,
};
use crate::report::{to_csv, to_json, write_atomic, Format};
use crate::scalar::{parse_rational, Field, Rational, Scalar};
use crate::symset::{bound_report, sym_set, MemberRow, SymBoundReport};

#[derive(Parser, Debug)]
#[command(name = "richlines", version, about = "Rich lines in Cartesian grids and growth in Aff(1,F)")]
struct Cli {
    /// Lift every size cap.
    #[arg(long, global = true)]
    unsafe_caps: bool,
    /// Worker threads for parallel sweeps (default: all processors).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized input generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format, json or csv.
    #[arg(long, global = true, visible_alias = "report")]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a grid or a line family.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Richness of each line on a grid, plus general position.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        lines: PathBuf,
        #[arg(long, default_value = "1/2")]
        alpha: String,
    },
    /// Enumerate sym_alpha(Y).
    Sym {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Iterated closure pipeline down to one abelian coset.
    Bsg {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        lines: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long = "J")]
        depth: usize,
    },
    /// Product-set experiments in Aff(1,F).
    #[command(subcommand)]
    Growth(GrowthCmd),
    /// Asymmetric sum-product experiment on the family c(x - b).
    Sumprod {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long = "C")]
        c: PathBuf,
        #[arg(long = "J")]
        depth: u32,
        #[arg(long = "K")]
        k: String,
        #[command(flatten)]
        field: FieldArg,
        /// Also run the closure pipeline on the family.
        #[arg(long)]
        pipeline: bool,
    },
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Prime-counting estimates and planner parameters for primes up to x.
    Primes {
        #[arg(long)]
        x: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// The grid N^k (N^N + [0, N^N)) and its lines.
    Folner {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        eps: String,
        /// Also write the line family here.
        #[arg(long)]
        lines_out: Option<PathBuf>,
        /// Check every line against its closed-form deficiency.
        #[arg(long)]
        verify: bool,
    },
    /// Prime-power slopes with greedily chosen intercepts.
    Klawe {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        bmax: String,
        /// Exponent s; defaults to ceil(4e k).
        #[arg(long)]
        s: Option<u64>,
        #[command(flatten)]
        field: FieldArg,
    },
}

#[derive(Subcommand, Debug)]
enum GrowthCmd {
    /// |A^3| and the tripling constant.
    Triple {
        #[arg(long)]
        lines: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Torus / slope-growth / field-saturation branches.
    Dichotomy {
        #[arg(long)]
        lines: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Ruzsa triangle inequality on given or random sets.
    Ruzsa {
        #[arg(long = "A", requires_all = ["b", "c"])]
        a: Option<PathBuf>,
        #[arg(long = "B")]
        b: Option<PathBuf>,
        #[arg(long = "C")]
        c: Option<PathBuf>,
        /// Number of seeded random triples, used when no sets are given.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Largest random set size.
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[command(flatten)]
        field: FieldArg,
    },
    /// |A + BC| against sqrt(|A||B||C|).
    Expander {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long = "C")]
        c: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Largest alpha-rich family in general position.
    Rlgp {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// sym_alpha(Y) by scanning all of Aff(1,F_p).
    Symfp {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Args, Debug)]
struct FieldArg {
    /// Work over F_p; rationals otherwise.
    #[arg(long)]
    p: Option<u64>,
}

impl FieldArg {
    fn field(&self) -> Result<Field> {
        match self.p {
            Some(p) => Field::prime(p),
            None => Ok(Field::Rational),
        }
    }
}

struct Ctx {
    caps: Caps,
    seed: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn json_only(&self) -> Result<()> {
        match self.format {
            Some(Format::Csv) => Err(Error::invalid("this report has no csv form")),
            _ => Ok(()),
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_atomic(path, text.as_bytes()),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, report: &T) -> Result<()> {
        self.json_only()?;
        self.emit(&to_json(report)?)
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_assertion_failure() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let caps = if cli.unsafe_caps {
        Caps::unlimited()
    } else {
        Caps::from_env()?
    };
    let format = cli.format.as_deref().map(str::parse).transpose()?;
    let ctx = Ctx {
        caps,
        seed: cli.seed,
        out: cli.out,
        format,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::invalid("--threads must be positive"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cli.command, &ctx))
}

fn dispatch(command: Command, ctx: &Ctx) -> Result<()> {
    match command {
        Command::Construct(ConstructCmd::Folner { n, eps, lines_out, verify }) => {
            construct_folner(ctx, n, &eps, lines_out.as_deref(), verify)
        }
        Command::Construct(ConstructCmd::Klawe { x, bmax, s, field }) => {
            construct_klawe(ctx, x, &bmax, s, field.field()?)
        }
        Command::Verify { grid, lines, alpha } => verify(ctx, &grid, &lines, &alpha),
        Command::Sym { grid, alpha } => sym(ctx, &grid, &alpha),
        Command::Bsg { grid, lines, alpha, depth } => {
            let y = read_grid(&grid)?;
            let a = read_lines(&lines, y.field())?;
            let report = bsg_pipeline(&a, &y, &parse_rational(&alpha)?, depth, &ctx.caps)?;
            ctx.emit_json(&report)
        }
        Command::Growth(cmd) => growth(ctx, cmd),
        Command::Sumprod { a, b, c, depth, k, field, pipeline } => {
            let f = field.field()?;
            let report = asym_experiment(
                &read_scalars(&a, f)?,
                &read_scalars(&b, f)?,
                &read_scalars(&c, f)?,
                depth,
                &parse_rational(&k)?,
                pipeline,
                &ctx.caps,
            )?;
            ctx.emit_json(&report)
        }
        Command::Oracle(OracleCmd::Rlgp { grid, alpha }) => {
            let y = read_grid(&grid)?;
            let r = rlgp_exact(&y, &parse_rational(&alpha)?, &ctx.caps)?;
            ctx.emit_json(&r.report())
        }
        Command::Oracle(OracleCmd::Symfp { grid, alpha }) => {
            let y = read_grid(&grid)?;
            let sym = sym_fp_oracle(&y, &parse_rational(&alpha)?, &ctx.caps)?;
            emit_rows(ctx, &sym.rows(), None)
        }
        Command::Primes { x } => {
            #[derive(Serialize)]
            struct PrimesReport {
                estimates: crate::construct::primes::PrimeEstimatesReport,
                params: crate::construct::klawe::KlaweParamsReport,
            }
            let (params, estimates) = prime_params(x, &ctx.caps)?;
            ctx.emit_json(&PrimesReport {
                estimates: estimates.report(),
                params: params.report(),
            })
        }
    }
}

fn construct_folner(ctx: &Ctx, n: u32, eps: &str, lines_out: Option<&Path>, verify: bool) -> Result<()> {
    ctx.json_only()?;
    let params = FolnerParams::new(n, parse_rational(eps)?)?;
    let grid = folner_grid(&params, ctx.caps.grid)?;
    for w in &grid.warnings {
        eprintln!("warning: {w}");
    }
    if verify {
        let v = verify_folner(&grid)?;
        eprintln!(
            "verified {} lines on |Y| = {}: closed-form deficiencies, general position",
            v.lines.len(),
            v.ground_size
        );
    }
    if let Some(path) = lines_out {
        write_atomic(path, to_json(&records(&grid.lines))?.as_bytes())?;
    }
    let mut buf = Vec::new();
    grid.ground.write_json(&mut buf)?;
    ctx.emit(std::str::from_utf8(&buf).expect("json is utf-8"))
}

fn construct_klawe(ctx: &Ctx, x: u64, bmax: &str, s: Option<u64>, field: Field) -> Result<()> {
    let (mut params, _) = prime_params(x, &ctx.caps)?;
    if let Some(s) = s {
        params = crate::construct::KlaweParams::new(params.primes, s, &ctx.caps)?;
    }
    let b_max: BigInt = bmax
        .parse()
        .map_err(|_| Error::Parse { text: bmax.to_string(), reason: "expected an integer".into() })?;
    let slopes: Vec<BigInt> = klawe_slopes(&params.primes, params.s, ctx.caps.slopes)?
        .into_iter()
        .map(BigInt::from)
        .collect();
    let lines = klawe_select_lines(&slopes, &b_max, field)?;
    ctx.emit_json(&records(&lines))
}

#[derive(Serialize)]
struct VerifyRow {
    a: String,
    b: String,
    richness: usize,
    rich: bool,
}

fn verify(ctx: &Ctx, grid: &Path, lines: &Path, alpha: &str) -> Result<()> {
    #[derive(Serialize)]
    struct VerifyReport {
        #[serde(serialize_with = "crate::report::ser_rational")]
        alpha: Rational,
        threshold: usize,
        ground_size: usize,
        lines: Vec<VerifyRow>,
        general_position: bool,
        violations: Vec<String>,
    }
    let y = read_grid(grid)?;
    let ls = read_lines(lines, y.field())?;
    let alpha = parse_rational(alpha)?;
    let threshold = rich_threshold(&y, &alpha);
    let rows: Vec<VerifyRow> = ls
        .iter()
        .zip(richness_sweep(&ls, &y)?)
        .map(|(g, r)| VerifyRow {
            a: g.slope().render(),
            b: g.offset().render(),
            richness: r,
            rich: r >= threshold,
        })
        .collect();
    let violations: Vec<String> = general_position_check(&ls)?.iter().map(|v| v.to_string()).collect();
    match ctx.format_or(Format::Csv) {
        Format::Csv => {
            if !violations.is_empty() {
                eprintln!("not in general position: {}", violations.join("; "));
            }
            ctx.emit(&to_csv(&rows)?)
        }
        Format::Json => ctx.emit(&to_json(&VerifyReport {
            alpha,
            threshold,
            ground_size: y.len(),
            lines: rows,
            general_position: violations.is_empty(),
            violations,
        })?),
    }
}

fn sym(ctx: &Ctx, grid: &Path, alpha: &str) -> Result<()> {
    let y = read_grid(grid)?;
    let sym = sym_set(&y, &parse_rational(alpha)?, &ctx.caps)?;
    let bounds = bound_report(&y, &sym);
    if bounds.ratio_trivial > Rational::from_integer(1.into()) {
        return Err(Error::InvariantViolated(format!("|sym| = {} exceeds |Y|^4", sym.len())));
    }
    emit_rows(ctx, &sym.rows(), Some(bounds))
}

fn emit_rows(ctx: &Ctx, rows: &[MemberRow], bounds: Option<SymBoundReport>) -> Result<()> {
    #[derive(Serialize)]
    struct SymReport<'a> {
        members: &'a [MemberRow],
        size: usize,
        bounds: Option<SymBoundReport>,
    }
    match ctx.format_or(Format::Csv) {
        Format::Csv => ctx.emit(&to_csv(rows)?),
        Format::Json => ctx.emit(&to_json(&SymReport {
            members: rows,
            size: rows.len(),
            bounds,
        })?),
    }
}

fn growth(ctx: &Ctx, cmd: GrowthCmd) -> Result<()> {
    let cap = ctx.caps.product;
    match cmd {
        GrowthCmd::Triple { lines, field } => {
            #[derive(Serialize)]
            struct TripleReport {
                size: usize,
                triple: usize,
                #[serde(serialize_with = "crate::report::ser_rational")]
                tripling: Rational,
            }
            let a = distinct(read_lines(&lines, field.field()?)?);
            let t = triple_product(&a, cap)?;
            ctx.emit_json(&TripleReport {
                size: a.len(),
                triple: t.set.len(),
                tripling: t.tripling,
            })
        }
        GrowthCmd::Dichotomy { lines, field } => {
            #[derive(Serialize)]
            struct Report {
                dichotomy: DichotomyReport,
                lemma6: Option<Lemma6Report>,
                nine_fold: Option<NineFoldCheck>,
            }
            let a = distinct(read_lines(&lines, field.field()?)?);
            let dichotomy = dichotomy_check(&a, field.p, cap)?;
            let lemma6 = match lemma6_decomposition(&a, cap) {
                Ok(d) => Some(d.report(a.len())),
                Err(Error::NoWitness) => None,
                Err(e) => return Err(e),
            };
            let nine_fold = if a.len() <= NINE_FOLD_MAX {
                Some(nine_fold_check(&a, cap)?)
            } else {
                None
            };
            ctx.emit_json(&Report { dichotomy, lemma6, nine_fold })
        }
        GrowthCmd::Ruzsa { a, b, c, trials, size, field } => {
            let f = field.field()?;
            let checks: Vec<RuzsaCheck> = match (a, b, c) {
                (Some(a), Some(b), Some(c)) => {
                    vec![ruzsa_check(&read_lines(&a, f)?, &read_lines(&b, f)?, &read_lines(&c, f)?, cap)?]
                }
                _ => {
                    let p = field
                        .p
                        .ok_or_else(|| Error::invalid("random Ruzsa trials need --p"))?;
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                    let mut out = Vec::with_capacity(trials);
                    for _ in 0..trials {
                        let mut draw = || {
                            let n = rng.gen_range(1..=size.max(1));
                            random_maps(&mut rng, p, n)
                        };
                        let (x, y, z) = (draw()?, draw()?, draw()?);
                        out.push(ruzsa_check(&x, &y, &z, cap)?);
                    }
                    out
                }
            };
            match ctx.format_or(Format::Json) {
                Format::Csv => ctx.emit(&to_csv(&checks)?),
                Format::Json => ctx.emit(&to_json(&checks)?),
            }
        }
        GrowthCmd::Expander { a, b, c, field } => {
            let f = field.field()?;
            let r = expander_check(&read_scalars(&a, f)?, &read_scalars(&b, f)?, &read_scalars(&c, f)?, cap)?;
            ctx.emit_json(&r)
        }
    }
}

/// `n` distinct maps of `Aff(1, 𝔽_p)` drawn uniformly from `rng`.
pub fn random_maps<R: Rng>(rng: &mut R, p: u64, n: usize) -> Result<Vec<AffineMap>> {
    let field = Field::prime(p)?;
    let total = (p as u128) * (p as u128 - 1);
    if n as u128 > total {
        return Err(Error::invalid(format!("Aff(1,F_{p}) has only {total} elements")));
    }
    let mut out = std::collections::BTreeSet::new();
    while out.len() < n {
        let a = rng.gen_range(1..p);
        let b = rng.gen_range(0..p);
        out.insert(AffineMap::new(
            Scalar::from_i64(a as i64, field),
            Scalar::from_i64(b as i64, field),
        )?);
    }
    Ok(out.into_iter().collect())
}

fn distinct(mut a: Vec<AffineMap>) -> Vec<AffineMap> {
    a.sort();
    a.dedup();
    a
}

fn records(lines: &[AffineMap]) -> Vec<LineRecord> {
    lines.iter().map(AffineMap::to_record).collect()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// A ground set file; duplicate elements are reported on stderr.
pub fn read_grid(path: &Path) -> Result<GroundSet> {
    let (y, load) = GroundSet::read_json(open(path)?)?;
    if load.duplicates > 0 {
        eprintln!("warning: {}: dropped {} duplicate elements", path.display(), load.duplicates);
    }
    Ok(y)
}

/// A JSON array of `{"a": .., "b": ..}` records, read over `field`.
pub fn read_lines(path: &Path, field: Field) -> Result<Vec<AffineMap>> {
    let recs: Vec<LineRecord> = serde_json::from_reader(open(path)?)?;
    recs.iter().map(|r| AffineMap::from_record(r, field)).collect()
}

/// A JSON array of scalar strings, read over `field`.
pub fn read_scalars(path: &Path, field: Field) -> Result<Vec<Scalar>> {
    let text: Vec<String> = serde_json::from_reader(open(path)?)?;
    text.iter().map(|t| Scalar::parse(t, field)).collect()
}
