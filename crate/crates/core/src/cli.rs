//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory writers.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use thiserror::Error;

use crate::appendix::{self, ComparisonError};
use crate::arith::{self, ArithError, Factored};
use crate::lie::{self, LieError, LieForm, VariantSpec};
use crate::perm::{self, Caps, PermError, PermutationGroup, Subgroup};
use crate::profinite::{self, Profile, ProfileError};
use crate::series::{FiniteDirichletSeries, SeriesError};
use crate::sporadic::{self, SporadicError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prozeta", version, about = "Exact probabilistic zeta function toolkit")]
struct Cli {
    /// Series output: human-readable or the `<index> <coefficient>` file format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a factor series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Arithmetic on series files (`-` reads stdin).
    #[command(subcommand)]
    Ring(RingCmd),
    /// Primitive prime divisors of a^n - 1.
    Zsigmondy { a: u64, n: u32 },
    /// ζ_p(m); m may be decimal or factored like 2^3*3*7.
    Zetap { p: u64, m: String },
    /// Exhaustive permutation-group computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
    #[command(subcommand)]
    Profile(ProfileCmd),
    #[command(subcommand)]
    Sporadic(SporadicCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
enum SeriesCmd {
    /// `series lie family=A rank=3 q=2 graph=none`
    Lie {
        #[arg(required = true)]
        descriptor: Vec<String>,
        /// Lift to r copies: P(rs - r + 1).
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Also drop indices divisible by these primes.
        #[arg(long, value_delimiter = ',')]
        pi: Vec<u64>,
        /// Print the per-subset index table.
        #[arg(long)]
        trace: bool,
    },
    /// `series abelian p=2 r=1 c=1`
    Abelian {
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        pi: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum RingCmd {
    Mul { a: PathBuf, b: PathBuf },
    Divide { a: PathBuf, b: PathBuf },
    Pipart {
        a: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    Substitute { a: PathBuf, r: u32 },
    Eval { a: PathBuf, t: u32 },
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Preset (C6, S4, A5, D8, Q8, PSL(3,2), ...) or a group file.
    group: String,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Subgroup lattice, Möbius values and P_G.
    Lattice {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, value_delimiter = ',')]
        pi: Vec<u64>,
    },
    /// Compare P_G(t) with the exhaustive generation probability.
    Hall {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
        t: Vec<u32>,
    },
    /// Supplement series of a normal subgroup over the full lattice.
    Supplement {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        normal: String,
    },
    /// Odd-index supplement series from the Sylow-2 overgroup interval.
    SylowOvergroups {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        normal: String,
    },
}

#[derive(Debug, Subcommand)]
enum ProfileCmd {
    Analyze {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        pi: Vec<u64>,
        #[arg(long)]
        truncate: Option<String>,
        #[arg(long, value_enum)]
        cascade: Option<CascadeKind>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CascadeKind {
    Lie,
    Sporadic,
}

#[derive(Debug, Subcommand)]
enum SporadicCmd {
    Show {
        name: String,
        /// The Aut(S) row.
        #[arg(long)]
        aut: bool,
    },
    Validate,
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    Appendix {
        #[arg(long, value_enum, default_value_t = VariantChoice::Both)]
        variant: VariantChoice,
        /// Also run the S8 overgroup cross-check.
        #[arg(long)]
        s8: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantChoice {
    Ordinary,
    TwistedPairs,
    Both,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Sporadic(#[from] SporadicError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("write failed: {0}")]
    Output(#[from] io::Error),
}

impl From<ComparisonError> for CliError {
    fn from(e: ComparisonError) -> Self {
        match e {
            ComparisonError::Perm(e) => e.into(),
            ComparisonError::Lie(e) => e.into(),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Perm(PermError::CapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn read_series(path: &Path) -> Result<FiniteDirichletSeries, CliError> {
    Ok(FiniteDirichletSeries::from_text(&read_input(path)?)?)
}

fn parse_integer(text: &str) -> Result<BigUint, CliError> {
    text.parse::<BigUint>()
        .or_else(|_| Factored::parse(text).map(|f| f.value()))
        .map_err(|_| CliError::Usage(format!("not an integer: {text:?}")))
}

fn write_series(out: &mut dyn Write, format: Format, s: &FiniteDirichletSeries) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{s}"),
        Format::Tsv => out.write_all(s.to_text().as_bytes()),
    }
}

fn caps() -> Result<Caps, CliError> {
    Ok(Caps::from_env()?)
}

fn normal_subgroup(g: &PermutationGroup, spec: &str) -> Result<Subgroup, CliError> {
    let (degree, gens) = if Path::new(spec).is_file() {
        perm::parse_group_file(&read_input(Path::new(spec))?)?
    } else {
        perm::preset(spec)?
    };
    if degree != g.degree() {
        return Err(CliError::Usage(format!(
            "{spec} has degree {degree}, the group has degree {}",
            g.degree()
        )));
    }
    Ok(g.subgroup_from_perms(&gens)?)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Series(SeriesCmd::Lie { descriptor, r, pi, trace }) => {
            let tokens: Vec<&str> = descriptor.iter().map(String::as_str).collect();
            let form = LieForm::from_tokens(&tokens)?;
            let (s, tr) = lie::series_from_form(&form)?;
            if *trace {
                writeln!(out, "# {form}")?;
                writeln!(out, "# T_W = {}", tr.t_w)?;
                for row in &tr.rows {
                    writeln!(
                        out,
                        "# J={} |J|={} T_J={} index={} coefficient={}",
                        row.subset, row.size, row.t_value, row.index, row.coefficient
                    )?;
                }
            }
            write_series(out, fmt, &lie::lift(&s, *r).pi_part(pi))?;
        }
        Command::Series(SeriesCmd::Abelian { fields, pi }) => {
            let profile = Profile::parse(&format!("abelian {}", fields.join(" ")))?;
            let fs = profinite::factor_series(&profile.factors[0], pi)?;
            write_series(out, fmt, &fs.series)?;
        }
        Command::Ring(cmd) => match cmd {
            RingCmd::Mul { a, b } => write_series(out, fmt, &(&read_series(a)? * &read_series(b)?))?,
            RingCmd::Divide { a, b } => write_series(out, fmt, &read_series(a)?.divide(&read_series(b)?)?)?,
            RingCmd::Pipart { a, primes } => write_series(out, fmt, &read_series(a)?.pi_part(primes))?,
            RingCmd::Substitute { a, r } => write_series(out, fmt, &read_series(a)?.substitute(*r))?,
            RingCmd::Eval { a, t } => writeln!(out, "{}", read_series(a)?.evaluate(*t))?,
        },
        Command::Zsigmondy { a, n } => {
            let z = arith::zsigmondy_set(*a, *n)?;
            for p in &z.primes {
                writeln!(out, "{p}")?;
            }
            writeln!(out, "exception {}", if z.is_exception { "yes" } else { "no" })?;
        }
        Command::Zetap { p, m } => {
            writeln!(out, "{}", arith::zeta_p(*p, &parse_integer(m)?)?)?;
        }
        Command::Oracle(cmd) => return oracle(cmd, fmt, out),
        Command::Profile(ProfileCmd::Analyze { file, pi, truncate, cascade }) => {
            let profile = Profile::parse(&read_input(file)?)?;
            let labels: Vec<String> = profile.factors.iter().map(ToString::to_string).collect();
            for (i, f) in profile.factors.iter().enumerate() {
                writeln!(out, "factor {i}: {}", labels[i])?;
                match profinite::factor_series(f, pi) {
                    Ok(fs) => {
                        let tag = if fs.partial { " (partial)" } else { "" };
                        writeln!(out, "  series{tag}: {}", fs.series)?;
                    }
                    Err(e @ ProfileError::PiMissingCharacteristic { .. }) => {
                        writeln!(out, "  series: unavailable ({e})")?;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if let Some(n) = truncate {
                let bound = parse_integer(n)?;
                let s = profinite::truncated_pg(&profile, pi, &bound)?;
                writeln!(out, "truncated product (n <= {bound}):")?;
                write_series(out, fmt, &s)?;
            }
            match cascade {
                Some(CascadeKind::Lie) => write!(out, "{}", profinite::lie_cascade(&profile)?)?,
                Some(CascadeKind::Sporadic) => write!(out, "{}", profinite::sporadic_cascade(&profile)?)?,
                None => write!(out, "{}", profinite::sml_check(&profile.r_values()))?,
            }
        }
        Command::Sporadic(SporadicCmd::Show { name, aut }) => {
            let rec = sporadic::lookup(name, *aut)?;
            write!(out, "{rec}")?;
        }
        Command::Sporadic(SporadicCmd::Validate) => {
            let rep = sporadic::validate_tables();
            write!(out, "{rep}")?;
            if !rep.passed() {
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::Verify(VerifyCmd::Appendix { variant, s8 }) => {
            let variants = match variant {
                VariantChoice::Ordinary => vec![VariantSpec::Ordinary],
                VariantChoice::TwistedPairs => vec![VariantSpec::TwistedPairs],
                VariantChoice::Both => vec![VariantSpec::Ordinary, VariantSpec::TwistedPairs],
            };
            let rep = appendix::verify(&variants)?;
            write!(out, "{rep}")?;
            if *s8 {
                write!(out, "{}", appendix::s8_comparison(caps()?)?)?;
            }
            if !rep.all_match() {
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(EXIT_OK)
}

fn oracle(cmd: &OracleCmd, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let caps = caps()?;
    match cmd {
        OracleCmd::Lattice { g, pi } => {
            let g = perm::load_group(&g.group, caps)?;
            let lattice = g.all_subgroups()?;
            let mu = lattice.mobius();
            writeln!(out, "order {}", g.order())?;
            writeln!(out, "subgroups {}", lattice.len())?;
            writeln!(out, "maximal {}", lattice.maximal().len())?;
            let mut by_order: std::collections::BTreeMap<usize, (usize, i64)> = Default::default();
            for (h, m) in lattice.subgroups.iter().zip(&mu.values) {
                let e = by_order.entry(h.order()).or_default();
                e.0 += 1;
                e.1 += m;
            }
            for (order, (count, sum)) in by_order.iter().rev() {
                writeln!(out, "  order {order}: {count} subgroups, mobius sum {sum}")?;
            }
            write_series(out, fmt, &g.pg_series()?.pi_part(pi))?;
        }
        OracleCmd::Hall { g, t } => {
            let g = perm::load_group(&g.group, caps)?;
            let series = g.pg_series()?;
            let mut ok = true;
            for &t in t {
                let lhs = series.evaluate(t);
                let rhs = g.generation_probability(t)?;
                let verdict = if lhs == rhs { "equal" } else { "DIFFER" };
                ok &= lhs == rhs;
                writeln!(out, "t={t} P_G(t)={lhs} probability={rhs} {verdict}")?;
            }
            if !ok {
                return Ok(EXIT_MISMATCH);
            }
        }
        OracleCmd::Supplement { g, normal } => {
            let g = perm::load_group(&g.group, caps)?;
            let s = normal_subgroup(&g, normal)?;
            write_series(out, fmt, &g.supplement_series(&s)?)?;
        }
        OracleCmd::SylowOvergroups { g, normal } => {
            let g = perm::load_group(&g.group, caps)?;
            let s = normal_subgroup(&g, normal)?;
            let odd = g.odd_supplement_series(&s)?;
            writeln!(out, "normalizer of Sylow 2-subgroup: order {}", odd.normalizer_order)?;
            for row in &odd.interval {
                writeln!(
                    out,
                    "  order {} index {} mobius {} weight {} supplement {}",
                    row.order,
                    row.index,
                    row.mobius,
                    row.class_size,
                    if row.supplements { "yes" } else { "no" }
                )?;
            }
            write_series(out, fmt, &odd.series)?;
        }
    }
    Ok(EXIT_OK)
}
