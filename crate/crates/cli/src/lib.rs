//! Command-line front end: set listings, zero-sum checks, exact constants,
//! verification reports and prediction tables.
//!
//! Exit codes: `0` success, `2` usage error, `3` undetermined constant,
//! `4` verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use zswc_core::engine::{self, Mode, Sequence, WeightSet};
use zswc_core::search::{
    self, ConstantKind, ConstantQuery, ConstantValue, SearchConfig, UndeterminedReason,
    DEFAULT_NODE_BUDGET, NODE_BUDGET_ENV,
};
use zswc_core::sets::{self, ResidueSet};
use zswc_core::theory::{self, Effort, Status, VerifyConfig};
use zswc_core::Modulus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "zswc",
    version,
    about = "Weighted zero-sum constants over Z_n with square weights"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List a weight set and cross-check its size against the closed form.
    Sets(SetsArgs),
    /// Decide whether a sequence has a weighted zero-sum subsequence.
    Check(CheckArgs),
    /// Compute D_A(n) or C_A(n) by exhaustive search.
    Constant(ConstantArgs),
    /// Check predictions, constructions and lemmas for a range of moduli.
    Verify(VerifyArgs),
    /// Print the predicted constants for a range of moduli.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    NonzeroSquares,
    Squares,
    UnitSquares,
    Units,
    #[value(name = "q-p")]
    QP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    #[value(alias = "davenport")]
    Subsequence,
    Consecutive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantMode {
    #[value(alias = "subsequence")]
    Davenport,
    Consecutive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EffortArg {
    Fast,
    Full,
}

/// Weights: a custom comma list, or a named family (default: nonzero squares).
#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Custom weights, e.g. `1,4,7`; reduced mod n.
    #[arg(long, value_delimiter = ',', conflicts_with = "family")]
    pub weights: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Worker threads; 1 gives reproducible node counts.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Node budget per search.
    #[arg(long, env = NODE_BUDGET_ENV)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SetsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "nonzero-squares")]
    pub family: Family,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub n: u64,
    /// Sequence terms in [0, n-1], e.g. `1,1,3,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seq: Vec<u64>,
    #[arg(long, value_enum, default_value = "subsequence")]
    pub mode: CheckMode,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "davenport")]
    pub mode: ConstantMode,
    /// Largest length to try (default n).
    #[arg(long)]
    pub cap: Option<u64>,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, conflicts_with_all = ["from", "to"])]
    pub n: Option<u64>,
    #[arg(long, requires = "to")]
    pub from: Option<u64>,
    #[arg(long, requires = "from")]
    pub to: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, value_enum, default_value = "fast")]
    pub effort: EffortArg,
    /// Write the JSON lines here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Output of `sets --format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetsOutput {
    pub n: u64,
    pub family: String,
    pub members: Vec<u64>,
    pub enumerated: u64,
    pub closed_form: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOutput {
    /// 1-based positions.
    pub indices: Vec<usize>,
    pub coefficients: Vec<u64>,
}

/// Output of `check --format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub n: u64,
    pub mode: String,
    pub sequence: Vec<u64>,
    pub zero_sum: bool,
    pub witness: Option<WitnessOutput>,
}

/// Output of `constant`. `value` is null when the search stopped early, in
/// which case `at_least` and `reason` say why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantOutput {
    pub n: u64,
    pub mode: String,
    pub value: Option<u64>,
    pub extremal: Option<Vec<u64>>,
    pub nodes: u64,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_least: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// One row of `table --format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u64,
    pub case: String,
    pub d: u64,
    pub c_lo: u64,
    pub c_hi: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
    Io(io::Error),
}

impl From<zswc_core::Error> for Failure {
    fn from(e: zswc_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Sets(a) => cmd_sets(&a, out),
        Command::Check(a) => cmd_check(&a, out),
        Command::Constant(a) => cmd_constant(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Table(a) => cmd_table(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::NonzeroSquares => "nonzero-squares",
        Family::Squares => "squares",
        Family::UnitSquares => "unit-squares",
        Family::Units => "units",
        Family::QP => "q-p",
    }
}

fn family_set(n: Modulus, f: Family) -> Result<(ResidueSet, u64), Failure> {
    Ok(match f {
        Family::NonzeroSquares => (sets::nonzero_squares(n)?, sets::size_nonzero_squares(n)?),
        Family::Squares => (sets::squares(n)?, sets::size_squares(n)?),
        Family::UnitSquares => (sets::unit_squares(n)?, sets::size_unit_squares(n)?),
        Family::Units => (sets::units(n)?, sets::size_units(n)?),
        Family::QP => (sets::q_p(n.get())?, sets::size_unit_squares(n)?),
    })
}

fn weight_set(n: Modulus, args: &WeightArgs) -> Result<WeightSet, Failure> {
    if let Some(values) = &args.weights {
        return Ok(WeightSet::custom(n, values)?);
    }
    match args.family.unwrap_or(Family::NonzeroSquares) {
        Family::Squares => Err(Failure::Usage(
            "weights must be nonzero; use nonzero-squares".into(),
        )),
        f => Ok(WeightSet::new(family_set(n, f)?.0)?),
    }
}

fn search_config(args: &SearchArgs) -> SearchConfig {
    let mut config =
        SearchConfig::default().with_budget(Some(args.budget.unwrap_or(DEFAULT_NODE_BUDGET)));
    if let Some(t) = args.threads {
        config = config.with_threads(t);
    }
    config
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_sets(a: &SetsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let n = Modulus::new(a.n)?;
    let (set, closed_form) = family_set(n, a.family)?;
    let members = set.to_vec();
    let enumerated = members.len() as u64;
    match a.format {
        Format::Json => {
            let o = SetsOutput {
                n: a.n,
                family: family_name(a.family).into(),
                members,
                enumerated,
                closed_form,
            };
            writeln!(out, "{}", serde_json::to_string(&o)?)?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "{{{}}}", join(&members))?;
            let rel = if enumerated == closed_form { "=" } else { "!=" };
            writeln!(out, "size {enumerated} {rel} {closed_form}")?;
        }
    }
    if enumerated != closed_form {
        return Err(Failure::Verification(format!(
            "enumerated {enumerated}, closed form {closed_form}"
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let n = Modulus::new(a.n)?;
    if let Some(&t) = a.seq.iter().find(|&&t| t >= a.n) {
        return Err(Failure::Usage(format!(
            "term {t} is not in [0, {}]",
            a.n - 1
        )));
    }
    let weights = weight_set(n, &a.weights)?;
    let seq = Sequence::new(n, a.seq.clone())?;
    let mode = match a.mode {
        CheckMode::Subsequence => Mode::Subsequence,
        CheckMode::Consecutive => Mode::Consecutive,
    };
    let witness = engine::has_zero_sum(&seq, &weights, mode)?.map(|w| WitnessOutput {
        indices: w.one_based_indices(),
        coefficients: w.coefficients,
    });
    match a.format {
        Format::Json => {
            let o = CheckOutput {
                n: a.n,
                mode: mode_name(mode).into(),
                sequence: a.seq.clone(),
                zero_sum: witness.is_some(),
                witness,
            };
            writeln!(out, "{}", serde_json::to_string(&o)?)?;
        }
        Format::Text | Format::Csv => match witness {
            None => writeln!(out, "false")?,
            Some(w) => {
                writeln!(out, "true")?;
                let idx: Vec<u64> = w.indices.iter().map(|&i| i as u64).collect();
                writeln!(out, "indices [{}]", join(&idx))?;
                writeln!(out, "coefficients [{}]", join(&w.coefficients))?;
            }
        },
    }
    Ok(EXIT_OK)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Subsequence => "subsequence",
        Mode::Consecutive => "consecutive",
    }
}

fn cmd_constant(a: &ConstantArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let n = Modulus::new(a.n)?;
    let weights = weight_set(n, &a.weights)?;
    let kind = match a.mode {
        ConstantMode::Davenport => ConstantKind::Davenport,
        ConstantMode::Consecutive => ConstantKind::Consecutive,
    };
    let mut query = ConstantQuery::new(weights, kind);
    if let Some(cap) = a.cap {
        query = query.with_cap(cap)?;
    }
    let result = search::compute_constant(query, &search_config(&a.search))?;
    let (value, at_least, reason) = match result.value {
        ConstantValue::Exact(v) => (Some(v), None, None),
        ConstantValue::Undetermined { at_least, reason } => {
            let why = match reason {
                UndeterminedReason::CapReached => "cap-reached",
                UndeterminedReason::BudgetExhausted => "budget-exhausted",
            };
            (None, Some(at_least), Some(why.to_string()))
        }
    };
    let o = ConstantOutput {
        n: a.n,
        mode: match kind {
            ConstantKind::Davenport => "davenport",
            ConstantKind::Consecutive => "consecutive",
        }
        .into(),
        value,
        extremal: result.extremal.map(Sequence::into_terms),
        nodes: result.stats.nodes,
        millis: result.stats.elapsed.as_millis() as u64,
        at_least,
        reason,
    };
    writeln!(out, "{}", serde_json::to_string(&o)?)?;
    Ok(if value.is_some() {
        EXIT_OK
    } else {
        EXIT_UNDETERMINED
    })
}

fn range(r: &RangeArgs) -> Result<Vec<u64>, Failure> {
    let (from, to) = match (r.n, r.from, r.to) {
        (Some(n), _, _) => (n, n),
        (None, Some(from), Some(to)) => (from, to),
        _ => return Err(Failure::Usage("give --n or both --from and --to".into())),
    };
    if from < 2 || from > to {
        return Err(Failure::Usage(format!(
            "bad range [{from}, {to}]: need 2 <= from <= to"
        )));
    }
    Ok((from..=to).collect())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let moduli = range(&a.range)?;
    let effort = match a.effort {
        EffortArg::Fast => Effort::Fast,
        EffortArg::Full => Effort::Full,
    };
    let search = search_config(&a.search);
    let config = VerifyConfig {
        node_budget: search.node_budget.unwrap_or(DEFAULT_NODE_BUDGET),
        search,
    };
    let reports = theory::verify_many(&moduli, effort, &config);

    let mut file = match &a.out {
        Some(path) => Some(BufWriter::new(File::create(path)?)),
        None => None,
    };
    let (mut ok, mut skipped, mut failed) = (0, 0, 0);
    for (n, report) in reports {
        let record = match report {
            Ok(r) => r.record(),
            Err(e) => return Err(Failure::Usage(format!("n = {n}: {e}"))),
        };
        match record.status {
            Status::Ok => ok += 1,
            Status::Skip => skipped += 1,
            Status::Fail => failed += 1,
        }
        let line = serde_json::to_string(&record)?;
        match file.as_mut() {
            Some(f) => writeln!(f, "{line}")?,
            None => writeln!(out, "{line}")?,
        }
    }
    if let Some(mut f) = file {
        f.flush()?;
    }
    let summary = format!(
        "{ok}/{} verified, {skipped} skipped, {failed} failed",
        moduli.len()
    );
    // Keep stdout pure JSON lines when the reports go there.
    if a.out.is_some() {
        writeln!(out, "{summary}")?;
    } else {
        writeln!(err, "{summary}")?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let rows = range(&a.range)?
        .into_iter()
        .map(|n| {
            let p = theory::predicted_constants(n)?;
            Ok(TableRow {
                n,
                case: p.case.as_str().into(),
                d: p.d,
                c_lo: p.c.lo,
                c_hi: p.c.hi,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rows)?)?,
        Format::Csv | Format::Text => {
            writeln!(out, "n,case,d,c_lo,c_hi")?;
            for r in rows {
                writeln!(out, "{},{},{},{},{}", r.n, r.case, r.d, r.c_lo, r.c_hi)?;
            }
        }
    }
    Ok(EXIT_OK)
}
