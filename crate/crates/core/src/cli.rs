//! The `lrc-avail` command line.
//!
//! Exit codes: 0 on success, 1 for invalid input or a failed check, 2 for an
//! ambiguous erasure pattern.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    certify_structural, check_block_decomposition, check_row_dependency, minimum_distance, profile,
    rate_table, rate_table_csv, CodeProfile,
};
use crate::codec::{encode, ge_decode, peel_decode, CodecError, ReceivedWord};
use crate::combinatorics::choose;
use crate::constructions::{
    build_h, design_check, direct_product_parity, simplex_generator, CodeFamily, CodeParams,
    LinearCode,
};
use crate::gf2::{BitMatrix, BitVector};
use crate::sim::{run_experiment, CodeInstance, ExperimentConfig, Workload};

/// Directory used for outputs when `--out` is not given.
pub const OUT_DIR_ENV: &str = "LRC_AVAIL_OUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_AMBIGUOUS: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lrc-avail",
    version,
    about = "Binary codes with locality r and availability t"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Construction,
    Product,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WorkloadArg {
    Repair,
    HotRead,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "construction")]
    pub family: Family,
    /// Locality (construction, product).
    #[arg(short = 'r', long)]
    pub r: Option<usize>,
    /// Availability (construction, product).
    #[arg(short = 't', long)]
    pub t: Option<usize>,
    /// Simplex order.
    #[arg(short = 'm', long)]
    pub m: Option<usize>,
}

impl FamilyArgs {
    fn resolve(&self) -> Result<CodeFamily, String> {
        let rt = || match (self.r, self.t, self.m) {
            (Some(r), Some(t), None) if r >= 1 && t >= 1 => Ok((r, t)),
            (_, _, Some(_)) => Err("-m applies only to --family simplex".to_string()),
            _ => Err("need -r and -t, both at least 1".to_string()),
        };
        match self.family {
            Family::Construction => rt().map(|(r, t)| CodeFamily::Construction { r, t }),
            Family::Product => rt().map(|(r, t)| CodeFamily::DirectProduct { r, t }),
            Family::Simplex => match (self.r, self.t, self.m) {
                (None, None, Some(m)) if m >= 2 => Ok(CodeFamily::Simplex { m }),
                (None, None, Some(m)) => Err(format!("simplex order must be at least 2, got {m}")),
                _ => Err("--family simplex takes -m only".to_string()),
            },
        }
    }

    fn tag(&self) -> Result<String, String> {
        Ok(match self.resolve()? {
            CodeFamily::Construction { r, t } => format!("construction_r{r}_t{t}"),
            CodeFamily::DirectProduct { r, t } => format!("product_r{r}_t{t}"),
            CodeFamily::Simplex { m } => format!("simplex_m{m}"),
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a parity-check (or simplex generator) matrix in text form.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Emit the full redundant H(r+t, t) instead of the reduced parity check.
        #[arg(long)]
        full: bool,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Run every structural check for the construction with (r, t).
    Verify {
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(short = 't', long)]
        t: usize,
        /// Check this matrix file instead of the built H(r+t, t).
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Measure (n, k, d), certify (r, t) and evaluate the bounds, as CSV.
    Profile {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Rate comparison table for t = 1..=t_max, as CSV.
    Rates {
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long = "t-max")]
        t_max: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Encode a message, or decode a word over {0,1,?}.
    Roundtrip {
        #[command(flatten)]
        family: FamilyArgs,
        /// Message bits (length k).
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        message: Option<String>,
        /// Received word, `?` for erasures (length n).
        #[arg(long)]
        word: Option<String>,
    },
    /// Seeded repair or hot-read experiment, as CSV.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Failure counts: `a..b` (inclusive), `a..=b`, or a comma list.
        #[arg(long, default_value = "0..2")]
        failures: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "repair")]
        workload: WorkloadArg,
        /// Coordinate whose read fan-out is measured.
        #[arg(long, default_value_t = 0)]
        hot: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

/// Parses `a..b`, `a..=b`, or `a,b,c`.
pub fn parse_failures(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad failure count {s:?}: {e}"))
    };
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {text:?}"));
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

enum Failure {
    Invalid(String),
    Checks,
    Ambiguous(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Invalid(s)
    }
}

fn emit(
    io: &mut Io<'_>,
    out: Option<&Path>,
    default_name: &str,
    content: &str,
) -> Result<(), Failure> {
    let target = match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name)),
    };
    match target {
        Some(path) => {
            fs::write(&path, content)
                .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(io.err, "wrote {}", path.display());
        }
        None => {
            let _ = io.out.write_all(content.as_bytes());
        }
    }
    Ok(())
}

fn cmd_gen(
    io: &mut Io<'_>,
    family: &FamilyArgs,
    full: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let matrix = match family.resolve()? {
        CodeFamily::Construction { r, t } if full => {
            build_h(r + t, t).map_err(|e| e.to_string())?
        }
        CodeFamily::Construction { r, t } => crate::constructions::build_reduced_parity(r, t)
            .map_err(|e| e.to_string())?
            .parity()
            .clone(),
        CodeFamily::DirectProduct { r, t } => {
            direct_product_parity(r, t).map_err(|e| e.to_string())?
        }
        CodeFamily::Simplex { m } => simplex_generator(m).map_err(|e| e.to_string())?.matrix,
    };
    let suffix = if full { "_full" } else { "" };
    emit(
        io,
        out,
        &format!("{}{suffix}.txt", family.tag()?),
        &matrix.to_string(),
    )
}

fn cmd_verify(io: &mut Io<'_>, r: usize, t: usize, matrix: Option<&Path>) -> Result<(), Failure> {
    let params = CodeParams::new(r, t).map_err(|e| e.to_string())?;
    let m = params.m;
    let h = match matrix {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            text.parse::<BitMatrix>()
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => build_h(m, t).map_err(|e| e.to_string())?,
    };
    let shape_ok = h.rows() == choose(m, t - 1) && h.cols() == params.n;
    let mut checks: Vec<(&str, bool, String)> = Vec::new();
    checks.push((
        "shape",
        shape_ok,
        format!(
            "{}x{}, expected {}x{}",
            h.rows(),
            h.cols(),
            choose(m, t - 1),
            params.n
        ),
    ));

    let block = if t > 1 {
        check_block_decomposition(&h, m, t).map_err(|e| e.to_string())?
    } else {
        // H(m, 1) is a single all-ones row with no block split.
        h == BitMatrix::ones(1, m)
    };
    let dependency = check_row_dependency(&h, m, t).map_err(|e| e.to_string())?;
    checks.push(("block_form", block, String::new()));
    let rank = h.rank();
    let expected_rank = choose(m - 1, t - 1);
    checks.push((
        "rank",
        rank == expected_rank,
        format!("{rank}, expected {expected_rank}"),
    ));
    checks.push(("row_dependency", dependency, String::new()));

    let design = design_check(&h, t, r + 1, 1);
    checks.push((
        "design",
        design.passed,
        format!(
            "1-({}, {}, {}) max intersection {}",
            params.n,
            r + 1,
            t,
            design.max_intersection
        ),
    ));

    let code = LinearCode::from_parity(h.clone());
    let cert_ok = shape_ok
        && certify_structural(m, t)
            .and_then(|c| c.validate(&code))
            .is_ok();
    checks.push((
        "certificate",
        cert_ok,
        format!("{t} disjoint groups of size {r}"),
    ));

    let (d_ok, d_detail) = match minimum_distance(&code) {
        Ok(d) => (d == t + 1, format!("d={d}, expected {}", t + 1)),
        Err(e) => (false, e.to_string()),
    };
    checks.push(("distance", d_ok, d_detail));

    let _ = writeln!(
        io.out,
        "# verify r={r} t={t} m={m} n={} k={}",
        params.n, params.k
    );
    for (name, ok, detail) in &checks {
        let status = if *ok { "PASS" } else { "FAIL" };
        if detail.is_empty() {
            let _ = writeln!(io.out, "{status} {name}");
        } else {
            let _ = writeln!(io.out, "{status} {name} ({detail})");
        }
    }
    let _ = write!(io.out, "{design}");
    if checks.iter().all(|(_, ok, _)| *ok) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_profile(io: &mut Io<'_>, family: &FamilyArgs, out: Option<&Path>) -> Result<(), Failure> {
    let fam = family.resolve()?;
    let code = fam.build().map_err(|e| e.to_string())?;
    let p = profile(&code, fam.locality(), fam.availability()).map_err(|e| e.to_string())?;
    let content = format!(
        "# profile {fam}\nfamily,{}\n{},{}\n",
        CodeProfile::CSV_HEADER,
        fam.name(),
        p.csv_row()
    );
    emit(io, out, &format!("profile_{}.csv", family.tag()?), &content)
}

fn cmd_rates(io: &mut Io<'_>, r: usize, t_max: usize, out: Option<&Path>) -> Result<(), Failure> {
    let rows = rate_table(r, t_max).map_err(|e| e.to_string())?;
    let content = format!("# rates r={r} t_max={t_max}\n{}", rate_table_csv(&rows));
    emit(io, out, &format!("rates_r{r}_t{t_max}.csv"), &content)
}

fn cmd_roundtrip(
    io: &mut Io<'_>,
    family: &FamilyArgs,
    message: Option<&str>,
    word: Option<&str>,
) -> Result<(), Failure> {
    let inst = CodeInstance::new(family.resolve()?).map_err(|e| e.to_string())?;
    let n = inst.code.n();
    if let Some(msg) = message {
        let msg: BitVector = msg.parse().map_err(|e| format!("message: {e}"))?;
        let codeword = encode(&inst.generator.matrix, &msg).map_err(|e| e.to_string())?;
        let _ = writeln!(io.out, "codeword={codeword}");
        return Ok(());
    }
    let text = word.ok_or_else(|| Failure::Invalid("need --message or --word".into()))?;
    let received: ReceivedWord = text.parse().map_err(|e: CodecError| e.to_string())?;
    if received.len() != n {
        return Err(Failure::Invalid(format!(
            "word has length {}, code length is {n}",
            received.len()
        )));
    }
    let _ = writeln!(io.out, "erased={:?}", received.erased_positions());
    let outcome = peel_decode(&inst.certificate, &received);
    for step in &outcome.steps {
        let group: Vec<String> = step.group.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            io.out,
            "round={} coordinate={} group={} value={}",
            step.round,
            step.coordinate,
            group.join(","),
            u8::from(step.value)
        );
    }
    let _ = writeln!(io.out, "rounds={}", outcome.rounds);
    if let Some(c) = outcome.word.to_codeword() {
        if !inst
            .code
            .parity()
            .mat_vec_mul(&c)
            .map_err(|e| e.to_string())?
            .is_zero()
        {
            return Err(Failure::Invalid(
                "received values violate the parity checks".into(),
            ));
        }
        let _ = writeln!(io.out, "decoder=peel");
        let _ = writeln!(io.out, "codeword={c}");
        return Ok(());
    }
    let _ = writeln!(io.out, "peeled={}", outcome.word);
    match ge_decode(&inst.code, &received) {
        Ok(c) => {
            let _ = writeln!(io.out, "decoder=ge");
            let _ = writeln!(io.out, "codeword={c}");
            Ok(())
        }
        Err(e @ CodecError::Ambiguous { .. }) => Err(Failure::Ambiguous(e.to_string())),
        Err(e) => Err(Failure::Invalid(e.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    io: &mut Io<'_>,
    family: &FamilyArgs,
    failures: &str,
    trials: usize,
    seed: u64,
    workload: WorkloadArg,
    hot: usize,
    jobs: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let workload = match workload {
        WorkloadArg::Repair => Workload::Repair,
        WorkloadArg::HotRead => Workload::HotRead,
    };
    let cfg = ExperimentConfig {
        family: family.resolve()?,
        trials,
        failure_counts: parse_failures(failures)?,
        seed,
        workload,
        hot_coordinate: hot,
        jobs,
    };
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let _ = write!(io.err, "{}", report.summary());
    let name = format!(
        "simulate_{}_{}_seed{seed}.csv",
        family.tag()?,
        workload.name()
    );
    emit(io, out, &name, &report.to_csv())
}

fn dispatch(io: &mut Io<'_>, cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen { family, full, out } => cmd_gen(io, family, *full, out.as_deref()),
        Command::Verify { r, t, matrix } => cmd_verify(io, *r, *t, matrix.as_deref()),
        Command::Profile { family, out } => cmd_profile(io, family, out.as_deref()),
        Command::Rates { r, t_max, out } => cmd_rates(io, *r, *t_max, out.as_deref()),
        Command::Roundtrip {
            family,
            message,
            word,
        } => cmd_roundtrip(io, family, message.as_deref(), word.as_deref()),
        Command::Simulate {
            family,
            failures,
            trials,
            seed,
            workload,
            hot,
            jobs,
            out,
        } => cmd_simulate(
            io,
            family,
            failures,
            *trials,
            *seed,
            *workload,
            *hot,
            *jobs,
            out.as_deref(),
        ),
    }
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_FAILURE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut io = Io { out, err };
    match dispatch(&mut io, &cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Checks) => {
            let _ = writeln!(io.err, "verification failed");
            EXIT_FAILURE
        }
        Err(Failure::Ambiguous(msg)) => {
            let _ = writeln!(io.err, "ambiguous: {msg}");
            EXIT_AMBIGUOUS
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
