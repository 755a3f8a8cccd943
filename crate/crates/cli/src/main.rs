mod analyze;
mod enumerate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sawbox::io::{atomic_write, ingest, write_series_file, Format, Report, SeriesFile};
use sawbox::verify::{self, Level};

#[derive(Parser)]
#[command(
    name = "sawbox",
    version,
    about = "Self-avoiding walks and polygons in a square"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Count walks or polygons of one class for L = min..max.
    Enumerate(enumerate::EnumerateArgs),
    /// Normalise a b-file, coefficient table or series file.
    Ingest(IngestArgs),
    /// Run an analysis pipeline on a series.
    Analyze(analyze::AnalyzeArgs),
    /// Extend a series with differential approximants.
    Extend(analyze::ExtendArgs),
    /// Run the built-in consistency checks.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct IngestArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Added to b-file indices to obtain L.
    #[arg(long = "index-shift", default_value_t = 0, allow_hyphen_values = true)]
    index_shift: i64,
    #[arg(long)]
    name: Option<String>,
    /// Compare the first terms with the oracle for this class.
    #[arg(long = "check-class", value_enum)]
    check_class: Option<enumerate::ClassArg>,
    #[arg(long = "check-max-L", default_value_t = 3)]
    check_max_l: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Bfile,
    Table,
    Seriesfile,
}

impl FormatArg {
    fn format(self) -> Format {
        match self {
            FormatArg::Bfile => Format::BFile,
            FormatArg::Table => Format::Table,
            FormatArg::Seriesfile => Format::SeriesFile,
        }
    }
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: LevelArg,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum LevelArg {
    Quick,
    Full,
}

type Fallible<T = ()> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: &Command) -> Fallible<ExitCode> {
    let job = serde_json::to_value(cmd)?;
    match cmd {
        Command::Enumerate(a) => enumerate::run(a, job)?,
        Command::Ingest(a) => ingest_cmd(a, job)?,
        Command::Analyze(a) => analyze::run_analyze(a, job)?,
        Command::Extend(a) => analyze::run_extend(a, job)?,
        Command::Verify(a) => return verify_cmd(a),
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes `text` to `path`, or to stdout without a path.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Fallible {
    match path {
        Some(p) => atomic_write(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

/// `dir/stem.suffix` next to `path`.
pub(crate) fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub(crate) fn new_report(job: serde_json::Value, inputs: &[&Path]) -> Fallible<Report> {
    let mut r = Report::new(job);
    for p in inputs {
        r.add_input(p)?;
    }
    Ok(r)
}

fn ingest_cmd(a: &IngestArgs, job: serde_json::Value) -> Fallible {
    let mut s = ingest(&a.input, a.format.map(FormatArg::format), a.index_shift)?;
    if let Some(n) = &a.name {
        s.name = n.clone();
    }
    if let Some(class) = a.check_class {
        enumerate::check_against_oracle(&s, class, a.check_max_l)?;
    }
    let report = new_report(job, &[a.input.as_path()])?;
    let file = SeriesFile::new(s)
        .with("source", a.input.display())
        .with("source_sha256", &report.inputs[0].sha256);
    let approx = file.series.len() - file.series.exact_count();
    eprintln!(
        "{}: {} terms ({} exact, {} approximate)",
        file.series.name,
        file.series.len(),
        file.series.exact_count(),
        approx
    );
    emit(a.output.as_deref(), &write_series_file(&file))
}

fn verify_cmd(a: &VerifyArgs) -> Fallible<ExitCode> {
    let level = match a.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let claims = verify::run(level)?;
    let mut failed = 0;
    for c in &claims {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        failed += usize::from(!c.passed);
    }
    println!("{} claims, {failed} failed", claims.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
