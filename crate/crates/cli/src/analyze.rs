use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sawbox::analysis::pipeline::extend as extend_pipeline;
use sawbox::analysis::{
    run_pipeline, EnsembleConfig, ExtendMode, Extrapolation, Pipeline, PipelineOptions, Precision,
    Series, DEFAULT_DIGITS, DEFAULT_LAMBDA,
};
use sawbox::io::{atomic_write, ingest, write_series_file, SeriesFile};

use crate::{emit, new_report, sibling, Fallible};

#[derive(Args, Serialize, Clone)]
pub struct NumericArgs {
    /// Working precision in significant decimal digits.
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub precision: u32,
    #[arg(long, default_value = DEFAULT_LAMBDA)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Used to fix b = log(alpha)/log(lambda) when --b is absent.
    #[arg(long, default_value = sawbox::analysis::pipeline::DEFAULT_ALPHA)]
    pub alpha: String,
    #[arg(long = "ensemble-orders", value_delimiter = ',', default_values_t = [2usize, 3])]
    pub ensemble_orders: Vec<usize>,
    #[arg(long = "ensemble-degrees", value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4])]
    pub ensemble_degrees: Vec<usize>,
    #[arg(long = "spare-terms", value_delimiter = ',', default_values_t = [0usize, 1, 2])]
    pub spare_terms: Vec<usize>,
    #[arg(long, value_enum, default_value = "ratios")]
    pub mode: ModeArg,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Ratios,
    Coefficients,
}

#[derive(Args, Serialize)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub pipeline: PipelineArg,
    /// Denominator series of the hadamard pipeline.
    #[arg(long)]
    pub second: Option<PathBuf>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long = "fit-degree")]
    pub fit_degree: Option<usize>,
    #[arg(long = "abscissa-power")]
    pub abscissa_power: Option<u32>,
    /// Least-squares extrapolation over this many trailing estimates
    /// instead of the two-point line.
    #[arg(long = "tail")]
    pub tail: Option<usize>,
    /// Terms added by the extend pipeline.
    #[arg(long, default_value_t = 10)]
    pub terms: usize,
    /// Report path; CSV tables and series are written next to it.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct ExtendArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub terms: usize,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Extended series file.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineArg {
    LambdaFits,
    RatioOfRatios,
    DPipeline,
    Hadamard,
    Da,
    Extend,
}

impl PipelineArg {
    fn pipeline(self) -> Pipeline {
        match self {
            PipelineArg::LambdaFits => Pipeline::LambdaFits,
            PipelineArg::RatioOfRatios => Pipeline::RatioOfRatios,
            PipelineArg::DPipeline => Pipeline::DPipeline,
            PipelineArg::Hadamard => Pipeline::Hadamard,
            PipelineArg::Da => Pipeline::Da,
            PipelineArg::Extend => Pipeline::Extend,
        }
    }
}

fn options(n: &NumericArgs) -> Fallible<PipelineOptions> {
    let prec = Precision::digits(n.precision);
    let mut o = PipelineOptions::new(prec);
    o.lambda = prec.parse(&n.lambda)?;
    o.alpha = prec.parse(&n.alpha)?;
    o.b = n.b.as_deref().map(|v| prec.parse(v)).transpose()?;
    o.g = n.g.as_deref().map(|v| prec.parse(v)).transpose()?;
    o.ensemble = EnsembleConfig {
        orders: n.ensemble_orders.clone(),
        inhomogeneous_degrees: n.ensemble_degrees.clone(),
        spare_terms: n.spare_terms.clone(),
        mode: match n.mode {
            ModeArg::Ratios => ExtendMode::Ratios,
            ModeArg::Coefficients => ExtendMode::Coefficients,
        },
        precision: prec,
        ..EnsembleConfig::default()
    };
    Ok(o)
}

fn load(path: &Path) -> Fallible<Series> {
    ingest(path, None, 0).map_err(|e| format!("{}: {e}", path.display()).into())
}

pub fn run_analyze(a: &AnalyzeArgs, job: serde_json::Value) -> Fallible {
    let mut opts = options(&a.numeric)?;
    opts.fit_degree = a.fit_degree;
    opts.abscissa_power = a.abscissa_power;
    opts.extend_terms = a.terms;
    if let Some(tail) = a.tail {
        opts.extrapolation = Extrapolation::LeastSquares { tail };
    }
    let s = load(&a.input)?;
    let second = a.second.as_deref().map(load).transpose()?;
    let out = run_pipeline(a.pipeline.pipeline(), &s, second.as_ref(), &opts).map_err(|e| {
        format!(
            "{} pipeline on {}: {e}",
            a.pipeline.pipeline().tag(),
            s.name
        )
    })?;

    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.second.as_deref());
    let mut report = new_report(job, &inputs)?;
    report.results = out.to_json(opts.precision.decimal_digits());
    if let Some(path) = &a.output {
        for (name, csv) in &out.tables {
            atomic_write(&sibling(path, &format!("{name}.csv")), csv.as_bytes())?;
        }
        if let Some(series) = &out.series {
            let file = SeriesFile::new(series.clone()).with("pipeline", out.pipeline.tag());
            atomic_write(
                &sibling(path, "series"),
                write_series_file(&file).as_bytes(),
            )?;
        }
    }
    emit(a.output.as_deref(), &report.to_pretty_json())
}

pub fn run_extend(a: &ExtendArgs, job: serde_json::Value) -> Fallible {
    let mut opts = options(&a.numeric)?;
    opts.extend_terms = a.terms;
    let s = load(&a.input)?;
    let out = extend_pipeline(&s, &opts)?;
    let series = out.series.clone().expect("extension series");
    let file = SeriesFile::new(series)
        .with("pipeline", "extend")
        .with("precision", opts.precision.decimal_digits());
    emit(a.output.as_deref(), &write_series_file(&file))?;
    if let Some(path) = &a.report {
        let mut report = new_report(job, &[a.input.as_path()])?;
        report.results = json!(out.to_json(opts.precision.decimal_digits()));
        atomic_write(path, report.to_pretty_json().as_bytes())?;
    }
    Ok(())
}
