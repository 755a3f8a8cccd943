//! Named end-to-end analyses: each turns one or two series into fit
//! reports, headline numbers and CSV tables.

use rayon::prelude::*;
use rug::ops::Pow;
use serde_json::{json, Value as Json};

use super::da::differential_approximant;
use super::extend::{ensemble_members, series_extend, EnsembleConfig, ExtendMode};
use super::fit::{
    fit_ratio_of_ratios, lambda_sensitivity, triple_fit_log_d, window_fit, Extrapolation,
    FitConfig, FitReport, RatioModel,
};
use super::transforms::{
    alpha_ratios, amplitude_sequence, b_from_alpha, hadamard_quotient, lambda_sequence,
    normalized_d, ratio_of_ratios,
};
use super::{
    format_float, BigFloat, Precision, Sequence, Series, DEFAULT_LAMBDA, LAMBDA_UNCERTAINTY,
};
use crate::error::{Error, Result};

/// Reference value of `alpha = lambda^b`, used to fix `b` for the amplitude fit.
pub const DEFAULT_ALPHA: &str = "0.97606";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    LambdaFits,
    RatioOfRatios,
    DPipeline,
    Hadamard,
    Da,
    Extend,
}

impl Pipeline {
    pub const ALL: [Pipeline; 6] = [
        Pipeline::LambdaFits,
        Pipeline::RatioOfRatios,
        Pipeline::DPipeline,
        Pipeline::Hadamard,
        Pipeline::Da,
        Pipeline::Extend,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Pipeline::LambdaFits => "lambda-fits",
            Pipeline::RatioOfRatios => "ratio-of-ratios",
            Pipeline::DPipeline => "d-pipeline",
            Pipeline::Hadamard => "hadamard",
            Pipeline::Da => "da",
            Pipeline::Extend => "extend",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.tag() == s)
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub precision: Precision,
    pub lambda: BigFloat,
    /// Fixed `b` for the amplitude fit; derived from `alpha` when absent.
    pub b: Option<BigFloat>,
    /// Fixed `g`; enables the amplitude fit of the d pipeline.
    pub g: Option<BigFloat>,
    pub alpha: BigFloat,
    /// Correction degree `k`; every default degree of the pipeline when absent.
    pub fit_degree: Option<usize>,
    /// Extrapolation abscissa `1/L^q`; pipeline default when absent.
    pub abscissa_power: Option<u32>,
    pub extrapolation: Extrapolation,
    pub ensemble: EnsembleConfig,
    /// Terms added by the extend pipeline.
    pub extend_terms: usize,
}

impl PipelineOptions {
    pub fn new(precision: Precision) -> Self {
        PipelineOptions {
            precision,
            lambda: precision.parse(DEFAULT_LAMBDA).expect("constant"),
            b: None,
            g: None,
            alpha: precision.parse(DEFAULT_ALPHA).expect("constant"),
            fit_degree: None,
            abscissa_power: None,
            extrapolation: Extrapolation::TwoPoint,
            ensemble: EnsembleConfig {
                precision,
                ..EnsembleConfig::default()
            },
            extend_terms: 10,
        }
    }

    fn fit(&self, default_power: u32) -> FitConfig {
        FitConfig {
            abscissa_power: self.abscissa_power.unwrap_or(default_power),
            extrapolation: self.extrapolation,
            precision: self.precision,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub pipeline: Pipeline,
    /// Headline numbers, e.g. intercepts and derived parameters.
    pub summary: Vec<(String, BigFloat)>,
    pub reports: Vec<FitReport>,
    /// `(name, csv)` tables, one per estimator plot.
    pub tables: Vec<(String, String)>,
    /// Series produced by the pipeline (quotient or extension).
    pub series: Option<Series>,
    pub details: Json,
}

impl PipelineOutput {
    fn new(pipeline: Pipeline) -> Self {
        PipelineOutput {
            pipeline,
            summary: Vec::new(),
            reports: Vec::new(),
            tables: Vec::new(),
            series: None,
            details: Json::Null,
        }
    }

    pub fn get(&self, name: &str) -> Option<&BigFloat> {
        self.summary.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn put(&mut self, name: impl Into<String>, v: BigFloat) {
        self.summary.push((name.into(), v));
    }

    fn add_report(&mut self, r: FitReport, digits: u32) {
        self.tables.push((r.method.clone(), r.to_csv(digits)));
        self.reports.push(r);
    }

    pub fn to_json(&self, digits: u32) -> Json {
        json!({
            "pipeline": self.pipeline.tag(),
            "summary": self.summary.iter()
                .map(|(n, v)| (n.clone(), Json::String(format_float(v, digits))))
                .collect::<serde_json::Map<_, _>>(),
            "reports": self.reports.iter().map(|r| r.to_json(digits)).collect::<Vec<_>>(),
            "details": self.details,
        })
    }
}

/// `L, 1/L^q, value` rows.
pub fn sequence_csv(name: &str, seq: &Sequence, q: u32, prec: Precision, digits: u32) -> String {
    let mut out = format!("L,inv_L_pow_{q},{name}\n");
    for (l, v) in seq {
        let x = prec.float(*l).pow(-(q as i32));
        out.push_str(&format!(
            "{l},{},{}\n",
            format_float(&x, digits),
            format_float(v, digits)
        ));
    }
    out
}

const CSV_DIGITS: u32 = 20;

pub fn run_pipeline(
    pipeline: Pipeline,
    s: &Series,
    second: Option<&Series>,
    opts: &PipelineOptions,
) -> Result<PipelineOutput> {
    match pipeline {
        Pipeline::LambdaFits => lambda_fits(s, opts),
        Pipeline::RatioOfRatios => ratio_fits(s, opts),
        Pipeline::DPipeline => d_pipeline(s, opts),
        Pipeline::Hadamard => {
            let s2 = second.ok_or_else(|| {
                Error::IncompleteInput("the hadamard pipeline needs a second series".into())
            })?;
            hadamard(s, s2, opts)
        }
        Pipeline::Da => da_ensemble(s, opts),
        Pipeline::Extend => extend(s, opts),
    }
}

/// Window fits of `lambda_L = C_L^(1/L^2)` with `k` corrections in `1/L`,
/// extrapolated against `1/L^2`.
pub fn lambda_fits(s: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let prec = opts.precision;
    let cfg = opts.fit(2);
    let seq = lambda_sequence(s, prec)?;
    let mut out = PipelineOutput::new(Pipeline::LambdaFits);
    out.tables.push((
        "lambda_L".into(),
        sequence_csv("lambda_L", &seq, cfg.abscissa_power, prec, CSV_DIGITS),
    ));
    let degrees = opts.fit_degree.map_or(vec![2, 3], |k| vec![k]);
    for k in degrees {
        let powers: Vec<u32> = (0..=k as u32).collect();
        let mut r = window_fit(&seq, &powers, cfg)?;
        r.method = format!("lambda-fit-k{k}");
        out.put(format!("lambda_k{k}"), r.intercepts[0].clone());
        out.add_report(r, CSV_DIGITS);
    }
    Ok(out)
}

/// Ratio of ratios, raw and fitted (quadratic `c0 + c2/L^2`, cubic
/// `c0 + c2/L^2 + c3/L^3`), extrapolated against `1/L^3`.
pub fn ratio_fits(s: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let prec = opts.precision;
    let cfg = opts.fit(3);
    let seq = ratio_of_ratios(s, prec)?;
    let mut out = PipelineOutput::new(Pipeline::RatioOfRatios);
    out.tables.push((
        "ratio_of_ratios".into(),
        sequence_csv("C_L", &seq, cfg.abscissa_power, prec, CSV_DIGITS),
    ));
    let mut raw = window_fit(&seq, &[0], cfg)?;
    raw.method = "ratio-of-ratios-raw".into();
    out.put("lambda2_raw", raw.intercepts[0].clone());
    out.add_report(raw, CSV_DIGITS);
    let models = match opts.fit_degree {
        None => vec![RatioModel::Quadratic, RatioModel::Cubic],
        Some(1) => vec![RatioModel::Quadratic],
        Some(2) => vec![RatioModel::Cubic],
        Some(k) => {
            return Err(Error::Domain(format!(
                "ratio-of-ratios supports fit degree 1 (quadratic) or 2 (cubic), got {k}"
            )))
        }
    };
    for m in models {
        let r = fit_ratio_of_ratios(&seq, m, cfg)?;
        let tag = match m {
            RatioModel::Quadratic => "quadratic",
            RatioModel::Cubic => "cubic",
        };
        out.put(format!("lambda2_{tag}"), r.intercepts[0].clone());
        out.put(
            format!("g_{tag}"),
            r.derived("g_from_intercepts").expect("set").clone(),
        );
        // -g lambda^2 is the c2 intercept
        out.put(format!("minus_g_lambda2_{tag}"), r.intercepts[1].clone());
        out.add_report(r, CSV_DIGITS);
    }
    Ok(out)
}

/// `d_L = C_L / lambda^(L^2)`: alpha ratios, the triple fit of `log d_L`,
/// its sensitivity to `lambda`, and with `g` fixed the amplitude
/// `lambda^c`.
pub fn d_pipeline(s: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let prec = opts.precision;
    let cfg = opts.fit(1);
    let lambda = &opts.lambda;
    let log_lambda = lambda.clone().ln();
    let d = normalized_d(s, lambda, prec)?;
    let mut out = PipelineOutput::new(Pipeline::DPipeline);

    let alpha = alpha_ratios(&d, prec)?;
    out.tables.push((
        "alpha_L".into(),
        sequence_csv("alpha_L", &alpha, 1, prec, CSV_DIGITS),
    ));
    if let Some((_, a)) = alpha.last() {
        out.put("alpha_last", a.clone());
    }

    let r = triple_fit_log_d(&d, cfg)?;
    let b_log = r.intercepts[0].clone();
    out.put("b_log_lambda", b_log.clone());
    out.put("c_log_lambda", r.intercepts[1].clone());
    out.put("g", r.intercepts[2].clone());
    out.put("b", b_log / &log_lambda);
    out.put("c", r.intercepts[1].clone() / &log_lambda);
    out.add_report(r, CSV_DIGITS);

    let delta = prec.parse(LAMBDA_UNCERTAINTY)?;
    let sens = lambda_sensitivity(s, lambda, &delta, cfg)?;
    for (name, v) in &sens[1].derived {
        if name.starts_with("drift_") {
            out.put(name.clone(), v.clone());
        }
    }

    if let Some(g) = &opts.g {
        let b = opts
            .b
            .clone()
            .unwrap_or_else(|| b_from_alpha(&opts.alpha, lambda, prec));
        let amp = amplitude_sequence(&d, lambda, &b, g, prec)?;
        let acfg = FitConfig {
            abscissa_power: 3,
            ..cfg
        };
        let mut r = window_fit(&amp, &[0], acfg)?;
        r.method = "amplitude".into();
        let lc = r.intercepts[0].clone();
        out.put("amplitude_b", b);
        out.put("lambda_c", lc.clone());
        out.put("c_from_amplitude", lc.ln() / &log_lambda);
        out.add_report(r, CSV_DIGITS);
    }
    Ok(out)
}

/// Termwise quotient `s1 / s2`, the ratio of its last two terms and a
/// differential-approximant estimate of its growth from the terms that
/// are quotients of exact counts.
pub fn hadamard(s1: &Series, s2: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let prec = opts.precision;
    let q = hadamard_quotient(s1, s2, prec)?;
    let seq = q.values(prec)?;
    let mut out = PipelineOutput::new(Pipeline::Hadamard);
    out.tables.push((
        "quotient".into(),
        sequence_csv("quotient", &seq, 1, prec, CSV_DIGITS),
    ));
    let exact = q.exact_part();
    if let Some(t) = exact.terms().last() {
        out.put(format!("quotient_{}", t.index), t.value.to_float(prec)?);
    }
    let (_, last) = seq.last().expect("nonempty quotient");
    out.put("quotient_last", last.clone());
    if seq.len() >= 2 {
        let prev = &seq[seq.len() - 2].1;
        out.put("final_ratio", BigFloat::with_val(prec.bits(), last / prev));
    }
    let exact_seq = exact.values(prec)?;
    if exact_seq.len() >= 2 {
        let n = exact_seq.len();
        out.put(
            "final_ratio_exact",
            BigFloat::with_val(prec.bits(), &exact_seq[n - 1].1 / &exact_seq[n - 2].1),
        );
    }
    // rounded tail terms are not fitted
    let fitted = if exact.len() >= 10 { &exact } else { &q };
    match da_ensemble(fitted, opts) {
        Ok(da) => {
            for (n, v) in da.summary {
                out.put(format!("da_{n}"), v);
            }
            out.details = json!({ "da": da.details, "da_terms": fitted.len() });
        }
        Err(e) => out.details = json!({ "da_error": e.to_string() }),
    }
    out.series = Some(q);
    Ok(out)
}

/// Differential approximants fitted to the coefficients themselves; the
/// physical singularity `x_c`, growth `mu = 1/x_c` and exponent are medians
/// over the ensemble members whose singularity lies near the overall median.
pub fn da_ensemble(s: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let prec = opts.precision;
    s.check_contiguous()?;
    let data: Vec<BigFloat> = s.values(prec)?.into_iter().map(|(_, v)| v).collect();
    let members = ensemble_members(&opts.ensemble, data.len());
    let found: Vec<(f64, f64, bool)> = members
        .par_iter()
        .filter_map(|m| {
            let da = differential_approximant(
                &data[..m.terms],
                m.order,
                &m.degrees,
                Some(m.inhomogeneous_degree),
                prec,
            )
            .ok()?;
            let sing = da.physical_singularity()?;
            Some((sing.location.re, sing.exponent.re, da.degenerate))
        })
        .collect();
    if found.is_empty() {
        return Err(Error::EnsembleTooSmall {
            kept: 0,
            required: opts.ensemble.min_kept,
            detail: "no approximant has a positive real singularity".into(),
        });
    }
    let mut xs: Vec<f64> = found.iter().map(|f| f.0).collect();
    let med = median(&mut xs);
    let near: Vec<&(f64, f64, bool)> = found
        .iter()
        .filter(|f| (f.0 / med - 1.0).abs() <= opts.ensemble.physical_window)
        .collect();
    let mut xs: Vec<f64> = near.iter().map(|f| f.0).collect();
    let mut es: Vec<f64> = near.iter().map(|f| f.1).collect();
    let xc = median(&mut xs);
    let exponent = median(&mut es);
    let mut out = PipelineOutput::new(Pipeline::Da);
    out.put("x_c", double(xc));
    out.put("x_c_spread", double(spread(&xs)));
    out.put("mu", double(1.0 / xc));
    out.put("exponent", double(exponent));
    out.put("exponent_spread", double(spread(&es)));
    out.details = json!({
        "members": members.len(),
        "with_singularity": found.len(),
        "kept": near.len(),
        "degenerate_kept": near.iter().filter(|f| f.2).count(),
    });
    Ok(out)
}

/// Ensemble series extension by `opts.extend_terms` terms.
pub fn extend(s: &Series, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let e = series_extend(s, opts.extend_terms, &opts.ensemble)?;
    let digits = opts.precision.decimal_digits();
    let mut out = PipelineOutput::new(Pipeline::Extend);
    let mut rows = String::from("L,value,spread\n");
    for (l, mean, sd) in &e.estimates {
        rows.push_str(&format!(
            "{l},{},{}\n",
            format_float(mean, CSV_DIGITS),
            format_float(sd, 3)
        ));
    }
    if let Some((l, mean, sd)) = e.estimates.first() {
        out.put(format!("term_{l}"), mean.clone());
        out.put(format!("spread_{l}"), sd.clone());
    }
    out.tables.push(("extension".into(), rows));
    out.details = json!({
        "mode": match opts.ensemble.mode {
            ExtendMode::Ratios => "ratios",
            ExtendMode::Coefficients => "coefficients",
        },
        "generated": e.generated,
        "kept": e.kept.len(),
        "degenerate_kept": e.degenerate_kept,
        "discarded": e.discarded.iter().map(|(why, n)| json!({"reason": why, "count": n}))
            .collect::<Vec<_>>(),
        "physical_singularity": e.physical_singularity,
        "estimates": e.estimates.iter().map(|(l, m, sd)| json!({
            "L": l, "value": format_float(m, digits), "spread": format_float(sd, 6),
        })).collect::<Vec<_>>(),
    });
    out.series = Some(e.series);
    Ok(out)
}

/// Values obtained in double precision are reported as such.
fn double(v: f64) -> BigFloat {
    BigFloat::with_val(53, v)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn spread(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> PipelineOptions {
        PipelineOptions::new(Precision::digits(80))
    }

    #[test]
    fn tags_round_trip() {
        for p in Pipeline::ALL {
            assert_eq!(Pipeline::from_tag(p.tag()), Some(p));
        }
    }

    #[test]
    fn gaussian_growth_gives_exact_lambda() {
        let s = Series::from_integers(
            "pow",
            1,
            (1..=12u32).map(|l| crate::BigCount::from(3).pow(l * l)),
        );
        let out = lambda_fits(&s, &opts()).unwrap();
        let tol = opts().precision.tolerance();
        for k in [2, 3] {
            let v = out.get(&format!("lambda_k{k}")).unwrap().clone();
            assert!((v - 3u32).abs() < tol);
        }
        let out = ratio_fits(&s, &opts()).unwrap();
        assert!((out.get("lambda2_raw").unwrap().clone() - 9u32).abs() < tol);
        assert!(out.get("g_cubic").unwrap().clone().abs() < tol);
    }

    #[test]
    fn geometric_quotient_has_pole_at_half() {
        let s = Series::from_integers(
            "geo",
            0,
            (0..20u32).map(|n| crate::BigCount::from(2).pow(n)),
        );
        let out = da_ensemble(&s, &opts()).unwrap();
        assert!((out.get("mu").unwrap().to_f64() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn hadamard_needs_second_series() {
        let s = Series::from_integers("a", 1, [1u32, 2, 3]);
        assert!(run_pipeline(Pipeline::Hadamard, &s, None, &opts()).is_err());
    }
}
