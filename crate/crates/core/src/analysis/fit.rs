//! Sliding-window fits of estimator sequences and their extrapolation.

use rug::ops::Pow;
use serde::Serialize;
use serde_json::{json, Value as Json};

use super::linalg::{line_fit, solve};
use super::transforms::normalized_d;
use super::{format_float, BigFloat, Precision, Sequence, Series};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    /// Straight line through the last two estimates.
    TwoPoint,
    /// Least-squares line through the last `tail` estimates.
    LeastSquares { tail: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FitConfig {
    /// Estimates are extrapolated linearly in `1 / L^abscissa_power`.
    pub abscissa_power: u32,
    pub extrapolation: Extrapolation,
    pub precision: Precision,
}

impl FitConfig {
    pub fn new(abscissa_power: u32, precision: Precision) -> Self {
        FitConfig {
            abscissa_power,
            extrapolation: Extrapolation::TwoPoint,
            precision,
        }
    }
}

/// Parameter estimates from one window, labelled by its largest `L`.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub index: u32,
    pub params: Vec<BigFloat>,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub method: String,
    pub parameters: Vec<String>,
    pub estimates: Vec<Estimate>,
    /// Extrapolated value of every parameter.
    pub intercepts: Vec<BigFloat>,
    pub config: FitConfig,
    /// Windows that could not be solved.
    pub skipped: Vec<(u32, String)>,
    /// Last estimate minus intercept per parameter (two-point) or the rms
    /// residual of the tail line (least squares).
    pub residuals: Vec<BigFloat>,
    /// Quantities derived from the intercepts, such as `lambda` or `g`.
    pub derived: Vec<(String, BigFloat)>,
}

impl FitReport {
    pub fn intercept(&self, name: &str) -> Option<&BigFloat> {
        let i = self.parameters.iter().position(|p| p == name)?;
        self.intercepts.get(i)
    }

    pub fn derived(&self, name: &str) -> Option<&BigFloat> {
        self.derived.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn last(&self) -> Option<&Estimate> {
        self.estimates.last()
    }

    pub fn to_json(&self, digits: u32) -> Json {
        let f = |v: &BigFloat| Json::String(format_float(v, digits));
        let named = |vals: &[BigFloat]| -> Json {
            self.parameters
                .iter()
                .zip(vals)
                .map(|(n, v)| (n.clone(), f(v)))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        json!({
            "method": self.method,
            "config": serde_json::to_value(self.config).expect("plain config"),
            "parameters": self.parameters,
            "intercepts": named(&self.intercepts),
            "residuals": named(&self.residuals),
            "derived": self.derived.iter().map(|(n, v)| (n.clone(), f(v)))
                .collect::<serde_json::Map<_, _>>(),
            "estimates": self.estimates.iter().map(|e| json!({
                "L": e.index,
                "values": e.params.iter().map(f).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "skipped": self.skipped.iter().map(|(l, why)| json!({"L": l, "reason": why}))
                .collect::<Vec<_>>(),
        })
    }

    /// One row per window: the abscissa `1/L^q` then every parameter.
    pub fn to_csv(&self, digits: u32) -> String {
        let q = self.config.abscissa_power;
        let mut out = format!("L,inv_L_pow_{q},{}\n", self.parameters.join(","));
        let p = self.config.precision;
        for e in &self.estimates {
            let x = p.float(e.index).pow(-(q as i32));
            out.push_str(&format!("{},{}", e.index, format_float(&x, digits)));
            for v in &e.params {
                out.push(',');
                out.push_str(&format_float(v, digits));
            }
            out.push('\n');
        }
        out
    }
}

fn pow_inv(l: u32, p: u32, prec: Precision) -> BigFloat {
    prec.float(l).pow(-(p as i32))
}

/// Exactly determined window fits `v_L = sum_j c_j / L^{p_j}` over
/// `powers.len()` consecutive points. Parameters are named `c<p>`.
pub fn window_fit(seq: &Sequence, powers: &[u32], cfg: FitConfig) -> Result<FitReport> {
    let names = powers.iter().map(|p| format!("c{p}")).collect();
    let rows = seq.iter().map(|(l, v)| {
        let basis = powers
            .iter()
            .map(|p| pow_inv(*l, *p, cfg.precision))
            .collect();
        (*l, basis, v.clone())
    });
    windowed(
        format!("window-fit{powers:?}"),
        names,
        rows.collect(),
        powers.len(),
        cfg,
    )
}

type Row = (u32, Vec<BigFloat>, BigFloat);

fn windowed(
    method: String,
    parameters: Vec<String>,
    rows: Vec<Row>,
    k: usize,
    cfg: FitConfig,
) -> Result<FitReport> {
    if rows.len() < k {
        return Err(Error::Domain(format!(
            "{method}: {} points, at least {k} needed",
            rows.len()
        )));
    }
    let prec = cfg.precision;
    let mut estimates = Vec::new();
    let mut skipped = Vec::new();
    for w in rows.windows(k) {
        let index = w[k - 1].0;
        let a = w.iter().map(|r| r.1.clone()).collect();
        let b = w.iter().map(|r| r.2.clone()).collect();
        let s = solve(a, b, prec);
        if s.full_rank() {
            estimates.push(Estimate { index, params: s.x });
        } else {
            skipped.push((index, format!("singular window (rank {} of {k})", s.rank)));
        }
    }
    let mut report = FitReport {
        method,
        parameters,
        estimates,
        intercepts: Vec::new(),
        config: cfg,
        skipped,
        residuals: Vec::new(),
        derived: Vec::new(),
    };
    extrapolate(&mut report)?;
    Ok(report)
}

fn extrapolate(r: &mut FitReport) -> Result<()> {
    let prec = r.config.precision;
    let q = r.config.abscissa_power;
    let n = r.estimates.len();
    let tail = match r.config.extrapolation {
        Extrapolation::TwoPoint => 2,
        Extrapolation::LeastSquares { tail } => tail.max(2),
    };
    if n == 0 {
        return Err(Error::Domain(format!("{}: no solvable window", r.method)));
    }
    if n < tail {
        // a single estimate is its own intercept
        r.intercepts = r.estimates[n - 1].params.clone();
        r.residuals = vec![prec.zero(); r.parameters.len()];
        return Ok(());
    }
    let used = &r.estimates[n - tail..];
    let xs: Vec<BigFloat> = used.iter().map(|e| pow_inv(e.index, q, prec)).collect();
    r.intercepts.clear();
    r.residuals.clear();
    for j in 0..r.parameters.len() {
        let ys: Vec<BigFloat> = used.iter().map(|e| e.params[j].clone()).collect();
        match r.config.extrapolation {
            Extrapolation::TwoPoint => {
                let (x1, x2, y1, y2) = (&xs[0], &xs[1], &ys[0], &ys[1]);
                let num = BigFloat::with_val(prec.bits(), y2 * x1)
                    - BigFloat::with_val(prec.bits(), y1 * x2);
                let c = num / BigFloat::with_val(prec.bits(), x1 - x2);
                r.residuals.push(BigFloat::with_val(prec.bits(), y2 - &c));
                r.intercepts.push(c);
            }
            Extrapolation::LeastSquares { .. } => {
                let (c, _, rms) = line_fit(&xs, &ys, prec);
                r.intercepts.push(c);
                r.residuals.push(rms);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioModel {
    /// `c1 + c2 / L^2`.
    Quadratic,
    /// `c0 + c2 / L^2 + c3 / L^3`.
    Cubic,
}

impl RatioModel {
    pub fn powers(self) -> &'static [u32] {
        match self {
            RatioModel::Quadratic => &[0, 2],
            RatioModel::Cubic => &[0, 2, 3],
        }
    }
}

/// Fits the ratio of ratios; `lambda^2` is the constant term and
/// `g = -c2 / lambda^2`. Per-window `g` estimates are appended as an extra
/// parameter so they are extrapolated like the others.
pub fn fit_ratio_of_ratios(seq: &Sequence, model: RatioModel, cfg: FitConfig) -> Result<FitReport> {
    let mut r = window_fit(seq, model.powers(), cfg)?;
    r.method = format!(
        "ratio-of-ratios-{}",
        serde_json::to_value(model)?.as_str().unwrap()
    );
    r.parameters[0] = "lambda2".into();
    r.parameters.push("g".into());
    for e in &mut r.estimates {
        let g = -(e.params[1].clone() / &e.params[0]);
        e.params.push(g);
    }
    extrapolate(&mut r)?;
    let lambda2 = r.intercepts[0].clone();
    r.derived.push(("lambda".into(), lambda2.clone().sqrt()));
    let g = -(r.intercepts[1].clone() / &lambda2);
    r.derived.push(("g_from_intercepts".into(), g));
    Ok(r)
}

/// Solves `log d_L = B L + C' + g log L` on successive triples, where
/// `B = b log(lambda)` and `C' = c log(lambda)`.
pub fn triple_fit_log_d(d: &Sequence, cfg: FitConfig) -> Result<FitReport> {
    let prec = cfg.precision;
    let mut rows = Vec::new();
    for (l, v) in d {
        if *v <= 0 {
            return Err(Error::Domain(format!("d_{l} is not positive")));
        }
        let lf = prec.float(*l);
        rows.push((*l, vec![lf.clone(), prec.float(1), lf.ln()], v.clone().ln()));
    }
    windowed(
        "triple-fit-log-d".into(),
        vec!["b_log_lambda".into(), "c_log_lambda".into(), "g".into()],
        rows,
        3,
        cfg,
    )
}

/// The `d_L` triple fit repeated at `lambda - delta`, `lambda` and
/// `lambda + delta`; `derived` holds the drift of every intercept between
/// the outer runs.
pub fn lambda_sensitivity(
    s: &Series,
    lambda: &BigFloat,
    delta: &BigFloat,
    cfg: FitConfig,
) -> Result<Vec<FitReport>> {
    let prec = cfg.precision;
    let mut reports = Vec::new();
    for sign in [-1i32, 0, 1] {
        let lam = prec.float(lambda) + prec.float(delta) * sign;
        let d = normalized_d(s, &lam, prec)?;
        let mut r = triple_fit_log_d(&d, cfg)?;
        r.method = format!("triple-fit-log-d@lambda{:+}", sign);
        r.derived.push(("lambda".into(), lam));
        reports.push(r);
    }
    let drift: Vec<(String, BigFloat)> = reports[0]
        .parameters
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let d = reports[2].intercepts[j].clone() - &reports[0].intercepts[j];
            (format!("drift_{name}"), d)
        })
        .collect();
    reports[1].derived.extend(drift);
    Ok(reports)
}
