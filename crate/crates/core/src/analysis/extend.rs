//! Series extension by ensembles of differential approximants.

use rayon::prelude::*;
use serde::Serialize;

use super::da::{differential_approximant, unknown_count, DiffApprox};
use super::{BigFloat, Precision, Provenance, Series};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtendMode {
    /// Approximants fitted to the ratios `C_L / C_{L-1}`; extended ratios
    /// are multiplied back onto the last known term.
    Ratios,
    /// Approximants fitted to the coefficients themselves.
    Coefficients,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub orders: Vec<usize>,
    pub inhomogeneous_degrees: Vec<usize>,
    /// Numbers of trailing known terms left out of each fit.
    pub spare_terms: Vec<usize>,
    /// Approximants with a singularity closer to the origin than this
    /// fraction of the physical singularity are discarded.
    pub spurious_ratio: f64,
    /// Relative window around the ensemble's physical singularity.
    pub physical_window: f64,
    /// Predictions further than this many median absolute deviations from
    /// the median are discarded.
    pub mad_cut: f64,
    pub min_kept: usize,
    pub mode: ExtendMode,
    pub precision: Precision,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            orders: vec![2, 3],
            inhomogeneous_degrees: (0..=4).collect(),
            spare_terms: vec![0, 1, 2],
            spurious_ratio: 0.9,
            physical_window: 0.1,
            mad_cut: 5.0,
            min_kept: 5,
            mode: ExtendMode::Ratios,
            precision: Precision::default(),
        }
    }
}

/// One ensemble member: order, polynomial degrees, degree of `P`, terms
/// used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Member {
    pub order: usize,
    pub degrees: Vec<usize>,
    pub inhomogeneous_degree: usize,
    pub terms: usize,
}

#[derive(Debug, Clone)]
pub struct Extension {
    /// Input terms followed by the extended ones.
    pub series: Series,
    /// `(L, mean, spread)` for every extended term.
    pub estimates: Vec<(u32, BigFloat, BigFloat)>,
    pub generated: usize,
    pub kept: Vec<Member>,
    pub degenerate_kept: usize,
    /// Discarded members by reason.
    pub discarded: Vec<(String, usize)>,
    /// Median location of the physical singularity.
    pub physical_singularity: f64,
}

/// Degree vectors for `M + 1` polynomials with `total` coefficients, degrees
/// differing by at most one.
fn degree_splits(order: usize, total: usize) -> Vec<Vec<usize>> {
    let n = order + 1;
    let (base, extra) = (total / n, total % n);
    if base == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == extra {
            out.push(
                (0..n)
                    .map(|i| base - 1 + ((mask >> i) & 1) as usize)
                    .collect(),
            );
        }
    }
    out
}

pub fn ensemble_members(cfg: &EnsembleConfig, available: usize) -> Vec<Member> {
    let mut out = Vec::new();
    for &order in &cfg.orders {
        for &pd in &cfg.inhomogeneous_degrees {
            for &s in &cfg.spare_terms {
                let Some(k) = available.checked_sub(s) else {
                    continue;
                };
                let Some(q_total) = (k + 1).checked_sub(pd + 1) else {
                    continue;
                };
                for degrees in degree_splits(order, q_total) {
                    debug_assert_eq!(unknown_count(&degrees, Some(pd)), k);
                    out.push(Member {
                        order,
                        degrees,
                        inhomogeneous_degree: pd,
                        terms: k,
                    });
                }
            }
        }
    }
    out
}

struct Fitted {
    member: Member,
    da: DiffApprox,
    /// Predicted coefficients of the original series.
    predictions: Vec<BigFloat>,
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

/// Extends `s` by `m` terms; the mean over the surviving ensemble is the
/// estimate and the standard deviation its error.
pub fn series_extend(s: &Series, m: usize, cfg: &EnsembleConfig) -> Result<Extension> {
    let prec = cfg.precision;
    if s.exact_count() < 10 {
        return Err(Error::Domain(format!(
            "{} has {} exact terms; at least 10 are needed",
            s.name,
            s.exact_count()
        )));
    }
    s.check_contiguous()?;
    let values = s.values(prec)?;
    let last_index = values.last().expect("nonempty").0;
    let last_value = values.last().expect("nonempty").1.clone();
    let data: Vec<BigFloat> = match cfg.mode {
        ExtendMode::Coefficients => values.iter().map(|(_, v)| v.clone()).collect(),
        ExtendMode::Ratios => {
            if let Some((l, _)) = values.iter().find(|(_, v)| v.is_zero()) {
                return Err(Error::Domain(format!("term {l} is zero")));
            }
            values
                .windows(2)
                .map(|w| BigFloat::with_val(prec.bits(), &w[1].1 / &w[0].1))
                .collect()
        }
    };

    let members = ensemble_members(cfg, data.len());
    let generated = members.len();
    let fitted: Vec<Option<Fitted>> = members
        .into_par_iter()
        .map(|member| {
            let da = differential_approximant(
                &data[..member.terms],
                member.order,
                &member.degrees,
                Some(member.inhomogeneous_degree),
                prec,
            )
            .ok()?;
            // continue from every known value, not only the fitted ones
            let ext = da.extend(&data, m)?;
            if ext.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let predictions = match cfg.mode {
                ExtendMode::Coefficients => ext,
                ExtendMode::Ratios => {
                    let mut acc = last_value.clone();
                    ext.into_iter()
                        .map(|r| {
                            acc *= r;
                            acc.clone()
                        })
                        .collect()
                }
            };
            Some(Fitted {
                member,
                da,
                predictions,
            })
        })
        .collect();

    let mut discarded: Vec<(String, usize)> = Vec::new();
    let mut note = |why: &str, n: usize| {
        if n > 0 {
            discarded.push((why.to_string(), n));
        }
    };
    let before = fitted.len();
    let fitted: Vec<Fitted> = fitted.into_iter().flatten().collect();
    note("failed recurrence", before - fitted.len());

    let mut phys: Vec<f64> = fitted
        .iter()
        .filter_map(|f| f.da.physical_singularity().map(|s| s.location.re))
        .collect();
    if phys.is_empty() {
        return Err(Error::EnsembleTooSmall {
            kept: 0,
            required: cfg.min_kept,
            detail: "no approximant has a positive real singularity".into(),
        });
    }
    let xc = median(&mut phys);
    let before = fitted.len();
    let fitted: Vec<Fitted> = fitted
        .into_iter()
        .filter(|f| {
            f.da.physical_singularity()
                .is_some_and(|s| (s.location.re / xc - 1.0).abs() <= cfg.physical_window)
        })
        .collect();
    note("no physical singularity", before - fitted.len());
    let before = fitted.len();
    let fitted: Vec<Fitted> = fitted
        .into_iter()
        .filter(|f| {
            f.da.singularities
                .iter()
                .all(|s| s.location.norm() >= cfg.spurious_ratio * xc)
        })
        .collect();
    note("spurious singularity", before - fitted.len());

    // outlier rejection on the first predicted term, relative to the median
    let first: Vec<f64> = fitted
        .iter()
        .map(|f| (f.predictions[0].clone() / &last_value).to_f64())
        .collect();
    let before = fitted.len();
    let fitted: Vec<Fitted> = if first.is_empty() {
        fitted
    } else {
        let med = median(&mut first.clone());
        let mut dev: Vec<f64> = first.iter().map(|v| (v - med).abs()).collect();
        let mad = median(&mut dev);
        let floor = med.abs() * 1e-14;
        let cut = (cfg.mad_cut * mad).max(floor);
        fitted
            .into_iter()
            .zip(first)
            .filter(|(_, v)| (v - med).abs() <= cut)
            .map(|(f, _)| f)
            .collect()
    };
    note("outlier", before - fitted.len());

    if fitted.len() < cfg.min_kept {
        return Err(Error::EnsembleTooSmall {
            kept: fitted.len(),
            required: cfg.min_kept,
            detail: format!("{generated} generated, discarded {discarded:?}"),
        });
    }

    let n = prec.float(fitted.len() as u32);
    let mut series = s.clone();
    let mut estimates = Vec::with_capacity(m);
    for j in 0..m {
        let mean = fitted
            .iter()
            .fold(prec.zero(), |acc, f| acc + &f.predictions[j])
            / &n;
        let var = fitted.iter().fold(prec.zero(), |acc, f| {
            acc + BigFloat::with_val(prec.bits(), &f.predictions[j] - &mean).square()
        }) / &n;
        let floor = mean.clone().abs() * prec.tolerance();
        let mut spread = var.sqrt();
        if spread < floor {
            spread = floor;
        }
        let index = last_index + 1 + j as u32;
        series.push_float(
            index,
            &mean,
            prec.decimal_digits(),
            Provenance::Extended,
            Some(&spread),
        )?;
        estimates.push((index, mean, spread));
    }
    Ok(Extension {
        series,
        estimates,
        generated,
        degenerate_kept: fitted.iter().filter(|f| f.da.degenerate).count(),
        kept: fitted.into_iter().map(|f| f.member).collect(),
        discarded,
        physical_singularity: xc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_are_balanced() {
        let s = degree_splits(2, 8);
        // 8 = 3 + 3 + 2 in three placements
        assert_eq!(s.len(), 3);
        for d in &s {
            assert_eq!(d.iter().map(|x| x + 1).sum::<usize>(), 8);
        }
        assert!(degree_splits(3, 3).is_empty());
    }

    #[test]
    fn members_consume_available_terms() {
        let cfg = EnsembleConfig::default();
        for m in ensemble_members(&cfg, 20) {
            assert_eq!(
                unknown_count(&m.degrees, Some(m.inhomogeneous_degree)),
                m.terms
            );
            assert!(m.terms >= 18);
        }
    }

    #[test]
    fn refuses_short_series() {
        let s = Series::from_integers("c", 1, 1..=5u32);
        assert!(series_extend(&s, 1, &EnsembleConfig::default()).is_err());
    }
}
