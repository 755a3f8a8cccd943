//! Differential approximants in the `theta = x d/dx` form
//! `sum_{i=0}^{M} Q_i(x) theta^i F(x) = P(x)`, normalised by `Q_M(0) = 1`.

use num_complex::Complex64;
use rug::ops::Pow;
use serde_json::{json, Value as Json};

use super::linalg::solve;
use super::{format_float, BigFloat, Precision};
use crate::error::{Error, Result};

/// A root of `Q_M` with the exponent `e` such that
/// `F ~ (1 - x/x_c)^(-e)` nearby.
#[derive(Debug, Clone)]
pub struct Singularity {
    pub location: Complex64,
    /// Polished location for roots on the real axis.
    pub real: Option<BigFloat>,
    pub exponent: Complex64,
}

impl Singularity {
    pub fn is_real(&self) -> bool {
        self.real.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct DiffApprox {
    pub order: usize,
    pub degrees: Vec<usize>,
    /// Degree of `P`; `None` for a homogeneous approximant.
    pub inhomogeneous_degree: Option<usize>,
    /// `q[i][k]` is the coefficient of `x^k` in `Q_i`.
    pub q: Vec<Vec<BigFloat>>,
    pub p: Vec<BigFloat>,
    pub unknowns: usize,
    pub rank: usize,
    /// The linear system was rank deficient; the basic solution is kept.
    pub degenerate: bool,
    pub singularities: Vec<Singularity>,
    precision: Precision,
}

/// Number of unknowns (and of coefficients consumed).
pub fn unknown_count(degrees: &[usize], inhom: Option<usize>) -> usize {
    degrees.iter().map(|d| d + 1).sum::<usize>() - 1 + inhom.map_or(0, |d| d + 1)
}

fn theta_weight(n: usize, i: usize, prec: Precision) -> BigFloat {
    // 0^0 = 1
    prec.float(n as u64).pow(i as u32)
}

pub fn differential_approximant(
    coeffs: &[BigFloat],
    order: usize,
    degrees: &[usize],
    inhom: Option<usize>,
    prec: Precision,
) -> Result<DiffApprox> {
    if order == 0 || degrees.len() != order + 1 {
        return Err(Error::Domain(format!(
            "order {order} needs {} polynomial degrees, got {}",
            order + 1,
            degrees.len()
        )));
    }
    let k = unknown_count(degrees, inhom);
    if coeffs.len() < k {
        return Err(Error::IncompleteInput(format!(
            "{k} coefficients needed, {} available",
            coeffs.len()
        )));
    }
    // unknown layout: Q_0..Q_M (without q_{M,0}), then P
    let mut layout: Vec<(usize, usize)> = Vec::with_capacity(k);
    for (i, d) in degrees.iter().enumerate() {
        for j in 0..=*d {
            if !(i == order && j == 0) {
                layout.push((i, j));
            }
        }
    }
    let p_len = inhom.map_or(0, |d| d + 1);
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for n in 0..k {
        let mut row: Vec<BigFloat> = layout
            .iter()
            .map(|&(i, j)| {
                if j > n {
                    prec.zero()
                } else {
                    theta_weight(n - j, i, prec) * &coeffs[n - j]
                }
            })
            .collect();
        for j in 0..p_len {
            row.push(prec.float(if j == n { -1 } else { 0 }));
        }
        a.push(row);
        b.push(-(theta_weight(n, order, prec) * &coeffs[n]));
    }
    let sol = solve(a, b, prec);

    let mut q: Vec<Vec<BigFloat>> = degrees.iter().map(|d| vec![prec.zero(); d + 1]).collect();
    q[order][0] = prec.float(1);
    for (&(i, j), v) in layout.iter().zip(&sol.x) {
        q[i][j] = v.clone();
    }
    let p = sol.x[layout.len()..].to_vec();
    let mut da = DiffApprox {
        order,
        degrees: degrees.to_vec(),
        inhomogeneous_degree: inhom,
        q,
        p,
        unknowns: k,
        rank: sol.rank,
        degenerate: sol.rank < k,
        singularities: Vec::new(),
        precision: prec,
    };
    da.singularities = da.find_singularities();
    Ok(da)
}

fn eval(poly: &[BigFloat], x: &BigFloat, prec: Precision) -> BigFloat {
    poly.iter().rev().fold(prec.zero(), |acc, c| {
        BigFloat::with_val(prec.bits(), &acc * x) + c
    })
}

fn derivative(poly: &[BigFloat], prec: Precision) -> Vec<BigFloat> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| BigFloat::with_val(prec.bits(), c * j as u32))
        .collect()
}

fn eval_c(poly: &[Complex64], z: Complex64) -> Complex64 {
    poly.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of `sum c_j x^j` by Aberth iteration.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let poly: Vec<Complex64> = c.iter().map(|v| Complex64::new(v / lead, 0.0)).collect();
    let dpoly: Vec<Complex64> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, v)| v * j as f64)
        .collect();
    let radius = 1.0 + poly[..deg].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let ratio = eval_c(&poly, z[i]) / eval_c(&dpoly, z[i]);
            let sum: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

impl DiffApprox {
    pub fn precision(&self) -> Precision {
        self.precision
    }

    fn find_singularities(&self) -> Vec<Singularity> {
        let prec = self.precision;
        let qm = &self.q[self.order];
        let scale = qm
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let approx: Vec<f64> = qm.iter().map(|c| c.to_f64() / scale).collect();
        let qm_c: Vec<Complex64> = qm.iter().map(|c| Complex64::new(c.to_f64(), 0.0)).collect();
        let dqm = derivative(qm, prec);
        let dqm_c: Vec<Complex64> = dqm
            .iter()
            .map(|c| Complex64::new(c.to_f64(), 0.0))
            .collect();
        let prev = &self.q[self.order - 1];
        let prev_c: Vec<Complex64> = prev
            .iter()
            .map(|c| Complex64::new(c.to_f64(), 0.0))
            .collect();
        let m = self.order as f64;

        let mut out = Vec::new();
        for mut z in polynomial_roots(&approx) {
            for _ in 0..3 {
                let step = eval_c(&qm_c, z) / eval_c(&dqm_c, z);
                if step.is_finite() {
                    z -= step;
                }
            }
            let real_axis = z.im.abs() <= 1e-7 * z.norm().max(1e-300);
            if real_axis {
                let mut x = prec.float(z.re);
                for _ in 0..60 {
                    let d = eval(&dqm, &x, prec);
                    if d.is_zero() {
                        break;
                    }
                    let step = eval(qm, &x, prec) / d;
                    let small = step.clone().abs() <= x.clone().abs() * prec.tolerance();
                    x -= step;
                    if small {
                        break;
                    }
                }
                let denom = BigFloat::with_val(prec.bits(), &x * eval(&dqm, &x, prec));
                let kappa = prec.float(m - 1.0) - eval(prev, &x, prec) / denom;
                out.push(Singularity {
                    location: Complex64::new(x.to_f64(), 0.0),
                    real: Some(x),
                    exponent: Complex64::new(-kappa.to_f64(), 0.0),
                });
            } else {
                let kappa = (m - 1.0) - eval_c(&prev_c, z) / (z * eval_c(&dqm_c, z));
                out.push(Singularity {
                    location: z,
                    real: None,
                    exponent: -kappa,
                });
            }
        }
        out.sort_by(|a, b| a.location.norm().total_cmp(&b.location.norm()));
        out
    }

    /// Smallest positive real singularity.
    pub fn physical_singularity(&self) -> Option<&Singularity> {
        self.singularities
            .iter()
            .filter(|s| s.is_real() && s.location.re > 0.0)
            .min_by(|a, b| a.location.re.total_cmp(&b.location.re))
    }

    /// `a_n` from the recurrence given `a_0..a_{n-1}`; `None` when the
    /// leading factor vanishes.
    pub fn next_coefficient(&self, a: &[BigFloat]) -> Option<BigFloat> {
        let prec = self.precision;
        let n = a.len();
        let mut num = self.p.get(n).cloned().unwrap_or_else(|| prec.zero());
        for (i, qi) in self.q.iter().enumerate() {
            for (j, c) in qi.iter().enumerate().skip(1) {
                if j <= n && !c.is_zero() {
                    num -= theta_weight(n - j, i, prec) * c * &a[n - j];
                }
            }
        }
        let den = self.q.iter().enumerate().fold(prec.zero(), |s, (i, qi)| {
            s + theta_weight(n, i, prec) * &qi[0]
        });
        if den.is_zero() {
            return None;
        }
        Some(num / den)
    }

    /// Continues `coeffs` by `m` terms.
    pub fn extend(&self, coeffs: &[BigFloat], m: usize) -> Option<Vec<BigFloat>> {
        let mut a = coeffs.to_vec();
        for _ in 0..m {
            let v = self.next_coefficient(&a)?;
            a.push(v);
        }
        Some(a.split_off(coeffs.len()))
    }

    /// Largest absolute residual of the defining equations over the first
    /// `unknowns` coefficients.
    pub fn residual(&self, coeffs: &[BigFloat]) -> BigFloat {
        let prec = self.precision;
        let mut worst = prec.zero();
        for n in 0..self.unknowns.min(coeffs.len()) {
            let mut r = -self.p.get(n).cloned().unwrap_or_else(|| prec.zero());
            for (i, qi) in self.q.iter().enumerate() {
                for (j, c) in qi.iter().enumerate() {
                    if j <= n {
                        r += theta_weight(n - j, i, prec) * c * &coeffs[n - j];
                    }
                }
            }
            let r = r.abs();
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    pub fn to_json(&self, digits: u32) -> Json {
        let f = |v: &BigFloat| format_float(v, digits);
        json!({
            "order": self.order,
            "degrees": self.degrees,
            "inhomogeneous_degree": self.inhomogeneous_degree,
            "degenerate": self.degenerate,
            "rank": self.rank,
            "unknowns": self.unknowns,
            "q": self.q.iter().map(|qi| qi.iter().map(f).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "p": self.p.iter().map(f).collect::<Vec<_>>(),
            "singularities": self.singularities.iter().map(|s| json!({
                "re": s.real.as_ref().map(f).unwrap_or_else(|| s.location.re.to_string()),
                "im": s.location.im,
                "exponent_re": s.exponent.re,
                "exponent_im": s.exponent.im,
            })).collect::<Vec<_>>(),
        })
    }
}
