use super::{BigFloat, Precision, Sequence, Series, D_PIPELINE_MIN_DIGITS};
use crate::error::{Error, Result};

fn positive_values(s: &Series, prec: Precision) -> Result<Sequence> {
    let v = s.values(prec)?;
    if let Some((l, x)) = v.iter().find(|(_, x)| *x <= 0) {
        return Err(Error::Domain(format!(
            "{} term {l} = {x} is not positive",
            s.name
        )));
    }
    Ok(v)
}

/// `lambda_L = C_L^(1/L^2)` for every term with `L >= 1`.
pub fn lambda_sequence(s: &Series, prec: Precision) -> Result<Sequence> {
    Ok(positive_values(s, prec)?
        .into_iter()
        .filter(|(l, _)| *l >= 1)
        .map(|(l, c)| {
            let e = prec.float(1) / (l as u64 * l as u64);
            (l, (c.ln() * e).exp())
        })
        .collect())
}

/// `C_{L+1} C_{L-1} / C_L^2`, indexed by the middle `L`.
pub fn ratio_of_ratios(s: &Series, prec: Precision) -> Result<Sequence> {
    if s.len() < 3 {
        return Err(Error::Domain(
            "ratio of ratios needs at least 3 terms".into(),
        ));
    }
    s.check_contiguous()?;
    let v = s.values(prec)?;
    if let Some((l, _)) = v.iter().find(|(_, x)| x.is_zero()) {
        return Err(Error::Domain(format!("{} term {l} is zero", s.name)));
    }
    Ok(v.windows(3)
        .map(|w| {
            let num = BigFloat::with_val(prec.bits(), &w[2].1 * &w[0].1);
            (w[1].0, num / w[1].1.clone().square())
        })
        .collect())
}

/// `d_L = C_L / lambda^(L^2)`.
pub fn normalized_d(s: &Series, lambda: &BigFloat, prec: Precision) -> Result<Sequence> {
    prec.require(D_PIPELINE_MIN_DIGITS)?;
    if *lambda <= 1 {
        return Err(Error::Domain(format!("lambda = {lambda} must exceed 1")));
    }
    let log_lambda = prec.float(lambda).ln();
    Ok(positive_values(s, prec)?
        .into_iter()
        .map(|(l, c)| {
            let scale = BigFloat::with_val(prec.bits(), &log_lambda * (l as u64 * l as u64)).exp();
            (l, c / scale)
        })
        .collect())
}

/// `alpha_L = d_L / d_{L-1}` over consecutive indices.
pub fn alpha_ratios(d: &Sequence, prec: Precision) -> Result<Sequence> {
    let mut out = Vec::new();
    for w in d.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(Error::NonContiguous {
                expected: w[0].0 as u64 + 1,
                found: w[1].0 as u64,
            });
        }
        if w[0].1.is_zero() {
            return Err(Error::Domain(format!("d_{} is zero", w[0].0)));
        }
        out.push((w[1].0, BigFloat::with_val(prec.bits(), &w[1].1 / &w[0].1)));
    }
    Ok(out)
}

/// `b = log(alpha) / log(lambda)`.
pub fn b_from_alpha(alpha: &BigFloat, lambda: &BigFloat, prec: Precision) -> BigFloat {
    prec.float(alpha).ln() / prec.float(lambda).ln()
}

/// `d_L / (lambda^(b L) L^g)`, converging to `lambda^c` under the assumed
/// form.
pub fn amplitude_sequence(
    d: &Sequence,
    lambda: &BigFloat,
    b: &BigFloat,
    g: &BigFloat,
    prec: Precision,
) -> Result<Sequence> {
    if *lambda <= 0 {
        return Err(Error::Domain("lambda must be positive".into()));
    }
    let log_lambda = prec.float(lambda).ln();
    let mut out = Vec::new();
    for (l, v) in d {
        if *l == 0 {
            continue;
        }
        let lf = prec.float(*l);
        let log_den = BigFloat::with_val(prec.bits(), b * &log_lambda) * &lf
            + BigFloat::with_val(prec.bits(), g * lf.ln());
        out.push((*l, BigFloat::with_val(prec.bits(), v / log_den.exp())));
    }
    Ok(out)
}

/// Termwise quotient `s1_L / s2_L` over the common indices.
pub fn hadamard_quotient(s1: &Series, s2: &Series, prec: Precision) -> Result<Series> {
    let mut out = Series::new(format!("{}/{}", s1.name, s2.name));
    for t in s1.terms() {
        let Some(u) = s2.get(t.index) else { continue };
        let den = u.value.to_float(prec)?;
        if den.is_zero() {
            return Err(Error::Domain(format!(
                "{} term {} is zero",
                s2.name, t.index
            )));
        }
        let q = t.value.to_float(prec)? / den;
        let provenance = t.provenance.weakest(u.provenance);
        out.push_float(t.index, &q, prec.decimal_digits(), provenance, None)?;
    }
    if out.is_empty() {
        return Err(Error::Domain("series have no common indices".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BigCount;
    use rug::ops::Pow;

    fn p() -> Precision {
        Precision::digits(80)
    }

    #[test]
    fn lambda_of_pure_power() {
        let s = Series::from_integers("c", 1, (1..=6u32).map(|l| BigCount::from(3).pow(l * l)));
        for (_, v) in lambda_sequence(&s, p()).unwrap() {
            assert!((v - 3u32).abs() < 1e-70);
        }
    }

    #[test]
    fn lambda_rejects_nonpositive() {
        let s = Series::from_integers("c", 1, [1i32, 0, 4]);
        assert!(matches!(lambda_sequence(&s, p()), Err(Error::Domain(_))));
    }

    #[test]
    fn ratio_of_ratios_of_gaussian() {
        let s = Series::from_integers("c", 1, (1..=7u32).map(|l| BigCount::from(2).pow(l * l)));
        let r = ratio_of_ratios(&s, p()).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r[0].0, 2);
        for (_, v) in r {
            assert_eq!(v, 4);
        }
    }

    #[test]
    fn d_of_pure_power_is_one() {
        let s = Series::from_integers("c", 1, (1..=5u32).map(|l| BigCount::from(5).pow(l * l)));
        let d = normalized_d(&s, &p().float(5), p()).unwrap();
        for (_, v) in d {
            assert!((v - 1u32).abs() < 1e-60);
        }
        assert!(matches!(
            normalized_d(&s, &p().float(5), Precision::digits(40)),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn amplitude_exact_form() {
        let pr = p();
        let lambda = pr.float(1.75);
        let (b, c, g) = (pr.float(-0.05), pr.float(0.3), pr.float(2));
        let d: Sequence = (1..=10u32)
            .map(|l| {
                let lf = pr.float(l);
                let v = (BigFloat::with_val(pr.bits(), &b * &lf) + &c) * pr.float(&lambda).ln()
                    + BigFloat::with_val(pr.bits(), &g * lf.ln());
                (l, v.exp())
            })
            .collect();
        let target = (c * pr.float(&lambda).ln()).exp();
        for (_, v) in amplitude_sequence(&d, &lambda, &b, &g, pr).unwrap() {
            assert!((v - &target).abs() < 1e-60);
        }
        let alpha = alpha_ratios(&d, pr).unwrap();
        assert_eq!(alpha.len(), 9);
    }

    #[test]
    fn quotient_with_itself() {
        let s = Series::from_integers("c", 1, [12u32, 322, 14248]);
        let q = hadamard_quotient(&s, &s, p()).unwrap();
        for (_, v) in q.values(p()).unwrap() {
            assert_eq!(v, 1);
        }
    }
}
