//! Asymptotic analysis of coefficient sequences: high-precision transforms,
//! sliding-window fits, differential approximants and series extension.

pub mod da;
pub mod extend;
pub mod fit;
pub mod linalg;
pub mod pipeline;
pub mod series;
pub mod transforms;

use rug::ops::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use da::{differential_approximant, DiffApprox, Singularity};
pub use extend::{series_extend, EnsembleConfig, ExtendMode, Extension};
pub use fit::{
    fit_ratio_of_ratios, lambda_sensitivity, triple_fit_log_d, window_fit, Estimate, Extrapolation,
    FitConfig, FitReport, RatioModel,
};
pub use pipeline::{run_pipeline, Pipeline, PipelineOptions, PipelineOutput};
pub use series::{Provenance, Series, Term, Value};
pub use transforms::{
    alpha_ratios, amplitude_sequence, b_from_alpha, hadamard_quotient, lambda_sequence,
    normalized_d, ratio_of_ratios,
};

pub type BigFloat = rug::Float;

/// `(L, value)` pairs with strictly increasing `L`.
pub type Sequence = Vec<(u32, BigFloat)>;

pub const DEFAULT_DIGITS: u32 = 120;
pub const DEFAULT_LAMBDA: &str = "1.7445498";
pub const LAMBDA_UNCERTAINTY: &str = "0.0000012";
/// Digits needed to keep `C_L / lambda^(L^2)` meaningful up to `L` of about 31.
pub const D_PIPELINE_MIN_DIGITS: u32 = 60;

/// Working precision in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision(u32);

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_DIGITS)
    }
}

impl Precision {
    pub fn digits(d: u32) -> Self {
        Precision(d.max(10))
    }

    pub fn decimal_digits(self) -> u32 {
        self.0
    }

    /// Mantissa bits, with a few guard bits.
    pub fn bits(self) -> u32 {
        (self.0 as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }

    pub fn zero(self) -> BigFloat {
        BigFloat::new(self.bits())
    }

    pub fn float<T>(self, v: T) -> BigFloat
    where
        BigFloat: rug::Assign<T>,
    {
        BigFloat::with_val(self.bits(), v)
    }

    pub fn parse(self, text: &str) -> Result<BigFloat> {
        let parsed = BigFloat::parse(text.trim())
            .map_err(|e| Error::Domain(format!("cannot parse {text:?} as a number: {e}")))?;
        Ok(BigFloat::with_val(self.bits(), parsed))
    }

    /// `10^-(P-10)`, the agreement expected from exact-model recovery.
    pub fn tolerance(self) -> BigFloat {
        let exp = -(self.0 as i32 - 10);
        self.float(10).pow(exp)
    }

    pub fn require(self, digits: u32) -> Result<()> {
        if self.0 < digits {
            return Err(Error::PrecisionTooLow {
                given: self.0,
                required: digits,
            });
        }
        Ok(())
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn format_float(v: &BigFloat, digits: u32) -> String {
    if v.is_zero() {
        return "0".into();
    }
    // never print more digits than the value carries
    let carried = (v.prec() as f64 * std::f64::consts::LOG10_2).floor() as u32;
    v.to_string_radix(10, Some(digits.min(carried.max(1)) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits_cover_digits() {
        let p = Precision::digits(120);
        assert!(p.bits() >= 399);
        assert_eq!(p.decimal_digits(), 120);
        let t = p.tolerance();
        assert!(t < 1e-100 && t > 1e-111);
    }

    #[test]
    fn parse_scientific() {
        let p = Precision::default();
        let v = p.parse("4.5990820e82").unwrap();
        assert!((v.to_f64() / 4.599082e82 - 1.0).abs() < 1e-12);
        assert!(p.parse("12x").is_err());
    }

    #[test]
    fn requirement() {
        assert!(matches!(
            Precision::digits(30).require(60),
            Err(Error::PrecisionTooLow {
                given: 30,
                required: 60
            })
        ));
    }
}
