use std::fmt;

use serde::{Deserialize, Serialize};

use super::{format_float, BigFloat, Precision, Sequence};
use crate::error::{Error, Result};
use crate::BigCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Approximate,
    Extended,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Approximate => "approximate",
            Provenance::Extended => "extended",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "exact" => Provenance::Exact,
            "approximate" => Provenance::Approximate,
            "extended" => Provenance::Extended,
            _ => return None,
        })
    }

    /// The less reliable of two provenances.
    pub fn weakest(self, other: Self) -> Self {
        use Provenance::*;
        match (self, other) {
            (Extended, _) | (_, Extended) => Extended,
            (Approximate, _) | (_, Approximate) => Approximate,
            _ => Exact,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A coefficient: an exact integer, or decimal text kept verbatim so that no
/// source digit is lost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Integer(BigCount),
    Decimal(String),
}

impl Value {
    pub fn to_float(&self, prec: Precision) -> Result<BigFloat> {
        match self {
            Value::Integer(n) => Ok(prec.float(n)),
            Value::Decimal(s) => prec.parse(s),
        }
    }

    pub fn is_positive(&self, prec: Precision) -> Result<bool> {
        Ok(match self {
            Value::Integer(n) => *n > 0,
            Value::Decimal(_) => self.to_float(prec)? > 0,
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(n) => write!(f, "{n}"),
            Value::Decimal(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub index: u32,
    pub value: Value,
    pub provenance: Provenance,
    /// Estimated absolute error, for extended terms.
    pub error: Option<String>,
}

/// A named coefficient sequence indexed by `L`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Series {
    pub name: String,
    terms: Vec<Term>,
}

impl Series {
    pub fn new(name: impl Into<String>) -> Self {
        Series {
            name: name.into(),
            terms: Vec::new(),
        }
    }

    /// Exact terms indexed `first, first + 1, ...`.
    pub fn from_integers<I, T>(name: impl Into<String>, first: u32, values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        BigCount: From<T>,
    {
        let mut s = Series::new(name);
        for (i, v) in values.into_iter().enumerate() {
            s.push_exact(first + i as u32, BigCount::from(v))
                .expect("indices increase");
        }
        s
    }

    pub fn push(&mut self, term: Term) -> Result<()> {
        if let Some(last) = self.terms.last() {
            if term.index <= last.index {
                return Err(Error::Domain(format!(
                    "index {} does not follow {}",
                    term.index, last.index
                )));
            }
            if term.provenance == Provenance::Exact && last.provenance != Provenance::Exact {
                return Err(Error::Domain(format!(
                    "exact term {} after non-exact terms",
                    term.index
                )));
            }
        }
        if let Value::Decimal(text) = &term.value {
            Precision::default().parse(text)?;
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn push_exact(&mut self, index: u32, value: BigCount) -> Result<()> {
        self.push(Term {
            index,
            value: Value::Integer(value),
            provenance: Provenance::Exact,
            error: None,
        })
    }

    pub fn push_decimal(
        &mut self,
        index: u32,
        text: impl Into<String>,
        provenance: Provenance,
    ) -> Result<()> {
        self.push(Term {
            index,
            value: Value::Decimal(text.into()),
            provenance,
            error: None,
        })
    }

    /// Appends a computed value rendered at `digits` significant digits.
    pub fn push_float(
        &mut self,
        index: u32,
        value: &BigFloat,
        digits: u32,
        provenance: Provenance,
        error: Option<&BigFloat>,
    ) -> Result<()> {
        self.push(Term {
            index,
            value: Value::Decimal(format_float(value, digits)),
            provenance,
            error: error.map(|e| format_float(e, 6)),
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn first_index(&self) -> Option<u32> {
        self.terms.first().map(|t| t.index)
    }

    pub fn last_index(&self) -> Option<u32> {
        self.terms.last().map(|t| t.index)
    }

    pub fn get(&self, index: u32) -> Option<&Term> {
        self.terms
            .binary_search_by_key(&index, |t| t.index)
            .ok()
            .map(|i| &self.terms[i])
    }

    pub fn exact_count(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.provenance == Provenance::Exact)
            .count()
    }

    /// Terms with index at most `max_index`.
    pub fn truncated(&self, max_index: u32) -> Series {
        Series {
            name: self.name.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.index <= max_index)
                .cloned()
                .collect(),
        }
    }

    /// Only the exact terms.
    pub fn exact_part(&self) -> Series {
        Series {
            name: self.name.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.provenance == Provenance::Exact)
                .cloned()
                .collect(),
        }
    }

    pub fn check_contiguous(&self) -> Result<()> {
        for w in self.terms.windows(2) {
            if w[1].index != w[0].index + 1 {
                return Err(Error::NonContiguous {
                    expected: w[0].index as u64 + 1,
                    found: w[1].index as u64,
                });
            }
        }
        Ok(())
    }

    pub fn values(&self, prec: Precision) -> Result<Sequence> {
        self.terms
            .iter()
            .map(|t| Ok((t.index, t.value.to_float(prec)?)))
            .collect()
    }

    pub fn integers(&self) -> Option<Vec<(u32, BigCount)>> {
        self.terms
            .iter()
            .map(|t| match &t.value {
                Value::Integer(n) => Some((t.index, n.clone())),
                Value::Decimal(_) => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_rules() {
        let mut s = Series::from_integers("a", 1, [12u32, 322]);
        assert!(s.push_exact(2, 5.into()).is_err());
        s.push_decimal(3, "1.4248e4", Provenance::Approximate)
            .unwrap();
        assert!(s.push_exact(4, 1.into()).is_err());
        assert!(s.push_decimal(4, "abc", Provenance::Approximate).is_err());
        assert_eq!(s.len(), 3);
        assert_eq!(s.exact_count(), 2);
        assert_eq!(s.get(3).unwrap().provenance, Provenance::Approximate);
    }

    #[test]
    fn contiguity() {
        let mut s = Series::new("a");
        s.push_exact(1, 1.into()).unwrap();
        s.push_exact(3, 1.into()).unwrap();
        assert!(matches!(
            s.check_contiguous(),
            Err(Error::NonContiguous {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn decimal_text_is_kept() {
        let mut s = Series::new("a");
        s.push_decimal(
            1,
            "4.59908200000000000000000000000000000000e82",
            Provenance::Approximate,
        )
        .unwrap();
        assert_eq!(
            s.terms()[0].value.to_string(),
            "4.59908200000000000000000000000000000000e82"
        );
    }
}
