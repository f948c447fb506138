//! Text form of exact block weights.
//!
//! A weight is either a JSON number (kept as a float) or a string: a rational
//! such as `"3/10"`, or a scaled root such as `"1/10*(1/3)^(1/4)"` meaning
//! `(1/10)·(1/3)^{1/4}`.

use std::str::FromStr;

use lrn_core::criteria::ExactWeight;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{DetectError, Result};

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    let q = BigRational::from_str(s).map_err(|_| DetectError::Format(format!("not a rational number: {s:?}")))?;
    if q.denom() == &BigInt::from(0) {
        return Err(DetectError::Format(format!("zero denominator in {s:?}")));
    }
    Ok(q)
}

pub fn parse_weight(s: &str) -> Result<ExactWeight> {
    let s = s.trim();
    let w = match s.split_once('^') {
        None => match parse_rational(s) {
            Ok(q) => ExactWeight::Rational(q),
            Err(e) => match s.parse::<f64>() {
                Ok(x) => ExactWeight::Float(x),
                Err(_) => return Err(e),
            },
        },
        Some((head, exp)) => {
            let exp = exp.trim();
            let n = exp
                .strip_prefix("(1/")
                .and_then(|e| e.strip_suffix(')'))
                .and_then(|e| e.trim().parse::<u32>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| DetectError::Format(format!("exponent must read (1/n): {exp:?}")))?;
            let (r, base) = match head.rsplit_once('*') {
                Some((r, base)) => (parse_rational(r)?, parse_rational(base)?),
                None => (BigRational::from_integer(1.into()), parse_rational(head)?),
            };
            ExactWeight::ScaledRoot { r, base, n }
        }
    };
    w.validate()?;
    Ok(w)
}

pub fn format_weight(w: &ExactWeight) -> String {
    match w {
        ExactWeight::Float(x) => format!("{x:?}"),
        ExactWeight::Rational(q) => q.to_string(),
        ExactWeight::ScaledRoot { r, base, n } => {
            let root = if base.is_integer() { format!("{base}^(1/{n})") } else { format!("({base})^(1/{n})") };
            if *r == BigRational::from_integer(1.into()) {
                root
            } else {
                format!("{r}*{root}")
            }
        }
    }
}

/// Serde adapter for [`ExactWeight`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightJson(pub ExactWeight);

impl Serialize for WeightJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            ExactWeight::Float(x) => s.serialize_f64(*x),
            w => s.serialize_str(&format_weight(w)),
        }
    }
}

impl<'de> Deserialize<'de> for WeightJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(WeightJson(ExactWeight::Float(x))),
            Raw::Text(t) => parse_weight(&t).map(WeightJson).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["3/10", "1", "0", "1/10*(1/3)^(1/4)", "2^(1/2)", "3/7*5^(1/3)"] {
            let w = parse_weight(s).unwrap();
            assert_eq!(format_weight(&w), s);
            assert_eq!(parse_weight(&format_weight(&w)).unwrap(), w);
        }
    }

    #[test]
    fn values() {
        assert!((parse_weight("1/10*(1/3)^(1/4)").unwrap().value() - 0.1 * 3f64.powf(-0.25)).abs() < 1e-16);
        assert_eq!(parse_weight("0.25").unwrap(), ExactWeight::Float(0.25));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "1/0", "2^(2)", "2^(1/0)", "(-1)^(1/2)"] {
            assert!(parse_weight(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn json_forms() {
        let v: Vec<WeightJson> = serde_json::from_str(r#"[0.5, "1/2", "2^(1/2)"]"#).unwrap();
        assert_eq!(v[0].0, ExactWeight::Float(0.5));
        assert!(v[1].0.is_exact());
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[0.5,"1/2","2^(1/2)"]"#);
    }
}
