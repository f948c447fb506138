use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactWeight;
use crate::math;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GhzClass {
    Stabilizer,
    Srn,
    Lrn,
}

impl GhzClass {
    pub fn label(self) -> &'static str {
        match self {
            GhzClass::Stabilizer => "STABILIZER",
            GhzClass::Srn => "SRN",
            GhzClass::Lrn => "LRN",
        }
    }
}

const FLOAT_TOL: f64 = 1e-12;

/// Classifies `α|0…0⟩ + β|1…1⟩` from `|α|²`.
pub fn ghz_classify(alpha_sq: &ExactWeight) -> Result<GhzClass> {
    alpha_sq.validate()?;
    if let Some(q) = alpha_sq.as_rational() {
        if q.is_negative() || q > BigRational::one() {
            return Err(Error::OutOfRange { value: alpha_sq.value() });
        }
        let half = BigRational::new(1.into(), 2.into());
        return Ok(if q.is_zero() || q.is_one() {
            GhzClass::Stabilizer
        } else if q == half {
            GhzClass::Srn
        } else {
            GhzClass::Lrn
        });
    }
    let v = alpha_sq.value();
    if !(-FLOAT_TOL..=1.0 + FLOAT_TOL).contains(&v) {
        return Err(Error::OutOfRange { value: v });
    }
    if alpha_sq.is_exact() {
        // an irrational value cannot be 0, 1/2 or 1
        return Ok(GhzClass::Lrn);
    }
    Ok(if v < FLOAT_TOL || math::abs(v - 1.0) < FLOAT_TOL {
        GhzClass::Stabilizer
    } else if math::abs(v - 0.5) < FLOAT_TOL {
        GhzClass::Srn
    } else {
        GhzClass::Lrn
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        assert_eq!(ghz_classify(&ExactWeight::Float(0.0)).unwrap(), GhzClass::Stabilizer);
        assert_eq!(ghz_classify(&ExactWeight::rational(1, 1).unwrap()).unwrap(), GhzClass::Stabilizer);
        assert_eq!(ghz_classify(&ExactWeight::rational(1, 2).unwrap()).unwrap(), GhzClass::Srn);
        assert_eq!(ghz_classify(&ExactWeight::Float(0.5)).unwrap(), GhzClass::Srn);
        assert_eq!(ghz_classify(&ExactWeight::Float(0.3)).unwrap(), GhzClass::Lrn);
        assert_eq!(ghz_classify(&ExactWeight::scaled_root((1, 2), (1, 2), 2).unwrap()).unwrap(), GhzClass::Lrn);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(ghz_classify(&ExactWeight::Float(1.5)), Err(Error::OutOfRange { .. })));
        assert!(matches!(ghz_classify(&ExactWeight::rational(-1, 3).unwrap()), Err(Error::OutOfRange { .. })));
    }
}
