use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::math;
use crate::{Error, Result};

/// Best rational approximation `p/q` with `q ≤ q_max`, accepted iff `|x - p/q| < τ/q²`.
pub fn rationality_test(x: f64, q_max: u64, tau: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h1, mut h2): (i128, i128) = (1, 0);
    let (mut k1, mut k2): (i128, i128) = (0, 1);
    let mut r = x;
    for _ in 0..64 {
        let a = math::floor(r);
        if math::abs(a) > 9.0e15 {
            return None;
        }
        let ai = a as i128;
        let h = ai * h1 + h2;
        let k = ai * k1 + k2;
        if k > q_max as i128 {
            return None;
        }
        let qf = k as f64;
        if math::abs(x - h as f64 / qf) < tau / (qf * qf) {
            return i64::try_from(h).ok().map(|p| (p, k as u64));
        }
        let frac = r - a;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    None
}

/// A block weight `|α_k|²` known either approximately or exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactWeight {
    Float(f64),
    Rational(BigRational),
    /// `r · base^{1/n}`.
    ScaledRoot { r: BigRational, base: BigRational, n: u32 },
}

impl ExactWeight {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTensor("zero denominator".into()));
        }
        Ok(ExactWeight::Rational(BigRational::new(p.into(), q.into())))
    }

    pub fn scaled_root(r: (i64, i64), base: (i64, i64), n: u32) -> Result<Self> {
        if r.1 == 0 || base.1 == 0 {
            return Err(Error::InvalidTensor("zero denominator".into()));
        }
        if n == 0 {
            return Err(Error::InvalidTensor("root index must be positive".into()));
        }
        let base = BigRational::new(base.0.into(), base.1.into());
        if base.is_negative() {
            return Err(Error::InvalidTensor("negative radicand".into()));
        }
        Ok(ExactWeight::ScaledRoot { r: BigRational::new(r.0.into(), r.1.into()), base, n })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExactWeight::Float(x) if !x.is_finite() => Err(Error::InvalidTensor("non-finite weight".into())),
            ExactWeight::ScaledRoot { n: 0, .. } => Err(Error::InvalidTensor("root index must be positive".into())),
            ExactWeight::ScaledRoot { base, .. } if base.is_negative() => {
                Err(Error::InvalidTensor("negative radicand".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            ExactWeight::Float(x) => *x,
            ExactWeight::Rational(q) => ratio_f64(q),
            ExactWeight::ScaledRoot { r, base, n } => ratio_f64(r) * math::powf(ratio_f64(base), 1.0 / *n as f64),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactWeight::Float(_))
    }

    /// `(r, base, n)` with `self = r · base^{1/n}`, for exact forms.
    fn parts(&self) -> Option<(BigRational, BigRational, u32)> {
        match self {
            ExactWeight::Float(_) => None,
            ExactWeight::Rational(q) => Some((q.clone(), BigRational::one(), 1)),
            ExactWeight::ScaledRoot { r, base, n } => Some((r.clone(), base.clone(), *n)),
        }
    }

    /// The exact rational value, if the form denotes a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        let (r, base, n) = self.parts()?;
        rational_root(&base, n).map(|b| r * b)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactWeight::Float(x) => *x == 0.0,
            ExactWeight::Rational(q) => q.is_zero(),
            ExactWeight::ScaledRoot { r, base, .. } => r.is_zero() || base.is_zero(),
        }
    }
}

pub(crate) fn ratio_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // scale both down by the same power of two
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let a = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

fn exact_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// `q^{1/n}` when it is rational.
fn rational_root(q: &BigRational, n: u32) -> Option<BigRational> {
    let num = exact_root(q.numer(), n)?;
    let den = exact_root(q.denom(), n)?;
    Some(BigRational::new(num, den))
}

/// `coefficient · radicand^{1/index}` with the smallest possible index.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicRatio {
    pub coefficient: BigRational,
    pub radicand: BigRational,
    pub index: u32,
}

impl SymbolicRatio {
    fn reduced(coefficient: BigRational, radicand: BigRational, index: u32) -> Self {
        let mut best = (coefficient.clone(), radicand.clone(), index);
        for g in (2..=index).rev() {
            if index % g != 0 {
                continue;
            }
            if let Some(root) = rational_root(&radicand, g) {
                best = (coefficient.clone(), root, index / g);
                break;
            }
        }
        let (mut c, mut r, mut n) = best;
        if r.is_one() || r.is_zero() {
            if r.is_zero() {
                c = BigRational::zero();
            }
            r = BigRational::one();
            n = 1;
        }
        if n == 1 && !r.is_one() {
            c *= r;
            r = BigRational::one();
        }
        Self { coefficient: c, radicand: r, index: n }
    }

    pub fn is_rational(&self) -> bool {
        self.index == 1
    }

    pub fn value(&self) -> f64 {
        ratio_f64(&self.coefficient) * math::powf(ratio_f64(&self.radicand), 1.0 / self.index as f64)
    }

    /// Human-readable form such as `3^(1/2)` or `2/5`.
    pub fn display(&self) -> String {
        if self.is_rational() {
            return format!("{}", self.coefficient);
        }
        let root = if self.radicand.denom().is_one() {
            format!("{}^(1/{})", self.radicand.numer(), self.index)
        } else {
            format!("({})^(1/{})", self.radicand, self.index)
        };
        if self.coefficient.is_one() {
            root
        } else {
            format!("{}*{}", self.coefficient, root)
        }
    }

    /// `(w_i / w_j)²` for exact weights, `None` if either is a float or `w_j = 0`.
    pub fn squared_ratio(wi: &ExactWeight, wj: &ExactWeight) -> Option<Self> {
        let (ri, bi, ni) = wi.parts()?;
        let (rj, bj, nj) = wj.parts()?;
        if rj.is_zero() || bj.is_zero() {
            return None;
        }
        let l = ni.lcm(&nj);
        let ei = i32::try_from(2 * l / ni).ok()?;
        let ej = i32::try_from(2 * l / nj).ok()?;
        let c = num_traits::Pow::pow(&bi, ei) / num_traits::Pow::pow(&bj, ej);
        let coef = {
            let q = ri / rj;
            &q * &q
        };
        Some(Self::reduced(coef, c, l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_rationals() {
        assert_eq!(rationality_test(0.75, 1_000_000, 1e-9), Some((3, 4)));
        assert_eq!(rationality_test(1.0 / 3.0, 1_000_000, 1e-9), Some((1, 3)));
        assert_eq!(rationality_test(-2.5, 100, 1e-9), Some((-5, 2)));
        assert_eq!(rationality_test(0.0, 100, 1e-9), Some((0, 1)));
    }

    #[test]
    fn sqrt3_is_not_rational() {
        assert_eq!(rationality_test(1.732_050_807_568_877_2, 1_000_000, 1e-9), None);
    }

    #[test]
    fn exhaustive_small_denominators() {
        for q in 1..=1000i64 {
            for p in 0..=q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let x = p as f64 / q as f64;
                assert_eq!(rationality_test(x, 1_000, 1e-9), Some((p, q as u64)), "{p}/{q}");
            }
        }
    }

    #[test]
    fn counterexample_ratio_is_sqrt3() {
        let w1 = ExactWeight::rational(1, 10).unwrap();
        let w2 = ExactWeight::scaled_root((1, 10), (1, 3), 4).unwrap();
        let r = SymbolicRatio::squared_ratio(&w1, &w2).unwrap();
        assert!(!r.is_rational());
        assert_eq!(r.display(), "3^(1/2)");
        assert!((r.value() - 3f64.sqrt()).abs() < 1e-14);
        let back = SymbolicRatio::squared_ratio(&w2, &w1).unwrap();
        assert_eq!(back.display(), "(1/3)^(1/2)");
    }

    #[test]
    fn rational_ratio() {
        let a = ExactWeight::rational(1, 3).unwrap();
        let b = ExactWeight::rational(2, 3).unwrap();
        let r = SymbolicRatio::squared_ratio(&a, &b).unwrap();
        assert!(r.is_rational());
        assert_eq!(r.display(), "1/4");
    }

    #[test]
    fn perfect_power_root_is_rational() {
        let a = ExactWeight::scaled_root((1, 2), (16, 81), 4).unwrap();
        assert_eq!(a.as_rational(), Some(BigRational::new(1.into(), 3.into())));
        let b = ExactWeight::rational(1, 5).unwrap();
        assert!(SymbolicRatio::squared_ratio(&a, &b).unwrap().is_rational());
    }

    proptest! {
        #[test]
        fn common_rational_scale_keeps_rationality(
            p in 1i64..50, q in 1i64..50, s in 1i64..50, t in 1i64..50,
            base in 1i64..20, n in 1u32..6,
        ) {
            let w1 = ExactWeight::scaled_root((p, q), (base, 1), n).unwrap();
            let w2 = ExactWeight::rational(q, p + 1).unwrap();
            let scale = BigRational::new(s.into(), t.into());
            let scaled = |w: &ExactWeight| match w {
                ExactWeight::Rational(x) => ExactWeight::Rational(x * &scale),
                ExactWeight::ScaledRoot { r, base, n } => ExactWeight::ScaledRoot { r: r * &scale, base: base.clone(), n: *n },
                ExactWeight::Float(x) => ExactWeight::Float(*x),
            };
            let before = SymbolicRatio::squared_ratio(&w1, &w2).unwrap();
            let after = SymbolicRatio::squared_ratio(&scaled(&w1), &scaled(&w2)).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
