use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// p-adic valuation or p-content; `Infinite` exactly for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PContent {
    Finite(i64),
    Infinite,
}

impl PContent {
    pub fn is_integral(self) -> bool {
        self >= PContent::Finite(0)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            PContent::Finite(v) => Some(v),
            PContent::Infinite => None,
        }
    }

    pub fn add(self, other: PContent) -> PContent {
        match (self, other) {
            (PContent::Finite(a), PContent::Finite(b)) => PContent::Finite(a + b),
            _ => PContent::Infinite,
        }
    }
}

impl std::fmt::Display for PContent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PContent::Finite(v) => write!(f, "{v}"),
            PContent::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn p_valuation(q: &Rational, p: u64) -> PContent {
    if q.is_zero() {
        return PContent::Infinite;
    }
    let p = BigInt::from(p);
    PContent::Finite(int_valuation(q.numer(), &p) - int_valuation(q.denom(), &p))
}

pub fn is_p_integral(q: &Rational, p: u64) -> bool {
    q.denom().is_one() || !(q.denom() % BigInt::from(p)).is_zero()
}

/// Parses `"n"`, `"n/d"` or a plain decimal `"1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |detail: &str| Error::Parse {
        field: "rational".into(),
        detail: format!("{detail}: {s:?}"),
    };
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((i, f)) = t.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let neg = i.starts_with('-');
        let whole: BigInt = if i.is_empty() || i == "-" || i == "+" {
            BigInt::zero()
        } else {
            i.parse().map_err(|_| err("bad decimal"))?
        };
        let frac: BigInt = f.parse().map_err(|_| err("bad decimal"))?;
        let scale = num_traits::pow(BigInt::from(10), f.len());
        let mag = whole.abs() * &scale + frac;
        let v = Rational::new(mag, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err("bad integer"))?;
    Ok(Rational::from_integer(n))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(p_valuation(&rat(3, 4), 3), PContent::Finite(1));
        assert_eq!(p_valuation(&rat(1, 3), 3), PContent::Finite(-1));
        assert_eq!(p_valuation(&rat(0, 1), 3), PContent::Infinite);
        assert_eq!(p_valuation(&rat(50, 7), 5), PContent::Finite(2));
        assert!(is_p_integral(&rat(5, 2), 3));
        assert!(!is_p_integral(&rat(5, 9), 3));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn content_order() {
        assert!(PContent::Finite(100) < PContent::Infinite);
        assert!(PContent::Finite(-1) < PContent::Finite(0));
        assert!(!PContent::Finite(-1).is_integral());
        assert!(PContent::Infinite.is_integral());
    }
}
