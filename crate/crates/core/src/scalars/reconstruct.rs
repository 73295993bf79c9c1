use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

/// Recovers the rational with denominator at most `denom_bound` that a truncated or
/// rounded decimal expansion represents.
pub fn rational_reconstruct(approx: &str, denom_bound: u64) -> Result<Rational> {
    let t = approx.trim();
    let digits = t.split_once('.').map(|(_, f)| f.len()).unwrap_or(0);
    let bound = BigInt::from(denom_bound.max(1));
    // need 10^(digits-2) >= bound^2
    if digits < 2 || num_traits::pow(BigInt::from(10), digits - 2) < &bound * &bound {
        return Err(Error::PrecisionError(format!(
            "{t:?} has {digits} fractional digits; denominator bound {denom_bound} needs more"
        )));
    }
    let x = parse_rational(t)?;
    let tol = Rational::new(
        BigInt::one(),
        BigInt::from(2) * num_traits::pow(BigInt::from(10), digits),
    );
    let cand = best_approximation(&x, &bound);
    if (&cand - &x).abs() <= tol {
        Ok(cand)
    } else {
        Err(Error::ReconstructionFailure {
            approx: t.to_string(),
            bound: denom_bound,
        })
    }
}

/// Closest fraction to `x` with denominator at most `bound`, via convergents and
/// semiconvergents.
fn best_approximation(x: &Rational, bound: &BigInt) -> Rational {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    loop {
        let a = r.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > bound {
            let t = (bound - &q0).div_floor(&q1);
            let semi = Rational::new(&p0 + &t * &p1, &q0 + &t * &q1);
            let conv = Rational::new(p1, q1);
            return if (&semi - x).abs() < (&conv - x).abs() {
                semi
            } else {
                conv
            };
        }
        let frac = &r - Rational::from_integer(a);
        if frac.is_zero() {
            return Rational::new(p2, q2);
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        r = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn examples() {
        assert_eq!(
            rational_reconstruct("0.333333333333", 10).unwrap(),
            rat(1, 3)
        );
        assert_eq!(
            rational_reconstruct("2.000000000000", 10).unwrap(),
            rat(2, 1)
        );
        assert!(matches!(
            rational_reconstruct("0.123456789012", 3),
            Err(Error::ReconstructionFailure { .. })
        ));
    }

    #[test]
    fn negative_and_rounded() {
        assert_eq!(
            rational_reconstruct("-0.142857142857", 10).unwrap(),
            rat(-1, 7)
        );
        assert_eq!(
            rational_reconstruct("0.666666666667", 100).unwrap(),
            rat(2, 3)
        );
    }

    #[test]
    fn precision_guard() {
        assert!(matches!(
            rational_reconstruct("0.33", 10),
            Err(Error::PrecisionError(_))
        ));
        assert!(matches!(
            rational_reconstruct("3", 10),
            Err(Error::PrecisionError(_))
        ));
    }

    #[test]
    fn continued_fraction_oracle() {
        // every p/q with q <= 50 reconstructs from 8 correctly rounded digits
        for q in 1..=50i64 {
            for pnum in -60..60i64 {
                let v = rat(pnum, q);
                let scaled = (&v * Rational::from_integer(BigInt::from(100_000_000))).round();
                let n = scaled.to_integer();
                let s = format!(
                    "{}{}.{:08}",
                    if n.is_negative() { "-" } else { "" },
                    n.abs() / 100_000_000,
                    (n.abs() % 100_000_000u64)
                );
                assert_eq!(rational_reconstruct(&s, 50).unwrap(), v, "{s}");
            }
        }
    }
}
