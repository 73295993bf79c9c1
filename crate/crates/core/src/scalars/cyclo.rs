use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{p_valuation, PContent, Rational};
use crate::error::{Error, Result};

pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    // x^m - 1 = prod_{d | m} Φ_d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db].clone() / &b[db];
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

/// Power-basis data of ℚ(ζ_m).
#[derive(Debug)]
pub struct CycloField {
    m: u64,
    phi: usize,
    /// `powers[k]` = coordinates of ζ^k, k in 0..m.
    powers: Vec<Vec<Rational>>,
}

impl CycloField {
    fn build(m: u64) -> CycloField {
        let poly = cyclotomic_polynomial(m);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce using x^phi = -sum c_i x^i
            let top = cur[phi - 1].clone();
            let mut next = vec![Rational::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, c) in poly.iter().take(phi).enumerate() {
                    next[i] -= &top * Rational::from_integer(c.clone());
                }
            }
            cur = next;
        }
        CycloField { m, phi, powers }
    }

    fn get(m: u64) -> Arc<CycloField> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("cyclotomic field cache poisoned");
        guard
            .entry(m)
            .or_insert_with(|| Arc::new(CycloField::build(m)))
            .clone()
    }

    /// Reduces a vector indexed by exponents mod m.
    fn reduce_exponents(&self, acc: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.phi];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                for (o, pk) in out.iter_mut().zip(&self.powers[k]) {
                    if !pk.is_zero() {
                        *o += c * pk;
                    }
                }
            }
        }
        out
    }
}

/// Element of ℚ(ζ_m) in power-basis coordinates. Rational values are always stored
/// in the `Rat` form, so the conductor of a rational element is 1.
#[derive(Clone)]
pub enum CycloElement {
    Rat(Rational),
    Ext(Arc<CycloField>, Vec<Rational>),
}

impl CycloElement {
    pub fn zero() -> Self {
        CycloElement::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        CycloElement::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        CycloElement::Rat(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        CycloElement::Rat(q)
    }

    /// ζ_m^k.
    pub fn zeta(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut acc = vec![Rational::zero(); m as usize];
        acc[k] = Rational::one();
        Self::from_exponents(m, &acc)
    }

    /// Value of `poly(ζ_m)`, coefficients lowest degree first.
    pub fn from_poly(m: u64, poly: &[Rational]) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let mut acc = vec![Rational::zero(); m as usize];
        for (i, c) in poly.iter().enumerate() {
            acc[i % m as usize] += c;
        }
        Self::from_exponents(m, &acc)
    }

    /// Element with the given power-basis coordinates (length φ(m)).
    pub fn from_coeffs(m: u64, coeffs: Vec<Rational>) -> Result<Self> {
        let f = CycloField::get(m);
        if coeffs.len() != f.phi {
            return Err(Error::ShapeError(format!(
                "expected {} coefficients for conductor {m}, got {}",
                f.phi,
                coeffs.len()
            )));
        }
        Ok(Self::normalize(f, coeffs))
    }

    fn from_exponents(m: u64, acc: &[Rational]) -> Self {
        if m <= 2 {
            let mut s = Rational::zero();
            for (k, c) in acc.iter().enumerate() {
                if k % 2 == 1 && m == 2 {
                    s -= c;
                } else {
                    s += c;
                }
            }
            return CycloElement::Rat(s);
        }
        let f = CycloField::get(m);
        let coeffs = f.reduce_exponents(acc);
        Self::normalize(f, coeffs)
    }

    fn normalize(f: Arc<CycloField>, coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            CycloElement::Rat(coeffs.into_iter().next().unwrap_or_else(Rational::zero))
        } else {
            CycloElement::Ext(f, coeffs)
        }
    }

    pub fn conductor(&self) -> u64 {
        match self {
            CycloElement::Rat(_) => 1,
            CycloElement::Ext(f, _) => f.m,
        }
    }

    /// Power-basis coordinates w.r.t. ζ_m for m = `conductor()`.
    pub fn coeffs(&self) -> Vec<Rational> {
        match self {
            CycloElement::Rat(q) => vec![q.clone()],
            CycloElement::Ext(_, c) => c.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CycloElement::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CycloElement::Rat(q) if q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CycloElement::Rat(_))
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            CycloElement::Rat(q) => Some(q.clone()),
            CycloElement::Ext(..) => None,
        }
    }

    /// Coordinates as a vector over exponents 0..l for a multiple l of the conductor.
    fn exponents_in(&self, l: u64) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); l as usize];
        match self {
            CycloElement::Rat(q) => acc[0] = q.clone(),
            CycloElement::Ext(f, c) => {
                let step = (l / f.m) as usize;
                for (i, x) in c.iter().enumerate() {
                    acc[i * step] += x;
                }
            }
        }
        acc
    }

    /// Image in ℚ(ζ_l), l a multiple of the conductor, as power-basis coordinates.
    pub fn coeffs_in(&self, l: u64) -> Vec<Rational> {
        assert!(
            l.is_multiple_of(self.conductor()),
            "conductor does not divide target"
        );
        if l <= 2 {
            return self.coeffs();
        }
        let f = CycloField::get(l);
        f.reduce_exponents(&self.exponents_in(l))
    }

    fn common(&self, other: &Self) -> u64 {
        self.conductor().lcm(&other.conductor())
    }

    /// σ_k: ζ ↦ ζ^k, for k coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        match self {
            CycloElement::Rat(_) => self.clone(),
            CycloElement::Ext(f, c) => {
                let m = f.m as i64;
                let mut acc = vec![Rational::zero(); f.m as usize];
                for (i, x) in c.iter().enumerate() {
                    acc[((i as i64) * k).rem_euclid(m) as usize] += x;
                }
                Self::from_exponents(f.m, &acc)
            }
        }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Absolute norm to ℚ.
    pub fn norm(&self) -> Rational {
        let m = self.conductor();
        let mut acc = CycloElement::one();
        for k in 1..=m {
            if k.gcd(&m) == 1 {
                acc = &acc * &self.galois(k as i64);
            }
        }
        acc.to_rational()
            .expect("norm of a cyclotomic element is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            CycloElement::Rat(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(CycloElement::Rat(q.recip()))
                }
            }
            CycloElement::Ext(f, _) => {
                let m = f.m;
                let mut acc = CycloElement::one();
                for k in 2..=m {
                    if k.gcd(&m) == 1 {
                        acc = &acc * &self.galois(k as i64);
                    }
                }
                let n = (&acc * self)
                    .to_rational()
                    .expect("norm of a cyclotomic element is rational");
                Ok(&acc * &CycloElement::Rat(n.recip()))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = CycloElement::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn scale(&self, q: &Rational) -> Self {
        match self {
            CycloElement::Rat(x) => CycloElement::Rat(x * q),
            CycloElement::Ext(f, c) => {
                if q.is_zero() {
                    return CycloElement::zero();
                }
                CycloElement::Ext(f.clone(), c.iter().map(|x| x * q).collect())
            }
        }
    }

    /// Minimum p-adic valuation over power-basis coordinates.
    pub fn p_content(&self, p: u64) -> PContent {
        match self {
            CycloElement::Rat(q) => p_valuation(q, p),
            CycloElement::Ext(_, c) => c.iter().map(|x| p_valuation(x, p)).min().unwrap(),
        }
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CycloElement::Rat(a), CycloElement::Rat(b)) => a == b,
            (CycloElement::Ext(f, a), CycloElement::Ext(g, b)) if f.m == g.m => a == b,
            (CycloElement::Ext(..), CycloElement::Ext(..)) => {
                let l = self.common(other);
                self.coeffs_in(l) == other.coeffs_in(l)
            }
            _ => false,
        }
    }
}

impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycloElement::Rat(q) => write!(f, "{q}"),
            CycloElement::Ext(field, c) => {
                let mut first = true;
                for (i, x) in c.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, "{}", if x.is_negative() { " - " } else { " + " })?;
                    } else if x.is_negative() {
                        write!(f, "-")?;
                    }
                    let a = x.abs();
                    match i {
                        0 => write!(f, "{a}")?,
                        _ => {
                            if !a.is_one() {
                                write!(f, "{a}*")?;
                            }
                            write!(f, "z{}", field.m)?;
                            if i > 1 {
                                write!(f, "^{i}")?;
                            }
                        }
                    }
                    first = false;
                }
                Ok(())
            }
        }
    }
}

impl<'a> Add<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn add(self, o: &CycloElement) -> CycloElement {
        match (self, o) {
            (CycloElement::Rat(a), CycloElement::Rat(b)) => CycloElement::Rat(a + b),
            (CycloElement::Ext(f, a), CycloElement::Ext(g, b)) if f.m == g.m => {
                CycloElement::normalize(f.clone(), a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (CycloElement::Ext(f, a), CycloElement::Rat(q))
            | (CycloElement::Rat(q), CycloElement::Ext(f, a)) => {
                let mut c = a.clone();
                c[0] += q;
                CycloElement::Ext(f.clone(), c)
            }
            _ => {
                let l = self.common(o);
                let f = CycloField::get(l);
                let a = self.coeffs_in(l);
                let b = o.coeffs_in(l);
                CycloElement::normalize(f, a.iter().zip(&b).map(|(x, y)| x + y).collect())
            }
        }
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        match self {
            CycloElement::Rat(a) => CycloElement::Rat(-a),
            CycloElement::Ext(f, c) => CycloElement::Ext(f.clone(), c.iter().map(|x| -x).collect()),
        }
    }
}

impl<'a> Sub<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn sub(self, o: &CycloElement) -> CycloElement {
        self + &(-o)
    }
}

impl<'a> Mul<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn mul(self, o: &CycloElement) -> CycloElement {
        match (self, o) {
            (CycloElement::Rat(a), CycloElement::Rat(b)) => CycloElement::Rat(a * b),
            (CycloElement::Ext(..), CycloElement::Rat(q)) => self.scale(q),
            (CycloElement::Rat(q), CycloElement::Ext(..)) => o.scale(q),
            _ => {
                let l = self.common(o);
                let f = CycloField::get(l);
                let a = self.coeffs_in(l);
                let b = o.coeffs_in(l);
                let mut acc = vec![Rational::zero(); l as usize];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            acc[(i + j) % l as usize] += x * y;
                        }
                    }
                }
                CycloElement::normalize(f.clone(), f.reduce_exponents(&acc))
            }
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $m(self, o: CycloElement) -> CycloElement {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $m(self, o: &CycloElement) -> CycloElement {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -(&self)
    }
}

impl From<Rational> for CycloElement {
    fn from(q: Rational) -> Self {
        CycloElement::Rat(q)
    }
}

impl From<i64> for CycloElement {
    fn from(n: i64) -> Self {
        CycloElement::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), ["-1", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(3)), ["1", "1", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(4)), ["1", "0", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), ["1", "-1", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(8)), ["1", "0", "0", "0", "1"]);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn reduce_examples() {
        assert!(CycloElement::from_poly(4, &poly(&[1, 0, 1])).is_zero());
        assert_eq!(
            CycloElement::from_poly(3, &poly(&[0, 1, 1])),
            CycloElement::from_int(-1)
        );
        assert_eq!(
            CycloElement::from_poly(8, &poly(&[0, 0, 0, 0, 1])),
            CycloElement::from_int(-1)
        );
    }

    #[test]
    fn p_content_examples() {
        assert_eq!(
            CycloElement::from(rat(3, 4)).p_content(3),
            PContent::Finite(1)
        );
        assert_eq!(
            CycloElement::from(rat(1, 3)).p_content(3),
            PContent::Finite(-1)
        );
        let x = CycloElement::from_poly(3, &[rat(1, 3), rat(1, 3)]);
        assert_eq!(x.coeffs(), vec![rat(1, 3), rat(1, 3)]);
        assert_eq!(x.p_content(3), PContent::Finite(-1));
        assert_eq!(CycloElement::zero().p_content(5), PContent::Infinite);
    }

    #[test]
    fn mixed_conductors() {
        let i = CycloElement::zeta(4, 1);
        let w = CycloElement::zeta(3, 1);
        let z12 = CycloElement::zeta(12, 1);
        // ζ12 = ζ4 · ζ3^{-1} since 3·... : ζ4 = ζ12^3, ζ3 = ζ12^4, ζ12^3·ζ12^{-4} = ζ12^{-1}
        assert_eq!(&i * &w.inv().unwrap(), z12.inv().unwrap());
        assert_eq!(&i * &i, CycloElement::from_int(-1));
        assert_eq!(CycloElement::zeta(6, 2), CycloElement::zeta(3, 1));
        assert_eq!(CycloElement::zeta(6, 3), CycloElement::from_int(-1));
        assert!((&w + &w.conj() + CycloElement::one()).is_zero());
    }

    #[test]
    fn inversion() {
        let x = CycloElement::from_poly(5, &poly(&[2, 1, 0, 3]));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(
            CycloElement::zero().inv().unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn content_not_multiplicative_at_split_primes() {
        // 7 = (2 - ζ3)(2 - ζ3^2) with both factors of content 0
        let x = &CycloElement::from_int(2) - &CycloElement::zeta(3, 1);
        let y = x.conj();
        assert_eq!(x.p_content(7), PContent::Finite(0));
        assert_eq!((&x * &y).p_content(7), PContent::Finite(1));
    }

    fn arb_cyclo() -> impl Strategy<Value = CycloElement> {
        (
            prop::sample::select(vec![1u64, 3, 4, 5, 6, 8, 10, 12]),
            prop::collection::vec(-5i64..6, 8),
        )
            .prop_map(|(m, c)| CycloElement::from_poly(m, &poly(&c)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn norm_is_rational(a in arb_cyclo()) {
            let _ = a.norm();
        }

        #[test]
        fn content_submultiplicative(a in arb_cyclo(), b in arb_cyclo(), p in prop::sample::select(vec![3u64, 5, 7])) {
            let lhs = (&a * &b).p_content(p);
            let rhs = a.p_content(p).add(b.p_content(p));
            prop_assert!(lhs >= rhs);
            if a.is_rational() || b.is_rational() {
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
