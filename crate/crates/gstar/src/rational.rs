//! Exact rational numbers with unbounded integer parts.
//!
//! Every quantity in the coloring problem (the distributions `a(R)`, `b(R)`,
//! the marginals, the objective `m`, simplex tableau entries) is stored as a
//! reduced fraction with positive denominator. Intermediate simplex fractions
//! routinely overflow machine words, so the integer parts are arbitrary
//! precision.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// A reduced fraction `numerator/denominator` with `denominator > 0`.
///
/// Backed by `num::BigRational`, which maintains exactly those invariants;
/// this wrapper pins the serialization (`p/q` or a bare integer) and the API
/// surface the rest of the crate relies on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Build `num/den`, reduced, sign moved to the numerator.
    ///
    /// Panics if `den == 0`; use [`Rational::checked_div`] when the
    /// denominator is data rather than a literal.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rational::new with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Nearest `f64`; exact values above ~1e308 saturate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest `f64` that is `<= self`. Used where a float must never
    /// overstate an exactly computed quantity.
    pub fn to_f64_floor(&self) -> f64 {
        let f = self.to_f64();
        if f.is_finite() && &Rational::from_f64_exact(f) > self {
            next_down(f)
        } else {
            f
        }
    }

    /// The exact rational value of a finite `f64` (every finite float is a
    /// dyadic rational).
    pub fn from_f64_exact(f: f64) -> Self {
        assert!(f.is_finite(), "cannot rationalize a non-finite float");
        Rational(BigRational::from_float(f).expect("finite float"))
    }
}

fn next_down(f: f64) -> f64 {
    // f64::next_down is stable only since 1.86; this mirrors it.
    if f.is_nan() || f == f64::NEG_INFINITY {
        return f;
    }
    let bits = f.to_bits();
    let next = if f > 0.0 {
        bits - 1
    } else if f < 0.0 {
        bits + 1
    } else {
        (-f64::from_bits(1)).to_bits()
    };
    f64::from_bits(next)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parse "p/q" or a bare integer "p". Whitespace is not accepted.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("invalid rational '{s}'"));
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Rational::from_bigint(n))
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n).map_err(|_| bad())?;
                let d = BigInt::from_str(d).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::parse(format!("zero denominator in '{s}'")));
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Total ordering via exact comparison (delegates to the reduced form).
impl Rational {
    pub fn cmp_exact(&self, other: &Rational) -> Ordering {
        self.cmp(other)
    }
}

/// Smallest positive integer `N` such that `N * v` is an integer for every
/// `v` in `values`: the lcm of the reduced denominators.
pub fn lcm_denominators(values: &[Rational]) -> BigInt {
    assert!(!values.is_empty(), "lcm_denominators of an empty list");
    values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn exact_fraction_addition() {
        assert_eq!(r(1, 3) + r(1, 6), r(1, 2));
    }

    #[test]
    fn stored_reduced() {
        let x = r(2, 4);
        assert_eq!(x, r(1, 2));
        assert_eq!(x.numer().to_string(), "1");
        assert_eq!(x.denom().to_string(), "2");
        // sign normalizes onto the numerator
        let y = Rational::new(1, -2);
        assert_eq!(y, r(-1, 2));
        assert!(y.denom().is_positive());
    }

    #[test]
    fn cross_multiplication_order() {
        assert_eq!(r(11, 12).cmp(&r(5, 6)), Ordering::Greater);
        assert!(r(-1, 2) < Rational::zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(r(1, 2).checked_div(&Rational::zero()).is_err());
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(r(1, 2).to_string(), "1/2");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!(r(-3, 6).to_string(), "-1/2");
        assert_eq!("7/3".parse::<Rational>().unwrap(), r(7, 3));
        assert_eq!("-5".parse::<Rational>().unwrap(), r(-5, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert!(" 1/2".parse::<Rational>().is_err());
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_denominators(&[r(1, 2), r(1, 3)]), BigInt::from(6));
        // the r=2 optimal profile values
        assert_eq!(
            lcm_denominators(&[r(1, 2), r(1, 2), Rational::one()]),
            BigInt::from(2)
        );
        // side lengths of the r=5 figure
        assert_eq!(
            lcm_denominators(&[r(5, 12), r(7, 12), r(1, 2), r(1, 3)]),
            BigInt::from(12)
        );
    }

    #[test]
    fn f64_floor_never_overstates() {
        let x = r(1, 3);
        let f = x.to_f64_floor();
        assert!(Rational::from_f64_exact(f) <= x);
        let y = r(2, 3);
        let g = y.to_f64_floor();
        assert!(Rational::from_f64_exact(g) <= y);
    }

    // Independent naive fraction arithmetic on raw BigInts (manual Euclid
    // reduction), used as the second route for the round-trip property.
    #[derive(Debug, Clone, PartialEq)]
    struct Naive {
        n: BigInt,
        d: BigInt,
    }

    impl Naive {
        fn new(n: i64, d: i64) -> Self {
            Naive {
                n: BigInt::from(n),
                d: BigInt::from(d),
            }
            .reduce()
        }
        fn reduce(self) -> Self {
            fn gcd(a: BigInt, b: BigInt) -> BigInt {
                if b.is_zero() {
                    a
                } else {
                    gcd(b.clone(), a % b)
                }
            }
            let mut n = self.n;
            let mut d = self.d;
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            let g = gcd(n.abs(), d.clone());
            if g.is_zero() {
                return Naive { n, d };
            }
            Naive {
                n: n / &g,
                d: d / g,
            }
        }
        fn add(&self, o: &Naive) -> Naive {
            Naive {
                n: &self.n * &o.d + &o.n * &self.d,
                d: &self.d * &o.d,
            }
            .reduce()
        }
        fn sub(&self, o: &Naive) -> Naive {
            Naive {
                n: &self.n * &o.d - &o.n * &self.d,
                d: &self.d * &o.d,
            }
            .reduce()
        }
        fn mul(&self, o: &Naive) -> Naive {
            Naive {
                n: &self.n * &o.n,
                d: &self.d * &o.d,
            }
            .reduce()
        }
        fn div(&self, o: &Naive) -> Naive {
            Naive {
                n: &self.n * &o.d,
                d: &self.d * &o.n,
            }
            .reduce()
        }
        fn matches(&self, r: &Rational) -> bool {
            &self.n == r.numer() && &self.d == r.denom()
        }
    }

    proptest! {
        #[test]
        fn arithmetic_matches_naive_oracle(
            an in -1000i64..1000, ad in 1i64..1000,
            bn in -1000i64..1000, bd in 1i64..1000,
        ) {
            let (x, y) = (r(an, ad), r(bn, bd));
            let (nx, ny) = (Naive::new(an, ad), Naive::new(bn, bd));
            prop_assert!(nx.add(&ny).matches(&(&x + &y)));
            prop_assert!(nx.sub(&ny).matches(&(&x - &y)));
            prop_assert!(nx.mul(&ny).matches(&(&x * &y)));
            if bn != 0 {
                prop_assert!(nx.div(&ny).matches(&(&x / &y)));
            }
            // cmp agrees with cross-multiplication
            let lhs = BigInt::from(an) * BigInt::from(bd);
            let rhs = BigInt::from(bn) * BigInt::from(ad);
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
        }

        #[test]
        fn parse_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = r(n, d);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }

        #[test]
        fn lcm_is_minimal(dens in proptest::collection::vec(1i64..200, 1..8)) {
            let vals: Vec<Rational> = dens.iter().map(|&d| r(1, d)).collect();
            let n = lcm_denominators(&vals);
            // divisible by every denominator
            for v in &vals {
                prop_assert!((&n % v.denom()).is_zero());
            }
            // no proper divisor works: check n/p for each prime factor p
            let mut m = n.clone();
            let mut p = BigInt::from(2);
            let mut primes = vec![];
            while &p * &p <= m {
                if (&m % &p).is_zero() {
                    primes.push(p.clone());
                    while (&m % &p).is_zero() { m = &m / &p; }
                }
                p += 1;
            }
            if m > BigInt::one() { primes.push(m); }
            for p in primes {
                let cand = &n / &p;
                let works = vals.iter().all(|v| (&cand % v.denom()).is_zero());
                prop_assert!(!works, "lcm {} not minimal, {} also works", n, cand);
            }
        }
    }
}
