//! Exact arithmetic in `Q(2^{1/3})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `c0 + c1·2^{1/3} + c2·2^{2/3}` with rational `c0, c1, c2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactCoefficient {
    parts: [BigRational; 3],
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow2(k: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << k.unsigned_abs());
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

impl ExactCoefficient {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        Self { parts: [c0, c1, c2] }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero(), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// `2^{1/3}`.
    pub fn cbrt2() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// `r · 2^{thirds/3}` for any integer `thirds`.
    pub fn monomial(r: BigRational, thirds: i64) -> Self {
        let (q, j) = thirds.div_mod_floor(&3);
        let r = r * pow2(q);
        let mut parts = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        parts[j as usize] = r;
        Self { parts }
    }

    /// Shorthand for `num/den · 2^{thirds/3}`.
    pub fn ratio_pow2(num: i64, den: i64, thirds: i64) -> Self {
        Self::monomial(rational(num, den), thirds)
    }

    pub fn parts(&self) -> &[BigRational; 3] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Zero::is_zero)
    }

    /// The rational value, if the irrational components vanish.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.parts[1].is_zero() && self.parts[2].is_zero()).then_some(&self.parts[0])
    }

    /// `(r, j)` with `self = r · 2^{j/3}`, `j ∈ {0, 1, 2}`, if at most one
    /// component is nonzero.
    pub fn as_monomial(&self) -> Option<(BigRational, u8)> {
        let nonzero: Vec<usize> = (0..3).filter(|&i| !self.parts[i].is_zero()).collect();
        match nonzero.as_slice() {
            [] => Some((BigRational::zero(), 0)),
            [j] => Some((self.parts[*j].clone(), *j as u8)),
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            parts: [&self.parts[0] * r, &self.parts[1] * r, &self.parts[2] * r],
        }
    }

    /// Field norm `c0³ + 2c1³ + 4c2³ − 6c0c1c2`.
    pub fn norm(&self) -> BigRational {
        let [a, b, c] = &self.parts;
        let two = rational(2, 1);
        let four = rational(4, 1);
        let six = rational(6, 1);
        a * a * a + &two * b * b * b + &four * c * c * c - &six * a * b * c
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let [a, b, c] = &self.parts;
        let two = rational(2, 1);
        let adj = Self::new(a * a - &two * b * c, &two * c * c - a * b, b * b - a * c);
        Some(adj.scale(&n.recip()))
    }

    pub fn pow(&self, k: i32) -> Option<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    pub fn to_f64(&self) -> f64 {
        let c = 2f64.cbrt();
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.parts[0]) + c * f(&self.parts[1]) + c * c * f(&self.parts[2])
    }
}

impl Add for &ExactCoefficient {
    type Output = ExactCoefficient;

    fn add(self, rhs: Self) -> ExactCoefficient {
        ExactCoefficient {
            parts: [
                &self.parts[0] + &rhs.parts[0],
                &self.parts[1] + &rhs.parts[1],
                &self.parts[2] + &rhs.parts[2],
            ],
        }
    }
}

impl Sub for &ExactCoefficient {
    type Output = ExactCoefficient;

    fn sub(self, rhs: Self) -> ExactCoefficient {
        ExactCoefficient {
            parts: [
                &self.parts[0] - &rhs.parts[0],
                &self.parts[1] - &rhs.parts[1],
                &self.parts[2] - &rhs.parts[2],
            ],
        }
    }
}

impl Mul for &ExactCoefficient {
    type Output = ExactCoefficient;

    // (2^{1/3})³ = 2
    fn mul(self, rhs: Self) -> ExactCoefficient {
        let [a0, a1, a2] = &self.parts;
        let [b0, b1, b2] = &rhs.parts;
        let two = rational(2, 1);
        ExactCoefficient {
            parts: [
                a0 * b0 + &two * (a1 * b2 + a2 * b1),
                a0 * b1 + a1 * b0 + &two * (a2 * b2),
                a0 * b2 + a1 * b1 + a2 * b0,
            ],
        }
    }
}

impl Neg for &ExactCoefficient {
    type Output = ExactCoefficient;

    fn neg(self) -> ExactCoefficient {
        ExactCoefficient {
            parts: [-&self.parts[0], -&self.parts[1], -&self.parts[2]],
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactCoefficient {
            type Output = ExactCoefficient;
            fn $m(self, rhs: Self) -> ExactCoefficient {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactCoefficient {
    type Output = ExactCoefficient;

    fn neg(self) -> ExactCoefficient {
        -&self
    }
}

fn two_adic_valuation(n: &BigInt) -> i64 {
    n.trailing_zeros().map_or(0, |z| z as i64)
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, thirds: i64) -> fmt::Result {
    if thirds % 3 == 0 {
        write!(f, "2^{}", thirds / 3)
    } else {
        write!(f, "2^({}/3)", thirds)
    }
}

/// Single-component values print as `p/q * 2^(e/3)` with every power of two
/// moved into the exponent (`2^(5/3)/35`, `-2^(-2/3)`, `9/35 * 2^(-10/3)`);
/// rationals print plainly.
impl fmt::Display for ExactCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((r, j)) = self.as_monomial() else {
            fmt_rational(f, &self.parts[0])?;
            write!(f, " + (")?;
            fmt_rational(f, &self.parts[1])?;
            write!(f, ")*2^(1/3) + (")?;
            fmt_rational(f, &self.parts[2])?;
            return write!(f, ")*2^(2/3)");
        };
        if j == 0 || r.is_zero() {
            return fmt_rational(f, &r);
        }
        let shift = two_adic_valuation(r.numer()) - two_adic_valuation(r.denom());
        let odd = r * pow2(-shift);
        let thirds = 3 * shift + i64::from(j);
        if odd.is_negative() {
            write!(f, "-")?;
        }
        let odd = odd.abs();
        let (num, den) = (odd.numer(), odd.denom());
        if num.is_one() {
            fmt_power(f, thirds)?;
            if !den.is_one() {
                write!(f, "/{den}")?;
            }
            Ok(())
        } else {
            fmt_rational(f, &odd)?;
            write!(f, " * ")?;
            fmt_power(f, thirds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cube_of_cbrt2_is_two() {
        let c = ExactCoefficient::cbrt2();
        assert_eq!(&(&c * &c) * &c, ExactCoefficient::from_int(2));
        assert_eq!(c.pow(3).unwrap(), ExactCoefficient::from_int(2));
        assert_eq!(c.pow(-3).unwrap(), ExactCoefficient::from_ratio(1, 2));
    }

    #[test]
    fn monomial_reduction() {
        assert_eq!(
            ExactCoefficient::ratio_pow2(1, 1, -2),
            ExactCoefficient::ratio_pow2(1, 2, 1)
        );
        assert_eq!(ExactCoefficient::ratio_pow2(3, 1, 6), ExactCoefficient::from_int(12));
    }

    #[test]
    fn display_forms() {
        let cases = [
            (ExactCoefficient::ratio_pow2(1, 1, -2), "2^(-2/3)"),
            (ExactCoefficient::from_ratio(-1, 5), "-1/5"),
            (ExactCoefficient::ratio_pow2(1, 35, 5), "2^(5/3)/35"),
            (ExactCoefficient::ratio_pow2(-1, 225, 10), "-2^(10/3)/225"),
            (ExactCoefficient::from_ratio(1548, 67375), "1548/67375"),
            (ExactCoefficient::ratio_pow2(9, 280, -1), "9/35 * 2^(-10/3)"),
            (ExactCoefficient::zero(), "0"),
        ];
        for (c, want) in cases {
            assert_eq!(c.to_string(), want);
        }
        let mixed = &ExactCoefficient::one() + &ExactCoefficient::cbrt2();
        assert_eq!(mixed.to_string(), "1 + (1)*2^(1/3) + (0)*2^(2/3)");
    }

    #[test]
    fn numeric_value() {
        let c = ExactCoefficient::ratio_pow2(1, 1, -2);
        assert!((c.to_f64() - 2f64.powf(-2.0 / 3.0)).abs() < 1e-15);
    }

    fn small() -> impl Strategy<Value = ExactCoefficient> {
        (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5).prop_map(|(a, b, c, d, e, g)| {
            ExactCoefficient::new(rational(a, b), rational(c, d), rational(e, g))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn inverse_is_exact(a in small()) {
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(&a * &inv, ExactCoefficient::one());
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }
}
