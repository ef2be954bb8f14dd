//! Normalised oscillator eigenfunctions `ψ_n(x) = π^{-1/4} (2^n n!)^{-1/2} e^{-x²/2} H_n(x)`.
//!
//! The three-term recurrence is run on the orthonormal functions themselves,
//! so `H_n` and `2^n n!` are never formed. The Gaussian factor lives in the
//! seed, which is carried as a [`ScaledValue`] because `e^{-x²/2}` underflows
//! long before `ψ_n` becomes negligible in the forbidden region of large `n`.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::ops::{Mul, Neg};

/// Quantum number `n` together with its turning point `ν = √(2n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMode {
    n: u32,
    nu: f64,
}

impl OscillatorMode {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            nu: (2.0 * f64::from(n) + 1.0).sqrt(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Turning point `√(2n+1)`.
    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// A real number stored as `mantissa · 2^exponent` with
/// `|mantissa| ∈ [1/2, 1)`, or `(0, 0)` for zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    exponent: i64,
}

/// Split a finite `x` into `(m, e)` with `x = m·2^e`, `|m| ∈ [1/2, 1)`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal
        let (m, e) = frexp(x * f64::from_bits(0x43f0_0000_0000_0000));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff_u64 << 52)) | (1022_u64 << 52));
    (m, biased - 1022)
}

/// `x · 2^e` without intermediate overflow for moderate `x`.
pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return x;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= f64::from_bits(((1000 + 1023) as u64) << 52);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= f64::from_bits(((-1000 + 1023) as u64) << 52);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::from_bits(((e + 1023) as u64) << 52)
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: 0.0,
        exponent: 0,
    };

    /// `mantissa · 2^exponent`, normalised.
    pub fn new(mantissa: f64, exponent: i64) -> Self {
        let (m, e) = frexp(mantissa);
        if m == 0.0 {
            return Self::ZERO;
        }
        Self {
            mantissa: m,
            exponent: exponent + e,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    /// `sign · e^{log_abs}` for arbitrarily large or small `log_abs`.
    pub fn from_ln(sign: f64, log_abs: f64) -> Self {
        if sign == 0.0 || log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let log2 = log_abs / LN_2;
        let k = log2.floor();
        // keep the fractional part of the base-2 logarithm in natural units
        let frac = log_abs - k * LN_2;
        Self::new(sign.signum() * frac.exp(), k as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn abs(self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Nearest `f64`; underflows to zero and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }

    /// `ln|value|`.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.exponent as f64 * LN_2
    }

    /// `log10|value|`, convenient for plotting values far outside `f64` range.
    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    pub fn square(self) -> Self {
        self * self
    }

    /// `self / other` as a plain `f64`; intended for ratios of comparable size.
    pub fn ratio(&self, other: &ScaledValue) -> f64 {
        ldexp(self.mantissa / other.mantissa, self.exponent - other.exponent)
    }

    /// `|self − other| / |other|`.
    pub fn relative_deviation(&self, other: &ScaledValue) -> f64 {
        if other.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (self.ratio(other) - 1.0).abs()
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let e = self.exponent.max(other.exponent);
        let sum = ldexp(self.mantissa, self.exponent - e) + ldexp(other.mantissa, other.exponent - e);
        Self::new(sum, e)
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: Self) -> Self {
        Self::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<f64> for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: f64) -> Self {
        self * ScaledValue::from_f64(rhs)
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;

    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl PartialOrd for ScaledValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = (self.signum(), other.signum());
        if a != b {
            return a.partial_cmp(&b);
        }
        if a == 0.0 {
            return Some(Ordering::Equal);
        }
        let magnitude = self
            .exponent
            .cmp(&other.exponent)
            .then(self.mantissa.abs().total_cmp(&other.mantissa.abs()));
        Some(if a > 0.0 { magnitude } else { magnitude.reverse() })
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let log10 = self.log10_abs();
        let dec = log10.floor();
        let lead = 10f64.powf(log10 - dec);
        let sign = if self.mantissa < 0.0 { "-" } else { "" };
        write!(f, "{sign}{lead:.12}e{}", dec as i64)
    }
}

// Cody–Waite split of ln 2; the high part has 32 significant bits.
const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;

/// `π^{-1/4} e^{-x²/2}` in scaled form, with `x²` split exactly.
fn gaussian_seed(x: f64) -> ScaledValue {
    let sq_hi = x * x;
    let sq_lo = x.mul_add(x, -sq_hi);
    let half_hi = 0.5 * sq_hi;
    let half_lo = 0.5 * sq_lo;
    let k = (half_hi / LN_2).round();
    let r = (half_hi - k * LN2_HI) - k * LN2_LO + half_lo;
    ScaledValue::new(PI.powf(-0.25) * (-r).exp(), -(k as i64))
}

/// `ψ_n(x)` via the orthonormal recurrence
/// `ψ_{k+1} = x √(2/(k+1)) ψ_k − √(k/(k+1)) ψ_{k−1}`.
pub fn eval_psi(mode: OscillatorMode, x: f64) -> ScaledValue {
    let seed = gaussian_seed(x);
    let mut exponent = seed.exponent;
    let mut cur = seed.mantissa;
    let mut prev = 0.0_f64;
    for k in 0..mode.n {
        let kf = f64::from(k);
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let (_, e) = frexp(cur.abs().max(prev.abs()));
        if e != 0 {
            cur = ldexp(cur, -e);
            prev = ldexp(prev, -e);
            exponent += e;
        }
    }
    ScaledValue::new(cur, exponent)
}

/// Probability density `P_n(x) = ψ_n(x)²`.
pub fn eval_density(mode: OscillatorMode, x: f64) -> ScaledValue {
    eval_psi(mode, x).square()
}
