//! Truncated power series with exact coefficients in `Q(2^{1/3})`, and the
//! derivations of every expansion coefficient used by the asymptotics.
//!
//! Half-integer powers never enter a series: they are factored out by hand
//! in [`derive`] and cancel before any ring arithmetic happens.

mod coefficient;
pub mod derive;

pub use coefficient::{rational, ExactCoefficient};
pub use derive::{
    derive_a1_series, derive_b0_series, derive_beta_series, derive_inversion_series, derive_phi_series,
    derive_weight_series, derive_zeta_series, MAX_ORDER,
};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `Σ_{k<len} c_k v^k` about a point; arithmetic truncates at the shorter length.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExactCoefficient>,
    var: String,
    radius: Option<f64>,
}

impl TruncatedSeries {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<ExactCoefficient>, var: impl Into<String>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        Self {
            coeffs,
            var: var.into(),
            radius: None,
        }
    }

    pub fn from_ratios(ratios: &[(i64, i64)], var: impl Into<String>) -> Self {
        Self::new(
            ratios.iter().map(|&(n, d)| ExactCoefficient::from_ratio(n, d)).collect(),
            var,
        )
    }

    pub fn constant(c: ExactCoefficient, len: usize, var: impl Into<String>) -> Self {
        let mut coeffs = vec![ExactCoefficient::zero(); len.max(1)];
        coeffs[0] = c;
        Self::new(coeffs, var)
    }

    /// The series of the variable itself.
    pub fn identity(len: usize, var: impl Into<String>) -> Self {
        let mut s = Self::constant(ExactCoefficient::zero(), len, var);
        if len > 1 {
            s.coeffs[1] = ExactCoefficient::one();
        }
        s
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[ExactCoefficient] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ExactCoefficient {
        &self.coeffs[k]
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn truncate(&self, len: usize) -> Self {
        let len = len.clamp(1, self.len());
        Self {
            coeffs: self.coeffs[..len].to_vec(),
            var: self.var.clone(),
            radius: self.radius,
        }
    }

    /// Truncates or zero-pads to exactly `len` coefficients.
    pub fn resize(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len.max(1), ExactCoefficient::zero());
        self.same_shape(coeffs)
    }

    fn same_shape(&self, coeffs: Vec<ExactCoefficient>) -> Self {
        Self {
            coeffs,
            var: self.var.clone(),
            radius: self.radius,
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&ExactCoefficient, &ExactCoefficient) -> ExactCoefficient) -> Self {
        let len = self.len().min(other.len());
        self.same_shape((0..len).map(|k| op(&self.coeffs[k], &other.coeffs[k])).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.same_shape(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &ExactCoefficient) -> Self {
        self.same_shape(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.same_shape(self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &ExactCoefficient) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = &out.coeffs[0] + c;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut out = vec![ExactCoefficient::zero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        self.same_shape(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::ZeroLeadingTerm)?;
        let mut out: Vec<ExactCoefficient> = Vec::with_capacity(self.len());
        out.push(inv0.clone());
        for k in 1..self.len() {
            let mut acc = ExactCoefficient::zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-&(&acc * &inv0));
        }
        Ok(self.same_shape(out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `self^{p/q}`. The constant term must be `r·2^{j/3}` with an exact
    /// `(p/q)`-th power in the ring.
    pub fn pow_rational(&self, p: i64, q: i64) -> Result<Self> {
        assert!(q > 0, "exponent denominator must be positive");
        let c0 = &self.coeffs[0];
        let lead = constant_power(c0, p, q)?;
        let unit = self.scale(&c0.inverse().ok_or(Error::ZeroLeadingTerm)?);
        let alpha = rational(p, q);
        // k g_k = Σ_{j=1}^{k} (α j − (k − j)) f_j g_{k−j}, f_0 = g_0 = 1
        let mut g: Vec<ExactCoefficient> = Vec::with_capacity(self.len());
        g.push(ExactCoefficient::one());
        for k in 1..self.len() {
            let mut acc = ExactCoefficient::zero();
            for j in 1..=k {
                let weight = &alpha * BigRational::from_integer(j.into()) - BigRational::from_integer((k - j).into());
                if weight.is_zero() || unit.coeffs[j].is_zero() {
                    continue;
                }
                acc = &acc + &(&unit.coeffs[j] * &g[k - j]).scale(&weight);
            }
            g.push(acc.scale(&rational(1, k as i64)));
        }
        Ok(self.same_shape(g).scale(&lead))
    }

    /// `self ∘ inner`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let len = self.len().min(inner.len());
        let inner = inner.truncate(len);
        let mut acc = Self::constant(self.coeffs[len - 1].clone(), len, inner.var.clone());
        for k in (0..len - 1).rev() {
            acc = acc.mul(&inner).add_constant(&self.coeffs[k]);
        }
        acc.radius = inner.radius;
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.len() == 1 {
            return self.same_shape(vec![ExactCoefficient::zero()]);
        }
        self.same_shape(
            (1..self.len())
                .map(|k| self.coeffs[k].scale(&rational(k as i64, 1)))
                .collect(),
        )
    }

    /// Divides by `v^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if let Some(degree) = (0..k.min(self.len())).find(|&d| !self.coeffs[d].is_zero()) {
            return Err(Error::PoleCancellationFailure {
                degree: degree as i32 - k as i32,
            });
        }
        if k >= self.len() {
            return Err(Error::PoleCancellationFailure { degree: 0 });
        }
        Ok(self.same_shape(self.coeffs[k..].to_vec()))
    }

    /// Multiplies by `v^k`, keeping the length.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![ExactCoefficient::zero(); k.min(self.len())];
        coeffs.extend(self.coeffs.iter().take(self.len().saturating_sub(k)).cloned());
        self.same_shape(coeffs)
    }

    /// Compositional inverse by Newton iteration, doubling the order per step.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.len() < 2 {
            return Err(Error::NotInvertible);
        }
        let inv1 = self.coeffs[1].inverse().ok_or(Error::NotInvertible)?;
        let m = self.len();
        let mut g = Self::identity(m, self.var.clone()).scale(&inv1);
        let deriv = self.derivative();
        let mut prec = 2;
        while prec < m {
            let next = (2 * prec).min(m);
            let gt = g.resize(next);
            let residual = self.truncate(next).compose(&gt)?.sub(&Self::identity(next, self.var.clone()));
            let slope = deriv.truncate(next - prec).compose(&gt.truncate(next - prec))?;
            let correction = residual.shift_down(prec)?.div(&slope)?;
            let mut shifted = vec![ExactCoefficient::zero(); prec];
            shifted.extend(correction.coeffs);
            g = gt.sub(&gt.same_shape(shifted));
            prec = next;
        }
        Ok(g.truncate(m))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(ExactCoefficient::to_f64).collect()
    }

    /// Horner evaluation in `f64`.
    pub fn eval_f64(&self, v: f64) -> f64 {
        horner(&self.to_f64_coeffs(), v)
    }
}

pub fn horner(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
}

/// Exact `q`-th root of a rational, if one exists.
fn rational_root(r: &BigRational, q: u32) -> Option<BigRational> {
    if r.is_negative() && q % 2 == 0 {
        return None;
    }
    let root = |n: &num_bigint::BigInt| {
        let m = n.abs().nth_root(q);
        (m.pow(q) == n.abs()).then_some(if n.is_negative() { -m } else { m })
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// `c^{p/q}` for `c = r · 2^{j/3}`, after moving every power of two in `r`
/// into the exponent.
fn constant_power(c: &ExactCoefficient, p: i64, q: i64) -> Result<ExactCoefficient> {
    let (r, j) = c.as_monomial().ok_or(Error::NonRepresentablePower)?;
    if r.is_zero() {
        return Err(Error::ZeroLeadingTerm);
    }
    let valuation = |n: &num_bigint::BigInt| n.trailing_zeros().map_or(0, |z| z as i64);
    let shift = valuation(r.numer()) - valuation(r.denom());
    let odd = BigRational::new(r.numer() >> valuation(r.numer()) as usize, r.denom() >> valuation(r.denom()) as usize);
    let root = rational_root(&odd, q as u32).ok_or(Error::NonRepresentablePower)?;
    let thirds = (3 * shift + i64::from(j)) * p;
    if thirds % q != 0 {
        return Err(Error::NonRepresentablePower);
    }
    let mut value = BigRational::one();
    let base = if p < 0 { root.recip() } else { root };
    for _ in 0..p.unsigned_abs() {
        value *= &base;
    }
    Ok(ExactCoefficient::monomial(value, thirds / q))
}
