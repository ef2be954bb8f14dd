//! Expansion coefficients of the turning-point map and the coefficient
//! functions, derived in `u = x − 1` and then re-expanded in `ζ`.
//!
//! With `E = 1 + u/2` one has `x² − 1 = 2uE` and
//! `ζ^{3/2} = √2 · u^{3/2} · T(u)`, `T = Σ 3b_k/(2k+3) u^k` where
//! `√E = Σ b_k u^k`. Every half-integer power of `u` then cancels by hand.

use super::{rational, ExactCoefficient, TruncatedSeries};
use crate::error::{Error, Result};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 30;

/// Radius in `ζ` set by the singularity at `x = −1`.
pub fn zeta_radius() -> f64 {
    (0.75 * std::f64::consts::PI).powf(2.0 / 3.0)
}

fn check_order(m: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&m) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "series order",
            value: m as f64,
        })
    }
}

fn r(num: i64, den: i64) -> ExactCoefficient {
    ExactCoefficient::from_ratio(num, den)
}

/// Building blocks in `u`, all of length `len`.
struct Local {
    len: usize,
    x: TruncatedSeries,
    e: TruncatedSeries,
    t: TruncatedSeries,
}

impl Local {
    fn new(len: usize) -> Result<Self> {
        let mut lin = vec![ExactCoefficient::zero(); len];
        lin[0] = ExactCoefficient::one();
        if len > 1 {
            lin[1] = r(1, 2);
        }
        let e = TruncatedSeries::new(lin, "u").with_radius(2.0);
        let sqrt_e = e.pow_rational(1, 2)?;
        let t = TruncatedSeries::new(
            sqrt_e
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, b)| b.scale(&rational(3, 2 * k as i64 + 3)))
                .collect(),
            "u",
        )
        .with_radius(2.0);
        let x = TruncatedSeries::identity(len, "u").add_constant(&ExactCoefficient::one()).with_radius(2.0);
        Ok(Self { len, x, e, t })
    }

    fn zeta(&self) -> Result<TruncatedSeries> {
        let t23 = self.t.pow_rational(2, 3)?;
        Ok(t23.shift_up(1).scale(&ExactCoefficient::cbrt2()))
    }

    /// `x(x² − 6)`.
    fn cubic(&self) -> TruncatedSeries {
        let x2 = self.x.mul(&self.x);
        self.x.mul(&x2.add_constant(&ExactCoefficient::from_int(-6)))
    }

    /// `u(ζ)` of length `m`.
    fn u_of_zeta(m: usize) -> Result<TruncatedSeries> {
        let local = Self::new(m.max(2))?;
        Ok(local.zeta()?.revert()?.truncate(m).with_var("zeta").with_radius(zeta_radius()))
    }

    fn phi(&self) -> Result<TruncatedSeries> {
        let two_plus_u = self.x.add_constant(&ExactCoefficient::one());
        self.t
            .pow_rational(2, 3)?
            .scale(&ExactCoefficient::cbrt2())
            .div(&two_plus_u)
    }

    fn b0(&self) -> Result<TruncatedSeries> {
        // b0 = −2^{−5/3}/24 · u^{−2} T^{−1/3} [x(x²−6) E^{−3/2} + 5/T]
        let bracket = self
            .cubic()
            .mul(&self.e.pow_rational(-3, 2)?)
            .add(&self.t.recip()?.scale(&r(5, 1)));
        let regular = bracket.shift_down(2)?;
        Ok(regular
            .mul(&self.t.truncate(self.len - 2).pow_rational(-1, 3)?)
            .scale(&ExactCoefficient::ratio_pow2(-1, 24, -5)))
    }

    fn a1(&self) -> Result<TruncatedSeries> {
        // 1152 u³ a1 = (145 + 249x² − 9x⁴)/(8E³) − 7x(x²−6)/(4E^{3/2}T) − 455/(8T²)
        let x2 = self.x.mul(&self.x);
        let quartic = x2.scale(&r(249, 1)).sub(&x2.mul(&x2).scale(&r(9, 1))).add_constant(&r(145, 1));
        let first = quartic.div(&self.e.pow_rational(3, 1)?)?.scale(&r(1, 8));
        let second = self
            .cubic()
            .div(&self.e.pow_rational(3, 2)?.mul(&self.t))?
            .scale(&r(7, 4));
        let third = self.t.mul(&self.t).recip()?.scale(&r(455, 8));
        let bracket = first.sub(&second).sub(&third);
        Ok(bracket.shift_down(3)?.scale(&r(1, 1152)))
    }
}

/// `ζ(u)` through `u^{M−1}`; the linear coefficient is `2^{1/3}`.
pub fn derive_zeta_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    Local::new(m)?.zeta()
}

/// `x(ζ) = 1 + u(ζ)` through `ζ^{M−1}`.
pub fn derive_inversion_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    Ok(Local::u_of_zeta(m)?.add_constant(&ExactCoefficient::one()))
}

/// `φ(ζ) = ζ/(x² − 1) = Σ α_m ζ^m`.
pub fn derive_phi_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    Local::new(m)?.phi()?.compose(&Local::u_of_zeta(m)?)
}

/// `b0(ζ)`.
pub fn derive_b0_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    Local::new(m + 2)?.b0()?.compose(&Local::u_of_zeta(m)?)
}

/// `β(ζ) = −φ(ζ) b0(ζ) = Σ β_m ζ^m`.
pub fn derive_beta_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    let local = Local::new(m + 2)?;
    let product = local.phi()?.truncate(m).mul(&local.b0()?).neg();
    product.compose(&Local::u_of_zeta(m)?)
}

/// `a1(ζ)`; the three singular pieces must cancel through `u²`.
pub fn derive_a1_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    Local::new(m + 3)?.a1()?.compose(&Local::u_of_zeta(m)?)
}

/// Weight of the `ν^{−4}` correction, `−φ(3 + 1152 a1)/576`.
pub fn derive_weight_series(m: usize) -> Result<TruncatedSeries> {
    check_order(m)?;
    let local = Local::new(m + 3)?;
    let inner = local.a1()?.scale(&r(1152, 1)).add_constant(&r(3, 1));
    let weight = local.phi()?.truncate(m).mul(&inner).scale(&r(-1, 576));
    weight.compose(&Local::u_of_zeta(m)?)
}
