//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export has a plain-Rust twin returning `Result<_, String>` so the
//! logic is testable off the browser.

use tunnel_core::asymptotics::{tunnel_probability_asym, uniform_psi_approx, Form, UniformOrders};
use tunnel_core::oscillator::eval_psi;
use tunnel_core::quadrature::tunnel_probability_exact;
use tunnel_core::series::{
    derive_a1_series, derive_beta_series, derive_inversion_series, derive_phi_series, derive_weight_series,
};
use tunnel_core::OscillatorMode;
use wasm_bindgen::prelude::*;

const MAX_N: u32 = 5000;
const MAX_POINTS: u32 = 2000;

fn check_n(n: u32) -> Result<OscillatorMode, String> {
    if n > MAX_N {
        return Err(format!("n = {n} is above the demo limit {MAX_N}"));
    }
    Ok(OscillatorMode::new(n))
}

/// Rows `[x/ν, log10|ψ|, log10|uniform|, relative deviation]`, flattened,
/// for `points` samples of `x/ν` in `[x_min, x_max]` (`x_min ≥ 1`).
pub fn psi_profile_rows(n: u32, x_min: f64, x_max: f64, points: u32) -> Result<Vec<f64>, String> {
    let mode = check_n(n)?;
    if !(x_min >= 1.0 && x_max > x_min && x_max.is_finite()) {
        return Err("need 1 <= x_min < x_max".into());
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_POINTS}"));
    }
    let mut out = Vec::with_capacity(4 * points as usize);
    for k in 0..points {
        let x = x_min + (x_max - x_min) * f64::from(k) / f64::from(points - 1);
        let exact = eval_psi(mode, x * mode.nu());
        let approx = uniform_psi_approx(mode, x, UniformOrders::FULL).map_err(|e| e.to_string())?;
        out.extend([x, exact.log10_abs(), approx.log10_abs(), approx.relative_deviation(&exact)]);
    }
    Ok(out)
}

/// Rows `[n, P_exact, P_asym, relative error]`, flattened, for `n` from
/// `n_min` to `n_max` in steps of `step`.
pub fn probability_rows(n_min: u32, n_max: u32, step: u32, form: &str, tol: f64) -> Result<Vec<f64>, String> {
    let form: Form = form.parse()?;
    if n_min == 0 || n_max < n_min || step == 0 {
        return Err("need 1 <= n_min <= n_max and step >= 1".into());
    }
    check_n(n_max)?;
    if (n_max - n_min) / step > 400 {
        return Err("at most 400 rows per request".into());
    }
    let mut out = Vec::new();
    for n in (n_min..=n_max).step_by(step as usize) {
        let mode = OscillatorMode::new(n);
        let exact = tunnel_probability_exact(mode, tol).map_err(|e| e.to_string())?;
        let asym = tunnel_probability_asym(mode, form).map_err(|e| e.to_string())?.value;
        out.extend([f64::from(n), exact, asym, (exact - asym).abs() / exact]);
    }
    Ok(out)
}

/// Exact coefficients, one per line as `k  exact  decimal`.
pub fn coefficient_text(which: &str, order: u32) -> Result<String, String> {
    let order = order as usize;
    let series = match which {
        "alpha" => derive_phi_series(order),
        "beta" => derive_beta_series(order),
        "a1" => derive_a1_series(order),
        "inversion" => derive_inversion_series(order),
        "weight" => derive_weight_series(order),
        other => return Err(format!("unknown coefficient family '{other}'")),
    }
    .map_err(|e| e.to_string())?;
    Ok(series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{k:>2}  {:<34} {:+.15e}", c.to_string(), c.to_f64()))
        .collect::<Vec<_>>()
        .join("\n"))
}

#[wasm_bindgen]
pub fn psi_profile(n: u32, x_min: f64, x_max: f64, points: u32) -> Result<Vec<f64>, JsError> {
    psi_profile_rows(n, x_min, x_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn probability_curve(n_min: u32, n_max: u32, step: u32, form: &str, tol: f64) -> Result<Vec<f64>, JsError> {
    probability_rows(n_min, n_max, step, form, tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coefficients(which: &str, order: u32) -> Result<String, JsError> {
    coefficient_text(which, order).map_err(|e| JsError::new(&e))
}
