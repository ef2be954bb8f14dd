//! Adaptive Gauss–Legendre quadrature on `[a, ∞)` for decaying integrands,
//! and the quadrature value of the tunnelling probability.
//!
//! Panels start at `a` with geometrically growing width. Each panel is
//! integrated with 20- and 40-point rules and bisected until the two agree.
//! Integration stops once a panel contributes less than `tail_fraction · tol`
//! and the exponential majorant `|f(X)| / λ`, with `λ` the local decay rate
//! of `ln|f|` at the cut `X`, is below the same bound.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::oscillator::{eval_density, OscillatorMode};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const MIN_TOL: f64 = 1e-15;
pub const MAX_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    /// Abscissa where integration stopped.
    pub tail_cut: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub initial_width: f64,
    pub growth: f64,
    /// Fraction of `tol` that the last panel and the tail bound must fall below.
    pub tail_fraction: f64,
    pub max_panels: usize,
    /// No tail cut is attempted before `a + min_tail_offset`.
    pub min_tail_offset: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            initial_width: 1.0,
            growth: 2.0,
            tail_fraction: 0.1,
            max_panels: 100_000,
            min_tail_offset: 0.0,
        }
    }
}

struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

fn rules() -> &'static (GaussRule, GaussRule) {
    static RULES: OnceLock<(GaussRule, GaussRule)> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(20), gauss_legendre(40)))
}

fn apply<F: Fn(f64) -> f64>(rule: &GaussRule, f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut sum = 0.0_f64;
    let mut abs_sum = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = w * f(mid + half * x);
        sum += v;
        abs_sum += v.abs();
    }
    (sum * half, abs_sum * half)
}

struct PanelState {
    panels: usize,
    max_panels: usize,
}

fn adaptive_panel<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    local_tol: f64,
    depth: u32,
    state: &mut PanelState,
) -> (f64, f64) {
    let (coarse_rule, fine_rule) = rules();
    let (coarse, _) = apply(coarse_rule, f, lo, hi);
    let (fine, fine_abs) = apply(fine_rule, f, lo, hi);
    let err = (fine - coarse).abs();
    let roundoff = 64.0 * f64::EPSILON * fine_abs;
    if err <= local_tol.max(roundoff) || depth >= 48 || state.panels >= state.max_panels {
        state.panels += 1;
        return (fine, err);
    }
    let mid = 0.5 * (lo + hi);
    let (l, le) = adaptive_panel(f, lo, mid, 0.5 * local_tol, depth + 1, state);
    let (r, re) = adaptive_panel(f, mid, hi, 0.5 * local_tol, depth + 1, state);
    (l + r, le + re)
}

/// Bound on `∫_X^∞ |f|` assuming `ln|f|` keeps decaying at least as fast as at `X`.
fn tail_majorant<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> Option<f64> {
    let fx = f(x).abs();
    if fx == 0.0 {
        return Some(0.0);
    }
    let fb = f(x - h).abs();
    if fb == 0.0 || !fx.is_finite() || !fb.is_finite() {
        return None;
    }
    // backward difference underestimates the decay rate of a log-concave tail
    let rate = (fb.ln() - fx.ln()) / h;
    (rate > 0.0).then(|| fx / rate)
}

pub fn check_tolerance(tol: f64) -> Result<()> {
    if (MIN_TOL..=MAX_TOL).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// `∫_a^∞ f` with default panel layout.
pub fn integrate_decaying<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_decaying_with(f, a, tol, &QuadratureOptions::default())
}

pub fn integrate_decaying_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: f64,
    options: &QuadratureOptions,
) -> Result<QuadratureResult> {
    check_tolerance(tol)?;
    let mut state = PanelState {
        panels: 0,
        max_panels: options.max_panels,
    };
    let mut sum = 0.0_f64;
    let mut err_sum = 0.0;
    let mut t = 0.0;
    let mut width = options.initial_width;
    loop {
        let lo = a + t;
        let hi = a + t + width;
        if !hi.is_finite() || state.panels >= options.max_panels {
            return Err(Error::NonConvergence {
                panels: state.panels,
                estimate: err_sum,
                tolerance: tol,
            });
        }
        let scale = sum.abs().max(1.0);
        let (panel, panel_err) = adaptive_panel(&f, lo, hi, tol * scale / 256.0, 0, &mut state);
        sum += panel;
        err_sum += panel_err;
        t += width;
        width *= options.growth;

        let scale = sum.abs().max(1.0);
        let bound = options.tail_fraction * tol * scale;
        if t >= options.min_tail_offset && panel.abs() <= bound {
            let h = 1e-3 * (hi - lo).min(1.0);
            if let Some(tail) = tail_majorant(&f, hi, h) {
                if tail <= bound {
                    let estimate = err_sum + tail;
                    if estimate > tol * scale {
                        return Err(Error::NonConvergence {
                            panels: state.panels,
                            estimate,
                            tolerance: tol,
                        });
                    }
                    return Ok(QuadratureResult {
                        value: sum,
                        abs_error_estimate: estimate,
                        panels_used: state.panels,
                        tail_cut: hi,
                    });
                }
            }
        }
    }
}

/// `2 ∫_ν^∞ ψ_n(x)² dx` with full quadrature bookkeeping. The returned
/// value and error estimate refer to the probability, not the half-line
/// integral.
pub fn tunnel_probability_quadrature(mode: OscillatorMode, tol: f64) -> Result<QuadratureResult> {
    let nu = mode.nu();
    let options = QuadratureOptions {
        initial_width: (10.0 / nu).min(1.0),
        min_tail_offset: 2.0,
        ..QuadratureOptions::default()
    };
    let r = integrate_decaying_with(|x| eval_density(mode, x).to_f64(), nu, tol, &options)?;
    Ok(QuadratureResult {
        value: 2.0 * r.value,
        abs_error_estimate: 2.0 * r.abs_error_estimate,
        ..r
    })
}

/// Tunnelling probability `P_tun(n) = 2 a_n Q_n` by quadrature of the density.
pub fn tunnel_probability_exact(mode: OscillatorMode, tol: f64) -> Result<f64> {
    tunnel_probability_quadrature(mode, tol).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::eval_density;
    use crate::specialfn::erfc;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (g20, g40) = rules();
        for k in 0..39 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let (v, _) = apply(g20, &|x: f64| x.powi(k), -1.0, 1.0);
            assert!((v - exact).abs() < 1e-14, "k={k}");
            let (v, _) = apply(g40, &|x: f64| x.powi(2 * k), -1.0, 1.0);
            assert!((v - 2.0 / (2.0 * k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_decaying(|x| (-x * x).exp(), 1.0, 1e-13).unwrap();
        let want = PI.sqrt() / 2.0 * erfc(1.0);
        assert!((r.value - 0.139_402_792_640_330_99).abs() < 1e-13);
        assert!((r.value - want).abs() < 1e-13);
        assert!(r.abs_error_estimate <= 1e-13);
        assert!(r.tail_cut >= 1.0);
    }

    #[test]
    fn exponential() {
        let r = integrate_decaying(|x| (-x).exp(), 0.0, 1e-13).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        assert!(r.panels_used > 0);
    }

    #[test]
    fn tolerance_range_enforced() {
        assert!(matches!(
            integrate_decaying(|x| (-x).exp(), 0.0, 1e-2),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(integrate_decaying(|x| (-x).exp(), 0.0, 1e-16).is_err());
    }

    #[test]
    fn non_decaying_integrand_fails() {
        let opts = QuadratureOptions {
            max_panels: 2_000,
            ..QuadratureOptions::default()
        };
        let r = integrate_decaying_with(|x| 1.0 / (1.0 + x), 0.0, 1e-10, &opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })), "{r:?}");
        let r = integrate_decaying(|_| 1.0, 0.0, 1e-10);
        assert!(matches!(r, Err(Error::NonConvergence { .. })), "{r:?}");
    }

    #[test]
    fn half_line_for_tenth_state() {
        let mode = OscillatorMode::new(10);
        let r = integrate_decaying_with(
            |x| eval_density(mode, x).to_f64(),
            21f64.sqrt(),
            1e-13,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_eq!(format!("{:.7}", r.value), "0.0300719");
        assert!((r.value - 0.060_143_814_490_571_855 / 2.0).abs() < 1e-13);
    }

    #[test]
    fn ground_state_matches_erfc() {
        let p = tunnel_probability_exact(OscillatorMode::new(0), 1e-13).unwrap();
        assert!((p - erfc(1.0)).abs() < 1e-13);
        assert!((p - 0.157_299_207_050_285_13).abs() < 1e-13);
    }

    // 30-digit mpmath quadrature of the same density
    #[test]
    fn tabulated_states() {
        for (n, want) in [(10, 0.060_143_814_490_571_855), (800, 0.014_413_805_375_246_386)] {
            let p = tunnel_probability_exact(OscillatorMode::new(n), 1e-13).unwrap();
            assert!((p - want).abs() < 1e-13, "n={n}: {p}");
        }
    }

    #[test]
    fn normalisation() {
        for n in [0u32, 1, 10, 100, 800] {
            let mode = OscillatorMode::new(n);
            let opts = QuadratureOptions {
                initial_width: 0.5,
                min_tail_offset: mode.nu() + 2.0,
                ..QuadratureOptions::default()
            };
            let half = integrate_decaying_with(|x| eval_density(mode, x).to_f64(), 0.0, 1e-13, &opts).unwrap();
            assert!((2.0 * half.value - 1.0).abs() < 1e-11, "n={n}: {}", 2.0 * half.value);
        }
    }

    #[test]
    fn refining_tolerance_is_stable() {
        let mode = OscillatorMode::new(50);
        for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
            let coarse = tunnel_probability_exact(mode, tol).unwrap();
            let fine = tunnel_probability_exact(mode, tol / 10.0).unwrap();
            assert!((coarse - fine).abs() <= tol, "tol={tol}");
        }
    }

    #[test]
    fn panel_layout_invariance() {
        let mode = OscillatorMode::new(200);
        let tol = 1e-13;
        let f = |x: f64| eval_density(mode, x).to_f64();
        let base = QuadratureOptions {
            initial_width: (10.0 / mode.nu()).min(1.0),
            min_tail_offset: 2.0,
            ..QuadratureOptions::default()
        };
        let reference = integrate_decaying_with(f, mode.nu(), tol, &base).unwrap().value;
        let wide = QuadratureOptions {
            initial_width: 2.0 * base.initial_width,
            ..base
        };
        let loose = QuadratureOptions {
            tail_fraction: 1.0,
            ..base
        };
        let strict = QuadratureOptions {
            tail_fraction: 0.01,
            ..base
        };
        for opts in [wide, loose, strict] {
            let v = integrate_decaying_with(f, mode.nu(), tol, &opts).unwrap().value;
            assert!((v - reference).abs() <= 2.0 * tol, "{opts:?}");
        }
    }

    #[test]
    fn decreasing_in_n() {
        let values: Vec<f64> = (0..=20)
            .map(|n| tunnel_probability_exact(OscillatorMode::new(n), 1e-13).unwrap())
            .collect();
        for w in values.windows(2) {
            assert!(w[1] < w[0]);
        }
    }
}
