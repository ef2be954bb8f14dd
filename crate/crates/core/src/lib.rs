//! Tunnelling probability of the quantum harmonic oscillator.
//!
//! Two independent routes to `P_tun(n) = 2 ∫_ν^∞ ψ_n(x)² dx` with `ν = √(2n+1)`:
//!
//! * [`quadrature::tunnel_probability_exact`] integrates the normalised
//!   eigenfunction density produced by [`oscillator::eval_psi`];
//! * [`asymptotics::tunnel_probability_asym`] evaluates the large-`n`
//!   expansion built on the uniform Airy-type approximation of the
//!   parabolic cylinder function, with every expansion coefficient
//!   re-derived exactly by [`series`].

pub mod asymptotics;
pub mod error;
pub mod oscillator;
pub mod quadrature;
pub mod series;
pub mod specialfn;

pub use error::{Error, Result};
pub use oscillator::{OscillatorMode, ScaledValue};
