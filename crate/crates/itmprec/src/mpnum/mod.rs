//! Configurable-precision floating-point arithmetic.
//!
//! The propagation model is written once, generically, against the [`Env`]
//! trait and instantiated either with native machine doubles
//! ([`NativeEnv`]) or with explicit-precision floats ([`MpEnv`]). Precision
//! is always carried per value and passed per operation; there is no
//! process-global rounding mode or precision state, so computations at
//! different precisions can be interleaved and parallelized freely.

mod complex;
mod env;
mod real;

pub use complex::MpComplex;
pub use env::{C64, Cplx, Env, MpEnv, NativeEnv, Real};
pub use real::{MpError, MpFloat, MIN_PRECISION};
