//! Exact spectrum, wavefunctions and quantum phase transitions of the
//! (2+1)-dimensional Dirac oscillator in a homogeneous magnetic field with
//! a minimal length.
//!
//! The deformed commutator `[x, p] = i hbar (1 + beta p^2)` turns the Dirac
//! oscillator's single critical magnetic field into a countable family of
//! critical fields accumulating at the ordinary one.  Everything here is
//! closed form in the two dimensionless parameters
//!
//! * `rho`  — field detuning, `hbar (omega~_c - omega) / (M c^2)`,
//! * `rho*` — minimal-length scale, `2 / (beta M^2 c^2)`,
//!
//! and is organized as:
//!
//! * [`params`] — physical inputs, (rho, rho*) conversion, regime and tau;
//! * [`spectrum`] — solution classes, k^2, closed-form level energies,
//!   enumeration and degeneracies;
//! * [`wavefunction`] — terminating-hypergeometric radial profiles,
//!   two-component spinors, ladder operators and the deformed scalar
//!   product;
//! * [`qpt`] — critical points rho_N = +-rho*/N, critical fields,
//!   level-curve datasets and kink detection;
//! * [`oracle`] — an independent finite-difference eigensolver that
//!   certifies the analytic k^2 values.

pub mod error;
pub mod oracle;
pub mod params;
pub mod qpt;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use params::{DimensionlessConfig, PhysicalConfig, Regime};
pub use spectrum::{Branch, Component, Family, Level};
