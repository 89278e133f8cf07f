//! Physical inputs, the dimensionless (rho, rho*) parameterization and the
//! rho-regime classification.
//!
//! Everything downstream of this module works in natural units
//! (hbar = c = M = 1), where the whole problem is driven by just two
//! numbers: the field detuning `rho` and the minimal-length scale
//! `rho* = 2/(beta M^2 c^2)`.  This module owns the conversion from
//! explicit physical inputs and the bookkeeping quantities
//! tau = -1/2 - rho*/(2 rho) and 1/(beta lambda) = rho*/(2 rho).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical inputs with user-supplied fundamental constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Particle mass M (energy/c^2 units).
    pub mass: f64,
    /// Oscillator frequency omega (1/time).
    pub omega: f64,
    /// Homogeneous magnetic field B0.
    pub b0: f64,
    /// Minimal-length parameter beta (1/momentum^2).
    pub beta: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Speed of light.
    pub c: f64,
    /// Elementary charge.
    pub e_charge: f64,
}

impl PhysicalConfig {
    /// Configuration in natural units hbar = c = M = e = 1.
    pub fn natural(omega: f64, b0: f64, beta: f64) -> Self {
        Self {
            mass: 1.0,
            omega,
            b0,
            beta,
            hbar: 1.0,
            c: 1.0,
            e_charge: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("c", self.c),
            ("e_charge", self.e_charge),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.omega >= 0.0) || !self.omega.is_finite() {
            return Err(Error::Domain(format!(
                "omega must be >= 0, got {}",
                self.omega
            )));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::Domain(format!(
                "beta must be >= 0, got {}",
                self.beta
            )));
        }
        if !self.b0.is_finite() {
            return Err(Error::Domain(format!("b0 must be finite, got {}", self.b0)));
        }
        Ok(())
    }

    /// Effective cyclotron-like frequency e B0 / (2 M c).
    pub fn omega_tilde_c(&self) -> f64 {
        self.e_charge * self.b0 / (2.0 * self.mass * self.c)
    }

    /// lambda = M hbar (omega_tilde_c - omega), the coupling that carries the
    /// sign of the field detuning.
    pub fn lambda(&self) -> f64 {
        self.mass * self.hbar * (self.omega_tilde_c() - self.omega)
    }

    /// Critical field B_cr = 2 M c omega / e of the ordinary (beta -> 0) theory.
    pub fn b_critical(&self) -> f64 {
        2.0 * self.mass * self.c * self.omega / self.e_charge
    }
}

/// The (rho, rho*) pair that drives every closed-form expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessConfig {
    rho: f64,
    rho_star: f64,
}

impl DimensionlessConfig {
    pub fn new(rho: f64, rho_star: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::Domain(format!("rho must be finite, got {rho}")));
        }
        if !(rho_star > 0.0) || !rho_star.is_finite() {
            return Err(Error::Domain(format!(
                "rho_star must be positive and finite, got {rho_star}"
            )));
        }
        Ok(Self { rho, rho_star })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }

    /// 1/(beta lambda) = rho*/(2 rho) in natural units.
    pub fn inv_beta_lambda(&self) -> Result<f64> {
        if self.rho == 0.0 {
            return Err(Error::CriticalPoint);
        }
        Ok(self.rho_star / (2.0 * self.rho))
    }

    /// lambda in natural units (momentum^2 in units of (Mc)^2) is rho itself.
    pub fn lambda_natural(&self) -> f64 {
        self.rho
    }

    /// beta in natural units (1/(Mc)^2) is 2/rho*.
    pub fn beta_natural(&self) -> f64 {
        2.0 / self.rho_star
    }
}

/// The four open rho-ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// rho > rho*
    ExternalPositive,
    /// 0 < rho < rho*
    InternalPositive,
    /// -rho* < rho < 0
    InternalNegative,
    /// rho < -rho*
    ExternalNegative,
}

impl Regime {
    pub fn is_external(&self) -> bool {
        matches!(self, Regime::ExternalPositive | Regime::ExternalNegative)
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Regime::ExternalPositive | Regime::InternalPositive)
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::ExternalPositive => "ExternalPositive",
            Regime::InternalPositive => "InternalPositive",
            Regime::InternalNegative => "InternalNegative",
            Regime::ExternalNegative => "ExternalNegative",
        };
        f.write_str(s)
    }
}

/// Result of regime classification: an interior range, or the boundary
/// locus |rho| = rho* which belongs to no range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RegimeClassification {
    Interior(Regime),
    /// rho = +rho* (positive = true) or rho = -rho*.
    Boundary { positive: bool },
}

/// Classify with strict comparisons (boundary tolerance zero).
pub fn classify_regime(d: &DimensionlessConfig) -> Result<RegimeClassification> {
    classify_regime_with_tolerance(d, 0.0)
}

/// Classify with a caller-chosen tolerance around the |rho| = rho* and
/// rho = 0 loci.  The default elsewhere in the crate is the strict
/// tolerance 0.
pub fn classify_regime_with_tolerance(
    d: &DimensionlessConfig,
    tol: f64,
) -> Result<RegimeClassification> {
    let rho = d.rho();
    let rho_star = d.rho_star();
    if rho.abs() <= tol {
        return Err(Error::CriticalPoint);
    }
    if (rho.abs() - rho_star).abs() <= tol {
        return Ok(RegimeClassification::Boundary {
            positive: rho > 0.0,
        });
    }
    let regime = if rho > rho_star {
        Regime::ExternalPositive
    } else if rho > 0.0 {
        Regime::InternalPositive
    } else if rho > -rho_star {
        Regime::InternalNegative
    } else {
        Regime::ExternalNegative
    };
    Ok(RegimeClassification::Interior(regime))
}

/// Classification for spectral work: boundaries are rejected because the
/// solution tables do not apply there.
pub fn interior_regime(d: &DimensionlessConfig) -> Result<Regime> {
    match classify_regime(d)? {
        RegimeClassification::Interior(r) => Ok(r),
        RegimeClassification::Boundary { .. } => Err(Error::RegimeBoundary { rho: d.rho() }),
    }
}

/// The integer-threshold parameter tau = -1/2 - rho*/(2 rho).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    pub value: f64,
}

pub fn tau_of(d: &DimensionlessConfig) -> Result<Tau> {
    let t = d.inv_beta_lambda()?;
    Ok(Tau { value: -0.5 - t })
}

/// Convert physical inputs to (rho, rho*).
pub fn dimensionless_from_physical(cfg: &PhysicalConfig) -> Result<DimensionlessConfig> {
    cfg.validate()?;
    if cfg.beta == 0.0 {
        return Err(Error::NoMinimalLength);
    }
    let rho = cfg.hbar * (cfg.omega_tilde_c() - cfg.omega) / (cfg.mass * cfg.c * cfg.c);
    let rho_star = 2.0 / (cfg.beta * cfg.mass * cfg.mass * cfg.c * cfg.c);
    DimensionlessConfig::new(rho, rho_star)
}

/// 1/(beta lambda) expressed through the characteristic lengths, or
/// infinite when the Landau and Dirac lengths coincide (or beta = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InvBetaLambda {
    Finite(f64),
    Infinite,
}

impl InvBetaLambda {
    pub fn finite(&self) -> Option<f64> {
        match self {
            InvBetaLambda::Finite(v) => Some(*v),
            InvBetaLambda::Infinite => None,
        }
    }
}

/// Characteristic lengths of the associated Landau and Dirac oscillators
/// together with the minimal length and 1/(beta lambda).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicLengths {
    /// sqrt(hbar/(M omega_tilde_c)); None when omega_tilde_c <= 0.
    pub ell_landau: Option<f64>,
    /// sqrt(hbar/(M omega)); None when omega = 0.
    pub ell_dirac: Option<f64>,
    /// Minimal observable length hbar sqrt(beta).
    pub delta_x0: f64,
    /// [delta_x0^2 (1/ell_L^2 - 1/ell_D^2)]^{-1}.
    pub inv_beta_lambda: InvBetaLambda,
}

pub fn characteristic_lengths(cfg: &PhysicalConfig) -> Result<CharacteristicLengths> {
    cfg.validate()?;
    let omega_tilde = cfg.omega_tilde_c();
    let ell_landau = if omega_tilde > 0.0 {
        Some((cfg.hbar / (cfg.mass * omega_tilde)).sqrt())
    } else {
        None
    };
    let ell_dirac = if cfg.omega > 0.0 {
        Some((cfg.hbar / (cfg.mass * cfg.omega)).sqrt())
    } else {
        None
    };
    let delta_x0 = cfg.hbar * cfg.beta.sqrt();
    // 1/ell_L^2 - 1/ell_D^2 = M (omega_tilde - omega)/hbar, valid even when
    // one of the lengths is undefined (frequency zero drops its term).
    let inv_sq_diff = cfg.mass * (omega_tilde - cfg.omega) / cfg.hbar;
    let denom = delta_x0 * delta_x0 * inv_sq_diff;
    let inv_beta_lambda = if denom == 0.0 {
        InvBetaLambda::Infinite
    } else {
        InvBetaLambda::Finite(1.0 / denom)
    };
    Ok(CharacteristicLengths {
        ell_landau,
        ell_dirac,
        delta_x0,
        inv_beta_lambda,
    })
}
