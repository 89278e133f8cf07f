//! Radial profiles, two-component spinors, the intertwining operators P+-
//! and the deformed scalar product.
//!
//! Every admissible component solution has the momentum-space form
//!
//! ```text
//! R(p) = p^nu' (1 + beta p^2)^(-(mu'+nu'+1)/2) 2F1(-n, n+mu'+nu'+1; nu'+1; u),
//! u = beta p^2 / (1 + beta p^2),
//! ```
//!
//! with the class-resolved effective exponents (mu', nu').  The
//! hypergeometric factor terminates after n+1 terms, so profiles and their
//! derivatives are evaluated exactly (no finite differences anywhere).
//!
//! The scalar product uses the weight w(p) = 1/(1 + beta p^2) on d^2p, the
//! unique choice that makes the position operator
//! x = i hbar (1 + beta p^2) d/dp symmetric; the orthogonality checks in
//! the tests double as a validation of that choice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{interior_regime, DimensionlessConfig, Regime};
use crate::spectrum::{
    classify_solution, energy_from_k, k_squared, member_family, pt_parameters, Branch, ClassLabel,
    Component, Family, SolutionClass,
};

/// Terminating Gauss hypergeometric sum
/// sum_{k=0}^{n} (-n)_k (b)_k / ((c)_k k!) z^k.
///
/// Terms are accumulated in descending-magnitude order with compensated
/// summation, which keeps the alternating sums well conditioned near z = 1.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    let coeffs = series_coefficients(n, b, c)?;
    let mut terms: Vec<f64> = Vec::with_capacity(coeffs.len());
    let mut zk = 1.0;
    for a in &coeffs {
        terms.push(a * zk);
        zk *= z;
    }
    terms.sort_by(|x, y| y.abs().partial_cmp(&x.abs()).expect("finite terms"));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    Ok(sum)
}

/// Coefficients a_k = (-n)_k (b)_k / ((c)_k k!) of the terminating series,
/// with the pole check on the lower parameter.
fn series_coefficients(n: u32, b: f64, c: f64) -> Result<Vec<f64>> {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut a = 1.0;
    coeffs.push(a);
    for k in 0..n {
        let kf = k as f64;
        let denom = c + kf;
        if denom == 0.0 {
            return Err(Error::HypergeometricPole { c, k: k + 1 });
        }
        a *= (kf - n as f64) * (b + kf) / (denom * (kf + 1.0));
        coeffs.push(a);
    }
    Ok(coeffs)
}

/// A terminating 2F1 kept as explicit polynomial coefficients so the value
/// and the exact derivative share one representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TerminatingSeries {
    coeffs: Vec<f64>,
}

impl TerminatingSeries {
    fn new(n: u32, b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            coeffs: series_coefficients(n, b, c)?,
        })
    }

    fn eval(&self, z: f64) -> f64 {
        // Horner; n is small so this is exact enough and cheap.
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * z + a)
    }

    fn deriv(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, a)| acc * z + k as f64 * a)
    }
}

/// Closed-form radial profile of one spinor component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub n: u32,
    pub m: i64,
    pub component: Component,
    pub class: SolutionClass,
    /// Effective exponents after the class sign flips.
    pub mu_eff: f64,
    pub nu_eff: f64,
    /// Power-law prefactor p^power (power = nu_eff).
    pub power: f64,
    /// Exponent of the algebraic factor (1 + beta p^2)^alg_exponent.
    pub alg_exponent: f64,
    /// Hypergeometric parameters (-n, hyp_b; hyp_c; u).
    pub hyp_b: f64,
    pub hyp_c: f64,
    /// k of the bound state, k = n + (mu' + nu' + 1)/2.
    pub k: f64,
    beta: f64,
    series: TerminatingSeries,
}

impl RadialProfile {
    fn build(n: u32, m: i64, class: SolutionClass, d: &DimensionlessConfig) -> Result<Self> {
        let p = pt_parameters(m, class.component, d)?;
        let (mu, nu) = class.effective_mu_nu(&p);
        if !(mu > -0.5) {
            return Err(Error::Inadmissible(format!(
                "class ({}) violates mu' > -1/2 at m = {m} (mu' = {mu})",
                class.label
            )));
        }
        if !(nu > -0.5) {
            return Err(Error::Inadmissible(format!(
                "class ({}) violates nu' > -1/2 at m = {m} (nu' = {nu})",
                class.label
            )));
        }
        let hyp_b = n as f64 + mu + nu + 1.0;
        let hyp_c = nu + 1.0;
        let series = TerminatingSeries::new(n, hyp_b, hyp_c)?;
        Ok(Self {
            n,
            m,
            component: class.component,
            class,
            mu_eff: mu,
            nu_eff: nu,
            power: nu,
            alg_exponent: -(mu + nu + 1.0) / 2.0,
            hyp_b,
            hyp_c,
            k: n as f64 + (mu + nu + 1.0) / 2.0,
            beta: d.beta_natural(),
            series,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Momentum-space value at p >= 0.
    pub fn eval(&self, p: f64) -> f64 {
        if p == 0.0 {
            return if self.power == 0.0 { 1.0 } else { 0.0 };
        }
        let a = 1.0 + self.beta * p * p;
        let u = self.beta * p * p / a;
        p.powf(self.power) * a.powf(self.alg_exponent) * self.series.eval(u)
    }

    /// Exact derivative dR/dp from the closed form.
    pub fn eval_deriv(&self, p: f64) -> f64 {
        if p == 0.0 {
            // R ~ p^nu' near the origin with integer nu' >= 0
            return if self.power == 1.0 { 1.0 } else { 0.0 };
        }
        let a = 1.0 + self.beta * p * p;
        let u = self.beta * p * p / a;
        let f = self.series.eval(u);
        let df = self.series.deriv(u);
        let du = 2.0 * self.beta * p / (a * a);
        let base = p.powf(self.power) * a.powf(self.alg_exponent);
        base * ((self.power / p + 2.0 * self.alg_exponent * self.beta * p / a) * f + df * du)
    }

    /// The (s, c) = (sin q, cos q) representation of the component tables:
    /// s^(nu'+1/2) c^(mu'+1/2) 2F1(-n, n+mu'+nu'+1; nu'+1; s^2) for
    /// q in (0, pi/2).
    ///
    /// Under p = tan(q)/sqrt(beta) the two printed representations satisfy
    /// eval_sc(q) = beta^((nu'+1/2)/2) sqrt(p) eval(p).
    pub fn eval_sc(&self, q: f64) -> f64 {
        let s = q.sin();
        let c = q.cos();
        s.powf(self.nu_eff + 0.5) * c.powf(self.mu_eff + 0.5) * self.series.eval(s * s)
    }
}

/// Profile of the solution class used by the spinor catalog.
pub fn radial_profile(
    n: u32,
    m: i64,
    component: Component,
    d: &DimensionlessConfig,
) -> Result<RadialProfile> {
    let class = classify_solution(m, component, d)?;
    RadialProfile::build(n, m, class, d)
}

/// Profile of an explicitly chosen class.  This is how the unpaired
/// limit-circle solutions (the discarded orphans of the external range) can
/// be constructed and inspected.
pub fn radial_profile_with_class(
    n: u32,
    m: i64,
    class: SolutionClass,
    d: &DimensionlessConfig,
) -> Result<RadialProfile> {
    RadialProfile::build(n, m, class, d)
}

/// Check that two component profiles sit at the same k (same energy) and
/// can therefore be paired into a spinor.
pub fn try_pair(upper: &RadialProfile, lower: &RadialProfile) -> Result<()> {
    if upper.component != Component::One || lower.component != Component::Two {
        return Err(Error::DiscardedSolution(
            "pairing needs a component-1 upper and a component-2 lower".into(),
        ));
    }
    if (upper.k - lower.k).abs() > 1e-9 * upper.k.abs().max(1.0) {
        return Err(Error::DiscardedSolution(format!(
            "class ({}) n = {} (k = {}) and class ({}) n = {} (k = {}) never share an energy",
            upper.class.label, upper.n, upper.k, lower.class.label, lower.n, lower.k
        )));
    }
    Ok(())
}

/// The sign of an intertwining operator P+ or P-.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PSign {
    Plus,
    Minus,
}

impl PSign {
    fn sign(&self) -> f64 {
        match self {
            PSign::Plus => 1.0,
            PSign::Minus => -1.0,
        }
    }
}

/// The radial action of P+- on a profile carrying angular index `angular`,
/// computed from the exact closed-form derivative:
///
/// ```text
/// (P_s R)(p) = p R(p) - s lambda (1 + beta p^2) (R'(p) - s (angular/p) R(p))
/// ```
///
/// P+ maps angular index m to m+1, P- maps m+1 to m.
pub struct AppliedP<'a> {
    profile: &'a RadialProfile,
    sign: PSign,
    /// Angular index of the function the operator acts on.
    pub angular: i64,
    lambda: f64,
}

/// Apply P+ or P- to a component evaluator with the given angular index.
pub fn apply_p<'a>(
    sign: PSign,
    profile: &'a RadialProfile,
    angular: i64,
    d: &DimensionlessConfig,
) -> AppliedP<'a> {
    AppliedP {
        profile,
        sign,
        angular,
        lambda: d.lambda_natural(),
    }
}

impl AppliedP<'_> {
    pub fn eval(&self, p: f64) -> Result<f64> {
        let s = self.sign.sign();
        let a = self.angular as f64;
        let r = self.profile;
        if p == 0.0 {
            // R ~ p^nu': R' - s (a/p) R ~ (nu' - s a) p^(nu'-1)
            let coeff = r.power - s * a;
            return match r.power {
                x if x > 1.0 => Ok(0.0),
                x if x == 1.0 => Ok(-s * self.lambda * coeff),
                x if x == 0.0 && coeff == 0.0 => Ok(0.0),
                _ => Err(Error::DivergentAtOrigin {
                    power: r.power,
                    angular: self.angular,
                }),
            };
        }
        let value = r.eval(p);
        let deriv = r.eval_deriv(p);
        let alg = 1.0 + r.beta * p * p;
        Ok(p * value - s * self.lambda * alg * (deriv - s * a / p * value))
    }
}

/// How upper and lower component indices combine at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pairing {
    /// Lower power = upper power + 1 (classes (a)/(d) on top):
    /// coefficient (E - 1)/(2 rho (m + 1)).
    Up,
    /// Lower power = upper power - 1 (classes (b)/(c) on top):
    /// coefficient 2 rho m / (E + 1).
    Down,
}

fn derived_coefficient(pairing: Pairing, e: f64, rho: f64, m: i64) -> f64 {
    match pairing {
        Pairing::Up => (e - 1.0) / (2.0 * rho * (m as f64 + 1.0)),
        Pairing::Down => 2.0 * rho * m as f64 / (e + 1.0),
    }
}

/// The coefficient as printed in the spinor tables.  The m <= -1 rows print
/// eps_+/(2 rho m), which does not satisfy the intertwining relations; it
/// is kept here only so the mismatch can be reported.
fn printed_coefficient(pairing: Pairing, e: f64, rho: f64, m: i64) -> f64 {
    match pairing {
        Pairing::Up => (e - 1.0) / (2.0 * rho * (m as f64 + 1.0)),
        Pairing::Down => (e + 1.0) / (2.0 * rho * m as f64),
    }
}

/// A two-component spinor state.
///
/// The upper component carries angular factor e^{i m theta} and radial part
/// `amplitude * upper`, the lower carries e^{i (m+1) theta} and radial part
/// `amplitude * coefficient * lower`.  Singlet zero modes have exactly one
/// `None` component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorState {
    pub upper: Option<RadialProfile>,
    pub lower: Option<RadialProfile>,
    /// Relative coefficient between the printed component profiles,
    /// derived from the intertwining relations.
    pub coefficient: f64,
    pub e_over_mc2: f64,
    pub m: i64,
    /// Energy label n of the level the state belongs to.
    pub n: u32,
    pub family: Family,
    pub n_index: u32,
    pub branch: Branch,
    /// Overall normalization constant C (1 until `normalize` is called).
    pub amplitude: f64,
    /// Set when the printed table coefficient fails the intertwining
    /// relations and the derived value is used instead.
    pub coefficient_note: Option<String>,
}

impl SpinorState {
    pub fn is_singlet(&self) -> bool {
        self.upper.is_none() || self.lower.is_none()
    }

    /// Angular indices (m, m+1) of the two components.
    pub fn angular_indices(&self) -> (i64, i64) {
        (self.m, self.m + 1)
    }

    pub fn upper_value(&self, p: f64) -> f64 {
        self.upper
            .as_ref()
            .map_or(0.0, |r| self.amplitude * r.eval(p))
    }

    pub fn lower_value(&self, p: f64) -> f64 {
        self.lower
            .as_ref()
            .map_or(0.0, |r| self.amplitude * self.coefficient * r.eval(p))
    }

    /// Relative residuals of the two intertwining relations
    /// c P+ psi1 = eps_+ psi2 and c P- psi2 = eps_- psi1 on a uniform grid
    /// over (0, p_max].  Singlet states compare against the annihilation
    /// condition with the component norm as the scale.
    pub fn intertwining_residual(
        &self,
        d: &DimensionlessConfig,
        points: usize,
        p_max: f64,
    ) -> Result<(f64, f64)> {
        let eps_plus = self.e_over_mc2 + 1.0;
        let eps_minus = self.e_over_mc2 - 1.0;
        let mut num_plus = 0.0;
        let mut den_plus = 0.0;
        let mut num_minus = 0.0;
        let mut den_minus = 0.0;
        let mut scale = 0.0;
        for i in 1..=points {
            let p = p_max * i as f64 / points as f64;
            let up = self.upper_value(p);
            let low = self.lower_value(p);
            scale += up * up + low * low;
            // P+ on the upper component (angular index m)
            let p_plus_up = match &self.upper {
                Some(r) => self.amplitude * apply_p(PSign::Plus, r, self.m, d).eval(p)?,
                None => 0.0,
            };
            num_plus += (p_plus_up - eps_plus * low).powi(2);
            den_plus += (eps_plus * low).powi(2);
            // P- on the lower component (angular index m + 1)
            let p_minus_low = match &self.lower {
                Some(r) => {
                    self.amplitude
                        * self.coefficient
                        * apply_p(PSign::Minus, r, self.m + 1, d).eval(p)?
                }
                None => 0.0,
            };
            num_minus += (p_minus_low - eps_minus * up).powi(2);
            den_minus += (eps_minus * up).powi(2);
        }
        let res_plus = (num_plus / den_plus.max(scale)).sqrt();
        let res_minus = (num_minus / den_minus.max(scale)).sqrt();
        Ok((res_plus, res_minus))
    }

    /// Fix the overall constant so the deformed-measure norm is 1; returns
    /// the constant.  The sign convention (profiles positive near the
    /// origin) keeps the upper component real positive at its first
    /// maximum.
    pub fn normalize(&mut self, spec: &QuadratureSpec) -> Result<f64> {
        self.amplitude = 1.0;
        let n2 = norm_squared(self, spec)?;
        let c = 1.0 / n2.value.sqrt();
        self.amplitude = c;
        Ok(c)
    }
}

/// Assemble the spinor with quantum numbers (n, m) on the given branch.
///
/// n is the energy label of the regime's table row: in the interior
/// sectors the constituent component indices are shifted by one and n = 0
/// is the singlet zero mode.
pub fn assemble_spinor(
    n: u32,
    m: i64,
    d: &DimensionlessConfig,
    branch: Branch,
) -> Result<SpinorState> {
    let regime = interior_regime(d)?;
    let rho = d.rho();
    let up_class = classify_solution(m, Component::One, d)?;
    let low_class = classify_solution(m, Component::Two, d)?;

    // Sector dispatch on the classified pair.  Mixed pairs occur exactly at
    // integer tau, where the would-be partner fails the strict endpoint
    // constraints: those component solutions cannot form a spinor.
    let pairing = match (up_class.label, low_class.label) {
        (ClassLabel::A, ClassLabel::A) | (ClassLabel::D, ClassLabel::D) => Pairing::Up,
        (ClassLabel::B, ClassLabel::B) | (ClassLabel::C, ClassLabel::C) => Pairing::Down,
        (u, l) => {
            return Err(Error::DiscardedSolution(format!(
                "components classify as ({u})/({l}) at m = {m}: no common energy exists \
                 and the solutions must be discarded"
            )))
        }
    };

    // Constituent component indices and the (family, N) of the level.
    let (n_up, n_low, singlet) = match (regime, up_class.label) {
        // shifted pairing of the (tau, -1] sector: upper n-1, lower n
        (Regime::InternalPositive, ClassLabel::C) => {
            if n == 0 {
                (None, Some(0), true)
            } else {
                (Some(n - 1), Some(n), false)
            }
        }
        // shifted pairing of the [0, tau) sector: upper n, lower n-1
        (Regime::InternalNegative, ClassLabel::D) => {
            if n == 0 {
                (Some(0), None, true)
            } else {
                (Some(n), Some(n - 1), false)
            }
        }
        _ => (Some(n), Some(n), false),
    };

    if singlet {
        let (family, allowed_branch, profile_class, comp_n) = match regime {
            Regime::InternalPositive => (Family::IvZero, Branch::Minus, low_class, 0),
            Regime::InternalNegative => (Family::IvZero, Branch::Plus, up_class, 0),
            _ => unreachable!("singlets only exist in the internal ranges"),
        };
        if branch != allowed_branch {
            return Err(Error::DiscardedSolution(format!(
                "the n = 0 state at m = {m} is a singlet zero mode on the {} branch only",
                match allowed_branch {
                    Branch::Plus => "positive",
                    Branch::Minus => "negative",
                }
            )));
        }
        let profile = RadialProfile::build(comp_n, m, profile_class, d)?;
        let e = branch.sign(); // exactly +-Mc^2
        let (upper, lower) = match regime {
            Regime::InternalPositive => (None, Some(profile)),
            _ => (Some(profile), None),
        };
        return Ok(SpinorState {
            upper,
            lower,
            coefficient: 1.0,
            e_over_mc2: e,
            m,
            n,
            family,
            n_index: 1,
            branch,
            amplitude: 1.0,
            coefficient_note: None,
        });
    }

    let upper = RadialProfile::build(n_up.expect("non-singlet"), m, up_class, d)?;
    let lower = RadialProfile::build(n_low.expect("non-singlet"), m, low_class, d)?;
    try_pair(&upper, &lower)?;
    let (family, n_index) = member_family(&up_class, upper.n, m, d)?;

    let k2 = k_squared(&up_class, upper.n, &pt_parameters(m, Component::One, d)?);
    let e = energy_from_k(k2, d, branch)?;
    let coefficient = derived_coefficient(pairing, e, rho, m);
    let printed = printed_coefficient(pairing, e, rho, m);
    let coefficient_note = if (printed - coefficient).abs() > 1e-9 * coefficient.abs().max(1e-30) {
        Some(format!(
            "printed coefficient eps_+/(2 rho m) = {printed:.6e} fails the intertwining \
             relations; using the derived value {coefficient:.6e}"
        ))
    } else {
        None
    };

    Ok(SpinorState {
        upper: Some(upper),
        lower: Some(lower),
        coefficient,
        e_over_mc2: e,
        m,
        n,
        family,
        n_index,
        branch,
        amplitude: 1.0,
        coefficient_note,
    })
}

/// Weight of the deformed scalar product on d^2p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformedMeasure {
    pub beta: f64,
}

impl DeformedMeasure {
    pub fn for_config(d: &DimensionlessConfig) -> Self {
        Self {
            beta: d.beta_natural(),
        }
    }

    pub fn weight(&self, p: f64) -> f64 {
        1.0 / (1.0 + self.beta * p * p)
    }
}

/// Quadrature control for the radial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Integrate p in [0, p_max]; the remainder enters the tail estimate.
    pub p_max: f64,
    pub rel_tol: f64,
    /// Absolute floor for near-zero integrals (overlaps of orthogonal states).
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    /// Default spec with p_max set from the profile decay scale 1/sqrt(beta).
    /// Profiles decay like p^(-mu'-1), so slowly decaying states (small
    /// mu') may need a larger p_max to pass the tail check.
    pub fn for_config(d: &DimensionlessConfig) -> Self {
        Self {
            p_max: 300.0 / d.beta_natural().sqrt(),
            rel_tol: 1e-10,
            abs_tol: 1e-11,
            max_depth: 48,
        }
    }
}

/// Value of a radial integral with its accuracy diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated contribution of p > p_max, from the closed-form decay.
    pub tail_estimate: f64,
    /// Adaptive quadrature error estimate on [0, p_max].
    pub error_estimate: f64,
}

/// Deformed-measure norm of the spinor:
/// 2 pi sum_components int |phi(p)|^2 p dp / (1 + beta p^2).
pub fn norm_squared(state: &SpinorState, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    let beta = state
        .upper
        .as_ref()
        .or(state.lower.as_ref())
        .expect("at least one component")
        .beta;
    let integrand = |p: f64| {
        let up = state.upper_value(p);
        let low = state.lower_value(p);
        up * up + low * low
    };
    // |R|^2 ~ p^(-2 mu' - 2): slowest decay of the two components
    let mu_min = [&state.upper, &state.lower]
        .into_iter()
        .flatten()
        .map(|r| r.mu_eff)
        .fold(f64::INFINITY, f64::min);
    let gamma = 2.0 * mu_min + 3.0;
    let mut out = deformed_radial_integral(&integrand, gamma, beta, spec)?;
    out.value *= 2.0 * std::f64::consts::PI;
    out.tail_estimate *= 2.0 * std::f64::consts::PI;
    out.error_estimate *= 2.0 * std::f64::consts::PI;
    Ok(out)
}

/// Deformed-measure overlap of two states.  States with different angular
/// momentum m are orthogonal through the angular integral and return 0
/// without quadrature.
pub fn overlap(
    a: &SpinorState,
    b: &SpinorState,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    if a.m != b.m {
        return Ok(QuadratureResult {
            value: 0.0,
            tail_estimate: 0.0,
            error_estimate: 0.0,
        });
    }
    let beta = a
        .upper
        .as_ref()
        .or(a.lower.as_ref())
        .expect("at least one component")
        .beta;
    let integrand = |p: f64| a.upper_value(p) * b.upper_value(p) + a.lower_value(p) * b.lower_value(p);
    let mu_a = [&a.upper, &a.lower]
        .into_iter()
        .flatten()
        .map(|r| r.mu_eff)
        .fold(f64::INFINITY, f64::min);
    let mu_b = [&b.upper, &b.lower]
        .into_iter()
        .flatten()
        .map(|r| r.mu_eff)
        .fold(f64::INFINITY, f64::min);
    let gamma = mu_a + mu_b + 3.0;
    let mut out = deformed_radial_integral(&integrand, gamma, beta, spec)?;
    out.value *= 2.0 * std::f64::consts::PI;
    out.tail_estimate *= 2.0 * std::f64::consts::PI;
    out.error_estimate *= 2.0 * std::f64::consts::PI;
    Ok(out)
}

/// Overlap of two bare component profiles under int f g p dp / (1+beta p^2).
/// The profiles are Sturm-Liouville eigenfunctions of the same problem when
/// they share (m, class, component), so different n must integrate to zero.
pub fn profile_overlap(
    a: &RadialProfile,
    b: &RadialProfile,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let integrand = |p: f64| a.eval(p) * b.eval(p);
    let gamma = a.mu_eff + b.mu_eff + 3.0;
    deformed_radial_integral(&integrand, gamma, a.beta, spec)
}

/// int_0^{p_max} g(p) p dp / (1 + beta p^2) by adaptive Gauss-Kronrod in
/// the compactified variable u = beta p^2/(1 + beta p^2), plus a tail
/// estimate assuming the p-integrand decays like p^{-gamma} beyond p_max.
fn deformed_radial_integral(
    g: &dyn Fn(f64) -> f64,
    gamma: f64,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let u_max = beta * spec.p_max * spec.p_max / (1.0 + beta * spec.p_max * spec.p_max);
    let fu = |u: f64| {
        let p = (u / (beta * (1.0 - u))).sqrt();
        g(p) / (2.0 * beta * (1.0 - u))
    };
    let (value, error_estimate) =
        adaptive_gk15(&fu, 0.0, u_max, spec.rel_tol, spec.abs_tol, spec.max_depth);
    // tail: integrand_p(p) = g(p) p/(1 + beta p^2) ~ p^{-gamma}
    let integrand_at_pmax = g(spec.p_max) * spec.p_max / (1.0 + beta * spec.p_max * spec.p_max);
    let tail_estimate = if gamma > 1.0 {
        (integrand_at_pmax * spec.p_max / (gamma - 1.0)).abs()
    } else {
        f64::INFINITY
    };
    let tol = (spec.rel_tol * value.abs()).max(spec.abs_tol);
    if tail_estimate > tol {
        return Err(Error::QuadratureTail {
            tail: tail_estimate,
            tol,
        });
    }
    Ok(QuadratureResult {
        value,
        tail_estimate,
        error_estimate,
    })
}

// 15-point Kronrod nodes with the embedded 7-point Gauss rule.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for j in 0..7 {
        let dx = half * XGK15[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK15[j] * fsum;
        if j % 2 == 1 {
            gauss += WG7[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive_gk15(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> (f64, f64) {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return (value, err);
        }
        let mid = 0.5 * (a + b);
        let (v1, e1) = recurse(f, a, mid, tol / 2.0, depth - 1);
        let (v2, e2) = recurse(f, mid, b, tol / 2.0, depth - 1);
        (v1 + v2, e1 + e2)
    }
    let (coarse, _) = gk15(f, a, b);
    // absolute floor keeps near-zero integrals (orthogonal overlaps) from
    // subdividing without bound
    let tol = (rel_tol * coarse.abs()).max(abs_tol);
    recurse(f, a, b, tol, max_depth)
}

/// A Gaussian test function and its exact derivative, used for the
/// commutator representation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
}

impl Gaussian {
    pub fn value(&self, p: f64) -> f64 {
        let z = (p - self.center) / self.width;
        (-0.5 * z * z).exp()
    }

    pub fn derivative(&self, p: f64) -> f64 {
        -(p - self.center) / (self.width * self.width) * self.value(p)
    }
}

/// Magnitude of x applied to a function given by (value, derivative):
/// x f = i hbar (1 + beta p^2) f'(p); the common factor i is dropped.
pub fn apply_x(hbar: f64, beta: f64, df_dp: f64, p: f64) -> f64 {
    hbar * (1.0 + beta * p * p) * df_dp
}

/// Max relative residual of ([x, p] f)(p) = i hbar (1 + beta p^2) f(p) on
/// the grid, with both operator applications using exact derivatives.
pub fn commutator_residual(f: &Gaussian, hbar: f64, beta: f64, grid: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &p in grid {
        // x (p f) uses d(p f)/dp = f + p f'
        let x_pf = apply_x(hbar, beta, f.value(p) + p * f.derivative(p), p);
        let p_xf = p * apply_x(hbar, beta, f.derivative(p), p);
        let rhs = hbar * (1.0 + beta * p * p) * f.value(p);
        worst = worst.max((x_pf - p_xf - rhs).abs());
        scale = scale.max(rhs.abs());
    }
    worst / scale.max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DimensionlessConfig;
    use crate::spectrum::Branch;

    fn cfg(rho: f64, rho_star: f64) -> DimensionlessConfig {
        DimensionlessConfig::new(rho, rho_star).unwrap()
    }

    #[test]
    fn hyp2f1_base_cases() {
        // n = 0 is identically 1
        for (b, c, z) in [(2.0, 3.0, 0.1), (-7.5, 0.5, 0.9), (4.0, 1.0, 0.0)] {
            assert_eq!(hyp2f1_terminating(0, b, c, z).unwrap(), 1.0);
        }
        // n = 1: 1 - (b/c) z
        let v = hyp2f1_terminating(1, 5.0, 2.0, 0.3).unwrap();
        assert!((v - (1.0 - 5.0 / 2.0 * 0.3)).abs() < 1e-15);
        // n = 2, b = 5, c = 1, z = 0.5: 1 - 5 + 3.75 = -0.25 by direct sum
        let v = hyp2f1_terminating(2, 5.0, 1.0, 0.5).unwrap();
        assert!((v + 0.25).abs() < 1e-14);
    }

    #[test]
    fn hyp2f1_pole_is_named() {
        let err = hyp2f1_terminating(3, 1.0, -1.0, 0.5).unwrap_err();
        assert_eq!(err, Error::HypergeometricPole { c: -1.0, k: 2 });
        // c = -(n-1) is the last offending value; c = -n is fine since the
        // sum stops before the pole enters
        assert!(hyp2f1_terminating(3, 1.0, -3.0, 0.5).is_ok());
    }

    #[test]
    fn profile_vanishes_at_origin_for_positive_m() {
        let d = cfg(5.0, 20.0);
        for m in 1..4 {
            let r = radial_profile(1, m, Component::One, &d).unwrap();
            assert_eq!(r.eval(0.0), 0.0);
        }
        // n = 0 states carry 2F1 = 1 identically
        let r = radial_profile(0, 2, Component::One, &d).unwrap();
        let p = 1.3;
        let a: f64 = 1.0 + r.beta * p * p;
        let expect = p.powf(r.power) * a.powf(r.alg_exponent);
        assert!((r.eval(p) - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn momentum_and_sc_forms_agree_pointwise() {
        // eval_sc(q(p)) = beta^((nu'+1/2)/2) sqrt(p) eval(p)
        let d = cfg(5.0, 20.0);
        let beta = d.beta_natural();
        let r = radial_profile(1, 0, Component::One, &d).unwrap();
        for p in [0.2, 0.5, 1.0, 2.0, 4.0] {
            let q = (beta.sqrt() * p).atan();
            let lhs = r.eval_sc(q);
            let rhs = beta.powf((r.nu_eff + 0.5) / 2.0) * p.sqrt() * r.eval(p);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-12), "p={p}");
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let d = cfg(-5.0, 20.0);
        let r = radial_profile(2, 1, Component::One, &d).unwrap();
        let h = 1e-6;
        for p in [0.3, 0.9, 1.7, 3.1] {
            let fd = (r.eval(p + h) - r.eval(p - h)) / (2.0 * h);
            let exact = r.eval_deriv(p);
            assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "p={p}");
        }
    }

    #[test]
    fn spinor_table_rows_by_substitution() {
        // (n=0, m=0, rho=-5, rho*=20), +: singlet with E = +Mc^2
        let d = cfg(-5.0, 20.0);
        let s = assemble_spinor(0, 0, &d, Branch::Plus).unwrap();
        assert!(s.is_singlet());
        assert!(s.lower.is_none());
        assert_eq!(s.e_over_mc2, 1.0);
        assert_eq!(s.family, Family::IvZero);

        // (n=0, m=-2, rho=5, rho*=20), -: lower-only state with E = -Mc^2
        let d = cfg(5.0, 20.0);
        let s = assemble_spinor(0, -2, &d, Branch::Minus).unwrap();
        assert!(s.is_singlet());
        assert!(s.upper.is_none());
        assert_eq!(s.e_over_mc2, -1.0);
        // and the positive branch has no such state
        assert!(matches!(
            assemble_spinor(0, -2, &d, Branch::Plus),
            Err(Error::DiscardedSolution(_))
        ));

        // (n=0, m=0, rho=25, rho*=20), +: two components at E = sqrt(351)
        let d = cfg(25.0, 20.0);
        let s = assemble_spinor(0, 0, &d, Branch::Plus).unwrap();
        assert!(!s.is_singlet());
        assert!((s.e_over_mc2 - 351.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn external_orphans_cannot_pair() {
        // Component-1 class (c) at m = -1 and component-2 class (d) at
        // m = 0 exist in the external range but have no partner at any n.
        let d = cfg(25.0, 20.0);
        let orphan = radial_profile_with_class(
            0,
            -1,
            SolutionClass {
                label: ClassLabel::C,
                component: Component::One,
            },
            &d,
        )
        .unwrap();
        for n2 in 0..6 {
            let partner = radial_profile(n2, -1, Component::Two, &d).unwrap();
            assert!(try_pair(&orphan, &partner).is_err());
        }
        let orphan2 = radial_profile_with_class(
            0,
            0,
            SolutionClass {
                label: ClassLabel::D,
                component: Component::Two,
            },
            &d,
        )
        .unwrap();
        for n1 in 0..6 {
            let partner = radial_profile(n1, 0, Component::One, &d).unwrap();
            assert!(try_pair(&partner, &orphan2).is_err());
        }
    }

    #[test]
    fn intertwining_residuals_are_tiny() {
        let states = [
            (cfg(25.0, 20.0), 0, 0, Branch::Plus),
            (cfg(25.0, 20.0), 1, -2, Branch::Plus),
            (cfg(25.0, 20.0), 0, -1, Branch::Minus),
            (cfg(5.0, 20.0), 2, 1, Branch::Plus),
            (cfg(5.0, 20.0), 1, -1, Branch::Plus), // shifted (c, c) pairing
            (cfg(5.0, 20.0), 2, -4, Branch::Plus), // family (ii)
            (cfg(-5.0, 20.0), 1, 1, Branch::Plus), // shifted (d, d) pairing
            (cfg(-5.0, 20.0), 0, -3, Branch::Minus),
            (cfg(-25.0, 20.0), 1, 2, Branch::Plus),
        ];
        for (d, n, m, branch) in states {
            let s = assemble_spinor(n, m, &d, branch).unwrap();
            let p_max = 8.0 / d.beta_natural().sqrt();
            let (rp, rm) = s.intertwining_residual(&d, 1000, p_max).unwrap();
            assert!(rp < 1e-10, "P+ residual {rp} for n={n} m={m}");
            assert!(rm < 1e-10, "P- residual {rm} for n={n} m={m}");
        }
    }

    #[test]
    fn singlet_annihilation() {
        // P- kills the lower component of the E = -Mc^2 singlet; P+ kills
        // the upper component of the E = +Mc^2 singlet.
        let d = cfg(5.0, 20.0);
        let s = assemble_spinor(0, -1, &d, Branch::Minus).unwrap();
        let (rp, rm) = s
            .intertwining_residual(&d, 1000, 8.0 / d.beta_natural().sqrt())
            .unwrap();
        assert!(rp < 1e-12 && rm < 1e-10, "rp={rp} rm={rm}");

        let d = cfg(-5.0, 20.0);
        let s = assemble_spinor(0, 1, &d, Branch::Plus).unwrap();
        let (rp, rm) = s
            .intertwining_residual(&d, 1000, 8.0 / d.beta_natural().sqrt())
            .unwrap();
        assert!(rp < 1e-10 && rm < 1e-12, "rp={rp} rm={rm}");
    }

    #[test]
    fn printed_lower_coefficient_mismatch_is_reported() {
        // the m <= -1 rows print eps_+/(2 rho m); the intertwining-derived
        // value is 2 rho m/eps_+, so a note must be attached
        let d = cfg(25.0, 20.0);
        let s = assemble_spinor(0, -1, &d, Branch::Plus).unwrap();
        assert!(s.coefficient_note.is_some());
        // the m >= 0 rows print the correct eps_-/(2 rho (m+1))
        let s = assemble_spinor(0, 0, &d, Branch::Plus).unwrap();
        assert!(s.coefficient_note.is_none());
    }

    #[test]
    fn normalization_is_idempotent() {
        let d = cfg(5.0, 20.0);
        let spec = QuadratureSpec::for_config(&d);
        let mut s = assemble_spinor(1, 0, &d, Branch::Plus).unwrap();
        s.normalize(&spec).unwrap();
        let n2 = norm_squared(&s, &spec).unwrap();
        assert!((n2.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn same_m_different_n_states_are_orthogonal() {
        let d = cfg(5.0, 20.0);
        let spec = QuadratureSpec::for_config(&d);
        let mut a = assemble_spinor(0, 1, &d, Branch::Plus).unwrap();
        let mut b = assemble_spinor(2, 1, &d, Branch::Plus).unwrap();
        a.normalize(&spec).unwrap();
        b.normalize(&spec).unwrap();
        let ov = overlap(&a, &b, &spec).unwrap();
        assert!(ov.value.abs() < 1e-8, "overlap {}", ov.value);
        // bare component profiles of the same class are orthogonal too
        let ra = radial_profile(0, 1, Component::One, &d).unwrap();
        let rb = radial_profile(3, 1, Component::One, &d).unwrap();
        let ov = profile_overlap(&ra, &rb, &spec).unwrap();
        let na = profile_overlap(&ra, &ra, &spec).unwrap();
        let nb = profile_overlap(&rb, &rb, &spec).unwrap();
        assert!(ov.value.abs() / (na.value * nb.value).sqrt() < 1e-8);
    }

    #[test]
    fn beta_to_zero_measure_is_flat() {
        let m = DeformedMeasure { beta: 0.0 };
        for p in [0.0, 1.0, 10.0] {
            assert_eq!(m.weight(p), 1.0);
        }
    }

    #[test]
    fn commutator_representation_on_gaussians() {
        let grid: Vec<f64> = (1..=300).map(|i| 0.05 * i as f64).collect();
        for (center, width) in [(0.0, 1.0), (2.0, 0.7), (5.0, 2.5)] {
            let f = Gaussian { center, width };
            let res = commutator_residual(&f, 1.0, 0.1, &grid);
            assert!(res < 1e-10, "residual {res}");
        }
    }

    #[test]
    fn applied_p_origin_limits() {
        let d = cfg(5.0, 20.0);
        // nu' = 0 with angular index 0: finite limit 0
        let r = radial_profile(1, 0, Component::One, &d).unwrap();
        let op = apply_p(PSign::Plus, &r, 0, &d);
        assert_eq!(op.eval(0.0).unwrap(), 0.0);
        // nu' = 0 with nonzero angular index: divergent 1/p term
        let op = apply_p(PSign::Plus, &r, 2, &d);
        assert!(matches!(
            op.eval(0.0),
            Err(Error::DivergentAtOrigin { .. })
        ));
    }
}
