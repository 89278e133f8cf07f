//! Component-level eigenvalues, spinor-level closed-form energies, level
//! enumeration and degeneracy counting.
//!
//! The radial problem for each spinor component reduces to a trigonometric
//! Poschl-Teller eigenproblem whose regular solutions terminate.  Four
//! endpoint-regularity classes (a)-(d) select the signs of the effective
//! parameters (mu', nu'); which classes occur for which angular momentum m
//! depends only on the regime of rho and on tau = -1/2 - rho*/(2 rho).
//!
//! Degeneracies are always obtained by enumerating admissible integer m in
//! the class windows, never from ceiling formulas: enumeration is
//! unambiguous for negative tau and reproduces every limit claim.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{interior_regime, tau_of, DimensionlessConfig, Regime};

/// Spinor component: 1 = upper, 2 = lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    One,
    Two,
}

impl Component {
    pub fn index(&self) -> u8 {
        match self {
            Component::One => 1,
            Component::Two => 2,
        }
    }
}

/// Energy branch sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Poschl-Teller parameters of one component at angular momentum m.
///
/// (mu, nu) is the base solution of the parameter equations:
/// component 1 uses mu = m + 1 + 1/(beta lambda), nu = m and component 2
/// uses mu = m + 1/(beta lambda), nu = m + 1.  The solution classes flip
/// signs of mu and/or nu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTParameters {
    pub component: Component,
    pub zeta: f64,
    pub xi: f64,
    pub mu: f64,
    pub nu: f64,
}

/// zeta_i = m - 1/2 + i, xi_i = m + 5/2 - i + 1/(beta lambda),
/// mu = xi - 1/2, nu = zeta - 1/2.
pub fn pt_parameters(m: i64, component: Component, d: &DimensionlessConfig) -> Result<PTParameters> {
    let t = d.inv_beta_lambda()?;
    let i = component.index() as f64;
    let m = m as f64;
    let zeta = m - 0.5 + i;
    let xi = m + 2.5 - i + t;
    Ok(PTParameters {
        component,
        zeta,
        xi,
        mu: xi - 0.5,
        nu: zeta - 0.5,
    })
}

/// The four endpoint-regularity classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    A,
    B,
    C,
    D,
}

impl ClassLabel {
    /// Signs applied to (mu, nu) to obtain the effective parameters of
    /// the class: (a) keeps both, (b) flips both, (c) flips nu, (d)
    /// flips mu.
    pub fn signs(&self) -> (f64, f64) {
        match self {
            ClassLabel::A => (1.0, 1.0),
            ClassLabel::B => (-1.0, -1.0),
            ClassLabel::C => (1.0, -1.0),
            ClassLabel::D => (-1.0, 1.0),
        }
    }
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ClassLabel::A => "a",
            ClassLabel::B => "b",
            ClassLabel::C => "c",
            ClassLabel::D => "d",
        };
        f.write_str(s)
    }
}

/// A resolved solution class for one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionClass {
    pub label: ClassLabel,
    pub component: Component,
}

impl SolutionClass {
    /// Effective (mu', nu') after applying the class signs.
    pub fn effective_mu_nu(&self, p: &PTParameters) -> (f64, f64) {
        let (sm, sn) = self.label.signs();
        (sm * p.mu, sn * p.nu)
    }

    /// Both effective exponents satisfy the endpoint constraint mu', nu' > -1/2.
    pub fn admits(&self, p: &PTParameters) -> bool {
        let (mu, nu) = self.effective_mu_nu(p);
        mu > -0.5 && nu > -0.5
    }
}

/// The class of the component solution that enters the spinor catalog for
/// this (m, component, regime).
///
/// Where the endpoint constraints admit two classes for the same m (the
/// limit-circle window |mu'| < 1/2 or |nu'| < 1/2), the class used by the
/// spinor tables is returned; the other is an unpaired solution that must
/// be discarded.
pub fn classify_solution(
    m: i64,
    component: Component,
    d: &DimensionlessConfig,
) -> Result<SolutionClass> {
    let regime = interior_regime(d)?;
    let tau = tau_of(d)?.value;
    let mf = m as f64;
    let label = match regime {
        Regime::ExternalPositive | Regime::ExternalNegative => {
            if m >= 0 {
                ClassLabel::A
            } else {
                ClassLabel::B
            }
        }
        Regime::InternalPositive => match component {
            // tau < -1 here; the window (tau, -1] holds class (c).
            Component::One => {
                if m >= 0 {
                    ClassLabel::A
                } else if mf < tau {
                    ClassLabel::B
                } else {
                    ClassLabel::C
                }
            }
            Component::Two => {
                if m >= 0 {
                    ClassLabel::A
                } else if mf > tau {
                    ClassLabel::C
                } else {
                    ClassLabel::B
                }
            }
        },
        Regime::InternalNegative => match component {
            // tau > 0 here; the window [0, tau) holds class (d).
            Component::One => {
                if m <= -1 {
                    ClassLabel::B
                } else if mf < tau {
                    ClassLabel::D
                } else {
                    ClassLabel::A
                }
            }
            Component::Two => {
                if m <= -1 {
                    ClassLabel::B
                } else if mf > tau {
                    ClassLabel::A
                } else {
                    ClassLabel::D
                }
            }
        },
    };
    let class = SolutionClass { label, component };
    // The chosen class must pass the raw endpoint constraints; anything
    // else is an internal inconsistency in the window logic.
    let p = pt_parameters(m, component, d)?;
    if !class.admits(&p) {
        return Err(Error::Inadmissible(format!(
            "internal inconsistency: class ({label}) rejected for m = {m}, component {}, \
             rho = {}, rho* = {}",
            component.index(),
            d.rho(),
            d.rho_star()
        )));
    }
    Ok(class)
}

/// k^2 of the n-th bound state in the given class, from the printed
/// quarter-square expressions of the component tables.
pub fn k_squared(class: &SolutionClass, n: u32, p: &PTParameters) -> f64 {
    let n = n as f64;
    let (zeta, xi) = (p.zeta, p.xi);
    let base = match class.label {
        ClassLabel::A => 2.0 * n + zeta + xi,
        ClassLabel::B => 2.0 * n + 2.0 - zeta - xi,
        ClassLabel::C => 2.0 * n + 1.0 - zeta + xi,
        ClassLabel::D => 2.0 * n + 1.0 + zeta - xi,
    };
    0.25 * base * base
}

/// Invert k^2 = (eps^2 + 1/beta) / (4 beta lambda^2) for the energy:
/// E/Mc^2 = +-sqrt(1 + (8 rho^2/rho*) k^2 - rho*/2).
pub fn energy_from_k(k2: f64, d: &DimensionlessConfig, branch: Branch) -> Result<f64> {
    let rho = d.rho();
    let rho_star = d.rho_star();
    if rho == 0.0 {
        return Err(Error::CriticalPoint);
    }
    let radicand = 1.0 + (8.0 * rho * rho / rho_star) * k2 - rho_star / 2.0;
    if radicand < 0.0 {
        return Err(Error::UnphysicalState { k2, radicand });
    }
    Ok(branch.sign() * radicand.sqrt())
}

/// Spinor-level families of levels.
///
/// `ExtPlus`/`ExtMinus` are the two external-range ladders; `I`/`II` live
/// in 0 < rho < rho*, `III`/`V` in -rho* < rho < 0, and `IvZero` is the
/// field-independent zero mode E = +-Mc^2 of the internal ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    ExtPlus,
    ExtMinus,
    I,
    Ii,
    Iii,
    IvZero,
    V,
}

impl Family {
    /// Families (ii)/(iii) exist only for beta != 0 and disappear in the
    /// ordinary limit; everything else persists.
    pub fn is_dashed(&self) -> bool {
        matches!(self, Family::Ii | Family::Iii)
    }

    /// Sign inside the square bracket of the closed form
    /// E = Mc^2 sqrt(1 + 4 rho N [2 (rho/rho*) N +- 1]).
    fn bracket_sign(&self) -> Option<f64> {
        match self {
            Family::ExtPlus | Family::I | Family::Iii => Some(1.0),
            Family::ExtMinus | Family::Ii | Family::V => Some(-1.0),
            Family::IvZero => None,
        }
    }

    fn belongs_to(&self, regime: Regime) -> bool {
        match self {
            Family::ExtPlus | Family::ExtMinus => regime.is_external(),
            Family::I | Family::Ii => regime == Regime::InternalPositive,
            Family::Iii | Family::V => regime == Regime::InternalNegative,
            Family::IvZero => !regime.is_external(),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::ExtPlus => "ext+",
            Family::ExtMinus => "ext-",
            Family::I => "i",
            Family::Ii => "ii",
            Family::Iii => "iii",
            Family::IvZero => "iv0",
            Family::V => "v",
        };
        f.write_str(s)
    }
}

/// One (n, m) member of a level, tagged with its family provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Member {
    pub family: Family,
    /// Family index N of the level the member belongs to.
    pub n_index: u32,
    pub n: u32,
    pub m: i64,
}

/// One distinct energy with its full member list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub e_over_mc2: f64,
    pub branch: Branch,
    pub members: Vec<Member>,
}

impl Level {
    pub fn degeneracy(&self) -> u32 {
        self.members.len() as u32
    }

    /// The distinct (family, N) pairs contributing to this level.
    pub fn entries(&self) -> BTreeSet<(Family, u32)> {
        self.members.iter().map(|m| (m.family, m.n_index)).collect()
    }

    pub fn has_dashed(&self) -> bool {
        self.members.iter().any(|m| m.family.is_dashed())
    }

    pub fn has_solid(&self) -> bool {
        self.members.iter().any(|m| !m.family.is_dashed())
    }

    /// Leading family for display: solid families first, then by index.
    pub fn primary(&self) -> (Family, u32) {
        let mut entries: Vec<_> = self.entries().into_iter().collect();
        entries.sort_by_key(|(f, n)| (f.is_dashed(), *f, *n));
        entries[0]
    }
}

// Integer-window counters.  All table predicates are strict exactly as
// printed, so an integer tau sits outside the open side of its window.

/// #{m integer : lo < m <= hi}
fn count_open_closed(lo: f64, hi: i64) -> u32 {
    let first = lo.floor() as i64 + 1;
    (hi - first + 1).max(0) as u32
}

/// #{m integer : lo <= m < hi}
fn count_closed_open(lo: i64, hi: f64) -> u32 {
    let last = hi.ceil() as i64 - 1;
    (last - lo + 1).max(0) as u32
}

fn ints_open_closed(lo: f64, hi: i64) -> impl Iterator<Item = i64> {
    let first = lo.floor() as i64 + 1;
    first..=hi
}

fn ints_closed_open(lo: i64, hi: f64) -> impl Iterator<Item = i64> {
    let last = hi.ceil() as i64 - 1;
    lo..=last
}

/// Closed-form energy of one family level.
pub fn level_energy(
    family: Family,
    n_index: u32,
    d: &DimensionlessConfig,
    branch: Branch,
) -> Result<f64> {
    let regime = interior_regime(d)?;
    if n_index == 0 || !family.belongs_to(regime) || degeneracy(family, n_index, d)? == 0 {
        return Err(Error::LevelNotPermissible {
            family: family.to_string(),
            n_index,
        });
    }
    match family {
        Family::IvZero => {
            // The zero mode rides the positive branch for rho < 0 (upper
            // singlet) and the negative branch for rho > 0 (lower singlet).
            let allowed = match regime {
                Regime::InternalNegative => Branch::Plus,
                Regime::InternalPositive => Branch::Minus,
                _ => unreachable!(),
            };
            if branch != allowed {
                return Err(Error::LevelNotPermissible {
                    family: family.to_string(),
                    n_index,
                });
            }
            Ok(branch.sign())
        }
        _ => {
            let s = family.bracket_sign().expect("non-zero-mode family");
            let rho = d.rho();
            let rho_star = d.rho_star();
            let nf = n_index as f64;
            let radicand = 1.0 + 4.0 * rho * nf * (2.0 * (rho / rho_star) * nf + s);
            if radicand < 0.0 {
                return Err(Error::UnphysicalState {
                    k2: f64::NAN,
                    radicand,
                });
            }
            Ok(branch.sign() * radicand.sqrt())
        }
    }
}

/// Degeneracy of a family level by direct enumeration of admissible m.
/// Returns 0 when the level is absent (including families that do not
/// exist in the current regime at all).
pub fn degeneracy(family: Family, n_index: u32, d: &DimensionlessConfig) -> Result<u32> {
    let regime = interior_regime(d)?;
    if !family.belongs_to(regime) || n_index == 0 {
        return Ok(0);
    }
    let tau = tau_of(d)?.value;
    let n = n_index as i64;
    Ok(match family {
        Family::ExtPlus | Family::ExtMinus => n_index,
        // m >= 0 sector contributes N members, the (tau, -1] sector one
        // member per admissible m.
        Family::I => n_index + count_open_closed(tau, -1),
        Family::Ii => count_closed_open(-n, tau),
        Family::Iii => count_open_closed(tau, n - 1),
        Family::V => n_index + count_closed_open(0, tau),
        Family::IvZero => {
            if n_index != 1 {
                0
            } else {
                match regime {
                    Regime::InternalPositive => count_open_closed(tau, -1),
                    Regime::InternalNegative => count_closed_open(0, tau),
                    _ => 0,
                }
            }
        }
    })
}

/// The explicit (n, m) member list of one family level.  Members of the
/// interior sectors carry n equal to the family index N, matching the
/// energy label of the shifted component pairing.
pub fn family_members(family: Family, n_index: u32, d: &DimensionlessConfig) -> Result<Vec<Member>> {
    let regime = interior_regime(d)?;
    if !family.belongs_to(regime) || n_index == 0 {
        return Ok(Vec::new());
    }
    let tau = tau_of(d)?.value;
    let nn = n_index as i64;
    let member = |n: u32, m: i64| Member {
        family,
        n_index,
        n,
        m,
    };
    let mut out = Vec::new();
    match family {
        Family::ExtPlus => {
            for m in 0..=nn - 1 {
                out.push(member((nn - 1 - m) as u32, m));
            }
        }
        Family::ExtMinus => {
            for mm in 1..=nn {
                out.push(member((nn - mm) as u32, -mm));
            }
        }
        Family::I => {
            for m in 0..=nn - 1 {
                out.push(member((nn - 1 - m) as u32, m));
            }
            for m in ints_open_closed(tau, -1) {
                out.push(member(n_index, m));
            }
        }
        Family::Ii => {
            for m in ints_closed_open(-nn, tau) {
                out.push(member((nn - m.abs()) as u32, m));
            }
        }
        Family::Iii => {
            for m in ints_open_closed(tau, nn - 1) {
                out.push(member((nn - 1 - m) as u32, m));
            }
        }
        Family::V => {
            for mm in 1..=nn {
                out.push(member((nn - mm) as u32, -mm));
            }
            for m in ints_closed_open(0, tau) {
                out.push(member(n_index, m));
            }
        }
        Family::IvZero => {
            if n_index == 1 {
                let window: Vec<i64> = match regime {
                    Regime::InternalPositive => ints_open_closed(tau, -1).collect(),
                    Regime::InternalNegative => ints_closed_open(0, tau).collect(),
                    _ => Vec::new(),
                };
                for m in window {
                    out.push(member(0, m));
                }
            }
        }
    }
    Ok(out)
}

/// All distinct levels with family index N <= n_max on the given branch,
/// sorted by ascending energy.  Levels from different families that
/// coincide in energy (the even-crossing points) are merged into a single
/// `Level`, keeping per-member family provenance.
pub fn enumerate_levels(
    d: &DimensionlessConfig,
    branch: Branch,
    n_max: u32,
) -> Result<Vec<Level>> {
    if n_max < 1 {
        return Err(Error::Domain(format!("n_max must be >= 1, got {n_max}")));
    }
    let regime = interior_regime(d)?;
    let mut candidates: Vec<(Family, u32)> = Vec::new();
    match regime {
        Regime::ExternalPositive | Regime::ExternalNegative => {
            for n in 1..=n_max {
                candidates.push((Family::ExtPlus, n));
                candidates.push((Family::ExtMinus, n));
            }
        }
        Regime::InternalPositive => {
            for n in 1..=n_max {
                candidates.push((Family::I, n));
                candidates.push((Family::Ii, n));
            }
            if branch == Branch::Minus {
                candidates.push((Family::IvZero, 1));
            }
        }
        Regime::InternalNegative => {
            for n in 1..=n_max {
                candidates.push((Family::V, n));
                candidates.push((Family::Iii, n));
            }
            if branch == Branch::Plus {
                candidates.push((Family::IvZero, 1));
            }
        }
    }

    let mut raw: Vec<(f64, Vec<Member>)> = Vec::new();
    for (family, n) in candidates {
        if degeneracy(family, n, d)? == 0 {
            continue;
        }
        let e = level_energy(family, n, d, branch)?;
        let members = family_members(family, n, d)?;
        raw.push((e, members));
    }
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));

    // Merge levels that coincide to relative 1e-12; distinct levels on any
    // sensible grid are separated by many orders of magnitude more.
    let mut levels: Vec<Level> = Vec::new();
    for (e, members) in raw {
        if let Some(last) = levels.last_mut() {
            if (e - last.e_over_mc2).abs() <= 1e-12 * e.abs().max(1.0) {
                last.members.extend(members);
                continue;
            }
        }
        levels.push(Level {
            e_over_mc2: e,
            branch,
            members,
        });
    }
    Ok(levels)
}

/// The (family, N) a component solution (class, n, m) belongs to.  For the
/// zero modes, N is reported as 1.
pub fn member_family(
    class: &SolutionClass,
    n: u32,
    m: i64,
    d: &DimensionlessConfig,
) -> Result<(Family, u32)> {
    let regime = interior_regime(d)?;
    let nn = n as i64;
    let pair = match (regime, class.label, class.component) {
        (Regime::ExternalPositive | Regime::ExternalNegative, ClassLabel::A, _) => {
            (Family::ExtPlus, nn + m + 1)
        }
        (Regime::ExternalPositive | Regime::ExternalNegative, ClassLabel::B, _) => {
            (Family::ExtMinus, nn + m.abs())
        }
        (Regime::InternalPositive, ClassLabel::A, _) => (Family::I, nn + m + 1),
        (Regime::InternalPositive, ClassLabel::C, Component::One) => (Family::I, nn + 1),
        (Regime::InternalPositive, ClassLabel::C, Component::Two) => {
            if n == 0 {
                (Family::IvZero, 1)
            } else {
                (Family::I, nn)
            }
        }
        (Regime::InternalPositive, ClassLabel::B, _) => (Family::Ii, nn + m.abs()),
        (Regime::InternalNegative, ClassLabel::A, _) => (Family::Iii, nn + m + 1),
        (Regime::InternalNegative, ClassLabel::D, Component::One) => {
            if n == 0 {
                (Family::IvZero, 1)
            } else {
                (Family::V, nn)
            }
        }
        (Regime::InternalNegative, ClassLabel::D, Component::Two) => (Family::V, nn + 1),
        (Regime::InternalNegative, ClassLabel::B, _) => (Family::V, nn + m.abs()),
        (regime, label, component) => {
            return Err(Error::Inadmissible(format!(
                "class ({label}) of component {} does not occur in regime {regime}",
                component.index()
            )))
        }
    };
    debug_assert!(pair.1 >= 1);
    Ok((pair.0, pair.1 as u32))
}
