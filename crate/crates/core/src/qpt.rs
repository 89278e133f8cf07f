//! Critical points, critical magnetic fields, level-curve datasets and
//! numerical kink detection.
//!
//! The loci rho_N = +-rho*/N partition the internal ranges: odd N are the
//! thresholds where a minimal-length-only level family turns on, even N
//! are the points where those levels cross the persistent ones.  Each
//! rho_N corresponds to a critical magnetic field
//! B_cr^N = B_cr + 4c/(N beta e hbar) accumulating at the ordinary B_cr.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{interior_regime, DimensionlessConfig, PhysicalConfig, Regime};
use crate::spectrum::{degeneracy, family_members, level_energy, Branch, Family, Member};

/// Phase-transition kind: odd-N thresholds (dashed-level onsets) and
/// even-N crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalKind {
    Threshold,
    Crossing,
}

/// One critical point rho_N = +-rho*/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub n: u32,
    pub rho: f64,
    pub kind: CriticalKind,
    pub positive: bool,
}

/// Both signs of rho*/N for N = 1..n_max, kinds by parity.
pub fn critical_rhos(rho_star: f64, n_max: u32) -> Vec<CriticalPoint> {
    let mut out = Vec::with_capacity(2 * n_max as usize);
    for n in 1..=n_max {
        let kind = if n % 2 == 1 {
            CriticalKind::Threshold
        } else {
            CriticalKind::Crossing
        };
        for positive in [true, false] {
            let sign = if positive { 1.0 } else { -1.0 };
            out.push(CriticalPoint {
                n,
                rho: sign * rho_star / n as f64,
                kind,
                positive,
            });
        }
    }
    out
}

/// The critical rho*/N closest to `rho` (same sign as rho, N >= 1,
/// capped at n_cap).  Returns (N, rho_N).
pub fn nearest_critical(rho: f64, rho_star: f64, n_cap: u32) -> (u32, f64) {
    let sign = if rho < 0.0 { -1.0 } else { 1.0 };
    let mag = rho.abs();
    if mag == 0.0 {
        return (n_cap, sign * rho_star / n_cap as f64);
    }
    let n0 = rho_star / mag;
    let mut best = (1u32, sign * rho_star);
    let mut best_dist = (rho - best.1).abs();
    for cand in [n0.floor(), n0.ceil()] {
        let n = (cand as u32).clamp(1, n_cap);
        let rho_n = sign * rho_star / n as f64;
        let dist = (rho - rho_n).abs();
        if dist < best_dist {
            best = (n, rho_n);
            best_dist = dist;
        }
    }
    best
}

/// One critical magnetic field of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalField {
    pub n: u32,
    pub b_cr_n: f64,
}

/// The critical-field ladder together with its accumulation point B_cr.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFieldLadder {
    /// Ordinary critical field 2 M c omega / e.
    pub b_cr: f64,
    /// B_cr^N = B_cr + 4c/(N beta e hbar), strictly decreasing in N.
    pub fields: Vec<CriticalField>,
}

pub fn critical_fields(cfg: &PhysicalConfig, n_max: u32) -> Result<CriticalFieldLadder> {
    cfg.validate()?;
    if cfg.beta == 0.0 {
        return Err(Error::Domain(
            "beta = 0: every B_cr^N is infinite and only the ordinary B_cr survives".into(),
        ));
    }
    let b_cr = cfg.b_critical();
    let delta1 = 4.0 * cfg.c / (cfg.beta * cfg.e_charge * cfg.hbar);
    let fields = (1..=n_max)
        .map(|n| CriticalField {
            n,
            b_cr_n: b_cr + delta1 / n as f64,
        })
        .collect();
    Ok(CriticalFieldLadder { b_cr, fields })
}

/// Persistence of a level curve in the beta -> 0 limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Persistence {
    Solid,
    Dashed,
    /// Merged crossing point carrying members of both kinds.
    Both,
}

impl std::fmt::Display for Persistence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Persistence::Solid => "solid",
            Persistence::Dashed => "dashed",
            Persistence::Both => "both",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Persistence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solid" => Ok(Persistence::Solid),
            "dashed" => Ok(Persistence::Dashed),
            "both" => Ok(Persistence::Both),
            other => Err(Error::Domain(format!("unknown persistence flag {other:?}"))),
        }
    }
}

/// One curve value at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub energy: f64,
    pub flag: Persistence,
    /// The (family, N) levels merged into this curve value.  Empty when the
    /// dataset was re-read from CSV, which carries only the flags.
    pub entries: Vec<(Family, u32)>,
    pub members: Vec<Member>,
}

/// Sorted energies of the lowest curves at one rho.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurvePoint {
    pub rho: f64,
    pub curves: Vec<CurvePoint>,
}

/// A grid point skipped because it sits exactly on an excluded locus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub rho: f64,
    pub reason: String,
}

/// The Fig.-1-style dataset: lowest `curves` energies on a rho grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Dataset {
    pub rho_star: f64,
    pub branch: Branch,
    pub requested_curves: usize,
    pub points: Vec<LevelCurvePoint>,
    pub skipped: Vec<SkippedPoint>,
}

/// Lowest `curves` branch energies over the rho grid, with persistence
/// flags and full member provenance.  Grid points exactly at rho = 0 or
/// |rho| = rho* are recorded as skipped.
pub fn figure1_dataset(
    rho_star: f64,
    rho_grid: &[f64],
    curves: usize,
    branch: Branch,
) -> Result<Figure1Dataset> {
    if curves == 0 {
        return Err(Error::Domain("need at least one curve".into()));
    }
    let mut points = Vec::with_capacity(rho_grid.len());
    let mut skipped = Vec::new();
    for &rho in rho_grid {
        let d = DimensionlessConfig::new(rho, rho_star)?;
        match interior_regime(&d) {
            Err(Error::CriticalPoint) => {
                skipped.push(SkippedPoint {
                    rho,
                    reason: "critical point rho = 0".into(),
                });
                continue;
            }
            Err(Error::RegimeBoundary { .. }) => {
                skipped.push(SkippedPoint {
                    rho,
                    reason: "regime boundary |rho| = rho*".into(),
                });
                continue;
            }
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        points.push(LevelCurvePoint {
            rho,
            curves: lowest_curves(&d, curves, branch)?,
        });
    }
    Ok(Figure1Dataset {
        rho_star,
        branch,
        requested_curves: curves,
        points,
        skipped,
    })
}

/// Candidate (family, N) levels guaranteed to contain the lowest `curves`
/// energies, then members for the winners only.
fn lowest_curves(
    d: &DimensionlessConfig,
    curves: usize,
    branch: Branch,
) -> Result<Vec<CurvePoint>> {
    let regime = interior_regime(d)?;
    let n_curves = curves as u32;
    let mut candidates: Vec<(Family, u32)> = Vec::new();
    match regime {
        Regime::ExternalPositive | Regime::ExternalNegative => {
            for n in 1..=n_curves + 1 {
                candidates.push((Family::ExtPlus, n));
                candidates.push((Family::ExtMinus, n));
            }
        }
        Regime::InternalPositive | Regime::InternalNegative => {
            // the beta-only families start at N_thr ~ (rho*/|rho| + 1)/2 and
            // are increasing in N, so N_thr + curves levels bound the window
            let n_thr = ((d.rho_star() / d.rho().abs() + 1.0) / 2.0).ceil() as u32 + 1;
            let n_max = n_thr + n_curves + 1;
            let (solid, dashed) = if regime == Regime::InternalPositive {
                (Family::I, Family::Ii)
            } else {
                (Family::V, Family::Iii)
            };
            for n in 1..=n_curves + 1 {
                candidates.push((solid, n));
            }
            for n in 2..=n_max {
                candidates.push((dashed, n));
            }
            candidates.push((Family::IvZero, 1));
        }
    }

    let mut energies: Vec<(f64, Family, u32)> = Vec::new();
    for (family, n) in candidates {
        if degeneracy(family, n, d)? == 0 {
            continue;
        }
        match level_energy(family, n, d, branch) {
            Ok(e) => energies.push((e, family, n)),
            Err(Error::LevelNotPermissible { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    energies.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));

    let mut out: Vec<CurvePoint> = Vec::new();
    for (e, family, n) in energies {
        if out.len() >= curves
            && (e - out.last().expect("nonempty").energy).abs() > 1e-12 * e.abs().max(1.0)
        {
            break;
        }
        if let Some(last) = out.last_mut() {
            if (e - last.energy).abs() <= 1e-12 * e.abs().max(1.0) {
                last.entries.push((family, n));
                last.members.extend(family_members(family, n, d)?);
                last.flag = flag_of(&last.entries);
                continue;
            }
        }
        if out.len() >= curves {
            break;
        }
        let entries = vec![(family, n)];
        out.push(CurvePoint {
            energy: e,
            flag: flag_of(&entries),
            entries,
            members: family_members(family, n, d)?,
        });
    }
    Ok(out)
}

fn flag_of(entries: &[(Family, u32)]) -> Persistence {
    let dashed = entries.iter().any(|(f, _)| f.is_dashed());
    let solid = entries.iter().any(|(f, _)| !f.is_dashed());
    match (solid, dashed) {
        (true, true) => Persistence::Both,
        (false, true) => Persistence::Dashed,
        _ => Persistence::Solid,
    }
}

/// A detected kink, matched to the nearest critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kink {
    pub rho: f64,
    pub curve: usize,
    pub nearest_n: u32,
    pub nearest_rho: f64,
    pub distance: f64,
}

/// Detect kinks of each curve: discrete second differences above
/// `tolerance`, changes of the merged (family, N) identity set (or of the
/// persistence flag when the dataset was re-read from CSV), and the gaps
/// left by skipped loci.  Raw detections within 1.1 grid steps merge into
/// one kink per curve.
pub fn detect_kinks(dataset: &Figure1Dataset, tolerance: f64) -> Result<Vec<Kink>> {
    let points = &dataset.points;
    if points.len() < 3 {
        return Err(Error::Domain("kink detection needs at least 3 grid points".into()));
    }
    // establish the uniform step; gaps of exactly one skipped point are 2h
    let mut h = f64::INFINITY;
    for w in points.windows(2) {
        h = h.min(w[1].rho - w[0].rho);
    }
    if !(h > 0.0) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    for w in points.windows(2) {
        let step = w[1].rho - w[0].rho;
        let units = (step / h).round();
        if units < 1.0 || units > 2.0 || (step - units * h).abs() > 1e-6 * h {
            return Err(Error::Domain(format!(
                "grid is not uniform: step {step} is not 1x or 2x the base step {h}"
            )));
        }
    }
    // the detector needs adjacent critical points separated by >= 2h to
    // attribute kinks unambiguously; find where that breaks down
    let resolvable = largest_resolvable_n(dataset.rho_star, h);
    if resolvable < 1 {
        return Err(Error::GridTooCoarse {
            pairs: vec![(1, 2)],
        });
    }
    let n_cap = (dataset.rho_star / (0.5 * h)).ceil().max(2.0) as u32;

    let n_curves = points
        .iter()
        .map(|p| p.curves.len())
        .max()
        .unwrap_or(0);
    let mut kinks = Vec::new();
    for curve in 0..n_curves {
        let mut raw: Vec<f64> = Vec::new();
        for i in 0..points.len() {
            // gaps: the skipped locus between i-1 and i is itself a kink
            if i > 0 {
                let step = points[i].rho - points[i - 1].rho;
                if step > 1.5 * h {
                    raw.push(0.5 * (points[i].rho + points[i - 1].rho));
                }
            }
            // identity change between adjacent points one step apart
            if i > 0 && points[i].rho - points[i - 1].rho < 1.5 * h {
                if identity_changed(&points[i - 1], &points[i], curve) {
                    raw.push(0.5 * (points[i].rho + points[i - 1].rho));
                }
            }
            // second difference on uniform triples
            if i > 0 && i + 1 < points.len() {
                let left = points[i].rho - points[i - 1].rho;
                let right = points[i + 1].rho - points[i].rho;
                if left < 1.5 * h && right < 1.5 * h {
                    if let (Some(a), Some(b), Some(c)) = (
                        curve_energy(&points[i - 1], curve),
                        curve_energy(&points[i], curve),
                        curve_energy(&points[i + 1], curve),
                    ) {
                        if (a - 2.0 * b + c).abs() > tolerance {
                            raw.push(points[i].rho);
                        }
                    }
                }
            }
        }
        raw.sort_by(|a, b| a.partial_cmp(b).expect("finite rho"));
        // cluster raw detections and keep the median of each cluster
        let mut i = 0;
        while i < raw.len() {
            let mut j = i;
            while j + 1 < raw.len() && raw[j + 1] - raw[j] <= 1.1 * h {
                j += 1;
            }
            let rho = raw[i + (j - i) / 2];
            let (nearest_n, nearest_rho) = nearest_critical(rho, dataset.rho_star, n_cap);
            kinks.push(Kink {
                rho,
                curve,
                nearest_n,
                nearest_rho,
                distance: (rho - nearest_rho).abs(),
            });
            i = j + 1;
        }
    }
    kinks.sort_by(|a, b| (a.curve, a.rho).partial_cmp(&(b.curve, b.rho)).expect("finite"));
    Ok(kinks)
}

/// Largest N such that rho*/N and rho*/(N+1) are at least two grid steps
/// apart.
pub fn largest_resolvable_n(rho_star: f64, h: f64) -> u32 {
    let mut n = 0u32;
    loop {
        let next = n + 1;
        let gap = rho_star / next as f64 - rho_star / (next + 1) as f64;
        if gap < 2.0 * h {
            return n;
        }
        n = next;
        if n > 1_000_000 {
            return n;
        }
    }
}

fn curve_energy(point: &LevelCurvePoint, curve: usize) -> Option<f64> {
    point.curves.get(curve).map(|c| c.energy)
}

fn identity_changed(a: &LevelCurvePoint, b: &LevelCurvePoint, curve: usize) -> bool {
    match (a.curves.get(curve), b.curves.get(curve)) {
        (Some(ca), Some(cb)) => {
            if !ca.entries.is_empty() && !cb.entries.is_empty() {
                let mut ea = ca.entries.clone();
                let mut eb = cb.entries.clone();
                ea.sort();
                eb.sort();
                ea != eb
            } else {
                // CSV round trips carry only the flags
                ca.flag != cb.flag
            }
        }
        (None, None) => false,
        _ => true,
    }
}

/// 15-significant-digit decimal formatting used by every CSV emitter.
pub fn format_g15(x: f64) -> String {
    format!("{x:.14e}")
}

/// CSV with columns rho, E_1..E_k, flags_1..flags_k ('.' decimal, ','
/// separator, LF line endings).
pub fn figure1_to_csv(dataset: &Figure1Dataset) -> String {
    let k = dataset.requested_curves;
    let mut out = String::new();
    out.push_str("rho");
    for i in 1..=k {
        out.push_str(&format!(",E_{i}"));
    }
    for i in 1..=k {
        out.push_str(&format!(",flag_{i}"));
    }
    out.push('\n');
    for point in &dataset.points {
        out.push_str(&format_g15(point.rho));
        for i in 0..k {
            out.push(',');
            if let Some(c) = point.curves.get(i) {
                out.push_str(&format_g15(c.energy));
            }
        }
        for i in 0..k {
            out.push(',');
            if let Some(c) = point.curves.get(i) {
                out.push_str(&c.flag.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Parse a dataset back from its CSV form.  Member lists and entry sets are
/// not part of the CSV, so kink detection on the result falls back to the
/// persistence flags.
pub fn figure1_from_csv(content: &str, rho_star: f64) -> Result<Figure1Dataset> {
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Domain("empty CSV".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.is_empty() || cols[0] != "rho" || (cols.len() - 1) % 2 != 0 {
        return Err(Error::Domain(format!("unexpected CSV header {header:?}")));
    }
    let k = (cols.len() - 1) / 2;
    let mut points = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 1 + 2 * k {
            return Err(Error::Domain(format!(
                "line {}: expected {} fields, got {}",
                line_no + 2,
                1 + 2 * k,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Domain(format!("line {}: {e}", line_no + 2)))
        };
        let rho = parse(fields[0])?;
        let mut curves = Vec::with_capacity(k);
        for i in 0..k {
            let e_field = fields[1 + i];
            let f_field = fields[1 + k + i];
            if e_field.is_empty() {
                break;
            }
            curves.push(CurvePoint {
                energy: parse(e_field)?,
                flag: f_field.parse()?,
                entries: Vec::new(),
                members: Vec::new(),
            });
        }
        points.push(LevelCurvePoint { rho, curves });
    }
    Ok(Figure1Dataset {
        rho_star,
        branch: Branch::Plus,
        requested_curves: k,
        points,
        skipped: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PhysicalConfig;

    #[test]
    fn critical_rhos_by_arithmetic() {
        let points = critical_rhos(20.0, 5);
        let pos: Vec<f64> = points
            .iter()
            .filter(|p| p.positive)
            .map(|p| p.rho)
            .collect();
        assert_eq!(pos, vec![20.0, 10.0, 20.0 / 3.0, 5.0, 4.0]);
        for p in &points {
            let expect = if p.n % 2 == 1 {
                CriticalKind::Threshold
            } else {
                CriticalKind::Crossing
            };
            assert_eq!(p.kind, expect);
            assert!(p.rho.abs() <= 20.0);
        }
        // N = 1 sits at the regime boundary
        assert_eq!(points[0].rho, 20.0);
        assert_eq!(points[1].rho, -20.0);
        // rho_N -> 0 as N grows
        let far = critical_rhos(20.0, 10_000);
        assert!(far.last().unwrap().rho.abs() < 0.003);
    }

    #[test]
    fn critical_points_partition_is_strictly_decreasing() {
        let points = critical_rhos(20.0, 200);
        let pos: Vec<f64> = points
            .iter()
            .filter(|p| p.positive)
            .map(|p| p.rho)
            .collect();
        for w in pos.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn critical_fields_by_substitution() {
        // natural units, omega = 1: B_cr = 2
        let cfg = PhysicalConfig::natural(1.0, 0.0, 0.1);
        let ladder = critical_fields(&cfg, 100).unwrap();
        assert_eq!(ladder.b_cr, 2.0);
        // ladder identity: B_cr^2 - B_cr = (B_cr^1 - B_cr)/2
        let d1 = ladder.fields[0].b_cr_n - ladder.b_cr;
        let d2 = ladder.fields[1].b_cr_n - ladder.b_cr;
        assert!((d2 - d1 / 2.0).abs() <= 1e-15 * d1);
        // strictly decreasing towards the accumulation point B_cr
        for w in ladder.fields.windows(2) {
            assert!(w[1].b_cr_n < w[0].b_cr_n);
            assert!(w[1].b_cr_n > ladder.b_cr);
        }
    }

    #[test]
    fn critical_fields_require_minimal_length() {
        let cfg = PhysicalConfig::natural(1.0, 0.0, 0.0);
        assert!(critical_fields(&cfg, 5).is_err());
    }

    #[test]
    fn figure1_crossing_point_is_merged() {
        // rho = 5 = rho*/4 is an even crossing: lowest level sqrt(31), both kinds
        let data = figure1_dataset(20.0, &[5.0], 3, Branch::Plus).unwrap();
        let point = &data.points[0];
        assert!((point.curves[0].energy - 31.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(point.curves[0].flag, Persistence::Both);
        assert_eq!(point.curves[0].members.len(), 4);
    }

    #[test]
    fn figure1_zero_mode_is_solid() {
        let data = figure1_dataset(20.0, &[-5.0], 3, Branch::Plus).unwrap();
        let point = &data.points[0];
        assert_eq!(point.curves[0].energy, 1.0);
        assert_eq!(point.curves[0].flag, Persistence::Solid);
        assert_eq!(point.curves[0].members.len(), 2);
    }

    #[test]
    fn fixed_dashed_levels_leave_any_window_as_rho_star_grows() {
        // each fixed beta-only level (ii, N) has threshold rho*/(2N-1):
        // growing rho* pushes it out of the window |rho| <= 30
        for n in 2..=6u32 {
            for rho in [1.0, 5.0, 15.0, 29.0] {
                let d = DimensionlessConfig::new(rho, 2000.0).unwrap();
                assert_eq!(degeneracy(Family::Ii, n, &d).unwrap(), 0);
                let d = DimensionlessConfig::new(-rho, 2000.0).unwrap();
                assert_eq!(degeneracy(Family::Iii, n, &d).unwrap(), 0);
            }
        }
        // while high-index dashed levels of the cascade remain interleaved
        let d = DimensionlessConfig::new(5.0, 2000.0).unwrap();
        let n_thr = (2000.0_f64 / 5.0 / 2.0 + 1.0).ceil() as u32;
        assert!(degeneracy(Family::Ii, n_thr + 1, &d).unwrap() > 0);
    }

    #[test]
    fn figure1_skips_excluded_loci_with_warnings() {
        let data = figure1_dataset(20.0, &[-20.0, -5.0, 0.0, 5.0, 20.0], 2, Branch::Plus).unwrap();
        assert_eq!(data.points.len(), 2);
        assert_eq!(data.skipped.len(), 3);
        assert!(data.skipped.iter().any(|s| s.rho == 0.0));
        assert!(data.skipped.iter().any(|s| s.rho == 20.0));
        assert!(data.skipped.iter().any(|s| s.rho == -20.0));
    }

    #[test]
    fn constant_zero_mode_curve_has_no_interior_kinks() {
        // a dataset holding only the zero-mode curve: E identically 1
        let grid: Vec<f64> = (1..400).map(|i| -20.0 + 0.05 * i as f64).collect();
        let points: Vec<LevelCurvePoint> = grid
            .iter()
            .map(|&rho| LevelCurvePoint {
                rho,
                curves: vec![CurvePoint {
                    energy: 1.0,
                    flag: Persistence::Solid,
                    entries: vec![(Family::IvZero, 1)],
                    members: Vec::new(),
                }],
            })
            .collect();
        let data = Figure1Dataset {
            rho_star: 20.0,
            branch: Branch::Plus,
            requested_curves: 1,
            points,
            skipped: Vec::new(),
        };
        assert!(detect_kinks(&data, 0.01).unwrap().is_empty());
    }

    #[test]
    fn smooth_single_family_curve_has_no_kinks() {
        // family (i), N = 1 alone over a window inside the regime
        let grid: Vec<f64> = (0..200).map(|i| 1.0 + 0.05 * i as f64).collect();
        let points: Vec<LevelCurvePoint> = grid
            .iter()
            .map(|&rho| {
                let d = DimensionlessConfig::new(rho, 20.0).unwrap();
                LevelCurvePoint {
                    rho,
                    curves: vec![CurvePoint {
                        energy: level_energy(Family::I, 1, &d, Branch::Plus).unwrap(),
                        flag: Persistence::Solid,
                        entries: vec![(Family::I, 1)],
                        members: Vec::new(),
                    }],
                }
            })
            .collect();
        let data = Figure1Dataset {
            rho_star: 20.0,
            branch: Branch::Plus,
            requested_curves: 1,
            points,
            skipped: Vec::new(),
        };
        assert!(detect_kinks(&data, 0.01).unwrap().is_empty());
    }

    #[test]
    fn csv_round_trip_preserves_energies_and_flags() {
        let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.5).collect();
        let data = figure1_dataset(20.0, &grid, 3, Branch::Plus).unwrap();
        let csv = figure1_to_csv(&data);
        let back = figure1_from_csv(&csv, 20.0).unwrap();
        assert_eq!(back.points.len(), data.points.len());
        for (a, b) in data.points.iter().zip(&back.points) {
            assert!((a.rho - b.rho).abs() < 1e-12 * a.rho.abs().max(1.0));
            for (ca, cb) in a.curves.iter().zip(&b.curves) {
                assert!((ca.energy - cb.energy).abs() < 1e-13 * ca.energy.abs());
                assert_eq!(ca.flag, cb.flag);
            }
        }
    }

    #[test]
    fn json_round_trip_is_identical() {
        let grid: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let data = figure1_dataset(20.0, &grid, 2, Branch::Plus).unwrap();
        let json = serde_json::to_string(&data).unwrap();
        let back: Figure1Dataset = serde_json::from_str(&json).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn nearest_critical_basics() {
        let (n, rho_n) = nearest_critical(4.98, 20.0, 1000);
        assert_eq!((n, rho_n), (4, 5.0));
        let (n, rho_n) = nearest_critical(-21.0, 20.0, 1000);
        assert_eq!((n, rho_n), (1, -20.0));
        let (n, _) = nearest_critical(6.6, 20.0, 1000);
        assert_eq!(n, 3);
    }
}
