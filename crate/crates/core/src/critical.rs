//! Critical points (zeros of `f'`) and nontrivial zeros.
//!
//! Real critical points are bracketed by sign changes of `f'` along the
//! real axis. Unreal ones are found by Newton's method on `f'` seeded from
//! a grid over `0 ≤ Re z ≤ 3`. Zeros on the critical line come from sign
//! changes of the rotated (real-valued) zeta on `Re z = 1/2`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{eval_derivative, eval_function, has_plateau, ln_gamma, zeta, zeta_deriv};
use crate::special::{EvalParams, FunctionId};

/// Location of the conventional plateau point.
pub const PLATEAU_POINT: f64 = 1000.0;

const REAL_SCAN_STEP: f64 = 0.05;
const UNREAL_GRID_RE: (f64, f64, f64) = (0.0, 3.0, 0.25);
const UNREAL_GRID_IM_STEP: f64 = 0.5;
const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-13;
const SECOND_DERIV_STEP: f64 = 1e-5;
/// Residual bound `|f'| <` accepted for a polished critical point.
pub const CRITICAL_TOL: f64 = 1e-8;
const DEDUP_RADIUS: f64 = 1e-6;
/// Unreal critical points are only accepted inside this vertical strip;
/// further right `f'` is numerically zero on the plateau.
const UNREAL_STRIP: (f64, f64) = (-1.0, 4.0);
const ZERO_SCAN_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    RealAxis,
    NearCriticalLine,
    AsymptoticQuasi,
}

/// A zero `c_r` of `f'` together with its critical value `v_r = f(c_r)`.
///
/// Serialized as a flat record
/// `{label, re, im, value_re, value_im, kind}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CriticalRecord", from = "CriticalRecord")]
pub struct CriticalPoint {
    pub location: Complex64,
    pub value: Complex64,
    pub kind: CriticalKind,
    pub label: String,
}

#[derive(Serialize, Deserialize)]
struct CriticalRecord {
    label: String,
    re: f64,
    im: f64,
    value_re: f64,
    value_im: f64,
    kind: CriticalKind,
}

impl From<CriticalPoint> for CriticalRecord {
    fn from(cp: CriticalPoint) -> Self {
        CriticalRecord {
            label: cp.label,
            re: cp.location.re,
            im: cp.location.im,
            value_re: cp.value.re,
            value_im: cp.value.im,
            kind: cp.kind,
        }
    }
}

impl From<CriticalRecord> for CriticalPoint {
    fn from(r: CriticalRecord) -> Self {
        CriticalPoint {
            location: Complex64::new(r.re, r.im),
            value: Complex64::new(r.value_re, r.value_im),
            kind: r.kind,
            label: r.label,
        }
    }
}

/// A nontrivial zero, numbered by increasing imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroLocation {
    pub rho: Complex64,
    pub index: usize,
}

/// Label for a critical point: integer part for real ones, floor of the
/// imaginary part for unreal ones.
pub fn critical_label(fid: FunctionId, location: Complex64, kind: CriticalKind) -> String {
    let prefix = fid.label_prefix();
    match kind {
        CriticalKind::RealAxis | CriticalKind::AsymptoticQuasi => {
            format!("{prefix}{}", location.re.trunc() as i64)
        }
        CriticalKind::NearCriticalLine => format!("{prefix}{}", location.im.floor() as i64),
    }
}

/// `f''` by central differences of `f'`.
fn second_derivative(fid: FunctionId, z: Complex64, ep: &EvalParams) -> Result<Complex64> {
    let h = SECOND_DERIV_STEP;
    let a = eval_derivative(fid, z + h, ep)?;
    let b = eval_derivative(fid, z - h, ep)?;
    Ok((a - b) / (2.0 * h))
}

/// Newton's method on `f'` from `seed`. Returns the root when the residual
/// drops below [`CRITICAL_TOL`].
pub fn newton_critical(fid: FunctionId, seed: Complex64, ep: &EvalParams) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let d1 = eval_derivative(fid, z, ep).ok()?;
        let d2 = second_derivative(fid, z, ep).ok()?;
        if d2.norm() == 0.0 || !d2.is_finite() {
            return None;
        }
        let mut step = d1 / d2;
        if step.norm() > 1.0 {
            step /= step.norm();
        }
        z -= step;
        if !z.is_finite() || z.re > 2.0 * UNREAL_STRIP.1 {
            return None;
        }
        if step.norm() < NEWTON_TOL {
            break;
        }
    }
    let residual = eval_derivative(fid, z, ep).ok()?;
    (residual.norm() < CRITICAL_TOL).then_some(z)
}

fn make_critical(fid: FunctionId, location: Complex64, kind: CriticalKind, ep: &EvalParams) -> Result<CriticalPoint> {
    let value = eval_function(fid, location, ep)?;
    Ok(CriticalPoint {
        location,
        value,
        kind,
        label: critical_label(fid, location, kind),
    })
}

/// Critical points on the real segment `[x_min, x_max]`, sorted by
/// decreasing `x`.
pub fn find_real_criticals(fid: FunctionId, x_min: f64, x_max: f64, ep: &EvalParams) -> Result<Vec<CriticalPoint>> {
    if !(x_min <= x_max) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "real range [{x_min}, {x_max}] is empty"
        )));
    }
    if matches!(fid, FunctionId::Xi) {
        // ξ(z) = ξ(1 − z) pins its only real critical point at exactly 1/2
        let half = Complex64::new(0.5, 0.0);
        return if (x_min..=x_max).contains(&0.5) {
            Ok(vec![make_critical(fid, half, CriticalKind::RealAxis, ep)?])
        } else {
            Ok(Vec::new())
        };
    }
    let plateau = has_plateau(fid);
    let deriv_re = |x: f64| -> Option<f64> {
        let z = Complex64::new(x, 0.0);
        let d = eval_derivative(fid, z, ep).ok()?.re;
        // on the plateau f' is exactly zero, which is not a critical point
        if d == 0.0 && plateau && eval_function(fid, z, ep).ok()? == Complex64::new(1.0, 0.0) {
            return None;
        }
        d.is_finite().then_some(d)
    };
    let steps = ((x_max - x_min) / REAL_SCAN_STEP).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| (x_max - k as f64 * REAL_SCAN_STEP).max(x_min))
        .collect();
    let samples: Vec<Option<f64>> = grid.par_iter().map(|&x| deriv_re(x)).collect();

    let mut brackets = Vec::new();
    for k in 0..steps {
        let (Some(a), Some(b)) = (samples[k], samples[k + 1]) else {
            continue;
        };
        if a == 0.0 {
            brackets.push((grid[k], grid[k]));
        } else if a.signum() != b.signum() && b != 0.0 {
            brackets.push((grid[k + 1], grid[k]));
        }
    }
    if let Some(&Some(last)) = samples.last() {
        if last == 0.0 {
            brackets.push((grid[steps], grid[steps]));
        }
    }

    let mut out: Vec<CriticalPoint> = brackets
        .par_iter()
        .filter_map(|&(lo, hi)| {
            let x = bisect(&deriv_re, lo, hi)?;
            let z = Complex64::new(x, 0.0);
            let d = eval_derivative(fid, z, ep).ok()?;
            let v = eval_function(fid, z, ep).ok()?;
            // sign changes across a pole of f' are not critical points
            if d.norm() > 1e-6 * (1.0 + v.norm()) {
                return None;
            }
            make_critical(fid, z, CriticalKind::RealAxis, ep).ok()
        })
        .collect();
    out.sort_by(|a, b| b.location.re.partial_cmp(&a.location.re).unwrap_or(Ordering::Equal));
    out.dedup_by(|a, b| (a.location - b.location).norm() < DEDUP_RADIUS);
    uniquify_labels(&mut out);
    Ok(out)
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    if lo == hi {
        return Some(lo);
    }
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    // run to float resolution: |f'| at the root scales with |f''|·Δx
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    Some(if flo.abs() <= fhi.abs() { lo } else { hi })
}

/// Disambiguate repeated labels by adding decimals of the coordinate that
/// named them.
fn uniquify_labels(points: &mut [CriticalPoint]) {
    for i in 1..points.len() {
        let clash = |label: &str, pts: &[CriticalPoint]| pts.iter().any(|p| p.label == label);
        if !clash(&points[i].label, &points[..i]) {
            continue;
        }
        let p = &points[i];
        let coord = match p.kind {
            CriticalKind::NearCriticalLine => p.location.im,
            _ => p.location.re,
        };
        let prefix = &p.label[..1];
        for digits in 1..=6 {
            let scale = 10f64.powi(digits);
            let rounded = match p.kind {
                CriticalKind::NearCriticalLine => (coord * scale).floor() / scale,
                _ => (coord * scale).trunc() / scale,
            };
            let candidate = format!("{prefix}{rounded:.*}", digits as usize);
            if !clash(&candidate, &points[..i]) {
                points[i].label = candidate;
                break;
            }
        }
    }
}

/// Critical points off the real axis with `t_min ≤ Im z ≤ t_max`, sorted by
/// imaginary part. For xi only the central point `1/2` is ever cataloged,
/// so this returns an empty list there.
pub fn find_unreal_criticals(fid: FunctionId, t_min: f64, t_max: f64, ep: &EvalParams) -> Result<Vec<CriticalPoint>> {
    if !(0.0 < t_min && t_min < t_max) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if matches!(fid, FunctionId::Xi | FunctionId::Quadratic | FunctionId::Rosetta) {
        return Ok(Vec::new());
    }
    let (re_lo, re_hi, re_step) = UNREAL_GRID_RE;
    let n_re = ((re_hi - re_lo) / re_step).round() as usize;
    let n_im = ((t_max - t_min) / UNREAL_GRID_IM_STEP).ceil() as usize;
    let seeds: Vec<Complex64> = (0..=n_im)
        .flat_map(|j| {
            let im = (t_min + j as f64 * UNREAL_GRID_IM_STEP).min(t_max);
            (0..=n_re).map(move |i| Complex64::new(re_lo + i as f64 * re_step, im))
        })
        .collect();
    let mut roots: Vec<Complex64> = seeds
        .par_iter()
        .filter_map(|&s| newton_critical(fid, s, ep))
        .filter(|z| z.im >= t_min && z.im <= t_max)
        .filter(|z| z.re >= UNREAL_STRIP.0 && z.re <= UNREAL_STRIP.1)
        .collect();
    roots.sort_by(|a, b| {
        a.im.partial_cmp(&b.im)
            .unwrap_or(Ordering::Equal)
            .then(a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal))
    });
    let mut unique: Vec<Complex64> = Vec::new();
    for r in roots {
        if unique.iter().all(|u| (u - r).norm() >= DEDUP_RADIUS) {
            unique.push(r);
        }
    }
    let mut out = unique
        .into_iter()
        .map(|z| make_critical(fid, z, CriticalKind::NearCriticalLine, ep))
        .collect::<Result<Vec<_>>>()?;
    uniquify_labels(&mut out);

    if matches!(fid, FunctionId::Zeta) {
        warn_on_missed_criticals(&out, t_min, t_max, ep);
    }
    Ok(out)
}

/// Below height `T` zeta' has about `N(T) − T ln 2 / (2π)` zeros with
/// positive real part, `N` counting zeros of zeta. Warn when the search
/// falls well short of that.
fn warn_on_missed_criticals(points: &[CriticalPoint], t_min: f64, t_max: f64, ep: &EvalParams) {
    let Ok(zeros) = find_zeros(FunctionId::Zeta, t_min, t_max, ep) else {
        return;
    };
    let expected = zeros.len() as f64 - (t_max - t_min) * std::f64::consts::LN_2 / (2.0 * PI);
    let slack = 2.0 * t_max.ln().max(1.0);
    if (points.len() as f64) < expected - slack {
        log::warn!(
            "found {} critical points in Im [{t_min}, {t_max}], expected about {expected:.0}",
            points.len()
        );
    }
}

/// Riemann–Siegel theta, `arg Γ(1/4 + it/2) − (t/2) ln π`.
fn rs_theta(t: f64) -> f64 {
    let lg = ln_gamma(Complex64::new(0.25, 0.5 * t)).expect("no poles on this line");
    lg.im - 0.5 * t * PI.ln()
}

/// Real-valued zeta on the critical line: `e^{iθ(t)} ζ(1/2 + it)`.
pub fn hardy_z(t: f64, ep: &EvalParams) -> Result<f64> {
    let v = zeta(Complex64::new(0.5, t), ep)?;
    let rot = Complex64::from_polar(1.0, rs_theta(t));
    Ok((rot * v).re)
}

/// Nontrivial zeros with `t_min ≤ Im ρ ≤ t_max`, numbered from the first
/// zero above the real axis.
pub fn find_zeros(fid: FunctionId, t_min: f64, t_max: f64, ep: &EvalParams) -> Result<Vec<ZeroLocation>> {
    if !(0.0 <= t_min && t_min < t_max) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if !matches!(fid, FunctionId::Zeta | FunctionId::Eta) {
        return Err(Error::Unsupported(format!(
            "critical-line zeros are only located for zeta and eta, not {fid}"
        )));
    }
    // scan from 0 so that ordinals are global
    let steps = (t_max / ZERO_SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| (k as f64 * ZERO_SCAN_STEP).min(t_max)).collect();
    let values = grid.par_iter().map(|&t| hardy_z(t, ep)).collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    let mut index = 0;
    for k in 0..steps {
        let (a, b) = (values[k], values[k + 1]);
        if a.signum() == b.signum() || a == 0.0 {
            continue;
        }
        index += 1;
        let (lo, hi) = (grid[k], grid[k + 1]);
        if hi < t_min || lo > t_max {
            continue;
        }
        let f = |t: f64| hardy_z(t, ep).ok();
        let Some(t) = bisect(&f, lo, hi) else {
            continue;
        };
        let rho = polish_zero(Complex64::new(0.5, t), ep);
        if rho.im >= t_min && rho.im <= t_max {
            out.push(ZeroLocation { rho, index });
        }
    }
    Ok(out)
}

fn polish_zero(mut z: Complex64, ep: &EvalParams) -> Complex64 {
    for _ in 0..8 {
        let (Ok(v), Ok(d)) = (zeta(z, ep), zeta_deriv(z, ep)) else {
            break;
        };
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        z -= step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    z
}

/// The conventional plateau point `1000` standing in for the flat region
/// where `f → 1`.
pub fn quasi_critical(fid: FunctionId, ep: &EvalParams) -> Result<CriticalPoint> {
    if !has_plateau(fid) {
        return Err(Error::Unsupported(format!("{fid} has no right half-plane plateau")));
    }
    let location = Complex64::new(PLATEAU_POINT, 0.0);
    make_critical(fid, location, CriticalKind::AsymptoticQuasi, ep)
}

/// Resolve a catalog label such as `z-15`, `z95`, `z60.8` or `z1000`.
/// Returns `Ok(None)` when no critical point carries that label.
pub fn resolve_label(fid: FunctionId, label: &str, ep: &EvalParams) -> Result<Option<CriticalPoint>> {
    let Some(rest) = label.strip_prefix(fid.label_prefix()) else {
        return Ok(None);
    };
    let Ok(coord) = rest.parse::<f64>() else {
        return Ok(None);
    };
    if !coord.is_finite() || coord.abs() > 1e6 {
        return Ok(None);
    }
    if coord == PLATEAU_POINT && has_plateau(fid) {
        return quasi_critical(fid, ep).map(Some);
    }
    if matches!(fid, FunctionId::Xi) {
        if label == critical_label(fid, Complex64::new(0.5, 0.0), CriticalKind::RealAxis) {
            return make_critical(fid, Complex64::new(0.5, 0.0), CriticalKind::RealAxis, ep).map(Some);
        }
        return Ok(None);
    }
    let is_integer = !rest.contains('.');
    if is_integer {
        let k = coord;
        let (lo, hi) = if k < 0.0 {
            (k - 1.0, k)
        } else if k > 0.0 {
            (k, k + 1.0)
        } else {
            (-1.0, 1.0)
        };
        let reals = find_real_criticals(fid, lo, hi, ep)?;
        if let Some(cp) = reals.into_iter().find(|c| c.label == label) {
            return Ok(Some(cp));
        }
    }
    if coord > 0.0 {
        let window = if is_integer { 1.0 } else { 0.1 };
        let t_lo = if is_integer { coord } else { coord.floor() };
        let unreal = find_unreal_criticals(fid, t_lo.max(1e-9), coord + window, ep)?;
        return Ok(unreal.into_iter().find(|c| c.label == label));
    }
    Ok(None)
}
