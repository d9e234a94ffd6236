//! Transfer functions of a critical point.
//!
//! For a critical point `c_r` with critical value `v_r`, the parameters
//! that make the image of `v_r` a fixed point of `f_c` are the zeros of
//! `T(c) = f(v_r + c) − v_r` (additive) or `T(c) = f(c·v_r) − v_r`
//! (multiplicative). The induced fixed point is `w = v_r + c` or
//! `w = c·v_r`, and `|f_c'(w)|` says whether `c` roots a satellite of the
//! parameter plane (attracting) or is a Misiurewicz-type point (repelling).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::CriticalPoint;
use crate::dynamics::{family_derivative, FamilyKind, FixedPointClass};
use crate::error::{Error, Result};
use crate::special::{eval_derivative, eval_function, EvalParams, FunctionId};
use crate::viewport::Viewport;

/// Samples per side of the root scan.
pub const SCAN_GRID: usize = 256;
/// Residual bound for an accepted root of `T`.
pub const ROOT_TOL: f64 = 1e-8;
const DEDUP_RADIUS: f64 = 1e-6;
const NEWTON_MAX_ITER: usize = 40;

/// The left half of zeta's central valley, `Re ∈ [−14, 0]`, `|Im| ≤ 7`:
/// between the imaginary axis and the seventh trivial zero, where `|ζ|`
/// stays small.
pub fn central_valley() -> Viewport {
    Viewport {
        center: Complex64::new(-7.0, 0.0),
        width: 14.0,
        px_w: SCAN_GRID as u32,
        px_h: SCAN_GRID as u32,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedValue {
    pub c: Complex64,
    pub fixed_point: Complex64,
    pub deriv_mod: f64,
    pub class: FixedPointClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferAnalysis {
    pub function: FunctionId,
    pub critical: CriticalPoint,
    pub family: FamilyKind,
    pub principal: Complex64,
    pub fixed_values: Vec<FixedValue>,
}

/// `c_p = c_r − v_r` (additive) or `c_r / v_r` (multiplicative): the
/// parameter for which the critical point is itself fixed.
pub fn principal_point(cp: &CriticalPoint, fam: FamilyKind) -> Result<Complex64> {
    match fam {
        FamilyKind::Additive => Ok(cp.location - cp.value),
        FamilyKind::Multiplicative => {
            if cp.value == Complex64::new(0.0, 0.0) {
                return Err(Error::DivisionByZero(format!(
                    "critical point {} is also a zero",
                    cp.label
                )));
            }
            Ok(cp.location / cp.value)
        }
    }
}

/// Fixed point of `f_c` induced by parameter `c`.
pub fn induced_fixed_point(cp: &CriticalPoint, fam: FamilyKind, c: Complex64) -> Complex64 {
    match fam {
        FamilyKind::Additive => cp.value + c,
        FamilyKind::Multiplicative => c * cp.value,
    }
}

/// `T(c)`.
pub fn transfer_value(
    fid: FunctionId,
    cp: &CriticalPoint,
    fam: FamilyKind,
    c: Complex64,
    ep: &EvalParams,
) -> Result<Complex64> {
    let w = induced_fixed_point(cp, fam, c);
    Ok(eval_function(fid, w, ep)? - cp.value)
}

/// `T'(c)`: `f'(v_r + c)` or `v_r·f'(c·v_r)`.
pub fn transfer_derivative(
    fid: FunctionId,
    cp: &CriticalPoint,
    fam: FamilyKind,
    c: Complex64,
    ep: &EvalParams,
) -> Result<Complex64> {
    let w = induced_fixed_point(cp, fam, c);
    let d = eval_derivative(fid, w, ep)?;
    Ok(match fam {
        FamilyKind::Additive => d,
        FamilyKind::Multiplicative => cp.value * d,
    })
}

/// Classify the fixed point induced by `c`.
pub fn classify_fixed_value(
    fid: FunctionId,
    cp: &CriticalPoint,
    fam: FamilyKind,
    c: Complex64,
    ep: &EvalParams,
) -> Result<FixedValue> {
    let w = induced_fixed_point(cp, fam, c);
    let deriv_mod = family_derivative(fid, fam, c, w, ep)?.norm();
    Ok(FixedValue {
        c,
        fixed_point: w,
        deriv_mod,
        class: FixedPointClass::from_modulus(deriv_mod),
    })
}

fn newton_root(
    fid: FunctionId,
    cp: &CriticalPoint,
    fam: FamilyKind,
    seed: Complex64,
    ep: &EvalParams,
) -> Option<Complex64> {
    let mut c = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let t = transfer_value(fid, cp, fam, c, ep).ok()?;
        let d = transfer_derivative(fid, cp, fam, c, ep).ok()?;
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let step = t / d;
        c -= step;
        if !c.is_finite() {
            return None;
        }
        // an isolated root needs the steps to shrink, not just a small |T|:
        // on the plateau T is flat and tiny everywhere
        if step.norm() < 1e-12 * (1.0 + c.norm()) {
            let t = transfer_value(fid, cp, fam, c, ep).ok()?;
            return (t.norm() < ROOT_TOL).then_some(c);
        }
    }
    None
}

/// Scan `region` on a [`SCAN_GRID`]² grid for zeros of `T`, polish them by
/// Newton's method and classify each induced fixed point. The principal
/// point is included whenever it lies in the region.
pub fn find_fixed_values(
    fid: FunctionId,
    cp: &CriticalPoint,
    fam: FamilyKind,
    region: &Viewport,
    ep: &EvalParams,
) -> Result<TransferAnalysis> {
    region.validate()?;
    let principal = principal_point(cp, fam)?;
    let n = SCAN_GRID;
    let grid = Viewport {
        center: region.center,
        width: region.width,
        px_w: n as u32,
        px_h: n as u32,
    };
    // the grid spans the region's own rectangle, not the square viewport
    let height = region.height();
    let point = |i: usize, j: usize| {
        let p = grid.pixel_to_plane(i as i64, j as i64) - region.center;
        region.center + Complex64::new(p.re, p.im * height / region.width)
    };
    let mags: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            transfer_value(fid, cp, fam, point(k % n, k / n), ep)
                .map(|t| t.norm())
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let at = |i: isize, j: isize| -> Option<f64> {
        (i >= 0 && j >= 0 && (i as usize) < n && (j as usize) < n).then(|| mags[j as usize * n + i as usize])
    };
    let mut seeds = Vec::new();
    for j in 0..n as isize {
        for i in 0..n as isize {
            let m = at(i, j).unwrap();
            if !m.is_finite() {
                continue;
            }
            let is_min = (-1..=1)
                .flat_map(|dj| (-1..=1).map(move |di| (di, dj)))
                .filter(|&d| d != (0, 0))
                .all(|(di, dj)| at(i + di, j + dj).is_none_or(|o| m <= o));
            if is_min {
                seeds.push(point(i as usize, j as usize));
            }
        }
    }
    // roots up to one grid cell outside the region are kept
    let cell = region.width / n as f64;
    let mut roots: Vec<Complex64> = seeds
        .par_iter()
        .filter_map(|&s| newton_root(fid, cp, fam, s, ep))
        .filter(|&c| {
            let d = c - region.center;
            d.re.abs() <= region.width / 2.0 + cell && d.im.abs() <= height / 2.0 + cell
        })
        .collect();
    if region.contains(principal) {
        roots.push(principal);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut unique: Vec<Complex64> = Vec::new();
    for r in roots {
        if unique.iter().all(|u| (u - r).norm() >= DEDUP_RADIUS) {
            unique.push(r);
        }
    }
    let fixed_values = unique
        .into_iter()
        .map(|c| classify_fixed_value(fid, cp, fam, c, ep))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferAnalysis {
        function: fid,
        critical: cp.clone(),
        family: fam,
        principal,
        fixed_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{quasi_critical, CriticalKind};

    fn ep() -> EvalParams {
        EvalParams::default()
    }

    #[test]
    fn plateau_principal_is_999() {
        let cp = quasi_critical(FunctionId::Zeta, &ep()).unwrap();
        let p = principal_point(&cp, FamilyKind::Additive).unwrap();
        assert!((p - Complex64::new(999.0, 0.0)).norm() < 1e-12);
        let t = transfer_value(FunctionId::Zeta, &cp, FamilyKind::Additive, p, &ep()).unwrap();
        assert!(t.norm() < 1e-12);
    }

    #[test]
    fn multiplicative_principal_needs_nonzero_value() {
        let cp = CriticalPoint {
            location: Complex64::new(0.0, 0.0),
            value: Complex64::new(0.0, 0.0),
            kind: CriticalKind::RealAxis,
            label: "q0".into(),
        };
        assert!(matches!(
            principal_point(&cp, FamilyKind::Multiplicative),
            Err(Error::DivisionByZero(_))
        ));
        assert_eq!(
            principal_point(&cp, FamilyKind::Additive).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn quadratic_transfer_roots() {
        // z² + c with c_r = 0, v_r = 0: T(c) = c² has its double root at 0,
        // and the multiplicative T(c) = 0 − 0 vanishes identically.
        let cp = CriticalPoint {
            location: Complex64::new(0.0, 0.0),
            value: Complex64::new(0.0, 0.0),
            kind: CriticalKind::RealAxis,
            label: "q0".into(),
        };
        let region = Viewport::new(Complex64::new(0.1, 0.05), 2.0, 64, 64).unwrap();
        let a = find_fixed_values(FunctionId::Quadratic, &cp, FamilyKind::Additive, &region, &ep()).unwrap();
        assert_eq!(a.fixed_values.len(), 1);
        assert_eq!(a.fixed_values[0].class, FixedPointClass::Attracting);
    }
}
