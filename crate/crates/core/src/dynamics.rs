//! Orbits of the additive family `f(z) + c` and the multiplicative family
//! `c·f(z)`.
//!
//! Functions with a right half-plane plateau (zeta, eta, L) equal `1` to
//! double precision once `Re z` is large, so an iterate with
//! `Re z > plateau_re` maps next to exactly `c + 1` (additive) or `c`
//! (multiplicative) without touching the series. Starting at the plateau
//! point `1000` with `c = 1000` therefore gives `1000 → 1001 → 1001`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{eval_derivative, eval_function, has_plateau, EvalParams, FunctionId};

/// Distance from `z = 1` at which an orbit is considered to hit the pole.
pub const POLE_RADIUS: f64 = 1e-12;
/// A detected cycle with `|multiplier| > 1 + REPEL_MARGIN` must hold until
/// `max_iter` to be reported.
pub const REPEL_MARGIN: f64 = 1e-3;
/// Band around `|f_c'| = 1` reported as indifferent.
pub const CLASSIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `z ← f(z) + c`
    #[default]
    Additive,
    /// `z ← c·f(z)`
    Multiplicative,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Additive => "additive",
            FamilyKind::Multiplicative => "multiplicative",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "additive" | "add" => Ok(FamilyKind::Additive),
            "multiplicative" | "mul" | "mult" => Ok(FamilyKind::Multiplicative),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IterationParams {
    pub max_iter: usize,
    pub escape_radius: f64,
    /// Iterates right of this line are on the plateau.
    pub plateau_re: f64,
    /// Absolute tolerance for recognising a repeat.
    pub eps_cycle: f64,
    /// How many past iterates are compared against each new one.
    pub history: usize,
}

impl Default for IterationParams {
    fn default() -> Self {
        IterationParams {
            max_iter: 256,
            escape_radius: 1e6,
            plateau_re: 50.0,
            eps_cycle: 1e-9,
            history: 32,
        }
    }
}

impl IterationParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if self.history == 0 || self.history > self.max_iter {
            return bad("history must lie in 1..=max_iter");
        }
        if !(self.eps_cycle > 0.0) || !self.eps_cycle.is_finite() {
            return bad("eps_cycle must be positive");
        }
        if !(self.escape_radius > 0.0) {
            return bad("escape_radius must be positive");
        }
        if !(self.plateau_re > 0.0) {
            return bad("plateau_re must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitStatus {
    /// `|z| > escape_radius` off the plateau after `steps` steps, or the
    /// function overflowed.
    Escaped {
        steps: usize,
        overflow: bool,
    },
    /// An iterate came within [`POLE_RADIUS`] of the pole at `1`.
    PoleHit {
        steps: usize,
    },
    /// `z_n` repeats `z_{n−period}`; `cycle` is `z_{n−period} … z_{n−1}`.
    /// Repelling cycles are reported only when the orbit stays on them up
    /// to `max_iter`; `steps_to_lock` is then the step of first arrival.
    Periodic {
        period: usize,
        steps_to_lock: usize,
        cycle: Vec<Complex64>,
    },
    MaxIterBounded,
}

impl OrbitStatus {
    /// Pole hits count as escapes when colouring.
    pub fn is_escaped(&self) -> bool {
        matches!(self, OrbitStatus::Escaped { .. } | OrbitStatus::PoleHit { .. })
    }

    pub fn period(&self) -> Option<usize> {
        match self {
            OrbitStatus::Periodic { period, .. } => Some(*period),
            _ => None,
        }
    }

    /// Steps taken before escape or lock.
    pub fn steps(&self) -> Option<usize> {
        match self {
            OrbitStatus::Escaped { steps, .. } | OrbitStatus::PoleHit { steps } => Some(*steps),
            OrbitStatus::Periodic { steps_to_lock, .. } => Some(*steps_to_lock),
            OrbitStatus::MaxIterBounded => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    #[serde(rename = "final")]
    pub final_z: Complex64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<Complex64>>,
    /// Chain-rule multiplier of the detected cycle.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplier: Option<Complex64>,
}

enum Step {
    Next(Complex64),
    Pole,
    Overflow,
}

fn has_pole_at_one(fid: FunctionId) -> bool {
    match fid {
        FunctionId::Zeta => true,
        FunctionId::DirichletL { index, .. } => index == 1,
        _ => false,
    }
}

fn apply(fam: FamilyKind, c: Complex64, fz: Complex64) -> Complex64 {
    match fam {
        FamilyKind::Additive => fz + c,
        FamilyKind::Multiplicative => c * fz,
    }
}

fn step(fid: FunctionId, fam: FamilyKind, c: Complex64, z: Complex64, ip: &IterationParams, ep: &EvalParams) -> Step {
    let fz = if has_plateau(fid) && z.re > ip.plateau_re {
        Complex64::new(1.0, 0.0)
    } else {
        if has_pole_at_one(fid) && (z - 1.0).norm() < POLE_RADIUS {
            return Step::Pole;
        }
        match eval_function(fid, z, ep) {
            Ok(v) => v,
            Err(Error::Pole { .. }) => return Step::Pole,
            Err(_) => return Step::Overflow,
        }
    };
    let next = apply(fam, c, fz);
    if next.is_finite() {
        Step::Next(next)
    } else {
        Step::Overflow
    }
}

/// One application of `f_c`, with the plateau shortcut.
pub fn map_once(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    z: Complex64,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<Complex64> {
    match step(fid, fam, c, z, ip, ep) {
        Step::Next(w) => Ok(w),
        Step::Pole => Err(Error::Pole { at: z }),
        Step::Overflow => Err(Error::Overflow { at: z }),
    }
}

/// Iterate `f_c` from `z0` and classify the orbit.
pub fn iterate_orbit(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    z0: Complex64,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<OrbitResult> {
    run_orbit(fid, fam, c, z0, ip, ep, false)
}

/// [`iterate_orbit`] keeping every iterate `z_0 … z_n` in `trace`.
pub fn trace_orbit(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    z0: Complex64,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<OrbitResult> {
    run_orbit(fid, fam, c, z0, ip, ep, true)
}

fn run_orbit(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    z0: Complex64,
    ip: &IterationParams,
    ep: &EvalParams,
    keep_trace: bool,
) -> Result<OrbitResult> {
    if !c.is_finite() || !z0.is_finite() {
        return Err(Error::InvalidArgument("orbit needs finite c and z0".into()));
    }
    ip.validate()?;
    fid.validate()?;
    let plateau = has_plateau(fid);
    let k = ip.history;
    // ring[n % (k + 1)] holds z_n; the current iterate plus k predecessors
    let mut ring = vec![Complex64::new(0.0, 0.0); k + 1];
    ring[0] = z0;
    let mut trace = keep_trace.then(|| vec![z0]);
    let mut z = z0;
    // a repelling cycle hit to rounding error is only reported if the orbit
    // never leaves it
    let mut held: Option<(usize, OrbitStatus, Option<Complex64>)> = None;
    let finish = |status, z, trace| OrbitResult {
        status,
        final_z: z,
        trace,
        multiplier: None,
    };
    for n in 1..=ip.max_iter {
        z = match step(fid, fam, c, z, ip, ep) {
            Step::Next(w) => w,
            Step::Pole => return Ok(finish(OrbitStatus::PoleHit { steps: n }, z, trace)),
            Step::Overflow => {
                let status = OrbitStatus::Escaped {
                    steps: n,
                    overflow: true,
                };
                return Ok(finish(status, z, trace));
            }
        };
        if let Some(t) = trace.as_mut() {
            t.push(z);
        }
        if z.norm() > ip.escape_radius && !(plateau && z.re > ip.plateau_re) {
            let status = OrbitStatus::Escaped {
                steps: n,
                overflow: false,
            };
            return Ok(finish(status, z, trace));
        }
        ring[n % (k + 1)] = z;
        let Some(p) = (1..=k.min(n)).find(|&p| (z - ring[(n - p) % (k + 1)]).norm() < ip.eps_cycle) else {
            // the orbit left whatever repelling cycle it was sitting on
            held = None;
            continue;
        };
        if matches!(&held, Some((period, ..)) if *period == p) {
            continue;
        }
        let cycle: Vec<Complex64> = (n - p..n).map(|m| ring[m % (k + 1)]).collect();
        let multiplier = cycle_multiplier(fid, fam, c, &cycle, ep).ok();
        let repelling = multiplier.is_some_and(|m| m.norm() > 1.0 + REPEL_MARGIN);
        let status = OrbitStatus::Periodic {
            period: p,
            steps_to_lock: n,
            cycle,
        };
        if repelling {
            held = Some((p, status, multiplier));
            continue;
        }
        return Ok(OrbitResult {
            status,
            final_z: z,
            trace,
            multiplier,
        });
    }
    if let Some((_, status, multiplier)) = held {
        return Ok(OrbitResult {
            status,
            final_z: z,
            trace,
            multiplier,
        });
    }
    Ok(finish(OrbitStatus::MaxIterBounded, z, trace))
}

/// `f_c'(z)`: `f'(z)` for the additive family, `c·f'(z)` for the
/// multiplicative one.
pub fn family_derivative(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    z: Complex64,
    ep: &EvalParams,
) -> Result<Complex64> {
    if has_pole_at_one(fid) && (z - 1.0).norm() < POLE_RADIUS {
        return Err(Error::Pole { at: z });
    }
    let d = eval_derivative(fid, z, ep)?;
    Ok(match fam {
        FamilyKind::Additive => d,
        FamilyKind::Multiplicative => c * d,
    })
}

/// Chain-rule multiplier `Π f_c'(z_i)` around a cycle.
pub fn cycle_multiplier(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    cycle: &[Complex64],
    ep: &EvalParams,
) -> Result<Complex64> {
    if cycle.is_empty() {
        return Err(Error::InvalidArgument("empty cycle".into()));
    }
    cycle.iter().try_fold(Complex64::new(1.0, 0.0), |acc, &z| {
        Ok(acc * family_derivative(fid, fam, c, z, ep)?)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    Attracting,
    Repelling,
    Indifferent,
}

impl FixedPointClass {
    pub fn from_modulus(m: f64) -> Self {
        if m < 1.0 - CLASSIFY_TOL {
            FixedPointClass::Attracting
        } else if m > 1.0 + CLASSIFY_TOL {
            FixedPointClass::Repelling
        } else {
            FixedPointClass::Indifferent
        }
    }
}

/// Classify the fixed point `v` of `f_c` by `|f_c'(v)|`.
pub fn classify_point(
    v: Complex64,
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    ep: &EvalParams,
) -> Result<FixedPointClass> {
    let image = apply(fam, c, eval_function(fid, v, ep)?);
    if (image - v).norm() > 1e-6 {
        log::warn!("{v} is not a fixed point of {fid} ({fam}, c = {c}): maps to {image}");
    }
    let d = family_derivative(fid, fam, c, v, ep)?;
    Ok(FixedPointClass::from_modulus(d.norm()))
}
