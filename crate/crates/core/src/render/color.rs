//! The three colourings. Each is a pure function of one sample (a function
//! value or an orbit classification) and the scheme parameters.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::OrbitStatus;
use crate::error::{Error, Result};

pub type Rgba = [u8; 4];

/// Reserved colour for poles and values that cannot be represented.
pub const POLE_COLOR: Rgba = [255, 0, 255, 255];
pub const BLACK: Rgba = [0, 0, 0, 255];
const WHITE: Rgba = [255, 255, 255, 255];
const BAND_BLUE: Rgba = [40, 90, 255, 255];

/// Below this modulus the portrait darkens towards black.
pub const ZERO_DARKEN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeTag {
    /// Hue from `arg f`, brightness bands from `log₂|f|`.
    #[default]
    Portrait,
    /// Blue ramp on the escape count; bounded orbits black.
    EscapeSteps,
    /// Blue ramp on the steps to lock, red for the period.
    StepPeriod,
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeTag::Portrait => "portrait",
            SchemeTag::EscapeSteps => "escape_steps",
            SchemeTag::StepPeriod => "step_period",
        })
    }
}

impl FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "portrait" => Ok(SchemeTag::Portrait),
            "escape_steps" | "escape" | "steps" => Ok(SchemeTag::EscapeSteps),
            "step_period" | "period" => Ok(SchemeTag::StepPeriod),
            _ => Err(Error::InvalidArgument(format!("unknown colour scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColorScheme {
    pub tag: SchemeTag,
    /// Relative half-width of the `|f| = 1` band.
    pub band_scale: f64,
    /// Average a 2×2 grid of samples per pixel.
    pub supersample: bool,
}

impl Default for ColorScheme {
    fn default() -> Self {
        ColorScheme {
            tag: SchemeTag::Portrait,
            band_scale: 0.02,
            supersample: false,
        }
    }
}

impl ColorScheme {
    pub fn new(tag: SchemeTag) -> Self {
        ColorScheme {
            tag,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.band_scale >= 0.0 && self.band_scale < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "band_scale must lie in [0, 1), got {}",
                self.band_scale
            )));
        }
        Ok(())
    }

    /// Colour of a function value; `None` marks a pole or overflow.
    pub fn value_color(&self, f: Option<Complex64>) -> Rgba {
        match f {
            Some(v) if v.is_finite() => portrait(v, self.band_scale),
            _ => POLE_COLOR,
        }
    }

    /// Colour of an orbit, `max_iter` normalising the ramps. `None` marks an
    /// orbit that could not be run.
    pub fn orbit_color(&self, status: Option<&OrbitStatus>, max_iter: usize) -> Rgba {
        let Some(status) = status else {
            return POLE_COLOR;
        };
        match (self.tag, status) {
            (
                SchemeTag::StepPeriod,
                OrbitStatus::Periodic {
                    period, steps_to_lock, ..
                },
            ) => {
                let b = ramp(*steps_to_lock, max_iter);
                [(32 * *period).min(255) as u8, 0, b, 255]
            }
            (SchemeTag::StepPeriod, s) if s.is_escaped() => [0, ramp(s.steps().unwrap_or(0), max_iter), 0, 255],
            (_, s) if s.is_escaped() => {
                let t = ramp(s.steps().unwrap_or(0), max_iter);
                [0, (t as u16 / 2) as u8, t, 255]
            }
            _ => BLACK,
        }
    }
}

/// `64..=255` on a log scale of `steps`; never dark enough to read as
/// bounded.
fn ramp(steps: usize, max_iter: usize) -> u8 {
    let t = ((1.0 + steps as f64).ln() / (1.0 + max_iter.max(1) as f64).ln()).clamp(0.0, 1.0);
    (64.0 + 191.0 * t).round() as u8
}

/// Green → yellow → red → green as the hue fraction runs over `[0, 1)`.
fn wheel(h: f64) -> [f64; 3] {
    let x = 3.0 * h.rem_euclid(1.0);
    if x < 1.0 {
        [x, 1.0, 0.0]
    } else if x < 2.0 {
        [1.0, 2.0 - x, 0.0]
    } else {
        [3.0 - x, x - 2.0, 0.0]
    }
}

fn portrait(f: Complex64, band: f64) -> Rgba {
    let m = f.norm();
    let gap = (m - 1.0).abs();
    if gap < band * m {
        // blue band with white edges at |f| = 1
        return if gap < 0.6 * band * m { BAND_BLUE } else { WHITE };
    }
    let h = f.arg() / std::f64::consts::TAU;
    let mut v = 0.35 + 0.55 * m.log2().rem_euclid(1.0);
    if m < ZERO_DARKEN {
        v = v.min(0.35 * m / ZERO_DARKEN);
    }
    let rgb = wheel(h);
    let q = |c: f64| (255.0 * v * c).round() as u8;
    [q(rgb[0]), q(rgb[1]), q(rgb[2]), 255]
}

/// Perceived brightness of a colour, `0..=255`.
pub fn luma(c: Rgba) -> f64 {
    0.299 * c[0] as f64 + 0.587 * c[1] as f64 + 0.114 * c[2] as f64
}
