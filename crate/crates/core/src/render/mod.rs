//! Deterministic rendering of portraits, parameter planes and Julia sets.
//!
//! Every pixel is a pure function of its centre in the plane, so a
//! viewport can be cut into any set of [`PixelWindow`]s, rendered in any
//! order on any number of threads, and reassembled bit for bit.

mod color;
mod overlay;
mod presets;
mod tile;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use color::{luma, ColorScheme, Rgba, SchemeTag, BLACK, POLE_COLOR, ZERO_DARKEN};
pub use overlay::{render_overlays, Marker, MarkerKind};
pub use presets::{Preset, PresetTable, RenderJob, StartSpec, ViewKind};
pub use tile::ImageTile;

use crate::critical::CriticalPoint;
use crate::dynamics::{iterate_orbit, FamilyKind, IterationParams};
use crate::error::{Error, Result};
use crate::special::{eval_derivative, eval_function, EvalMode, EvalParams, FunctionId, MAX_TERMS};
use crate::viewport::{PixelWindow, Viewport};

/// Renders are scheduled as tiles of at most this many pixels a side.
pub const TILE_SIZE: u32 = 256;

/// What each pixel shows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "view", rename_all = "snake_case")]
pub enum View {
    /// `f(z)` at each pixel `z`.
    Portrait { function: FunctionId },
    /// `f'(z)` at each pixel `z`.
    DerivativePortrait { function: FunctionId },
    /// The orbit of `start` under `f_c`, pixel `c`.
    ParameterPlane {
        function: FunctionId,
        family: FamilyKind,
        start: Complex64,
    },
    /// The orbit of pixel `z` under `f_c`.
    Julia {
        function: FunctionId,
        family: FamilyKind,
        c: Complex64,
    },
}

impl View {
    pub fn function(&self) -> FunctionId {
        match *self {
            View::Portrait { function }
            | View::DerivativePortrait { function }
            | View::ParameterPlane { function, .. }
            | View::Julia { function, .. } => function,
        }
    }

    fn is_portrait(&self) -> bool {
        matches!(self, View::Portrait { .. } | View::DerivativePortrait { .. })
    }
}

/// Evaluation parameters for a viewport. In truncated mode the term count
/// grows with height: at least `8·⌈max |Im z|⌉` over the whole viewport,
/// never fewer than `ep.terms`. Fixing it per viewport rather than per tile
/// keeps tiles seamless.
pub fn viewport_params(ep: &EvalParams, vp: &Viewport) -> EvalParams {
    if ep.mode != EvalMode::TruncatedEta {
        return *ep;
    }
    let top = vp.center.im.abs() + vp.height() / 2.0;
    let wanted = (8.0 * top.ceil()).min(MAX_TERMS as f64) as usize;
    EvalParams {
        terms: ep.terms.max(wanted),
        ..*ep
    }
}

/// Render the pixels of `win` inside `vp`.
pub fn render_view(
    view: &View,
    vp: &Viewport,
    win: PixelWindow,
    cs: &ColorScheme,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<ImageTile> {
    vp.validate()?;
    cs.validate()?;
    ep.validate()?;
    view.function().validate()?;
    if !win.fits(vp) {
        return Err(Error::InvalidArgument(format!(
            "window {win:?} does not fit a {}×{} viewport",
            vp.px_w, vp.px_h
        )));
    }
    match (view.is_portrait(), cs.tag) {
        (true, SchemeTag::Portrait) => {}
        (false, SchemeTag::EscapeSteps | SchemeTag::StepPeriod) => {}
        (_, tag) => {
            return Err(Error::InvalidArgument(format!(
                "scheme {tag} does not apply to this view"
            )));
        }
    }
    if !view.is_portrait() {
        ip.validate()?;
    }
    let ep = viewport_params(ep, vp);
    let shade = |z: Complex64| -> Rgba {
        match *view {
            View::Portrait { function } => cs.value_color(eval_function(function, z, &ep).ok()),
            View::DerivativePortrait { function } => cs.value_color(eval_derivative(function, z, &ep).ok()),
            View::ParameterPlane {
                function,
                family,
                start,
            } => {
                let r = iterate_orbit(function, family, z, start, ip, &ep).ok();
                cs.orbit_color(r.as_ref().map(|r| &r.status), ip.max_iter)
            }
            View::Julia { function, family, c } => {
                let r = iterate_orbit(function, family, c, z, ip, &ep).ok();
                cs.orbit_color(r.as_ref().map(|r| &r.status), ip.max_iter)
            }
        }
    };
    Ok(shade_window(vp, win, cs.supersample, shade))
}

fn shade_window<F>(vp: &Viewport, win: PixelWindow, supersample: bool, shade: F) -> ImageTile
where
    F: Fn(Complex64) -> Rgba + Sync,
{
    let pixel = |i: u32, j: u32| -> Rgba {
        if !supersample {
            return shade(vp.pixel_to_plane(i as i64, j as i64));
        }
        let mut acc = [0u32; 4];
        for (dx, dy) in [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)] {
            let c = shade(vp.sample_to_plane(i as f64 + dx, j as f64 + dy));
            for k in 0..4 {
                acc[k] += c[k] as u32;
            }
        }
        acc.map(|a| ((a + 2) / 4) as u8)
    };
    // tiles are cut relative to the window; each is rendered on one thread
    let sub = Viewport {
        px_w: win.w,
        px_h: win.h,
        ..*vp
    };
    let parts: Vec<(PixelWindow, ImageTile)> = PixelWindow::tiles(&sub, TILE_SIZE)
        .into_par_iter()
        .map(|t| {
            let mut img = ImageTile::new(t.w, t.h);
            for j in 0..t.h {
                for i in 0..t.w {
                    img.set_pixel(i, j, pixel(win.x0 + t.x0 + i, win.y0 + t.y0 + j));
                }
            }
            (t, img)
        })
        .collect();
    let mut out = ImageTile::new(win.w, win.h);
    for (t, img) in &parts {
        out.blit(img, t.x0, t.y0);
    }
    out
}

/// Portrait of `f`: hue from `arg f`, brightness bands from `log₂|f|`, a
/// blue band at `|f| = 1`, dark zeros and magenta poles.
pub fn render_portrait(fid: FunctionId, vp: &Viewport, cs: &ColorScheme, ep: &EvalParams) -> Result<ImageTile> {
    let view = View::Portrait { function: fid };
    render_view(&view, vp, PixelWindow::full(vp), cs, &IterationParams::default(), ep)
}

/// Portrait of `f'`. The `|f'| = 1` band separates attracting from
/// repelling fixed points.
pub fn render_derivative_portrait(
    fid: FunctionId,
    vp: &Viewport,
    cs: &ColorScheme,
    ep: &EvalParams,
) -> Result<ImageTile> {
    let view = View::DerivativePortrait { function: fid };
    render_view(&view, vp, PixelWindow::full(vp), cs, &IterationParams::default(), ep)
}

/// Parameter plane: pixel `c` is coloured by the orbit of the critical
/// point under `f_c`.
pub fn render_parameter_plane(
    fid: FunctionId,
    fam: FamilyKind,
    start: &CriticalPoint,
    vp: &Viewport,
    cs: &ColorScheme,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<ImageTile> {
    let view = View::ParameterPlane {
        function: fid,
        family: fam,
        start: start.location,
    };
    render_view(&view, vp, PixelWindow::full(vp), cs, ip, ep)
}

/// Julia set of `f_c`: pixel `z` is coloured by its own orbit.
pub fn render_julia(
    fid: FunctionId,
    fam: FamilyKind,
    c: Complex64,
    vp: &Viewport,
    cs: &ColorScheme,
    ip: &IterationParams,
    ep: &EvalParams,
) -> Result<ImageTile> {
    let view = View::Julia {
        function: fid,
        family: fam,
        c,
    };
    render_view(&view, vp, PixelWindow::full(vp), cs, ip, ep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scheme_must_match_view() {
        let vp = Viewport::new(c(0.0, 0.0), 2.0, 4, 4).unwrap();
        let ip = IterationParams::default();
        let ep = EvalParams::default();
        let steps = ColorScheme::new(SchemeTag::EscapeSteps);
        assert!(render_portrait(FunctionId::Zeta, &vp, &steps, &ep).is_err());
        let julia = View::Julia {
            function: FunctionId::Quadratic,
            family: FamilyKind::Additive,
            c: c(0.0, 0.0),
        };
        assert!(render_view(&julia, &vp, PixelWindow::full(&vp), &ColorScheme::default(), &ip, &ep).is_err());
        let win = PixelWindow {
            x0: 2,
            y0: 0,
            w: 3,
            h: 1,
        };
        assert!(render_view(&julia, &vp, win, &steps, &ip, &ep).is_err());
    }

    #[test]
    fn truncated_terms_follow_height() {
        let vp = Viewport::new(c(0.0, 95.0), 4.0, 8, 8).unwrap();
        assert_eq!(viewport_params(&EvalParams::truncated(64), &vp).terms, 776);
        assert_eq!(viewport_params(&EvalParams::truncated(2000), &vp).terms, 2000);
        let low = Viewport::new(c(0.0, 0.0), 4.0, 8, 8).unwrap();
        assert_eq!(viewport_params(&EvalParams::truncated(64), &low).terms, 64);
        assert_eq!(viewport_params(&EvalParams::default(), &vp), EvalParams::default());
    }

    #[test]
    fn supersampling_averages() {
        let vp = Viewport::new(c(0.0, 0.0), 2.0, 3, 3).unwrap();
        let mut cs = ColorScheme::default();
        let plain = render_portrait(FunctionId::Quadratic, &vp, &cs, &EvalParams::default()).unwrap();
        cs.supersample = true;
        let smooth = render_portrait(FunctionId::Quadratic, &vp, &cs, &EvalParams::default()).unwrap();
        assert_eq!(smooth.pixels.len(), plain.pixels.len());
        assert_ne!(smooth, plain);
    }
}
