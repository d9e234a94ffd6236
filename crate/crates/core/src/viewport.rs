//! Mapping between pixels and the complex plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rectangle of the plane sampled at pixel centres. The imaginary axis
/// increases upwards, so row 0 is the top edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: Complex64,
    /// Width in plane units.
    pub width: f64,
    pub px_w: u32,
    pub px_h: u32,
}

impl Viewport {
    pub fn new(center: Complex64, width: f64, px_w: u32, px_h: u32) -> Result<Self> {
        let vp = Viewport {
            center,
            width,
            px_w,
            px_h,
        };
        vp.validate()?;
        Ok(vp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() || !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "viewport needs a finite centre and positive width, got {} / {}",
                self.center, self.width
            )));
        }
        if self.px_w == 0 || self.px_h == 0 {
            return Err(Error::InvalidArgument("viewport has no pixels".into()));
        }
        Ok(())
    }

    /// Height in plane units.
    pub fn height(&self) -> f64 {
        self.width * self.px_h as f64 / self.px_w as f64
    }

    /// Plane point at the centre of pixel `(i, j)`. Pixel indices may lie
    /// outside the image.
    pub fn pixel_to_plane(&self, i: i64, j: i64) -> Complex64 {
        self.sample_to_plane(i as f64 + 0.5, j as f64 + 0.5)
    }

    /// Plane point at continuous pixel coordinates; the inverse of
    /// [`Viewport::plane_to_pixel`].
    pub fn sample_to_plane(&self, x: f64, y: f64) -> Complex64 {
        let re = (x / self.px_w as f64 - 0.5) * self.width;
        let im = (0.5 - y / self.px_h as f64) * self.height();
        self.center + Complex64::new(re, im)
    }

    /// Continuous pixel coordinates of a plane point; `(i + 0.5, j + 0.5)`
    /// is the centre of pixel `(i, j)`.
    pub fn plane_to_pixel(&self, z: Complex64) -> (f64, f64) {
        let d = z - self.center;
        let x = (d.re / self.width + 0.5) * self.px_w as f64;
        let y = (0.5 - d.im / self.height()) * self.px_h as f64;
        (x, y)
    }

    /// Whether `z` lies inside the sampled rectangle (edges included).
    pub fn contains(&self, z: Complex64) -> bool {
        let d = z - self.center;
        d.re.abs() <= self.width / 2.0 && d.im.abs() <= self.height() / 2.0
    }

    /// Pixel containing `z`, if it is in view.
    pub fn pixel_of(&self, z: Complex64) -> Option<(u32, u32)> {
        let (x, y) = self.plane_to_pixel(z);
        if x < 0.0 || y < 0.0 || x >= self.px_w as f64 || y >= self.px_h as f64 {
            return None;
        }
        Some((x as u32, y as u32))
    }
}

/// A rectangle of pixels inside a parent viewport. Rendering a window
/// samples exactly the parent's pixel centres, so windows stitch back
/// together bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PixelWindow {
    pub x0: u32,
    pub y0: u32,
    pub w: u32,
    pub h: u32,
}

impl PixelWindow {
    pub fn full(vp: &Viewport) -> Self {
        PixelWindow {
            x0: 0,
            y0: 0,
            w: vp.px_w,
            h: vp.px_h,
        }
    }

    pub fn fits(&self, vp: &Viewport) -> bool {
        self.w > 0
            && self.h > 0
            && self.x0 as u64 + self.w as u64 <= vp.px_w as u64
            && self.y0 as u64 + self.h as u64 <= vp.px_h as u64
    }

    /// Split `vp` into windows of at most `size × size`, row-major.
    pub fn tiles(vp: &Viewport, size: u32) -> Vec<PixelWindow> {
        let size = size.max(1);
        let mut out = Vec::new();
        let mut y0 = 0;
        while y0 < vp.px_h {
            let h = size.min(vp.px_h - y0);
            let mut x0 = 0;
            while x0 < vp.px_w {
                let w = size.min(vp.px_w - x0);
                out.push(PixelWindow { x0, y0, w, h });
                x0 += w;
            }
            y0 += h;
        }
        out
    }

    /// The four quadrants, top-left first; odd sizes give the extra row or
    /// column to the right and bottom halves.
    pub fn quadrants(vp: &Viewport) -> [PixelWindow; 4] {
        let (hw, hh) = (vp.px_w / 2, vp.px_h / 2);
        let (rw, rh) = (vp.px_w - hw, vp.px_h - hh);
        [
            PixelWindow {
                x0: 0,
                y0: 0,
                w: hw,
                h: hh,
            },
            PixelWindow {
                x0: hw,
                y0: 0,
                w: rw,
                h: hh,
            },
            PixelWindow {
                x0: 0,
                y0: hh,
                w: hw,
                h: rh,
            },
            PixelWindow {
                x0: hw,
                y0: hh,
                w: rw,
                h: rh,
            },
        ]
    }
}
