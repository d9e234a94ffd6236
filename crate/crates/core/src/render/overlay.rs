use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::color::Rgba;
use super::tile::ImageTile;
use crate::error::{Error, Result};
use crate::viewport::Viewport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerKind {
    Critical,
    Principal,
    FixedValue,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub pos: Complex64,
    pub kind: MarkerKind,
}

// 5×5 glyphs, one row per byte, bit 4 = leftmost column
const PLUS: [u8; 5] = [0b00100, 0b00100, 0b11111, 0b00100, 0b00100];
const CROSS: [u8; 5] = [0b10001, 0b01010, 0b00100, 0b01010, 0b10001];
const SQUARE: [u8; 5] = [0b11111, 0b10001, 0b10001, 0b10001, 0b11111];
const DIAMOND: [u8; 5] = [0b00100, 0b01110, 0b11111, 0b01110, 0b00100];

impl MarkerKind {
    fn glyph(self) -> (&'static [u8; 5], Rgba) {
        match self {
            MarkerKind::Critical => (&PLUS, [255, 255, 255, 255]),
            MarkerKind::Principal => (&CROSS, [255, 255, 0, 255]),
            MarkerKind::FixedValue => (&SQUARE, [0, 255, 255, 255]),
            MarkerKind::Zero => (&DIAMOND, [255, 64, 64, 255]),
        }
    }
}

/// Stamp a glyph centred on the pixel of each marker. Markers outside the
/// viewport are skipped; glyphs straddling an edge are clipped.
pub fn render_overlays(tile: &ImageTile, vp: &Viewport, markers: &[Marker]) -> Result<ImageTile> {
    if tile.px_w != vp.px_w || tile.px_h != vp.px_h {
        return Err(Error::InvalidArgument(format!(
            "tile is {}×{} but the viewport is {}×{}",
            tile.px_w, tile.px_h, vp.px_w, vp.px_h
        )));
    }
    if let Some(m) = markers.iter().find(|m| !m.pos.is_finite()) {
        return Err(Error::InvalidArgument(format!("marker at {} is not finite", m.pos)));
    }
    let mut out = tile.clone();
    for m in markers {
        let Some((ci, cj)) = vp.pixel_of(m.pos) else {
            continue;
        };
        let (rows, color) = m.kind.glyph();
        for (dy, bits) in rows.iter().enumerate() {
            for dx in 0..5 {
                if bits >> (4 - dx) & 1 == 0 {
                    continue;
                }
                let i = ci as i64 + dx as i64 - 2;
                let j = cj as i64 + dy as i64 - 2;
                if i >= 0 && j >= 0 && i < vp.px_w as i64 && j < vp.px_h as i64 {
                    out.set_pixel(i as u32, j as u32, color);
                }
            }
        }
    }
    Ok(out)
}
