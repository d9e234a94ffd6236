use std::io::Cursor;

use serde::{Deserialize, Serialize};

use super::color::{Rgba, BLACK};
use crate::error::{Error, Result};
use crate::viewport::PixelWindow;

/// Row-major RGBA pixels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageTile {
    pub px_w: u32,
    pub px_h: u32,
    pub pixels: Vec<u8>,
}

impl ImageTile {
    /// An opaque black tile.
    pub fn new(px_w: u32, px_h: u32) -> Self {
        let pixels = BLACK.repeat(px_w as usize * px_h as usize);
        ImageTile { px_w, px_h, pixels }
    }

    fn offset(&self, i: u32, j: u32) -> usize {
        4 * (j as usize * self.px_w as usize + i as usize)
    }

    pub fn pixel(&self, i: u32, j: u32) -> Rgba {
        let k = self.offset(i, j);
        self.pixels[k..k + 4].try_into().unwrap()
    }

    pub fn set_pixel(&mut self, i: u32, j: u32, c: Rgba) {
        let k = self.offset(i, j);
        self.pixels[k..k + 4].copy_from_slice(&c);
    }

    /// Copy `src` in with its top-left corner at `(x0, y0)`.
    pub fn blit(&mut self, src: &ImageTile, x0: u32, y0: u32) {
        assert!(
            x0 + src.px_w <= self.px_w && y0 + src.px_h <= self.px_h,
            "blit out of bounds"
        );
        let row = 4 * src.px_w as usize;
        for j in 0..src.px_h {
            let d = self.offset(x0, y0 + j);
            let s = src.offset(0, j);
            self.pixels[d..d + row].copy_from_slice(&src.pixels[s..s + row]);
        }
    }

    pub fn crop(&self, win: PixelWindow) -> ImageTile {
        let mut out = ImageTile::new(win.w, win.h);
        let row = 4 * win.w as usize;
        for j in 0..win.h {
            let s = self.offset(win.x0, win.y0 + j);
            let d = out.offset(0, j);
            out.pixels[d..d + row].copy_from_slice(&self.pixels[s..s + row]);
        }
        out
    }

    /// 8-bit RGBA PNG, not interlaced.
    pub fn to_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, self.px_w, self.px_h);
        enc.set_color(png::ColorType::Rgba);
        enc.set_depth(png::BitDepth::Eight);
        let io = |e: png::EncodingError| Error::InvalidArgument(format!("png encoding failed: {e}"));
        let mut writer = enc.write_header().map_err(io)?;
        writer.write_image_data(&self.pixels).map_err(io)?;
        writer.finish().map_err(io)?;
        Ok(out)
    }

    /// Decode an 8-bit RGBA PNG.
    pub fn from_png(bytes: &[u8]) -> Result<ImageTile> {
        let bad = |e: String| Error::InvalidArgument(format!("png decoding failed: {e}"));
        let mut reader = png::Decoder::new(Cursor::new(bytes))
            .read_info()
            .map_err(|e| bad(e.to_string()))?;
        let mut buf = vec![0; reader.output_buffer_size()];
        let info = reader.next_frame(&mut buf).map_err(|e| bad(e.to_string()))?;
        if info.color_type != png::ColorType::Rgba || info.bit_depth != png::BitDepth::Eight {
            return Err(bad(format!(
                "expected 8-bit RGBA, got {:?}/{:?}",
                info.color_type, info.bit_depth
            )));
        }
        buf.truncate(info.buffer_size());
        Ok(ImageTile {
            px_w: info.width,
            px_h: info.height,
            pixels: buf,
        })
    }
}
