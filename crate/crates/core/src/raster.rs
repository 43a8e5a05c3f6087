//! Rasterization of visual atoms onto 8-bit grayscale canvases.
//!
//! World coordinates are mapped to pixels by a per-class [`ViewTransform`]:
//! the class bounding radius `R` fills 90% of the half-size of the shorter
//! canvas side, and the nucleus shifts the center by up to a quarter of that
//! side. World `y` points up; pixel rows grow downward. Lines are drawn with
//! integer Bresenham stepping and hard writes, orbits in ascending order so a
//! later orbit overwrites an earlier one.

use std::io::Cursor;

use thiserror::Error;

use crate::geometry::{build_visual_atom, GeometryError, Point, Polyline};
use crate::sampling::{ClassSpec, InstanceSpec};

/// Fraction of the half-size the bounding radius is mapped to.
pub const FRAME_MARGIN: f64 = 0.9;
/// Nucleus offset per unit, as a fraction of the shorter canvas side.
pub const NUCLEUS_SHIFT: f64 = 0.25;
pub const MIN_CANVAS_SIDE: u32 = 16;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("canvas must be at least {MIN_CANVAS_SIDE}x{MIN_CANVAS_SIDE}, got {width}x{height}")]
    CanvasSize { width: u32, height: u32 },
    #[error("instance has {colors} colors and {noises} noise realizations for {orbits} orbits")]
    InstanceMismatch {
        orbits: usize,
        colors: usize,
        noises: usize,
    },
    #[error("line thickness must be at least 1")]
    Thickness,
    #[error("png: {0}")]
    Png(String),
}

/// Row-major 8-bit grayscale image, black when created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl Canvas {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width as usize * height as usize],
        }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Option<Self> {
        (pixels.len() == width as usize * height as usize).then_some(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    /// Writes `value` at `(x, y)`; coordinates outside the canvas are ignored.
    pub fn put(&mut self, x: i64, y: i64, value: u8) {
        if x >= 0 && y >= 0 && x < i64::from(self.width) && y < i64::from(self.height) {
            self.pixels[y as usize * self.width as usize + x as usize] = value;
        }
    }

    /// Copies `src` with its top-left corner at `(x, y)`, clipping.
    pub fn blit(&mut self, src: &Canvas, x: i64, y: i64) {
        for row in 0..src.height {
            for col in 0..src.width {
                self.put(x + i64::from(col), y + i64::from(row), src.get(col, row));
            }
        }
    }

    pub fn lit_pixels(&self) -> impl Iterator<Item = (u32, u32, u8)> + '_ {
        let w = self.width as usize;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| ((i % w) as u32, (i / w) as u32, v))
    }

    /// Non-interlaced 8-bit grayscale PNG with no ancillary chunks.
    pub fn encode_png(&self) -> Result<Vec<u8>, RenderError> {
        let mut out = Vec::with_capacity(self.pixels.len() / 8 + 64);
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_compression(png::Compression::Fast);
            enc.set_filter(png::Filter::Up);
            let mut writer = enc.write_header().map_err(|e| RenderError::Png(e.to_string()))?;
            writer
                .write_image_data(&self.pixels)
                .map_err(|e| RenderError::Png(e.to_string()))?;
            writer.finish().map_err(|e| RenderError::Png(e.to_string()))?;
        }
        Ok(out)
    }

    /// Decodes an 8-bit grayscale PNG.
    pub fn decode_png(bytes: &[u8]) -> Result<Self, RenderError> {
        let decoder = png::Decoder::new(Cursor::new(bytes));
        let mut reader = decoder.read_info().map_err(|e| RenderError::Png(e.to_string()))?;
        let mut buf = vec![
            0;
            reader
                .output_buffer_size()
                .ok_or_else(|| RenderError::Png("image too large".into()))?
        ];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| RenderError::Png(e.to_string()))?;
        if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
            return Err(RenderError::Png(format!(
                "expected 8-bit grayscale, got {:?}/{:?}",
                info.color_type, info.bit_depth
            )));
        }
        buf.truncate(info.buffer_size());
        Ok(Self {
            width: info.width,
            height: info.height,
            pixels: buf,
        })
    }
}

/// World-to-pixel mapping: `px = cx + s·x`, `py = cy − s·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewTransform {
    pub scale: f64,
    pub center: Point,
}

impl ViewTransform {
    pub fn to_pixel(&self, p: Point) -> Point {
        Point::new(self.center.x + self.scale * p.x, self.center.y - self.scale * p.y)
    }

    /// World coordinates of the pixel with integer indices `(px, py)`.
    pub fn to_world(&self, px: f64, py: f64) -> Point {
        Point::new((px - self.center.x) / self.scale, (self.center.y - py) / self.scale)
    }
}

pub fn make_view(
    class_spec: &ClassSpec,
    nucleus: Point,
    width: u32,
    height: u32,
) -> Result<ViewTransform, RenderError> {
    if width < MIN_CANVAS_SIDE || height < MIN_CANVAS_SIDE {
        return Err(RenderError::CanvasSize { width, height });
    }
    let side = f64::from(width.min(height));
    let radius = class_spec.bounding_radius();
    let scale = FRAME_MARGIN * (side / 2.0) / radius;
    let shift = NUCLEUS_SHIFT * side;
    let center = Point::new(
        f64::from(width) / 2.0 + nucleus.x * shift,
        f64::from(height) / 2.0 + nucleus.y * shift,
    );
    Ok(ViewTransform { scale, center })
}

/// Gray level written for a color in `[0, 1]`.
pub fn gray_level(color: f64) -> u8 {
    (color.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Pixel offsets of a `t`-wide disc footprint.
fn footprint(thickness: u32) -> Vec<(i64, i64)> {
    if thickness <= 1 {
        return vec![(0, 0)];
    }
    let t = i64::from(thickness);
    let lo = -(t / 2);
    let hi = lo + t - 1;
    let mid = (lo + hi) as f64 / 2.0;
    let r2 = (t as f64 / 2.0).powi(2);
    let mut out = Vec::new();
    for dy in lo..=hi {
        for dx in lo..=hi {
            let (fx, fy) = (dx as f64 - mid, dy as f64 - mid);
            if fx * fx + fy * fy <= r2 {
                out.push((dx, dy));
            }
        }
    }
    out
}

// Far enough outside any canvas that clipping still happens per pixel, small
// enough that Bresenham never overflows.
const COORD_LIMIT: f64 = 1.0e7;

fn snap(v: f64) -> i64 {
    v.round().clamp(-COORD_LIMIT, COORD_LIMIT) as i64
}

fn line(canvas: &mut Canvas, (x0, y0): (i64, i64), (x1, y1): (i64, i64), value: u8, stamp: &[(i64, i64)]) {
    let (w, h) = (i64::from(canvas.width), i64::from(canvas.height));
    let reach = stamp.iter().map(|(dx, dy)| dx.abs().max(dy.abs())).max().unwrap_or(0);
    // Whole segment outside: nothing to do.
    if x0.max(x1) < -reach || y0.max(y1) < -reach || x0.min(x1) >= w + reach || y0.min(y1) >= h + reach {
        return;
    }
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (x0, y0);
    loop {
        for &(ox, oy) in stamp {
            canvas.put(x + ox, y + oy, value);
        }
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Draws all closed edges of `polyline`.
pub fn draw_polyline(canvas: &mut Canvas, polyline: &Polyline, view: &ViewTransform, color: f64, thickness: u32) {
    let value = gray_level(color);
    let stamp = footprint(thickness.max(1));
    let pixels: Vec<(i64, i64)> = polyline
        .points()
        .iter()
        .map(|&p| {
            let px = view.to_pixel(p);
            (snap(px.x), snap(px.y))
        })
        .collect();
    let n = pixels.len();
    for i in 0..n {
        line(canvas, pixels[i], pixels[(i + 1) % n], value, &stamp);
    }
}

/// Renders one image of a class.
pub fn render(class_spec: &ClassSpec, instance: &InstanceSpec, width: u32, height: u32) -> Result<Canvas, RenderError> {
    let k = class_spec.orbit_count as usize;
    if instance.orbit_colors.len() != k || instance.noises.len() != k {
        return Err(RenderError::InstanceMismatch {
            orbits: k,
            colors: instance.orbit_colors.len(),
            noises: instance.noises.len(),
        });
    }
    if instance.line_thickness < 1 {
        return Err(RenderError::Thickness);
    }
    let atom = build_visual_atom(class_spec, &instance.noises)?;
    let view = make_view(class_spec, instance.nucleus, width, height)?;
    let mut canvas = Canvas::new(width, height);
    for (line, &color) in atom.polylines().iter().zip(&instance.orbit_colors) {
        draw_polyline(&mut canvas, line, &view, color, instance.line_thickness);
    }
    Ok(canvas)
}
