//! Point export and grayscale rasterization of supercharacter images.

use std::io::Write;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::Complex64;

/// Stamp drawn around every point before inversion.
pub const KERNEL: [[f64; 3]; 3] = [[0.3, 0.75, 0.3], [0.75, 1.0, 0.75], [0.3, 0.75, 0.3]];

/// Plot extent `[-range, range]^2` at `unit_res` pixels per unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitmapSpec {
    pub range: f64,
    pub unit_res: u32,
    res: usize,
}

impl BitmapSpec {
    /// `res = unit_res * range` must be a positive integer.
    pub fn new(range: f64, unit_res: u32) -> Result<Self> {
        if !(range.is_finite() && range > 0.0) || unit_res == 0 {
            return Err(Error::Invalid(format!("bad bitmap extent: range {range}, unit_res {unit_res}")));
        }
        let res = unit_res as f64 * range;
        if (res - res.round()).abs() > 1e-9 {
            return Err(Error::Invalid(format!("unit_res * range = {res} is not an integer")));
        }
        Ok(BitmapSpec { range, unit_res, res: res.round() as usize })
    }

    pub fn res(&self) -> usize {
        self.res
    }

    /// Side length `2 res`.
    pub fn size(&self) -> usize {
        2 * self.res
    }

    /// 1-based `(row, col)` of the pixel for `z`, if it passes the border guard
    /// `1 < row < 2 res`, `1 < col < 2 res`.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let res = self.res as f64;
        let u = self.unit_res as f64;
        let row = (res - u * z.im).round();
        let col = (res + u * z.re).round();
        let hi = 2.0 * res;
        (row > 1.0 && row < hi && col > 1.0 && col < hi).then_some((row as usize, col as usize))
    }
}

/// Square grayscale image with intensities in `[0, 1]`, 1 = white.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    size: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn white(size: usize) -> Self {
        GrayImage { size, data: vec![1.0; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// 0-based pixel access.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[row * self.size + col] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// `round(255 * clamp(v, 0, 1))` per pixel.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&v| to_byte(v)).collect()
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let side = u32::try_from(self.size).map_err(|_| Error::Overflow("image size"))?;
        PngEncoder::new(&mut out).write_image(&self.to_bytes(), side, side, ExtendedColorType::L8)?;
        Ok(out)
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.encode_png()?)?;
        Ok(())
    }
}

pub fn to_byte(v: f64) -> u8 {
    (255.0 * v.clamp(0.0, 1.0)).round() as u8
}

/// Stamps [`KERNEL`] around each point, combining overlaps with `max`, then
/// inverts. Points failing the border guard are skipped. The result does not
/// depend on point order or thread count.
pub fn render_bitmap(points: &[Complex64], spec: &BitmapSpec) -> GrayImage {
    let size = spec.size();
    let centers: Vec<(usize, usize)> = points.par_iter().filter_map(|&z| spec.pixel_of(z)).collect();
    let mut acc = vec![0.0f64; size * size];
    for (row, col) in centers {
        for (dr, krow) in KERNEL.iter().enumerate() {
            for (dc, &k) in krow.iter().enumerate() {
                // 1-based (row - 1 + dr, col - 1 + dc) to 0-based
                let idx = (row + dr - 2) * size + (col + dc - 2);
                acc[idx] = acc[idx].max(k);
            }
        }
    }
    GrayImage { size, data: acc.into_iter().map(|v| 1.0 - v).collect() }
}

pub fn write_png(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    img.write_png(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl std::str::FromStr for PointFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(PointFormat::Csv),
            "json" => Ok(PointFormat::Json),
            other => Err(Error::Invalid(format!("unknown point format `{other}`"))),
        }
    }
}

/// Values below this magnitude print as zero.
pub const CHOP: f64 = 1e-10;

/// Fixed-point rendering with 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    let v = if v.abs() < CHOP { 0.0 } else { v };
    if v == 0.0 {
        return format!("{:.11}", 0.0);
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// CSV (`re,im` header) or JSON (`[[re, im], ...]`).
pub fn export_points(points: &[Complex64], format: PointFormat, mut out: impl Write) -> Result<()> {
    match format {
        PointFormat::Csv => {
            writeln!(out, "re,im")?;
            for z in points {
                writeln!(out, "{},{}", format_sig12(z.re), format_sig12(z.im))?;
            }
        }
        PointFormat::Json => {
            let body: Vec<String> =
                points.iter().map(|z| format!("[{},{}]", format_sig12(z.re), format_sig12(z.im))).collect();
            writeln!(out, "[{}]", body.join(","))?;
        }
    }
    Ok(())
}
