//! CSV tables and PGM heatmaps.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly. Field files start with a `#` metadata line carrying the
//! grid and physical parameters so they can be read back without side input.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::evolution::ScanPoint;
use crate::grid::PositionGrid;
use crate::params::PhysicalParams;
use crate::states::{DensityMatrix, WaveFunction};
use crate::wigner::WignerField;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Columns `x, Re, Im`.
pub fn write_wavefunction<W: Write>(psi: &WaveFunction, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["x", "Re", "Im"]).map_err(csv_error)?;
    for (i, a) in psi.amplitudes().iter().enumerate() {
        w.write_record([num(psi.grid().x(i)), num(a.re), num(a.im)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Row-major dump, columns `x, x_prime, Re, Im`.
pub fn write_density<W: Write>(rho: &DensityMatrix, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["x", "x_prime", "Re", "Im"]).map_err(csv_error)?;
    let g = rho.grid();
    for ((i, j), z) in rho.entries().indexed_iter() {
        w.write_record([num(g.x(i)), num(g.x(j)), num(z.re), num(z.im)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn field_metadata(field: &WignerField) -> String {
    let g = field.x_grid();
    let p = field.params();
    format!(
        "# x_min={} x_max={} n={} hbar={} mass={} D={}\n",
        num(g.x_min()),
        num(g.x_max()),
        g.len(),
        num(p.hbar()),
        num(p.mass()),
        num(p.diffusion())
    )
}

/// Long format `x, p, W`, x-major.
pub fn write_field<W: Write>(field: &WignerField, mut out: W) -> Result<()> {
    out.write_all(field_metadata(field).as_bytes())?;
    let mut w = writer(out);
    w.write_record(["x", "p", "W"]).map_err(csv_error)?;
    let ps = field.p_values();
    for ((i, k), v) in field.values().indexed_iter() {
        w.write_record([num(field.x_grid().x(i)), num(ps[k]), num(*v)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_field`].
pub fn read_field<R: Read>(mut input: R) -> Result<WignerField> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    read_field_str(&text)
}

/// Parses `key=value` pairs from the metadata comment.
fn parse_metadata(line: &str) -> Result<(PositionGrid, PhysicalParams)> {
    let get = |key: &str| -> Result<f64> {
        line.split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .find(|(k, _)| *k == key)
            .ok_or_else(|| Error::Format(format!("metadata lacks {key}")))?
            .1
            .parse::<f64>()
            .map_err(|e| Error::Format(format!("{key}: {e}")))
    };
    let grid = PositionGrid::new(get("x_min")?, get("x_max")?, get("n")? as usize)?;
    let params = PhysicalParams::new(get("hbar")?, get("mass")?, get("D")?)?;
    Ok((grid, params))
}

pub fn read_field_str(text: &str) -> Result<WignerField> {
    let first = text.lines().next().ok_or_else(|| Error::Format("empty file".into()))?;
    let meta = first.strip_prefix('#').ok_or_else(|| Error::Format("missing metadata line".into()))?;
    let (grid, params) = parse_metadata(meta)?;
    let n = grid.len();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut values = Vec::with_capacity(n * n);
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let v = rec.get(2).ok_or_else(|| Error::Format("row without W column".into()))?;
        values.push(v.parse::<f64>().map_err(|e| Error::Format(e.to_string()))?);
    }
    if values.len() != n * n {
        return Err(Error::Format(format!("expected {} rows, found {}", n * n, values.len())));
    }
    let values = Array2::from_shape_vec((n, n), values).map_err(|e| Error::Format(e.to_string()))?;
    WignerField::from_values(grid, params, values)
}

/// Columns `t, min_W, relative_floor, det_CW`.
pub fn write_scan<W: Write>(trace: &[ScanPoint], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["t", "min_W", "relative_floor", "det_CW"]).map_err(csv_error)?;
    for p in trace {
        w.write_record([num(p.t), num(p.min_w), num(p.relative_floor), num(p.det_cw)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// 8-bit gray levels on a symmetric diverging scale: `W = 0` sits mid-gray,
/// negative values are darker. Returned row-major with the highest momentum in
/// the first row and x increasing along each row.
///
/// `pixel = floor(255·(W + W_hi)/(2·W_hi) + ½)` with `W_hi = max|W|`; an
/// identically zero field maps to 127 everywhere.
pub fn heatmap_pixels(field: &WignerField) -> Vec<u8> {
    let n = field.x_grid().len();
    let hi = field.max_abs();
    let mut out = Vec::with_capacity(n * n);
    for k in (0..n).rev() {
        for i in 0..n {
            out.push(gray_level(field.at(i, k), hi));
        }
    }
    out
}

pub fn gray_level(w: f64, hi: f64) -> u8 {
    if hi == 0.0 {
        return 127;
    }
    let v = (255.0 * (w + hi) / (2.0 * hi) + 0.5).floor();
    v.clamp(0.0, 255.0) as u8
}

/// Binary P5 PGM with the grid bounds and `W_hi` recorded as header comments.
pub fn write_heatmap<W: Write>(field: &WignerField, mut out: W) -> Result<()> {
    let n = field.x_grid().len();
    let g = field.x_grid();
    write!(
        out,
        "P5\n# x_min={} x_max={} p_min={} p_max={} W_hi={}\n{n} {n}\n255\n",
        num(g.x_min()),
        num(g.x(n - 1)),
        num(field.p(0)),
        num(field.p(n - 1)),
        num(field.max_abs())
    )?;
    out.write_all(&heatmap_pixels(field))?;
    out.flush()?;
    Ok(())
}

pub fn export_heatmap(field: &WignerField, path: &Path) -> Result<()> {
    write_heatmap(field, BufWriter::new(File::create(path)?))
}

pub fn export_field(field: &WignerField, path: &Path) -> Result<()> {
    write_field(field, BufWriter::new(File::create(path)?))
}

pub fn import_field(path: &Path) -> Result<WignerField> {
    read_field_str(&std::fs::read_to_string(path)?)
}
