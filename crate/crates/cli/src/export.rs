//! Heat-map, CSV, PNG and JSON output.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::{imageops::FilterType, GrayImage, ImageFormat, Luma};
use padic_nagumo::solver::Trajectory;
use serde::Serialize;

use crate::error::{CliError, Result};

/// `u(p^{-ord}, t)` on rows `ord = -j` (ascending) and columns `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatMap {
    pub ord_axis: Vec<i64>,
    pub time_axis: Vec<f64>,
    /// Row-major, `ord_axis.len() × time_axis.len()`.
    pub values: Vec<f64>,
}

impl HeatMap {
    /// Builds the map from every saved frame after `t = 0`.
    pub fn from_trajectory(traj: &Trajectory, j_min: i64, j_max: i64) -> Self {
        let frames: Vec<usize> = (0..traj.times.len())
            .filter(|&i| traj.times[i] > 0.0)
            .collect();
        let ord_axis: Vec<i64> = (-j_max..=-j_min).collect();
        let mut values = Vec::with_capacity(ord_axis.len() * frames.len());
        for &ord in &ord_axis {
            for &i in &frames {
                values.push(traj.snapshots[i].value_at_shell(-ord));
            }
        }
        HeatMap {
            ord_axis,
            time_axis: frames.iter().map(|&i| traj.times[i]).collect(),
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.ord_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.time_axis.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Export {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Header `ord,t=<t1>,…`; one row per ord, values in scientific notation with
/// 17 significant digits so that re-parsing is exact.
pub fn export_csv(map: &HeatMap, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let header =
        std::iter::once("ord".to_string()).chain(map.time_axis.iter().map(|t| format!("t={t}")));
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for (r, ord) in map.ord_axis.iter().enumerate() {
        let row = std::iter::once(ord.to_string())
            .chain((0..map.cols()).map(|c| format!("{:.16e}", map.get(r, c))));
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<HeatMap> {
    let bad = |message: String| CliError::Export {
        path: path.to_path_buf(),
        message,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let time_axis = r
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .skip(1)
        .map(|h| {
            h.strip_prefix("t=")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("bad header field `{h}`")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut ord_axis = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let mut fields = rec.iter();
        let ord = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("bad ord field".into()))?;
        ord_axis.push(ord);
        for v in fields {
            values.push(v.parse().map_err(|_| bad(format!("bad value `{v}`")))?);
        }
    }
    Ok(HeatMap {
        ord_axis,
        time_axis,
        values,
    })
}

/// 8-bit grayscale; rows are ord ascending top to bottom, columns time
/// ascending left to right. Intensity is linear from 0 up to
/// `min(max value, saturation)`; negative values are black.
pub fn export_png(map: &HeatMap, path: &Path, saturation: f64, upscale: u32) -> Result<()> {
    let (w, h) = (map.cols() as u32, map.rows() as u32);
    if w == 0 || h == 0 {
        return Err(CliError::Export {
            path: path.to_path_buf(),
            message: "empty heat map".into(),
        });
    }
    let top = map
        .values
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, &v| m.max(v))
        .min(saturation);
    let img = GrayImage::from_fn(w, h, |x, y| {
        let v = map.get(y as usize, x as usize);
        let level = if top > 0.0 && v.is_finite() {
            (v / top).clamp(0.0, 1.0)
        } else if v == f64::INFINITY {
            1.0
        } else {
            0.0
        };
        Luma([(level * 255.0).round() as u8])
    });
    let scale = upscale.max(1);
    let img = if scale > 1 {
        image::imageops::resize(&img, w * scale, h * scale, FilterType::Nearest)
    } else {
        img
    };
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    img.write_to(&mut BufWriter::new(file), ImageFormat::Png)
        .map_err(|e| CliError::Export {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
}

/// Writes any serialisable summary as pretty JSON. Non-finite numbers become
/// `null`.
pub fn export_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value).map_err(|e| CliError::Export {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
