//! Sup-norm scans of `|E(P, it)|` over a grid of points.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::evaluator::{EisensteinEvaluator, Slice};
use super::point::HyperbolicPoint;
use crate::error::{Error, Result};
use crate::fit::log_log_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub sup_value: f64,
}

/// `(t, max_Ω |E(P, it)|)` rows plus the log-log slope over the upper half
/// of the `t` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub fitted_exponent: f64,
}

impl ScanTable {
    /// Columns `t,sup_value,fitted_exponent`; the exponent sits in a
    /// trailing `fit` row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,sup_value,fitted_exponent")?;
        for r in &self.rows {
            writeln!(out, "{:.16e},{:.16e},", r.t, r.sup_value)?;
        }
        writeln!(out, "fit,,{:.16e}", self.fitted_exponent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan table serializes")
    }
}

/// Points `(x, y, r)` on an `n × n × n` grid spanning the given boxes,
/// endpoints included, ordered with `r` slowest.
pub fn box_grid(
    x: (f64, f64),
    y: (f64, f64),
    r: (f64, f64),
    n: usize,
) -> Result<Vec<HyperbolicPoint>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    let lin = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                out.push(HyperbolicPoint::new(lin(x, i), lin(y, j), lin(r, k))?);
            }
        }
    }
    Ok(out)
}

/// `max_{P ∈ Ω} |E(P, it)|` for each `t` in an increasing grid.
///
/// Work is spread over the rayon pool; every maximum is reduced in grid
/// order, so the table does not depend on the thread count.
pub fn supnorm_scan(
    ev: &EisensteinEvaluator,
    omega: &[HyperbolicPoint],
    t_grid: &[f64],
) -> Result<ScanTable> {
    if omega.is_empty() {
        return Err(Error::InvalidArgument("empty point grid".into()));
    }
    if t_grid.len() < 4 {
        return Err(Error::InvalidArgument(
            "t grid needs at least 4 values for the upper-half fit".into(),
        ));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidArgument(
            "t grid must be positive and strictly increasing".into(),
        ));
    }
    let mut heights: Vec<f64> = omega.iter().map(|p| p.r).collect();
    heights.sort_by(f64::total_cmp);
    heights.dedup();
    let pairs: Vec<(usize, usize)> = (0..t_grid.len())
        .flat_map(|i| (0..heights.len()).map(move |k| (i, k)))
        .collect();
    let tables: Vec<Arc<Slice>> = pairs
        .par_iter()
        .map(|&(i, k)| ev.prepare(heights[k], t_grid[i]))
        .collect::<Result<_>>()?;
    let height_index = |r: f64| {
        heights
            .binary_search_by(|h| h.total_cmp(&r))
            .expect("height listed")
    };
    let jobs: Vec<(usize, usize)> = (0..t_grid.len())
        .flat_map(|i| (0..omega.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let p = &omega[j];
            let table = &tables[i * heights.len() + height_index(p.r)];
            ev.eval_prepared(p, t_grid[i], table).norm()
        })
        .collect();
    let rows: Vec<ScanRow> = t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let chunk = &values[i * omega.len()..(i + 1) * omega.len()];
            ScanRow {
                t,
                sup_value: chunk.iter().cloned().fold(0.0, f64::max),
            }
        })
        .collect();
    let half = rows.len() / 2;
    let (ts, sups): (Vec<f64>, Vec<f64>) = rows[half..].iter().map(|r| (r.t, r.sup_value)).unzip();
    let fitted_exponent = log_log_slope(&ts, &sups)?;
    Ok(ScanTable {
        rows,
        fitted_exponent,
    })
}
