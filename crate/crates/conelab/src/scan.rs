//! Parallel grid evaluation and CSV rendering.
//!
//! Rows come out in T-major grid order no matter how many workers rayon
//! uses, and every number is rendered with 17 significant digits, so a
//! scan is byte-for-byte reproducible.

use conelab_core::lab::{eval_observable, grid_points, GridSpec, Observable, PointSample};
use conelab_core::propagator::{classify, shell_coefficient};
use conelab_core::{LightconeClass, QuadratureSpec};
use conelab_core::{Result, SpacetimeInterval};
use rayon::prelude::*;
use std::fmt::Write as _;

/// Evaluate one observable over the whole grid. The result vector is
/// aligned with [`grid_points`]; band points are `None`.
pub fn eval_grid(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Vec<Option<PointSample>>> {
    grid.validate()?;
    spec.validate()?;
    grid_points(grid)
        .into_par_iter()
        .map(|(t, r)| eval_observable(obs, t, r, grid, spec))
        .collect()
}

pub fn class_label(class: LightconeClass) -> &'static str {
    match class {
        LightconeClass::Timelike => "timelike",
        LightconeClass::Spacelike => "spacelike",
        LightconeClass::Lightlike => "lightlike",
    }
}

/// The light-cone shell coefficient cell: only the field expectation has
/// a singular shell part, and only after the source fires.
fn shell_cell(obs: Observable, t: f64, g: f64, r: f64) -> String {
    if obs == Observable::Field && t > 0.0 {
        format!("{:.16e}", g * shell_coefficient(r))
    } else {
        String::new()
    }
}

/// Render a completed scan as CSV. `y0` shifts the printed time column
/// back to the caller's absolute clock; classification has already
/// happened in source-relative time.
pub fn render_csv(
    obs: Observable,
    grid: &GridSpec,
    values: &[Option<PointSample>],
    y0: f64,
) -> String {
    let pts = grid_points(grid);
    assert_eq!(pts.len(), values.len());
    let mut out = String::with_capacity(96 * (values.len() + 1));
    out.push_str("T,r,class,re,im,shell,err_est\n");
    for ((t, r), v) in pts.iter().zip(values) {
        let class = class_label(classify(SpacetimeInterval::new(*t, *r), grid.band_eps));
        let shell = shell_cell(obs, *t, grid.g, *r);
        match v {
            Some(PointSample { value, err_est }) => {
                let _ = writeln!(
                    out,
                    "{:.16e},{:.16e},{class},{value:.16e},{:.16e},{shell},{err_est:.16e}",
                    t + y0,
                    r,
                    0.0
                );
            }
            None => {
                let _ = writeln!(out, "{:.16e},{:.16e},{class},,,{shell},", t + y0, r);
            }
        }
    }
    out
}

/// Run a scan end to end and return the CSV text.
pub fn scan_csv(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
    y0: f64,
) -> Result<String> {
    let values = eval_grid(obs, grid, spec)?;
    Ok(render_csv(obs, grid, &values, y0))
}
