//! Figure data: purity against `omega/kappa` for the preset parameter sets.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tropo_core::covariance;
use tropo_core::presets::{figure_grid, Figure};
use tropo_core::steady_state;

use crate::config::Format;
use crate::error::CliError;
use crate::table::{Cell, Table};

pub fn columns(fig: Figure) -> Vec<&'static str> {
    let mut c = vec!["curve", "injection", "mu_p", "mu", "omega_over_kappa"];
    if fig.is_partial() {
        c.extend(["partial_purity", "purity"]);
    } else {
        c.push("purity");
    }
    c
}

pub fn table(fig: Figure) -> Result<Table, CliError> {
    let grid = figure_grid();
    let curves = fig.curves();
    let jobs: Vec<(usize, usize)> = (0..curves.len())
        .flat_map(|c| (0..grid.len()).map(move |j| (c, j)))
        .collect();
    let rows: Vec<Result<Vec<Cell>, CliError>> = jobs
        .par_iter()
        .map(|&(c, j)| {
            let p = &curves[c];
            let model = |source| CliError::Model { index: j, source };
            let s = steady_state(p).map_err(model)?;
            let r = covariance::purity_at(p, &s, grid[j] * p.kappa).map_err(model)?;
            let mut row = vec![
                Cell::from(c),
                Cell::Text(p.injection.to_string()),
                p.mu_p.into(),
                p.mu.into(),
                grid[j].into(),
            ];
            if fig.is_partial() {
                row.push(r.purity_partial_is.into());
            }
            row.push(r.purity_total.into());
            Ok(row)
        })
        .collect();
    let mut t = Table::new(columns(fig));
    for row in rows {
        t.push(row?);
    }
    Ok(t)
}

/// Writes `fig<id>.<ext>` into `outdir` and returns its path.
pub fn write(fig: Figure, outdir: &Path, format: Format) -> Result<PathBuf, CliError> {
    fs::create_dir_all(outdir).map_err(|source| CliError::Io {
        path: outdir.to_path_buf(),
        source,
    })?;
    let path = outdir.join(format!("fig{fig}.{}", format.extension()));
    table(fig)?.write(&path, format)?;
    Ok(path)
}
