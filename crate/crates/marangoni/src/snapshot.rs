//! Plain-text snapshots of fields and the diagnostics CSV.
//!
//! Field snapshot format: one header line
//!
//! ```text
//! # field=<name> nx=<int> ny=<int> t=<float> dx=<float> dy=<float>
//! ```
//!
//! followed by one comma-separated row per `y` index (increasing). `nx`,
//! `ny` are the grid cell counts; the array shape follows from the field
//! name: `u` is `(nx+1)` wide, `v` has `ny+1` rows, every other name is a
//! cell-centered `nx × ny` scalar. Values are written with 17 significant
//! digits, which round-trips every finite `f64` bit-for-bit.
//!
//! The diagnostics CSV has one header row naming every
//! [`DiagnosticsRecord`] column and one data row per recorded step in the
//! same format (the step column is an integer).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::DiagnosticsRecord;
use crate::dynamics::SimState;
use crate::error::SimError;
use crate::field::{BoundaryCondition, FaceBc, ScalarField, VectorField};
use crate::grid::Grid;

/// Field names written by a full state snapshot.
pub const STATE_FIELDS: [&str; 5] = ["u", "v", "p", "phi", "theta"];

/// 17-significant-digit rendering; parses back to the identical `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parsed snapshot header.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMeta {
    pub field: String,
    pub nx: usize,
    pub ny: usize,
    pub t: f64,
    pub dx: f64,
    pub dy: f64,
}

impl SnapshotMeta {
    /// Array shape implied by the field name.
    pub fn shape(&self) -> (usize, usize) {
        match self.field.as_str() {
            "u" => (self.nx + 1, self.ny),
            "v" => (self.nx, self.ny + 1),
            _ => (self.nx, self.ny),
        }
    }

    /// True when the metadata describes data living on `grid` (cell counts
    /// exact, spacings to rounding error).
    pub fn matches_grid(&self, grid: &Grid) -> bool {
        self.nx == grid.nx()
            && self.ny == grid.ny()
            && (self.dx - grid.dx()).abs() <= 1e-12 * grid.dx()
            && (self.dy - grid.dy()).abs() <= 1e-12 * grid.dy()
    }
}

/// Conventional snapshot file name for a field at a step.
pub fn snapshot_path(dir: &Path, step: u64, field: &str) -> PathBuf {
    dir.join(format!("snap_{step}_{field}.csv"))
}

fn write_array(
    path: &Path,
    field: &str,
    grid: &Grid,
    t: f64,
    ncols: usize,
    nrows: usize,
    values: &[f64],
) -> Result<(), SimError> {
    assert_eq!(values.len(), ncols * nrows);
    let file = File::create(path)
        .map_err(|e| SimError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "# field={field} nx={} ny={} t={} dx={} dy={}",
        grid.nx(),
        grid.ny(),
        fmt_f64(t),
        fmt_f64(grid.dx()),
        fmt_f64(grid.dy())
    )?;
    for j in 0..nrows {
        let row: Vec<String> = (0..ncols)
            .map(|i| fmt_f64(values[j * ncols + i]))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Write one cell-centered field under the given name.
pub fn write_scalar(path: &Path, field: &str, t: f64, f: &ScalarField) -> Result<(), SimError> {
    let g = f.grid();
    write_array(path, field, g, t, g.nx(), g.ny(), f.values())
}

/// Write the two staggered components as `u` and `v` snapshots.
pub fn write_vector(dir: &Path, step: u64, t: f64, w: &VectorField) -> Result<(), SimError> {
    let g = w.grid();
    write_array(
        &snapshot_path(dir, step, "u"),
        "u",
        g,
        t,
        g.nx() + 1,
        g.ny(),
        w.u(),
    )?;
    write_array(
        &snapshot_path(dir, step, "v"),
        "v",
        g,
        t,
        g.nx(),
        g.ny() + 1,
        w.v(),
    )
}

/// Write the full state (`u`, `v`, `p`, `phi`, `theta`) at a step.
pub fn write_state(dir: &Path, step: u64, state: &SimState) -> Result<(), SimError> {
    write_vector(dir, step, state.t, &state.u)?;
    write_scalar(&snapshot_path(dir, step, "p"), "p", state.t, &state.p)?;
    write_scalar(&snapshot_path(dir, step, "phi"), "phi", state.t, &state.phi)?;
    write_scalar(
        &snapshot_path(dir, step, "theta"),
        "theta",
        state.t,
        &state.theta,
    )
}

fn parse_float(tok: &str, what: &str, path: &Path) -> Result<f64, SimError> {
    tok.parse::<f64>()
        .map_err(|_| SimError::Io(format!("{}: bad {what} value `{tok}`", path.display())))
}

/// Read a snapshot: header metadata plus row-major values (row = y index).
pub fn read_array(path: &Path) -> Result<(SnapshotMeta, Vec<f64>), SimError> {
    let file = File::open(path)
        .map_err(|e| SimError::Io(format!("cannot open {}: {e}", path.display())))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| SimError::Io(format!("{}: empty file", path.display())))??;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("#") {
        return Err(SimError::Io(format!(
            "{}: header must start with `# field=...`",
            path.display()
        )));
    }
    let mut field = None;
    let mut nx = None;
    let mut ny = None;
    let mut t = None;
    let mut dx = None;
    let mut dy = None;
    for tok in tokens {
        let (key, value) = tok.split_once('=').ok_or_else(|| {
            SimError::Io(format!("{}: malformed header token `{tok}`", path.display()))
        })?;
        match key {
            "field" => field = Some(value.to_string()),
            "nx" => {
                nx = Some(value.parse::<usize>().map_err(|_| {
                    SimError::Io(format!("{}: bad nx `{value}`", path.display()))
                })?)
            }
            "ny" => {
                ny = Some(value.parse::<usize>().map_err(|_| {
                    SimError::Io(format!("{}: bad ny `{value}`", path.display()))
                })?)
            }
            "t" => t = Some(parse_float(value, "t", path)?),
            "dx" => dx = Some(parse_float(value, "dx", path)?),
            "dy" => dy = Some(parse_float(value, "dy", path)?),
            other => {
                return Err(SimError::Io(format!(
                    "{}: unknown header key `{other}`",
                    path.display()
                )))
            }
        }
    }
    let missing = |what: &str| SimError::Io(format!("{}: header lacks {what}", path.display()));
    let meta = SnapshotMeta {
        field: field.ok_or_else(|| missing("field"))?,
        nx: nx.ok_or_else(|| missing("nx"))?,
        ny: ny.ok_or_else(|| missing("ny"))?,
        t: t.ok_or_else(|| missing("t"))?,
        dx: dx.ok_or_else(|| missing("dx"))?,
        dy: dy.ok_or_else(|| missing("dy"))?,
    };

    let (ncols, nrows) = meta.shape();
    let mut values = Vec::with_capacity(ncols * nrows);
    for (row_index, line) in lines.enumerate() {
        let line = line?;
        if row_index >= nrows {
            if line.trim().is_empty() {
                continue;
            }
            return Err(SimError::Io(format!(
                "{}: more than {nrows} data rows",
                path.display()
            )));
        }
        let row: Vec<&str> = line.split(',').collect();
        if row.len() != ncols {
            return Err(SimError::Io(format!(
                "{}: row {} has {} values, expected {ncols}",
                path.display(),
                row_index + 1,
                row.len()
            )));
        }
        for tok in row {
            values.push(parse_float(tok.trim(), "data", path)?);
        }
    }
    if values.len() != ncols * nrows {
        return Err(SimError::Io(format!(
            "{}: expected {nrows} data rows, found {}",
            path.display(),
            values.len() / ncols
        )));
    }
    Ok((meta, values))
}

/// Read a cell-centered snapshot onto an existing grid, attaching `bc`.
/// Returns the field and the snapshot time.
pub fn read_scalar_on(
    path: &Path,
    grid: &Grid,
    bc: BoundaryCondition,
) -> Result<(ScalarField, f64), SimError> {
    let (meta, values) = read_array(path)?;
    if meta.shape() != (grid.nx(), grid.ny()) || !meta.matches_grid(grid) {
        return Err(SimError::Io(format!(
            "{}: snapshot is {}x{} (dx={}, dy={}), expected the {}x{} run grid",
            path.display(),
            meta.nx,
            meta.ny,
            meta.dx,
            meta.dy,
            grid.nx(),
            grid.ny()
        )));
    }
    let mut f = ScalarField::new(grid.clone(), bc);
    f.values_mut().copy_from_slice(&values);
    if !f.all_finite() {
        return Err(SimError::Io(format!(
            "{}: snapshot contains non-finite values",
            path.display()
        )));
    }
    Ok((f, meta.t))
}

/// Read `u`/`v` component snapshots onto an existing grid as one no-slip
/// velocity field. Returns the field and the snapshot time.
pub fn read_vector_on(
    u_path: &Path,
    v_path: &Path,
    grid: &Grid,
) -> Result<(VectorField, f64), SimError> {
    let (mu, uvals) = read_array(u_path)?;
    let (mv, vvals) = read_array(v_path)?;
    if mu.field != "u" || mv.field != "v" {
        return Err(SimError::Io(format!(
            "expected u/v component snapshots, got `{}` and `{}`",
            mu.field, mv.field
        )));
    }
    if !mu.matches_grid(grid) || !mv.matches_grid(grid) {
        return Err(SimError::Io(format!(
            "{}: velocity snapshot does not match the {}x{} run grid",
            u_path.display(),
            grid.nx(),
            grid.ny()
        )));
    }
    if mu.t != mv.t {
        return Err(SimError::Io(
            "u and v snapshots carry different times".to_string(),
        ));
    }
    let mut w = VectorField::new(grid.clone(), FaceBc::NoSlip);
    w.u_mut().copy_from_slice(&uvals);
    w.v_mut().copy_from_slice(&vvals);
    if !w.all_finite() {
        return Err(SimError::Io(format!(
            "{}: snapshot contains non-finite values",
            u_path.display()
        )));
    }
    Ok((w, mu.t))
}

/// Incremental diagnostics CSV writer.
pub struct DiagnosticsWriter {
    out: BufWriter<File>,
    path: PathBuf,
}

impl DiagnosticsWriter {
    /// Create the file and write the header row.
    pub fn create(path: &Path) -> Result<DiagnosticsWriter, SimError> {
        let file = File::create(path)
            .map_err(|e| SimError::Io(format!("cannot create {}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{}", DiagnosticsRecord::FIELD_NAMES.join(","))?;
        Ok(DiagnosticsWriter {
            out,
            path: path.to_path_buf(),
        })
    }

    /// Append one record as a data row.
    pub fn append(&mut self, rec: &DiagnosticsRecord) -> Result<(), SimError> {
        let mut row = Vec::with_capacity(DiagnosticsRecord::FIELD_NAMES.len());
        row.push(rec.step.to_string());
        row.extend(rec.float_values().iter().map(|v| fmt_f64(*v)));
        writeln!(self.out, "{}", row.join(","))
            .map_err(|e| SimError::Io(format!("cannot write {}: {e}", self.path.display())))?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), SimError> {
        self.out
            .flush()
            .map_err(|e| SimError::Io(format!("cannot flush {}: {e}", self.path.display())))
    }
}

/// Read a diagnostics CSV back into records.
pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>, SimError> {
    let file = File::open(path)
        .map_err(|e| SimError::Io(format!("cannot open {}: {e}", path.display())))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| SimError::Io(format!("{}: empty file", path.display())))??;
    let expected = DiagnosticsRecord::FIELD_NAMES.join(",");
    if header != expected {
        return Err(SimError::Io(format!(
            "{}: unexpected header `{header}`",
            path.display()
        )));
    }
    let mut records = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != DiagnosticsRecord::FIELD_NAMES.len() {
            return Err(SimError::Io(format!(
                "{}: row {} has {} columns, expected {}",
                path.display(),
                k + 2,
                cells.len(),
                DiagnosticsRecord::FIELD_NAMES.len()
            )));
        }
        let step = cells[0].trim().parse::<u64>().map_err(|_| {
            SimError::Io(format!(
                "{}: row {} has bad step `{}`",
                path.display(),
                k + 2,
                cells[0]
            ))
        })?;
        let mut floats = [0.0_f64; 18];
        for (slot, tok) in floats.iter_mut().zip(&cells[1..]) {
            *slot = parse_float(tok.trim(), "data", path)?;
        }
        records.push(DiagnosticsRecord::from_parts(step, floats));
    }
    Ok(records)
}
