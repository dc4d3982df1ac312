//! Plain comma-separated output of zone-centre values.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use grp_core::scheme::CellGrid;
use grp_core::system::HyperbolicSystem;

use crate::error::{HarnessError, Result};

/// Renders the header `# x,<names>` and one row per zone with 17 significant digits.
pub fn render_csv<S: HyperbolicSystem<f64> + ?Sized>(grid: &CellGrid<f64>, sys: &S) -> String {
    let mut s = format!("# x,{}\n", sys.output_names().join(","));
    for (j, u) in grid.means.iter().enumerate() {
        let _ = write!(s, "{:.16e}", grid.cell_center(j));
        for v in sys.output_values(u) {
            let _ = write!(s, ",{v:.16e}");
        }
        s.push('\n');
    }
    s
}

pub fn write_csv<S: HyperbolicSystem<f64> + ?Sized>(grid: &CellGrid<f64>, sys: &S, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(render_csv(grid, sys).as_bytes())?;
    Ok(())
}

/// Column names and rows of a file written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .and_then(|(_, h)| h.strip_prefix("# "))
        .ok_or(HarnessError::Parse {
            line: 1,
            message: "missing `# x,...` header".into(),
        })?;
    let names: Vec<String> = header.split(',').map(str::to_string).collect();
    let rows = lines
        .map(|(i, l)| {
            let row = l
                .split(',')
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| HarnessError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            if row.len() != names.len() {
                return Err(HarnessError::Parse {
                    line: i + 1,
                    message: format!("expected {} columns, found {}", names.len(), row.len()),
                });
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((names, rows))
}
