//! Writes every figure preset as CSV into a directory (default `figures/`).

use std::fs::{self, File};
use std::path::PathBuf;

use agl::cli::emit_csv;
use agl::experiments::{figure_preset, Figure};

fn main() -> agl::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    fs::create_dir_all(&dir)?;
    for figure in Figure::ALL {
        let result = figure_preset(figure, None)?;
        let path = dir.join(format!("{figure}.csv"));
        emit_csv(&result, File::create(&path)?)?;
        let fits: Vec<String> = result
            .fits
            .iter()
            .map(|(s, f)| format!("{s} ~ n^{:.3}", f.exponent))
            .collect();
        println!("{} ({} rows): {}", path.display(), result.rows.len(), fits.join(", "));
    }
    Ok(())
}
