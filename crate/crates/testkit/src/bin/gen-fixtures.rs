//! Regenerate the bundled fixtures: `gen-fixtures [OUT_DIR]` (default `fixtures`).

use std::path::PathBuf;

use teamsignal_testkit::{figure_survey_csv, fixture_specs, SyntheticExport};

fn main() -> std::io::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    let exports = out.join("exports");
    if exports.exists() {
        std::fs::remove_dir_all(&exports)?;
    }
    for spec in fixture_specs() {
        let dir = SyntheticExport::generate(&spec).write_dir(&exports)?;
        println!("wrote {}", dir.display());
    }
    std::fs::write(out.join("survey.csv"), figure_survey_csv())?;
    println!("wrote {}", out.join("survey.csv").display());
    Ok(())
}
