//! Ranks convention profiles on the transit suite and writes the report.
//!
//! `cargo run --release --example calibration -- [OUT]` writes `calibration/report_n3.json` by default.

use qhi::statesum::calibrate::{calibration_report, search_space};
use qhi::statesum::{CALIBRATION_N, CALIBRATION_SEED};

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "calibration/report_n3.json".into());
    let report = calibration_report(CALIBRATION_N, CALIBRATION_SEED, &search_space(), 20)?;
    println!("verdict {} over {} profiles", report.verdict, report.space_size);
    for r in report.ranked.iter().take(5) {
        println!("{:.3e} {:?}", r.residual, r.profile);
    }
    if let Some(dir) = std::path::Path::new(&out).parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&out, serde_json::to_string_pretty(&report)? + "\n")?;
    println!("wrote {out}");
    Ok(())
}
