//! The full pipeline on a metric with a pocket of negative scalar curvature.
//!
//! Pass a config path to run something else:
//! `cargo run --example negative_pocket_pipeline -- path/to/config.toml`

use std::path::PathBuf;

use roughmass::pipeline::{emit_report, run_pipeline, summary, PipelineConfig};

fn main() -> roughmass::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/negative_pocket.toml"));
    let cfg = PipelineConfig::load(&path)?;
    let result = run_pipeline(&cfg)?;
    print!("{}", summary(&result));
    emit_report(&result, &cfg.output.dir, cfg.output.plotdata)?;
    println!("report written to {}", cfg.output.dir.display());
    std::process::exit(result.exit_code());
}
