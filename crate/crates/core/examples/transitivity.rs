//! Single-pooling segments are shift-equivalent; a network stacking two
//! F-poolings around a nonlinearity is not, judged end to end.

use fpool::compose::{transitivity_report, TransitivityConfig};

fn main() -> fpool::Result<()> {
    for two_d in [false, true] {
        let report = transitivity_report(&TransitivityConfig {
            two_d,
            ..TransitivityConfig::default()
        })?;
        println!("{} features:", if two_d { "2D" } else { "1D" });
        for s in &report.summaries {
            let verdict = if s.pass { "equivalent" } else { "NOT equivalent" };
            let expected = match s.expected {
                Some(true) => " (expected: equivalent)",
                Some(false) => " (expected: not equivalent)",
                None => "",
            };
            println!("  {:<30} max error {:.3e}  {verdict}{expected}", s.pipeline, s.max_error);
        }
    }
    Ok(())
}
