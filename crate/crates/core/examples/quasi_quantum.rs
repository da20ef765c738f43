// Quantum curve recovered from classical outcome products by a fixed
// nonlinear map.

use bellbox::models::{eval_quantum, eval_quasi_quantum_counts};
use bellbox::sampling::tally_series;
use bellbox::{Angle, CorrelationModel, SeededGenerator, SettingPair};
use std::f64::consts::PI;

pub fn run_example() -> bellbox::Result<Vec<(f64, f64, f64)>> {
    let gen = SeededGenerator::new(5, 0);
    let n = 100_000;
    let mut out = Vec::new();
    for (k, theta) in [PI / 6.0, PI / 4.0, PI / 3.0].into_iter().enumerate() {
        let pair = SettingPair::planar("pair", 0.0, theta);
        let tally = tally_series(
            &CorrelationModel::Classical,
            &[pair],
            n,
            &gen.fork(k as u64),
        )?;
        let e = eval_quasi_quantum_counts(tally.product_sums[0], n)?;
        out.push((theta, e.value(), eval_quantum(Angle::new(theta)?).value()));
    }
    Ok(out)
}

fn main() -> bellbox::Result<()> {
    for (theta, est, exact) in run_example()? {
        println!("theta = {theta:.4}: estimate {est:+.4}, -cos(theta) = {exact:+.4}");
    }
    Ok(())
}
