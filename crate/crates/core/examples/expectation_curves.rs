// Classical, quantum and strong correlation functions side by side.

use bellbox::models::{eval_classical, eval_noisy, eval_quantum, eval_strong};
use bellbox::{Angle, CorrelationModel};
use std::f64::consts::PI;

pub fn run_example() -> bellbox::Result<Vec<[f64; 5]>> {
    let mut rows = Vec::new();
    for k in 0..=8 {
        let theta = Angle::new(k as f64 / 8.0 * PI)?;
        rows.push([
            theta.radians(),
            eval_classical(theta).value(),
            eval_quantum(theta).value(),
            eval_strong(theta).value(),
            eval_noisy(&CorrelationModel::Strong, 0.25, theta)?.value(),
        ]);
    }
    Ok(rows)
}

fn main() -> bellbox::Result<()> {
    println!(
        "{:>8} {:>9} {:>9} {:>7} {:>11}",
        "theta", "classical", "quantum", "strong", "strong(.25)"
    );
    for [t, c, q, s, n] in run_example()? {
        println!("{t:8.4} {c:9.4} {q:9.4} {s:7.1} {n:11.4}");
    }
    Ok(())
}
