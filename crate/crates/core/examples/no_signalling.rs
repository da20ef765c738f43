// A's marginal stays balanced whatever B measures; strong boxes at the
// extreme angles give identical or negated sequences.

use bellbox::angle::Direction;
use bellbox::signalling::{
    marginal_scan, max_marginal_spread, sequence_relation, SequenceRelation,
};
use bellbox::{Angle, CorrelationModel, SeededGenerator};
use std::f64::consts::FRAC_PI_4;

pub fn run_example() -> bellbox::Result<(f64, SequenceRelation, SequenceRelation)> {
    let gen = SeededGenerator::new(3, 0);
    let grid: Vec<Direction> = (0..5)
        .map(|k| Direction::planar(k as f64 * FRAC_PI_4))
        .collect();
    let reports = marginal_scan(
        &CorrelationModel::Strong,
        &Direction::planar(0.0),
        &grid,
        50_000,
        &gen,
    )?;
    let spread = max_marginal_spread(&reports);
    let near = sequence_relation(
        &CorrelationModel::Strong,
        Angle::new(FRAC_PI_4)?,
        16,
        &gen.fork(10),
    )?;
    let far = sequence_relation(
        &CorrelationModel::Strong,
        Angle::new(3.0 * FRAC_PI_4)?,
        16,
        &gen.fork(11),
    )?;
    Ok((spread, near.relation, far.relation))
}

fn main() -> bellbox::Result<()> {
    let (spread, near, far) = run_example()?;
    println!(
        "max spread of <A> over five B settings: {spread:.4} (SE ~ {:.4})",
        1.0 / 50_000f64.sqrt()
    );
    println!("theta = pi/4: {near:?}");
    println!("theta = 3pi/4: {far:?}");
    Ok(())
}
