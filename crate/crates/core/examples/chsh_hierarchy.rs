// CHSH value at the standard angles for each model, analytic and sampled.

use bellbox::lists::{chsh, LOCAL_BOUND, QUANTUM_BOUND};
use bellbox::sampling::tally_series;
use bellbox::{ChshSettings, CorrelationModel, SeededGenerator};

pub fn run_example() -> bellbox::Result<Vec<(String, f64, f64)>> {
    let settings = ChshSettings::default();
    let gen = SeededGenerator::new(7, 0);
    let models = [
        CorrelationModel::Classical,
        CorrelationModel::Quantum,
        CorrelationModel::Strong,
    ];
    let mut out = Vec::new();
    for (k, model) in models.iter().enumerate() {
        let [a, b, c, d] = settings.expectations(model)?;
        let analytic = chsh(a, b, c, d).value();
        let tally = tally_series(model, &settings.pairs(), 20_000, &gen.fork(k as u64))?;
        let (sampled, _) = tally.combination(&[1.0, 1.0, 1.0, -1.0]);
        out.push((model.name(), analytic, sampled));
    }
    Ok(out)
}

fn main() -> bellbox::Result<()> {
    println!("local bound {LOCAL_BOUND}, quantum bound {QUANTUM_BOUND:.4}");
    for (name, analytic, sampled) in run_example()? {
        println!("{name:>10}: S = {analytic:.4} (sampled {sampled:.4})");
    }
    Ok(())
}
