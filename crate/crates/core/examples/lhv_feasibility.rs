// Which correlation quadruples a mixture of deterministic strategies can reach.

use bellbox::feasibility::DEFAULT_TOLERANCE;
use bellbox::models::ExpectationValue;
use bellbox::{lhv_feasibility, ChshSettings, CorrelationModel, FeasibilityVerdict};

pub fn run_example() -> bellbox::Result<Vec<(String, FeasibilityVerdict)>> {
    let settings = ChshSettings::default();
    let mut out = Vec::new();
    for model in [
        CorrelationModel::Classical,
        CorrelationModel::Quantum,
        CorrelationModel::Strong,
    ] {
        let e = settings.expectations(&model)?;
        out.push((model.name(), lhv_feasibility(e, DEFAULT_TOLERANCE)?));
    }
    let mid = [0.3, -0.1, 0.2, 0.0].map(|x| ExpectationValue::new(x).unwrap());
    out.push((
        "hand-picked".into(),
        lhv_feasibility(mid, DEFAULT_TOLERANCE)?,
    ));
    Ok(out)
}

fn main() -> bellbox::Result<()> {
    for (name, v) in run_example()? {
        match v.violated_facet {
            None => println!("{name}: feasible, mixture weights {:?}", v.witness.unwrap()),
            Some(f) => println!(
                "{name}: infeasible, facet {:?} reaches {:.4}",
                f.signs, f.value
            ),
        }
    }
    Ok(())
}
