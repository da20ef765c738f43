// Writing a seeded trial series as CSV and reading it back.

use bellbox::records::{read_csv, write_csv};
use bellbox::sampling::run_series;
use bellbox::{ChshSettings, CorrelationModel, SeededGenerator, TrialSeries};

pub fn run_example() -> bellbox::Result<(String, TrialSeries)> {
    let series = run_series(
        &CorrelationModel::Quantum,
        &ChshSettings::default().pairs(),
        3,
        &SeededGenerator::new(11, 0),
    )?;
    let mut buf = Vec::new();
    write_csv(&series, &mut buf)?;
    let back = read_csv(buf.as_slice())?;
    Ok((String::from_utf8(buf).expect("csv is utf-8"), back))
}

fn main() -> bellbox::Result<()> {
    let (text, back) = run_example()?;
    print!("{text}");
    println!(
        "read back {} trials over {} settings",
        back.len(),
        back.labels.len()
    );
    Ok(())
}
