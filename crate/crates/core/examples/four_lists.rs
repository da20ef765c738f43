// Four outcome lists from a local model and the difference-count inequality.

use bellbox::lists::four_list_report;
use bellbox::sampling::run_series;
use bellbox::{ChshSettings, CorrelationModel, FourLists, SeededGenerator};

pub fn run_example() -> bellbox::Result<FourLists> {
    let series = run_series(
        &CorrelationModel::Classical,
        &ChshSettings::default().pairs(),
        12,
        &SeededGenerator::new(1, 0),
    )?;
    FourLists::from_series(&series)
}

fn main() -> bellbox::Result<()> {
    let lists = run_example()?;
    let row = |xs: &[bellbox::Outcome]| xs.iter().map(|o| o.symbol()).collect::<String>();
    println!("a' {}", row(&lists.alpha_prime));
    println!("a  {}", row(&lists.alpha));
    println!("b  {}", row(&lists.beta));
    println!("b' {}", row(&lists.beta_prime));
    let report = four_list_report(&lists)?;
    let [n1, n2, n3, n4] = report.counts.differences();
    println!("n(a'b)={n1} n(ab)={n2} n(ab')={n3} n(a'b')={n4}");
    println!(
        "n(a'b') <= n(a'b)+n(ab)+n(ab'): {} (slack {})",
        report.inequality.holds, report.inequality.slack
    );
    println!("S = {}", report.chsh.value());
    Ok(())
}
