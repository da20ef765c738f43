// Partial sums of the sign function's Fourier series, and their leading
// harmonic reproducing the quantum curve up to a factor.

use bellbox::fourier::{
    eval_strong_fourier, first_cosine_harmonic, fourier_sgn_partial_sum, SeriesForm,
};
use bellbox::Angle;

pub fn run_example() -> bellbox::Result<Vec<(usize, f64)>> {
    let x = 0.5;
    [1, 10, 100, 1000]
        .into_iter()
        .map(|n| Ok((n, fourier_sgn_partial_sum(x, n, SeriesForm::Cosine)?)))
        .collect()
}

fn main() -> bellbox::Result<()> {
    for (n, s) in run_example()? {
        println!("{n:>5} terms at x = 0.5: {s:.6}");
    }
    let theta = Angle::new(1.0)?;
    println!(
        "theta = 1: first harmonic {:.6} = -(4/pi) cos(theta) = {:.6}; 1000-term strong curve {:.6}",
        first_cosine_harmonic(theta),
        -4.0 / std::f64::consts::PI * 1f64.cos(),
        eval_strong_fourier(theta, 1000, SeriesForm::Sine)?
    );
    Ok(())
}
