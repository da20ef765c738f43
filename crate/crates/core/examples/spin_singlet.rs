// Singlet correlations of two spin-j particles from explicit matrices.

use bellbox::angle::Direction;
use bellbox::spin::{correlation, sum_twice_m_squared, sum_twice_m_squared_closed_form};
use bellbox::Spin;

pub fn run_example() -> bellbox::Result<Vec<(Spin, f64, f64)>> {
    let theta = 1.0_f64;
    let mut out = Vec::new();
    for twice in 1..=5 {
        let j = Spin::from_twice(twice)?;
        let c = correlation(j, &Direction::planar(0.0), &Direction::planar(theta))?;
        let closed = -j.casimir() / 3.0 * theta.cos();
        assert_eq!(sum_twice_m_squared(j), sum_twice_m_squared_closed_form(j));
        out.push((j, c, closed));
    }
    Ok(out)
}

fn main() -> bellbox::Result<()> {
    println!("theta = 1 rad");
    for (j, c, closed) in run_example()? {
        println!(
            "j = {j:>3}: C = {c:+.12} closed form {closed:+.12} normalized {:+.12}",
            3.0 / j.casimir() * c
        );
    }
    Ok(())
}
