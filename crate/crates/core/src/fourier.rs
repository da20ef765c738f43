//! Truncated Fourier series of the sign function on `(-π, π)`, and its link to
//! the sign box.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{domain, Result};
use crate::models::eval_classical;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesForm {
    /// `4/π Σ sin((2n+1)x) / (2n+1)`
    Sine,
    /// `4/π Σ (-1)^n cos((2n+1)(x - π/2)) / (2n+1)`
    Cosine,
}

/// Partial sum of the sign series with `terms` harmonics.
pub fn fourier_sgn_partial_sum(x: f64, terms: usize, form: SeriesForm) -> Result<f64> {
    if !(x > -PI && x < PI) {
        return domain(format!("x = {x} outside (-π, π)"));
    }
    if terms == 0 {
        return domain("at least one term is required");
    }
    let shifted = x - FRAC_PI_2;
    let mut sum = 0.0;
    let mut carry = 0.0;
    for n in 0..terms {
        let k = (2 * n + 1) as f64;
        let term = match form {
            SeriesForm::Sine => (k * x).sin() / k,
            SeriesForm::Cosine => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * (k * shifted).cos() / k
            }
        };
        // Kahan summation
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(4.0 / PI * sum)
}

/// Series argument for which `sgn(x)` is the sign box: `x = (π/2) E(θ) = θ - π/2`
/// with `E` the classical expectation function. Under this map the first
/// cosine harmonic is `-(4/π) cos θ`, the quantum curve up to the factor `4/π`.
pub fn strong_series_argument(theta: Angle) -> f64 {
    FRAC_PI_2 * eval_classical(theta).value()
}

/// Sign box evaluated through its truncated Fourier series.
pub fn eval_strong_fourier(theta: Angle, terms: usize, form: SeriesForm) -> Result<f64> {
    fourier_sgn_partial_sum(strong_series_argument(theta), terms, form)
}

/// Leading (`n = 0`) cosine harmonic at the sign box argument.
pub fn first_cosine_harmonic(theta: Angle) -> f64 {
    4.0 / PI * (strong_series_argument(theta) - FRAC_PI_2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{eval_quantum, eval_strong};

    fn direct_sine(x: f64, terms: usize) -> f64 {
        // oracle: naive summation, no compensation
        (0..terms)
            .map(|n| ((2 * n + 1) as f64 * x).sin() / (2 * n + 1) as f64)
            .sum::<f64>()
            * 4.0
            / PI
    }

    #[test]
    fn zero_is_fixed() {
        for terms in [1, 7, 500] {
            assert_eq!(
                fourier_sgn_partial_sum(0.0, terms, SeriesForm::Sine).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn first_term_at_half_pi() {
        let v = fourier_sgn_partial_sum(FRAC_PI_2, 1, SeriesForm::Sine).unwrap();
        assert!((v - 1.273_239_544_735_162_7).abs() < 1e-15);
    }

    #[test]
    fn converges_at_half_pi() {
        let v = fourier_sgn_partial_sum(FRAC_PI_2, 10_000, SeriesForm::Sine).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
        assert!((v - direct_sine(FRAC_PI_2, 10_000)).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        assert!(fourier_sgn_partial_sum(PI, 3, SeriesForm::Sine).is_err());
        assert!(fourier_sgn_partial_sum(-PI, 3, SeriesForm::Cosine).is_err());
        assert!(fourier_sgn_partial_sum(0.5, 0, SeriesForm::Sine).is_err());
    }

    #[test]
    fn forms_agree() {
        for i in 1..200 {
            let x = -PI + 2.0 * PI * i as f64 / 200.0;
            for terms in [1, 2, 17, 300] {
                let s = fourier_sgn_partial_sum(x, terms, SeriesForm::Sine).unwrap();
                let c = fourier_sgn_partial_sum(x, terms, SeriesForm::Cosine).unwrap();
                assert!((s - c).abs() < 1e-12, "x={x} terms={terms}");
            }
        }
    }

    #[test]
    fn error_shrinks_with_order() {
        let xs: Vec<f64> = (0..400)
            .map(|i| 0.1 + (PI - 0.2) * i as f64 / 399.0)
            .flat_map(|x| [x, -x])
            .collect();
        let max_err = |terms| {
            xs.iter()
                .map(|&x| {
                    let v = fourier_sgn_partial_sum(x, terms, SeriesForm::Sine).unwrap();
                    (v - x.signum()).abs()
                })
                .fold(0.0, f64::max)
        };
        let errs: Vec<f64> = [10, 100, 1000].into_iter().map(max_err).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn first_harmonic_tracks_quantum_curve() {
        for i in 0..=180 {
            let t = Angle::new(PI * i as f64 / 180.0).unwrap();
            let ratio_form = first_cosine_harmonic(t) - 4.0 / PI * eval_quantum(t).value();
            assert!(ratio_form.abs() < 1e-12);
            // the other candidate argument, (π/2)(E + 1), gives sin θ instead
            let alt = 4.0 / PI * (FRAC_PI_2 * (eval_classical(t).value() + 1.0) - FRAC_PI_2).cos();
            assert!((alt - 4.0 / PI * t.radians().sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn series_reproduces_sign_box_away_from_midpoint() {
        for i in 0..=36 {
            let t = Angle::new(PI * i as f64 / 36.0).unwrap();
            let x = strong_series_argument(t);
            if x.abs() < 0.1 && x != 0.0 {
                continue;
            }
            let v = eval_strong_fourier(t, 5_000, SeriesForm::Cosine).unwrap();
            assert!(
                (v - eval_strong(t).value()).abs() < 2e-3,
                "θ={}",
                t.radians()
            );
        }
    }
}
