//! Expectation functions for two dichotomic observables as a function of the
//! relative measurement angle, and the maps between them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{domain, Result};
use crate::spin::Spin;

/// Mean of the outcome product `r_a * r_b`, in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ExpectationValue(f64);

impl ExpectationValue {
    pub fn new(value: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&value) {
            return domain(format!("expectation value {value} outside [-1, 1]"));
        }
        Ok(ExpectationValue(value))
    }

    /// `E = P(equal) - P(different) = 2 P(equal) - 1`.
    pub fn from_p_equal(p_equal: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_equal) {
            return domain(format!("probability {p_equal} outside [0, 1]"));
        }
        Ok(ExpectationValue(2.0 * p_equal - 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn p_equal(self) -> f64 {
        (1.0 + self.0) / 2.0
    }

    pub fn p_different(self) -> f64 {
        (1.0 - self.0) / 2.0
    }

    // Internal constructor for values bounded by construction; clamps
    // rounding excursions past ±1.
    pub(crate) fn saturating(value: f64) -> Self {
        ExpectationValue(value.clamp(-1.0, 1.0))
    }
}

impl TryFrom<f64> for ExpectationValue {
    type Error = crate::error::Error;

    fn try_from(value: f64) -> Result<Self> {
        ExpectationValue::new(value)
    }
}

impl From<ExpectationValue> for f64 {
    fn from(e: ExpectationValue) -> f64 {
        e.0
    }
}

impl fmt::Display for ExpectationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The family of expectation functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrelationModel {
    /// Local realistic sign model, `E = 2θ/π - 1`.
    Classical,
    /// Singlet quantum correlation, `E = -cos θ`.
    Quantum,
    /// Spin-j singlet, normalized so that `E(π) = -E(0) = 1`.
    SpinJ { j: Spin },
    /// Sign box, `E = sgn(2θ/π - 1)`.
    Strong,
    /// Base model damped by noise of strength `eta`.
    Noisy {
        base: Box<CorrelationModel>,
        eta: f64,
    },
    /// Classical events reweighted globally through `-cos(π/2 (E + 1))`.
    QuasiQuantum,
}

impl CorrelationModel {
    pub fn noisy(base: CorrelationModel, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(CorrelationModel::Noisy {
            base: Box::new(base),
            eta,
        })
    }

    pub fn evaluate(&self, theta: Angle) -> Result<ExpectationValue> {
        Ok(match self {
            CorrelationModel::Classical => eval_classical(theta),
            CorrelationModel::Quantum | CorrelationModel::QuasiQuantum => eval_quantum(theta),
            CorrelationModel::SpinJ { j } => eval_spin_j_normalized(theta, *j),
            CorrelationModel::Strong => eval_strong(theta),
            CorrelationModel::Noisy { base, eta } => eval_noisy(base, *eta, theta)?,
        })
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> String {
        match self {
            CorrelationModel::Classical => "classical".into(),
            CorrelationModel::Quantum => "quantum".into(),
            CorrelationModel::SpinJ { j } => format!("spin-{j}"),
            CorrelationModel::Strong => "strong".into(),
            CorrelationModel::Noisy { base, eta } => format!("noisy({}, eta={eta})", base.name()),
            CorrelationModel::QuasiQuantum => "quasi-quantum".into(),
        }
    }
}

impl fmt::Display for CorrelationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Probability of equal outcomes in the classical model, `θ/π`.
pub fn classical_p_equal(theta: Angle) -> f64 {
    theta.radians() / PI
}

pub fn eval_classical(theta: Angle) -> ExpectationValue {
    ExpectationValue::saturating(2.0 * theta.radians() / PI - 1.0)
}

pub fn eval_quantum(theta: Angle) -> ExpectationValue {
    ExpectationValue::saturating(-theta.radians().cos())
}

/// Unnormalized singlet correlation `C(θ) = -j(j+1)/3 cos θ`.
pub fn spin_j_correlation(theta: Angle, j: Spin) -> f64 {
    -j.casimir() / 3.0 * theta.radians().cos()
}

/// `3 / (j(j+1)) * C(θ)`.
pub fn eval_spin_j_normalized(theta: Angle, j: Spin) -> ExpectationValue {
    ExpectationValue::saturating(3.0 / j.casimir() * spin_j_correlation(theta, j))
}

/// Three-valued sign: `0` exactly at the midpoint.
pub fn eval_strong(theta: Angle) -> ExpectationValue {
    ExpectationValue(sgn(2.0 * theta.radians() / PI - 1.0))
}

pub fn eval_noisy(base: &CorrelationModel, eta: f64, theta: Angle) -> Result<ExpectationValue> {
    check_eta(eta)?;
    let e = base.evaluate(theta)?;
    Ok(ExpectationValue::saturating((1.0 - eta) * e.value()))
}

pub fn classical_to_quantum(e: ExpectationValue) -> ExpectationValue {
    ExpectationValue::saturating(-(FRAC_PI_2 * (e.value() + 1.0)).cos())
}

pub fn quantum_to_classical(eq: ExpectationValue) -> ExpectationValue {
    // arccos(y) as atan2(sqrt((1-y)(1+y)), y); better conditioned near |y| = 1
    let y = -eq.value();
    let acos = ((1.0 - y) * (1.0 + y)).sqrt().atan2(y);
    ExpectationValue::saturating(2.0 * acos / PI - 1.0)
}

/// Quasi-quantum estimate from normalized outcome products `R_i = r_a r_b / N`.
pub fn eval_quasi_quantum(outcome_products: &[f64]) -> Result<ExpectationValue> {
    let total: f64 = outcome_products.iter().sum();
    quasi_quantum_from_sum(total)
}

/// Quasi-quantum estimate from an integer product sum over `n` trials; avoids
/// accumulating `1/N` terms.
pub fn eval_quasi_quantum_counts(product_sum: i64, n_trials: u64) -> Result<ExpectationValue> {
    if n_trials == 0 {
        return domain("quasi-quantum estimate needs at least one trial");
    }
    quasi_quantum_from_sum(product_sum as f64 / n_trials as f64)
}

fn quasi_quantum_from_sum(total: f64) -> Result<ExpectationValue> {
    const SLACK: f64 = 1e-12;
    if !total.is_finite() || total.abs() > 1.0 + SLACK {
        return domain(format!("normalized product sum {total} outside [-1, 1]"));
    }
    Ok(classical_to_quantum(ExpectationValue::saturating(total)))
}

pub(crate) fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("noise strength {eta} outside [0, 1]"));
    }
    Ok(())
}
