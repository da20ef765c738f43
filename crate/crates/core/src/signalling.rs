//! No-signalling checks: one side's outcome statistics do not depend on the
//! other side's setting, even when the joint statistics do.

use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Direction};
use crate::error::{domain, Result};
use crate::models::CorrelationModel;
use crate::sampling::{
    box_from_expectation, mechanism, run_series, tally_series, Mechanism, Outcome, SeededGenerator,
    SettingPair,
};

/// Marginal statistics at one setting of B.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalReport {
    pub setting_label: String,
    /// Angle between A's fixed direction and this B direction.
    pub theta: f64,
    pub empirical_mean_a: f64,
    pub empirical_mean_b: f64,
    pub empirical_correlation: f64,
    pub n_trials: u64,
    /// `1/√N`, the standard error of a ±1 mean near zero.
    pub standard_error: f64,
}

impl MarginalReport {
    /// Both marginal means lie within `k` standard errors of zero.
    pub fn balanced_within(&self, k: f64) -> bool {
        self.empirical_mean_a.abs() < k * self.standard_error
            && self.empirical_mean_b.abs() < k * self.standard_error
    }
}

/// Samples `n_trials` pairs at every B direction in `beta_grid`, each grid
/// point on its own fork of `gen`.
pub fn marginal_scan(
    model: &CorrelationModel,
    alpha_fixed: &Direction,
    beta_grid: &[Direction],
    n_trials: u64,
    gen: &SeededGenerator,
) -> Result<Vec<MarginalReport>> {
    if beta_grid.is_empty() {
        return domain("empty β grid");
    }
    beta_grid
        .iter()
        .enumerate()
        .map(|(k, beta)| {
            let setting = SettingPair::new(format!("beta_{k}"), *alpha_fixed, *beta);
            let theta = setting.angle().radians();
            let tally = tally_series(
                model,
                std::slice::from_ref(&setting),
                n_trials,
                &gen.fork(k as u64),
            )?;
            Ok(MarginalReport {
                setting_label: setting.label,
                theta,
                empirical_mean_a: tally.mean_a(0),
                empirical_mean_b: tally.mean_b(0),
                empirical_correlation: tally.expectation(0),
                n_trials,
                standard_error: 1.0 / (n_trials as f64).sqrt(),
            })
        })
        .collect()
}

/// Largest absolute difference between A-marginal means across the scan.
pub fn max_marginal_spread(reports: &[MarginalReport]) -> f64 {
    let means = reports.iter().map(|r| r.empirical_mean_a);
    let hi = means.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = means.fold(f64::INFINITY, f64::min);
    hi - lo
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceRelation {
    Identical,
    Negated,
    Neither,
}

/// The two single-side sequences and how they relate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceComparison {
    pub relation: SequenceRelation,
    pub s1: Vec<Outcome>,
    pub s2: Vec<Outcome>,
}

impl SequenceComparison {
    pub fn agreements(&self) -> usize {
        self.s1.iter().zip(&self.s2).filter(|(a, b)| a == b).count()
    }

    /// Whether the sampled sequences are consistent with the relation.
    pub fn consistent(&self) -> bool {
        match self.relation {
            SequenceRelation::Identical => self.agreements() == self.s1.len(),
            SequenceRelation::Negated => self.agreements() == 0,
            SequenceRelation::Neither => true,
        }
    }
}

/// Relation between A's and B's outcome sequences at relative angle `theta`.
///
/// The relation is a property of the model: sequences are identical exactly
/// when `E(θ) = 1`, negated exactly when `E(θ) = -1`. The sampled sequences
/// are returned alongside.
pub fn sequence_relation(
    model: &CorrelationModel,
    theta: Angle,
    n_trials: u64,
    gen: &SeededGenerator,
) -> Result<SequenceComparison> {
    let setting = SettingPair::planar("pair", 0.0, theta.radians());
    let e = model.evaluate(theta)?;
    let relation = match mechanism(model) {
        Mechanism::JointBox => {
            let d = box_from_expectation(e);
            if d.always_equal() {
                SequenceRelation::Identical
            } else if d.always_different() {
                SequenceRelation::Negated
            } else {
                SequenceRelation::Neither
            }
        }
        Mechanism::LocalHiddenVariable if e.value() == 1.0 => SequenceRelation::Identical,
        Mechanism::LocalHiddenVariable if e.value() == -1.0 => SequenceRelation::Negated,
        Mechanism::LocalHiddenVariable => SequenceRelation::Neither,
    };
    let series = run_series(model, std::slice::from_ref(&setting), n_trials, gen)?;
    let (s1, s2) = series
        .records
        .iter()
        .map(|r| (r.outcomes[0].a, r.outcomes[0].b))
        .unzip();
    Ok(SequenceComparison { relation, s1, s2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn t(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    #[test]
    fn strong_scan_has_parameter_dependence_only() {
        let gen = SeededGenerator::new(21, 0);
        let grid = [
            Direction::planar(FRAC_PI_4),
            Direction::planar(3.0 * FRAC_PI_4),
        ];
        let r = marginal_scan(
            &CorrelationModel::Strong,
            &Direction::planar(0.0),
            &grid,
            100_000,
            &gen,
        )
        .unwrap();
        assert_eq!(r[0].empirical_correlation, -1.0);
        assert_eq!(r[1].empirical_correlation, 1.0);
        assert!(r.iter().all(|m| m.balanced_within(4.0)));
    }

    #[test]
    fn classical_scan_is_balanced() {
        let gen = SeededGenerator::new(22, 0);
        let grid: Vec<_> = (0..5)
            .map(|k| Direction::planar(k as f64 * PI / 4.0))
            .collect();
        let r = marginal_scan(
            &CorrelationModel::Classical,
            &Direction::planar(0.0),
            &grid,
            50_000,
            &gen,
        )
        .unwrap();
        assert!(r.iter().all(|m| m.balanced_within(4.0)));
        assert!(max_marginal_spread(&r) < 8.0 / (50_000f64).sqrt());
    }

    #[test]
    fn scan_is_reproducible_and_rejects_empty_grid() {
        let gen = SeededGenerator::new(23, 5);
        let grid = [Direction::planar(1.0)];
        let a = marginal_scan(
            &CorrelationModel::Quantum,
            &Direction::planar(0.0),
            &grid,
            10_000,
            &gen,
        )
        .unwrap();
        let b = marginal_scan(
            &CorrelationModel::Quantum,
            &Direction::planar(0.0),
            &grid,
            10_000,
            &gen,
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(marginal_scan(
            &CorrelationModel::Quantum,
            &Direction::planar(0.0),
            &[],
            10,
            &gen
        )
        .is_err());
    }

    #[test]
    fn relation_examples() {
        let gen = SeededGenerator::new(24, 0);
        let strong = CorrelationModel::Strong;
        let r = sequence_relation(&strong, t(3.0 * FRAC_PI_4), 2_000, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Identical);
        assert!(r.consistent());
        let r = sequence_relation(&strong, t(FRAC_PI_4), 2_000, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Negated);
        assert!(r.consistent());
        let r = sequence_relation(&strong, t(FRAC_PI_2), 1, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Neither);
        let r = sequence_relation(&CorrelationModel::Quantum, t(PI), 500, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Identical);
        assert!(r.consistent());
        let r = sequence_relation(&CorrelationModel::Quantum, t(1.0), 500, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Neither);
        let r = sequence_relation(&CorrelationModel::Classical, t(0.0), 500, &gen).unwrap();
        assert_eq!(r.relation, SequenceRelation::Negated);
        assert!(r.consistent());
    }
}
