//! The four-list experiment: sign-difference counts between lists of
//! outcomes, the path inequality they satisfy, and the CHSH combination.
//!
//! Observer A records lists for directions `α'` and `α`, observer B for `β`
//! and `β'`. Going from list `α'` to list `β'` along `α' → β → α → β'` flips
//! at most `n(α',β) + n(α,β) + n(α,β')` signs, so
//! `n(α',β) + n(α,β) + n(α,β') ≥ n(α',β')`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ExpectationValue;
use crate::sampling::{Outcome, TrialSeries, CHSH_LABELS};

pub const LOCAL_BOUND: f64 = 2.0;
pub const QUANTUM_BOUND: f64 = std::f64::consts::SQRT_2 * 2.0;
pub const ALGEBRAIC_BOUND: f64 = 4.0;

/// Number of positions at which the two lists differ in sign.
pub fn count_differences(x: &[Outcome], y: &[Outcome]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// `⟨x y⟩` estimated from the difference count, `1 - 2n/N`. Equal to the mean
/// of the products `Σ x_i y_i / N`; both are formed over the same integer
/// numerator.
pub fn estimate_expectation(x: &[Outcome], y: &[Outcome]) -> Result<ExpectationValue> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("lists must be nonempty"));
    }
    let n = count_differences(x, y)? as i64;
    let total = x.len() as i64;
    let from_counts = total - 2 * n;
    let from_products: i64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a.value() * b.value()) as i64)
        .sum();
    debug_assert_eq!(from_counts, from_products);
    ExpectationValue::new(from_counts as f64 / total as f64)
}

/// `E(α',β) + E(α,β) + E(α,β') - E(α',β')`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChshScore(pub f64);

impl ChshScore {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn magnitude(self) -> f64 {
        self.0.abs()
    }

    pub fn violates_local_bound(self, tolerance: f64) -> bool {
        self.magnitude() > LOCAL_BOUND + tolerance
    }
}

pub fn chsh(
    e_ap_b: ExpectationValue,
    e_a_b: ExpectationValue,
    e_a_bp: ExpectationValue,
    e_ap_bp: ExpectationValue,
) -> ChshScore {
    ChshScore(e_ap_b.value() + e_a_b.value() + e_a_bp.value() - e_ap_bp.value())
}

/// The four outcome lists of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourLists {
    pub alpha_prime: Vec<Outcome>,
    pub alpha: Vec<Outcome>,
    pub beta: Vec<Outcome>,
    pub beta_prime: Vec<Outcome>,
}

impl FourLists {
    pub fn new(
        alpha_prime: Vec<Outcome>,
        alpha: Vec<Outcome>,
        beta: Vec<Outcome>,
        beta_prime: Vec<Outcome>,
    ) -> Result<Self> {
        let n = alpha_prime.len();
        if n == 0 {
            return Err(Error::Empty("lists must be nonempty"));
        }
        for other in [&alpha, &beta, &beta_prime] {
            if other.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: other.len(),
                });
            }
        }
        Ok(FourLists {
            alpha_prime,
            alpha,
            beta,
            beta_prime,
        })
    }

    /// Extracts the lists from a series over the four CHSH setting pairs.
    ///
    /// Every list is read from two setting pairs; the series is rejected
    /// unless both readings agree trial by trial, which holds exactly when a
    /// single quadruple of outcomes underlies each trial.
    pub fn from_series(series: &TrialSeries) -> Result<Self> {
        let column = |label: &str| {
            series
                .column(label)
                .ok_or_else(|| Error::Inconsistent(format!("series has no {label:?} setting")))
        };
        let [ap_b, a_b, a_bp, ap_bp] = CHSH_LABELS.map(column);
        let (ap_b, a_b, a_bp, ap_bp) = (ap_b?, a_b?, a_bp?, ap_bp?);
        if ap_b.is_empty() {
            return Err(Error::Empty("series has no trials"));
        }
        for (i, r) in series.records.iter().enumerate() {
            let (x, y, z, w) = (ap_b[i], a_b[i], a_bp[i], ap_bp[i]);
            if x.b != y.b || y.a != z.a || x.a != w.a || z.b != w.b {
                return Err(Error::Inconsistent(format!(
                    "trial {} admits no single assignment of (α', α, β, β')",
                    r.index
                )));
            }
        }
        FourLists::new(
            ap_b.iter().map(|p| p.a).collect(),
            a_b.iter().map(|p| p.a).collect(),
            ap_b.iter().map(|p| p.b).collect(),
            a_bp.iter().map(|p| p.b).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn counts(&self) -> CountSummary {
        let n = |x: &[Outcome], y: &[Outcome]| {
            count_differences(x, y).expect("lengths checked on construction") as u64
        };
        CountSummary {
            n_trials: self.len() as u64,
            n_ap_b: n(&self.alpha_prime, &self.beta),
            n_a_b: n(&self.alpha, &self.beta),
            n_a_bp: n(&self.alpha, &self.beta_prime),
            n_ap_bp: n(&self.alpha_prime, &self.beta_prime),
        }
    }
}

/// Differing-sign counts of the four list pairs over `n_trials` trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSummary {
    pub n_trials: u64,
    pub n_ap_b: u64,
    pub n_a_b: u64,
    pub n_a_bp: u64,
    pub n_ap_bp: u64,
}

impl CountSummary {
    pub fn new(n_trials: u64, n_ap_b: u64, n_a_b: u64, n_a_bp: u64, n_ap_bp: u64) -> Result<Self> {
        if [n_ap_b, n_a_b, n_a_bp, n_ap_bp]
            .iter()
            .any(|&n| n > n_trials)
        {
            return Err(Error::Domain(format!(
                "counts exceed the number of trials {n_trials}"
            )));
        }
        Ok(CountSummary {
            n_trials,
            n_ap_b,
            n_a_b,
            n_a_bp,
            n_ap_bp,
        })
    }

    pub fn differences(&self) -> [u64; 4] {
        [self.n_ap_b, self.n_a_b, self.n_a_bp, self.n_ap_bp]
    }

    /// Equal-sign counts `u = N - n`.
    pub fn agreements(&self) -> [u64; 4] {
        self.differences().map(|n| self.n_trials - n)
    }

    pub fn expectations(&self) -> Result<[ExpectationValue; 4]> {
        if self.n_trials == 0 {
            return Err(Error::Empty("no trials"));
        }
        let total = self.n_trials as f64;
        let e =
            |n: u64| ExpectationValue::new((self.n_trials as i64 - 2 * n as i64) as f64 / total);
        let [a, b, c, d] = self.differences();
        Ok([e(a)?, e(b)?, e(c)?, e(d)?])
    }
}

/// Outcome of the path inequality for both difference and agreement counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountInequality {
    pub holds: bool,
    /// `n(α',β) + n(α,β) + n(α,β') - n(α',β')`
    pub slack: i64,
    pub holds_agreements: bool,
    /// The same with `u` in place of `n`.
    pub slack_agreements: i64,
}

pub fn check_count_inequality(c: &CountSummary) -> CountInequality {
    let slack = |[x, y, z, w]: [u64; 4]| x as i64 + y as i64 + z as i64 - w as i64;
    let s = slack(c.differences());
    let u = slack(c.agreements());
    CountInequality {
        holds: s >= 0,
        slack: s,
        holds_agreements: u >= 0,
        slack_agreements: u,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourListReport {
    pub counts: CountSummary,
    pub inequality: CountInequality,
    pub expectations: [ExpectationValue; 4],
    pub chsh: ChshScore,
}

/// Counts, path inequality and CHSH value for a series whose trials each
/// carry one consistent quadruple of outcomes (as local runs do).
pub fn run_four_list_experiment(series: &TrialSeries) -> Result<FourListReport> {
    let lists = FourLists::from_series(series)?;
    four_list_report(&lists)
}

pub fn four_list_report(lists: &FourLists) -> Result<FourListReport> {
    let counts = lists.counts();
    let expectations = counts.expectations()?;
    let [a, b, c, d] = expectations;
    Ok(FourListReport {
        counts,
        inequality: check_count_inequality(&counts),
        expectations,
        chsh: chsh(a, b, c, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{OutcomePair, TrialRecord};
    use proptest::prelude::*;
    use Outcome::{Minus as M, Plus as P};

    #[test]
    fn difference_counts() {
        let x = vec![P, M, P, P];
        let neg: Vec<_> = x.iter().map(|o| o.flipped()).collect();
        assert_eq!(count_differences(&x, &x).unwrap(), 0);
        assert_eq!(count_differences(&x, &neg).unwrap(), 4);
        assert_eq!(count_differences(&[P, P, M], &[P, M, M]).unwrap(), 1);
        assert!(matches!(
            count_differences(&[P], &[P, M]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn expectation_estimates() {
        let x = vec![P, M, P, M];
        let neg: Vec<_> = x.iter().map(|o| o.flipped()).collect();
        assert_eq!(estimate_expectation(&x, &x).unwrap().value(), 1.0);
        assert_eq!(estimate_expectation(&x, &neg).unwrap().value(), -1.0);
        assert_eq!(
            estimate_expectation(&[P, P, P, P], &[P, P, P, M])
                .unwrap()
                .value(),
            0.5
        );
        assert!(estimate_expectation(&[], &[]).is_err());
    }

    #[test]
    fn inequality_examples() {
        let zero = CountSummary::new(10, 0, 0, 0, 0).unwrap();
        let r = check_count_inequality(&zero);
        assert!(r.holds && r.slack == 0);
        let contradiction = CountSummary::new(7, 0, 0, 0, 7).unwrap();
        let r = check_count_inequality(&contradiction);
        assert!(!r.holds);
        assert_eq!(r.slack, -7);
        // the u-version of the same violation: u = (N, N, N, 0)
        let flipped = CountSummary::new(7, 7, 7, 7, 0).unwrap();
        let r = check_count_inequality(&flipped);
        assert!(!r.holds_agreements);
        assert_eq!(r.slack_agreements, -7);
        assert!(CountSummary::new(3, 4, 0, 0, 0).is_err());
    }

    #[test]
    fn chsh_values() {
        let ev = |x| ExpectationValue::new(x).unwrap();
        let s = chsh(ev(-1.0), ev(-1.0), ev(-1.0), ev(1.0));
        assert_eq!(s.magnitude(), 4.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = chsh(ev(-h), ev(-h), ev(-h), ev(h));
        assert!((s.magnitude() - QUANTUM_BOUND).abs() < 1e-15);
        let s = chsh(ev(-0.5), ev(-0.5), ev(-0.5), ev(0.5));
        assert_eq!(s.magnitude(), 2.0);
        assert!(!s.violates_local_bound(0.0));
    }

    #[test]
    fn single_all_plus_trial() {
        let l = FourLists::new(vec![P], vec![P], vec![P], vec![P]).unwrap();
        let r = four_list_report(&l).unwrap();
        assert_eq!(r.counts.differences(), [0; 4]);
        assert_eq!(r.chsh.value(), 2.0);
    }

    #[test]
    fn rejects_unequal_lists() {
        assert!(FourLists::new(vec![P], vec![P, M], vec![P], vec![P]).is_err());
        assert!(FourLists::new(vec![], vec![], vec![], vec![]).is_err());
    }

    fn series_of(quads: &[[OutcomePair; 4]]) -> TrialSeries {
        TrialSeries {
            labels: CHSH_LABELS.iter().map(|s| s.to_string()).collect(),
            records: quads
                .iter()
                .enumerate()
                .map(|(i, q)| TrialRecord {
                    index: i as u64,
                    hidden: None,
                    outcomes: q.to_vec(),
                })
                .collect(),
        }
    }

    #[test]
    fn inconsistent_series_rejected() {
        let pp = OutcomePair::new(P, P);
        let pm = OutcomePair::new(P, M);
        // ap_b says β = +, a_b says β = -
        let s = series_of(&[[pp, pm, pp, pp]]);
        assert!(matches!(
            run_four_list_experiment(&s),
            Err(Error::Inconsistent(_))
        ));
        let ok = series_of(&[[pp, pp, pp, pp]]);
        assert!(run_four_list_experiment(&ok).is_ok());
        let mut missing = ok.clone();
        missing.labels[3] = "other".into();
        assert!(run_four_list_experiment(&missing).is_err());
    }

    fn arb_lists() -> impl Strategy<Value = FourLists> {
        (1usize..200).prop_flat_map(|n| {
            prop::collection::vec(prop::array::uniform4(any::<bool>()), n).prop_map(|rows| {
                let o = |b: bool| if b { P } else { M };
                let col = |k: usize| rows.iter().map(|r| o(r[k])).collect::<Vec<_>>();
                FourLists::new(col(0), col(1), col(2), col(3)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn path_inequality_always_holds(lists in arb_lists()) {
            let r = check_count_inequality(&lists.counts());
            prop_assert!(r.holds && r.holds_agreements);
            let report = four_list_report(&lists).unwrap();
            prop_assert!(report.chsh.magnitude() <= LOCAL_BOUND + 1e-12);
        }

        #[test]
        fn count_and_product_estimates_agree(lists in arb_lists()) {
            let e = estimate_expectation(&lists.alpha, &lists.beta).unwrap().value();
            let n = lists.len() as f64;
            let direct: i64 = lists.alpha.iter().zip(&lists.beta).map(|(a, b)| (a.value() * b.value()) as i64).sum();
            prop_assert_eq!(e, direct as f64 / n);
        }

        #[test]
        fn chsh_algebraic_bound(e in prop::array::uniform4(-1.0f64..=1.0)) {
            let ev = e.map(|x| ExpectationValue::new(x).unwrap());
            let s = chsh(ev[0], ev[1], ev[2], ev[3]);
            prop_assert!(s.magnitude() <= ALGEBRAIC_BOUND);
            if s.magnitude() == ALGEBRAIC_BOUND {
                prop_assert!(e.iter().all(|x| x.abs() == 1.0));
            }
        }
    }
}
