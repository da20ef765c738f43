//! Local-hidden-variable feasibility of a CHSH correlation quadruple.
//!
//! A deterministic local strategy fixes `(r_α', r_α, r_β, r_β')` and induces
//! the correlation vertex `(r_α' r_β, r_α r_β, r_α r_β', r_α' r_β')`. A
//! quadruple is LHV-representable iff it lies in the convex hull of the 16
//! vertices. Membership is decided by a linear program over mixing weights;
//! the eight CHSH facets are kept as an independent criterion.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lists::LOCAL_BOUND;
use crate::models::ExpectationValue;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Outcomes `(r_α', r_α, r_β, r_β')` of a deterministic local strategy.
pub type Strategy = [i8; 4];

/// The 16 strategies; index bit `3 - i` set means outcome `i` is `-1`.
pub fn deterministic_strategies() -> [Strategy; 16] {
    std::array::from_fn(|k| std::array::from_fn(|i| if k >> (3 - i) & 1 == 1 { -1 } else { 1 }))
}

/// Correlation quadruple induced by a strategy.
pub fn vertex(s: &Strategy) -> [f64; 4] {
    let [ap, a, b, bp] = *s;
    [
        (ap * b) as f64,
        (a * b) as f64,
        (a * bp) as f64,
        (ap * bp) as f64,
    ]
}

/// Sign patterns `σ` of the eight facets `σ · E ≤ 2`, in lexicographic order
/// (`-1 < +1`). Each has an odd number of minus signs.
pub fn chsh_facets() -> [[i8; 4]; 8] {
    let mut out = Vec::with_capacity(8);
    for k in 0..16u8 {
        let s: [i8; 4] = std::array::from_fn(|i| if k >> (3 - i) & 1 == 1 { 1 } else { -1 });
        if s.iter().filter(|&&x| x < 0).count() % 2 == 1 {
            out.push(s);
        }
    }
    out.try_into().expect("eight odd patterns")
}

fn facet_value(signs: &[i8; 4], e: &[f64; 4]) -> f64 {
    signs.iter().zip(e).map(|(s, x)| *s as f64 * x).sum()
}

/// A CHSH facet and its value at the queried quadruple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub signs: [i8; 4],
    pub value: f64,
}

/// The facet with the largest value; ties go to the lexicographically
/// smallest sign pattern.
pub fn max_facet(e: &[f64; 4]) -> Facet {
    chsh_facets()
        .iter()
        .map(|s| Facet {
            signs: *s,
            value: facet_value(s, e),
        })
        .fold(None::<Facet>, |best, f| match best {
            Some(b) if b.value >= f.value => Some(b),
            _ => Some(f),
        })
        .expect("nonempty")
}

/// Facet criterion: every CHSH combination is at most `2 + tolerance`.
pub fn facet_criterion(e: &[f64; 4], tolerance: f64) -> bool {
    max_facet(e).value <= LOCAL_BOUND + tolerance
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// Weights over [`deterministic_strategies`] reproducing the input, when
    /// feasible. The global flip `r → -r` leaves correlations unchanged;
    /// weight is reported on the strategy with `r_α' = +1`.
    pub witness: Option<[f64; 16]>,
    /// Most violated CHSH facet, when infeasible.
    pub violated_facet: Option<Facet>,
    /// Minimal L1 distance from the input to a mixture of vertices.
    pub residual: f64,
}

impl FeasibilityVerdict {
    /// Correlations reproduced by the witness.
    pub fn reproduced(&self) -> Option<[f64; 4]> {
        let w = self.witness?;
        let mut e = [0.0; 4];
        for (weight, s) in w.iter().zip(deterministic_strategies()) {
            let v = vertex(&s);
            e.iter_mut().zip(v).for_each(|(x, y)| *x += weight * y);
        }
        Some(e)
    }
}

pub fn lhv_feasibility(e: [ExpectationValue; 4], tolerance: f64) -> Result<FeasibilityVerdict> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return domain(format!("tolerance {tolerance} must be nonnegative"));
    }
    let target = e.map(|x| x.value());
    let (weights, residual) = closest_mixture(&target);
    let feasible = residual <= tolerance;
    Ok(FeasibilityVerdict {
        feasible,
        witness: feasible.then(|| canonical_witness(&weights)),
        violated_facet: (!feasible).then(|| max_facet(&target)),
        residual,
    })
}

fn canonical_witness(w: &[f64]) -> [f64; 16] {
    // strategy k and its global flip 15 - k share a vertex
    let mut out = [0.0; 16];
    for k in 0..8 {
        out[k] = w[k] + w[15 - k];
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= total);
    out
}

const SUM_ROW_PENALTY: f64 = 8.0;

/// Minimizes `‖V w - e‖₁` over the probability simplex.
///
/// Columns: 16 weights, 4 positive and 4 negative residuals, one artificial
/// for the normalization row. The artificial is priced above the largest
/// possible residual change per unit weight (4), so it is zero at optimum.
fn closest_mixture(e: &[f64; 4]) -> (Vec<f64>, f64) {
    let strategies = deterministic_strategies();
    let n_cols = 16 + 8 + 1;
    let mut a = vec![vec![0.0; n_cols]; 5];
    let mut b = vec![0.0; 5];
    let mut cost = vec![0.0; n_cols];
    let mut basis = vec![0; 5];
    for i in 0..4 {
        let sign = if e[i] >= 0.0 { 1.0 } else { -1.0 };
        for (k, s) in strategies.iter().enumerate() {
            a[i][k] = sign * vertex(s)[i];
        }
        a[i][16 + i] = sign;
        a[i][20 + i] = -sign;
        b[i] = sign * e[i];
        basis[i] = if sign > 0.0 { 16 + i } else { 20 + i };
        cost[16 + i] = 1.0;
        cost[20 + i] = 1.0;
    }
    a[4][..16].fill(1.0);
    a[4][24] = 1.0;
    b[4] = 1.0;
    basis[4] = 24;
    cost[24] = SUM_ROW_PENALTY;

    let x = simplex::minimize(&a, &b, &cost, basis);
    let residual = x[16..24].iter().sum::<f64>() + x[24];
    (x[..16].to_vec(), residual)
}

mod simplex {
    //! Dense tableau simplex for `min c·x, A x = b, x ≥ 0` from a given
    //! feasible basis (identity columns, `b ≥ 0`). Bland's rule.

    const EPS: f64 = 1e-12;

    pub fn minimize(a: &[Vec<f64>], b: &[f64], c: &[f64], mut basis: Vec<usize>) -> Vec<f64> {
        let m = a.len();
        let n = c.len();
        let mut t: Vec<Vec<f64>> = a
            .iter()
            .zip(b)
            .map(|(row, rhs)| {
                let mut r = row.clone();
                r.push(*rhs);
                r
            })
            .collect();

        loop {
            // reduced costs c_j - c_B B^-1 A_j
            let entering = (0..n).find(|&j| {
                if basis.contains(&j) {
                    return false;
                }
                let z: f64 = (0..m).map(|i| c[basis[i]] * t[i][j]).sum();
                c[j] - z < -EPS
            });
            let Some(j) = entering else { break };
            let leaving = (0..m)
                .filter(|&i| t[i][j] > EPS)
                .map(|i| (t[i][n] / t[i][j], basis[i], i))
                .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            let Some((_, _, r)) = leaving else {
                unreachable!("objective is bounded below by zero")
            };
            let pivot = t[r][j];
            t[r].iter_mut().for_each(|v| *v /= pivot);
            let pivot_row = t[r].clone();
            for (i, row) in t.iter_mut().enumerate() {
                if i != r {
                    let f = row[j];
                    if f != 0.0 {
                        row.iter_mut()
                            .zip(&pivot_row)
                            .for_each(|(v, p)| *v -= f * p);
                    }
                }
            }
            basis[r] = j;
        }

        let mut x = vec![0.0; n];
        for (i, &col) in basis.iter().enumerate() {
            x[col] = t[i][n].max(0.0);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn quad(e: [f64; 4]) -> [ExpectationValue; 4] {
        e.map(|x| ExpectationValue::new(x).unwrap())
    }

    fn check_witness(v: &FeasibilityVerdict, e: [f64; 4], tol: f64) {
        let w = v.witness.expect("feasible verdict has witness");
        assert!(w.iter().all(|&x| x >= 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let r = v.reproduced().unwrap();
        for (x, y) in r.iter().zip(e) {
            assert!((x - y).abs() <= tol.max(1e-12), "{r:?} vs {e:?}");
        }
    }

    #[test]
    fn facets_are_the_chsh_patterns() {
        let f = chsh_facets();
        assert_eq!(f.len(), 8);
        assert!(f.contains(&[1, 1, 1, -1]));
        assert!(f.contains(&[-1, -1, -1, 1]));
        let mut sorted = f;
        sorted.sort();
        assert_eq!(sorted, f);
    }

    #[test]
    fn contradiction_is_infeasible() {
        let v = lhv_feasibility(quad([-1.0, -1.0, -1.0, 1.0]), DEFAULT_TOLERANCE).unwrap();
        assert!(!v.feasible);
        assert!(v.witness.is_none());
        let f = v.violated_facet.unwrap();
        assert_eq!(f.value, 4.0);
        assert_eq!(f.signs, [-1, -1, -1, 1]);
    }

    #[test]
    fn barycenter_is_feasible() {
        let v = lhv_feasibility(quad([0.0; 4]), DEFAULT_TOLERANCE).unwrap();
        assert!(v.feasible);
        assert!(v.violated_facet.is_none());
        check_witness(&v, [0.0; 4], DEFAULT_TOLERANCE);
    }

    #[test]
    fn quantum_optimum_is_infeasible() {
        let h = FRAC_1_SQRT_2;
        let v = lhv_feasibility(quad([-h, -h, -h, h]), DEFAULT_TOLERANCE).unwrap();
        assert!(!v.feasible);
        let f = v.violated_facet.unwrap();
        assert!((f.value - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn classical_optimum_is_on_boundary() {
        let e = [-0.5, -0.5, -0.5, 0.5];
        let v = lhv_feasibility(quad(e), DEFAULT_TOLERANCE).unwrap();
        assert!(v.feasible);
        check_witness(&v, e, DEFAULT_TOLERANCE);
    }

    #[test]
    fn vertices_are_point_masses() {
        for (k, s) in deterministic_strategies().iter().enumerate() {
            let e = vertex(s);
            let v = lhv_feasibility(quad(e), DEFAULT_TOLERANCE).unwrap();
            assert!(v.feasible);
            let w = v.witness.unwrap();
            let rep = if k < 8 { k } else { 15 - k };
            assert!((w[rep] - 1.0).abs() < 1e-12, "strategy {k}: {w:?}");
        }
    }

    #[test]
    fn negative_tolerance_rejected() {
        assert!(lhv_feasibility(quad([0.0; 4]), -1e-3).is_err());
        assert!(lhv_feasibility(quad([0.0; 4]), f64::NAN).is_err());
    }

    #[test]
    fn tie_breaking_prefers_lexicographic_pattern() {
        // all facets evaluate to zero
        let f = max_facet(&[0.0; 4]);
        assert_eq!(f.signs, chsh_facets()[0]);
    }
}
