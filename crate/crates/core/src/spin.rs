//! Angular momentum matrices for spin `j`, the two-particle singlet, and the
//! singlet correlation of spin projections along two directions.
//!
//! Basis ordering is `|j, m>` with `m = j, j-1, ..., -j`; index `k` holds
//! `m = j - k`. Two-particle states use the Kronecker product ordering
//! `k_a * (2j+1) + k_b`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Direction};
use crate::error::{domain, Error, Result};
use crate::models::ExpectationValue;

/// Largest spin for which matrices are built, as `2j`.
pub const MAX_TWICE_J: u32 = 25;

type CMatrix = DMatrix<Complex64>;
type CVector = DVector<Complex64>;

/// A positive half-integer spin quantum number, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return domain("spin must be positive");
        }
        Ok(Spin { twice })
    }

    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice <= 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return domain(format!("spin {j} is not a positive half-integer"));
        }
        Spin::from_twice(twice as u32)
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `2j + 1`
    pub fn multiplicity(self) -> usize {
        self.twice as usize + 1
    }

    /// `j(j + 1)`
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }

    /// Doubled magnetic quantum numbers `2m`, from `2j` down to `-2j`.
    pub fn twice_m_values(self) -> impl Iterator<Item = i64> {
        let t = self.twice as i64;
        (0..=t).map(move |k| t - 2 * k)
    }

    fn check_supported(self) -> Result<()> {
        if self.twice > MAX_TWICE_J {
            return domain(format!(
                "spin {self} exceeds the supported maximum {}/2",
                MAX_TWICE_J
            ));
        }
        Ok(())
    }
}

impl TryFrom<f64> for Spin {
    type Error = Error;

    fn try_from(j: f64) -> Result<Self> {
        Spin::new(j)
    }
}

impl From<Spin> for f64 {
    fn from(s: Spin) -> f64 {
        s.value()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `"3/2"`, `"1"` or `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad spin {s:?}")))?;
            return match den.trim() {
                "2" => Spin::from_twice(num),
                "1" => Spin::from_twice(num.saturating_mul(2)),
                _ => domain(format!("spin {s:?} is not a half-integer")),
            };
        }
        let j: f64 = s
            .parse()
            .map_err(|_| Error::Domain(format!("bad spin {s:?}")))?;
        Spin::new(j)
    }
}

/// `Σ_{m=-j}^{j} (2m)^2`, exact.
pub fn sum_twice_m_squared(j: Spin) -> u64 {
    j.twice_m_values().map(|m| (m * m) as u64).sum()
}

/// Closed form of `Σ (2m)^2`: `4 j(j+1)(2j+1)/3 = 2j (2j+2) (2j+1) / 3`.
pub fn sum_twice_m_squared_closed_form(j: Spin) -> u64 {
    let t = j.twice as u64;
    t * (t + 2) * (t + 1) / 3
}

/// Spin matrices in the `|j, m>` basis.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub j: Spin,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
    pub jx: CMatrix,
    pub jy: CMatrix,
}

impl SpinOperators {
    pub fn build(j: Spin) -> Result<Self> {
        j.check_supported()?;
        let d = j.multiplicity();
        let jj = j.casimir();
        let m_of = |k: usize| j.value() - k as f64;

        let jz = CMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(m_of(r), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        // J+ |j m> = sqrt(j(j+1) - m(m+1)) |j m+1>; m+1 sits one row above m
        let jplus = CMatrix::from_fn(d, d, |r, c| {
            if r + 1 == c {
                let m = m_of(c);
                Complex64::new((jj - m * (m + 1.0)).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus) * Complex64::new(0.5, 0.0);
        // (J+ - J-) / 2i
        let jy = (&jplus - &jminus) * Complex64::new(0.0, -0.5);
        Ok(SpinOperators {
            j,
            jz,
            jplus,
            jminus,
            jx,
            jy,
        })
    }

    /// `n · J`
    pub fn along(&self, n: &Direction) -> CMatrix {
        let [x, y, z] = n.components();
        &self.jx * Complex64::new(x, 0.0)
            + &self.jy * Complex64::new(y, 0.0)
            + &self.jz * Complex64::new(z, 0.0)
    }

    /// `jx² + jy² + jz²`
    pub fn casimir_matrix(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

/// The total angular momentum zero state of two spin-`j` particles.
#[derive(Clone, Debug)]
pub struct SingletState {
    pub j: Spin,
    pub coefficients: CVector,
}

impl SingletState {
    /// Coefficient of `|j m> ⊗ |j -m>` is `(-1)^(j-m) / sqrt(2j+1)`.
    pub fn build(j: Spin) -> Result<Self> {
        j.check_supported()?;
        let d = j.multiplicity();
        let norm = 1.0 / (d as f64).sqrt();
        let mut coefficients = CVector::zeros(d * d);
        for k_a in 0..d {
            // j - m = k_a; partner has m_b = -m, i.e. index d - 1 - k_a
            let k_b = d - 1 - k_a;
            let sign = if k_a % 2 == 0 { 1.0 } else { -1.0 };
            coefficients[k_a * d + k_b] = Complex64::new(sign * norm, 0.0);
        }
        Ok(SingletState { j, coefficients })
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }

    /// `<ψ| op |ψ>` for an operator on the two-particle space.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        self.coefficients.dotc(&(op * &self.coefficients))
    }
}

fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Components of the total angular momentum `J ⊗ 1 + 1 ⊗ J`.
pub fn total_angular_momentum(ops: &SpinOperators) -> [CMatrix; 3] {
    let id = identity(ops.j.multiplicity());
    [&ops.jx, &ops.jy, &ops.jz].map(|m| m.kronecker(&id) + id.kronecker(m))
}

/// Total `J²` on the two-particle space.
pub fn total_casimir(ops: &SpinOperators) -> CMatrix {
    let [x, y, z] = total_angular_momentum(ops);
    &x * &x + &y * &y + &z * &z
}

/// Imaginary parts larger than this are treated as an error.
const IMAGINARY_TOLERANCE: f64 = 1e-12;

/// `<00| (α·J) ⊗ (β·J) |00>` by explicit tensor-product contraction.
pub fn correlation(j: Spin, alpha: &Direction, beta: &Direction) -> Result<f64> {
    let ops = SpinOperators::build(j)?;
    let singlet = SingletState::build(j)?;
    correlation_with(&ops, &singlet, alpha, beta)
}

/// As [`correlation`], reusing prebuilt matrices.
pub fn correlation_with(
    ops: &SpinOperators,
    singlet: &SingletState,
    alpha: &Direction,
    beta: &Direction,
) -> Result<f64> {
    let joint = ops.along(alpha).kronecker(&ops.along(beta));
    let value = singlet.expectation(&joint);
    if value.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::Domain(format!(
            "correlation has imaginary part {}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Correlation with `α` along z after the magnetic sum has been reduced to
/// `-β_z/(2j+1) Σ m²`.
pub fn reduced_correlation_alpha_z(j: Spin, beta: &Direction) -> f64 {
    let sum_m2 = sum_twice_m_squared(j) as f64 / 4.0;
    -beta.components()[2] * sum_m2 / j.multiplicity() as f64
}

/// `3/(j(j+1)) · C(θ)` from the matrix contraction, with planar directions
/// separated by `theta`.
pub fn normalized_correlation(j: Spin, theta: Angle) -> Result<ExpectationValue> {
    let alpha = Direction::planar(0.0);
    let beta = Direction::planar(theta.radians());
    let c = correlation(j, &alpha, &beta)?;
    Ok(ExpectationValue::saturating(3.0 / j.casimir() * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::spin_j_correlation;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn spin(s: &str) -> Spin {
        s.parse().unwrap()
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn parses_half_integers() {
        assert_eq!(spin("1/2").twice(), 1);
        assert_eq!(spin("3/2").twice(), 3);
        assert_eq!(spin("2").twice(), 4);
        assert_eq!(spin("2.5").twice(), 5);
        assert!("0.3".parse::<Spin>().is_err());
        assert!("0".parse::<Spin>().is_err());
        assert!("-1/2".parse::<Spin>().is_err());
        assert!("1/3".parse::<Spin>().is_err());
        assert_eq!(spin("5/2").to_string(), "5/2");
        assert_eq!(spin("1").to_string(), "1");
    }

    #[test]
    fn jz_is_diagonal_m() {
        let ops = SpinOperators::build(spin("1/2")).unwrap();
        assert_eq!(ops.jz[(0, 0)].re, 0.5);
        assert_eq!(ops.jz[(1, 1)].re, -0.5);
        let ops = SpinOperators::build(spin("1")).unwrap();
        let diag: Vec<f64> = (0..3).map(|k| ops.jz[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn commutators_and_casimir() {
        let i = Complex64::new(0.0, 1.0);
        for twice in 1..=MAX_TWICE_J {
            let j = Spin::from_twice(twice).unwrap();
            let o = SpinOperators::build(j).unwrap();
            let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
            assert!(max_abs(&(comm(&o.jx, &o.jy) - &o.jz * i)) < 1e-12);
            assert!(max_abs(&(comm(&o.jy, &o.jz) - &o.jx * i)) < 1e-12);
            assert!(max_abs(&(comm(&o.jz, &o.jx) - &o.jy * i)) < 1e-12);
            let expected = identity(j.multiplicity()) * Complex64::new(j.casimir(), 0.0);
            assert!(max_abs(&(o.casimir_matrix() - expected)) < 1e-12 * j.casimir().max(1.0));
        }
        let half = SpinOperators::build(spin("1/2")).unwrap();
        let exact = &half.jx * &half.jy - &half.jy * &half.jx - &half.jz * i;
        assert_eq!(max_abs(&exact), 0.0);
    }

    #[test]
    fn rejects_unsupported_spin() {
        assert!(SpinOperators::build(Spin::from_twice(27).unwrap()).is_err());
        assert!(SingletState::build(Spin::from_twice(26).unwrap()).is_err());
    }

    #[test]
    fn spin_half_singlet_is_textbook() {
        let s = SingletState::build(spin("1/2")).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let c: Vec<f64> = s.coefficients.iter().map(|z| z.re).collect();
        // |↑↑>, |↑↓>, |↓↑>, |↓↓>
        assert_eq!(c, vec![0.0, r, -r, 0.0]);
    }

    #[test]
    fn singlet_has_zero_total_angular_momentum() {
        for twice in 1..=10 {
            let j = Spin::from_twice(twice).unwrap();
            let ops = SpinOperators::build(j).unwrap();
            let s = SingletState::build(j).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
            let [_, _, jz] = total_angular_momentum(&ops);
            assert!((&jz * &s.coefficients).norm() < 1e-12);
            let j2 = total_casimir(&ops);
            assert!(s.expectation(&j2).norm() < 1e-10);
            assert!((&j2 * &s.coefficients).norm() < 1e-10);
        }
    }

    #[test]
    fn correlation_examples() {
        let z = Direction::planar(0.0);
        let c = correlation(spin("1/2"), &z, &z).unwrap();
        assert!((c + 0.25).abs() < 1e-15);
        for s in ["1/2", "1", "7/2"] {
            let c = correlation(spin(s), &z, &Direction::planar(FRAC_PI_2)).unwrap();
            assert!(c.abs() < 1e-12);
        }
        let c = correlation(spin("2"), &z, &Direction::planar(FRAC_PI_3)).unwrap();
        assert!((c + 1.0).abs() < 1e-10);
        let c = correlation(spin("1"), &z, &z).unwrap();
        assert!((c + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn normalized_examples() {
        let t = |x| Angle::new(x).unwrap();
        let e = normalized_correlation(spin("1/2"), t(PI)).unwrap();
        assert!((e.value() - 1.0).abs() < 1e-12);
        let e = normalized_correlation(spin("5/2"), t(FRAC_PI_2)).unwrap();
        assert!(e.value().abs() < 1e-12);
        let e = normalized_correlation(spin("3/2"), t(2.0 * PI / 3.0)).unwrap();
        assert!((e.value() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn rotational_invariance() {
        let j = spin("3/2");
        let ops = SpinOperators::build(j).unwrap();
        let s = SingletState::build(j).unwrap();
        for k in 0..40 {
            let a = Direction::spherical(0.37 * k as f64, 1.1 * k as f64 + 0.2);
            let b = Direction::spherical(0.91 * k as f64 + 0.5, -0.7 * k as f64);
            let c = correlation_with(&ops, &s, &a, &b).unwrap();
            let closed = spin_j_correlation(Angle::between(&a, &b), j);
            assert!((c - closed).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn reduced_sum_matches_full_contraction() {
        let z = Direction::new(0.0, 0.0, 1.0).unwrap();
        for twice in 1..=8 {
            let j = Spin::from_twice(twice).unwrap();
            for k in 0..12 {
                let b = Direction::spherical(0.29 * k as f64, 0.83 * k as f64);
                let full = correlation(j, &z, &b).unwrap();
                assert!((full - reduced_correlation_alpha_z(j, &b)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hermitian_projections() {
        let ops = SpinOperators::build(spin("5/2")).unwrap();
        for k in 0..20 {
            let n = Direction::spherical(0.4 * k as f64, 1.3 * k as f64);
            let m = ops.along(&n);
            assert!(max_abs(&(&m - m.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn sum_m_squared_identity() {
        for twice in 1..=MAX_TWICE_J {
            let j = Spin::from_twice(twice).unwrap();
            assert_eq!(sum_twice_m_squared(j), sum_twice_m_squared_closed_form(j));
        }
        assert_eq!(sum_twice_m_squared(spin("1/2")), 2);
        assert_eq!(sum_twice_m_squared(spin("1")), 8);
    }
}
