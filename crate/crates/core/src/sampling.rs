//! Reproducible trial generation: a local hidden variable sampler, joint-box
//! samplers for nonlocal models, and series of trials over several settings.

use std::f64::consts::TAU;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Direction};
use crate::error::{domain, Error, Result};
use crate::models::{CorrelationModel, ExpectationValue};

/// Trials per batch; each batch draws from its own substream.
pub const BATCH_TRIALS: u64 = 1 << 14;

/// Seeded ChaCha8 generator identified by `(seed, stream_id)`.
///
/// `fork` derives independent generators for separate experiments (grid
/// points); `substream` derives the per-batch generators used by
/// [`run_series`] and [`tally_series`]. Both are computed from the identity,
/// not from the current state, and are one level deep: forking or
/// substreaming a derived generator replaces the previous index.
#[derive(Clone, Debug)]
pub struct SeededGenerator {
    seed: u64,
    stream_id: u64,
    fork: u64,
    lane: u64,
    rng: ChaCha8Rng,
}

impl SeededGenerator {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::with_parts(seed, stream_id, 0, 0)
    }

    fn with_parts(seed: u64, stream_id: u64, fork: u64, lane: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&stream_id.to_le_bytes());
        key[16..24].copy_from_slice(&fork.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(lane);
        SeededGenerator {
            seed,
            stream_id,
            fork,
            lane,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// `(fork, lane)` indices; both zero for a root generator.
    pub fn derivation(&self) -> (u64, u64) {
        (self.fork, self.lane)
    }

    /// Independent generator for experiment `index`, at its initial state.
    pub fn fork(&self, index: u64) -> Self {
        Self::with_parts(self.seed, self.stream_id, index.wrapping_add(1), 0)
    }

    /// Independent generator for batch `index`, at its initial state.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_parts(self.seed, self.stream_id, self.fork, index.wrapping_add(1))
    }
}

impl RngCore for SeededGenerator {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// A dichotomic outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    /// Sign of `x`, with `0` resolved to `+1`.
    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }

    fn coin<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

impl TryFrom<i8> for Outcome {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            _ => domain(format!("outcome {v} is not ±1")),
        }
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        o.value()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomePair {
    pub a: Outcome,
    pub b: Outcome,
}

impl OutcomePair {
    pub fn new(a: Outcome, b: Outcome) -> Self {
        OutcomePair { a, b }
    }

    pub fn product(self) -> i8 {
        self.a.value() * self.b.value()
    }
}

/// Orientation of the shared classical angular momentum `j_A = -j_B` in the
/// measurement plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenVariable {
    pub phi: f64,
}

impl HiddenVariable {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let phi = rng.random::<f64>() * TAU;
        HiddenVariable {
            phi: if phi >= TAU { 0.0 } else { phi },
        }
    }

    /// `(sgn(α·j_A), sgn(β·j_B))` with `j_B = -j_A`.
    pub fn outcomes(&self, alpha: &Direction, beta: &Direction) -> OutcomePair {
        let j_a = Direction::planar(self.phi);
        OutcomePair {
            a: Outcome::from_sign(alpha.dot(&j_a)),
            b: Outcome::from_sign(-beta.dot(&j_a)),
        }
    }
}

fn check_planar(d: &Direction) -> Result<()> {
    if !d.is_planar() {
        return domain(format!(
            "direction {:?} is not in the measurement plane",
            d.components()
        ));
    }
    Ok(())
}

/// One trial of the local sign model.
pub fn sample_lhv(
    alpha: &Direction,
    beta: &Direction,
    gen: &mut SeededGenerator,
) -> Result<OutcomePair> {
    check_planar(alpha)?;
    check_planar(beta)?;
    Ok(HiddenVariable::sample(gen).outcomes(alpha, beta))
}

/// One trial of the local sign model with B's outcome replaced by a fair coin
/// with probability `eta`; the correlation becomes `(1 - eta) E(θ)`.
pub fn sample_noisy_lhv(
    alpha: &Direction,
    beta: &Direction,
    eta: f64,
    gen: &mut SeededGenerator,
) -> Result<OutcomePair> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("noise strength {eta} outside [0, 1]"));
    }
    let mut pair = sample_lhv(alpha, beta, gen)?;
    if gen.random::<f64>() < eta {
        pair.b = Outcome::coin(gen);
    }
    Ok(pair)
}

/// Joint probabilities of `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)` with unbiased
/// marginals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

impl JointDistribution {
    pub fn new(p_pp: f64, p_pm: f64, p_mp: f64, p_mm: f64) -> Result<Self> {
        let d = JointDistribution {
            p_pp,
            p_pm,
            p_mp,
            p_mm,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let p = [self.p_pp, self.p_pm, self.p_mp, self.p_mm];
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return domain(format!("negative or non-finite probability in {p:?}"));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return domain(format!("probabilities {p:?} do not sum to 1"));
        }
        let a_plus = self.p_pp + self.p_pm;
        let b_plus = self.p_pp + self.p_mp;
        if (a_plus - 0.5).abs() > DISTRIBUTION_TOLERANCE
            || (b_plus - 0.5).abs() > DISTRIBUTION_TOLERANCE
        {
            return domain(format!("marginals of {p:?} are not uniform"));
        }
        Ok(())
    }

    pub fn expectation(&self) -> f64 {
        self.p_pp + self.p_mm - self.p_pm - self.p_mp
    }

    /// True when only equal outcomes have support.
    pub fn always_equal(&self) -> bool {
        self.p_pm == 0.0 && self.p_mp == 0.0
    }

    /// True when only different outcomes have support.
    pub fn always_different(&self) -> bool {
        self.p_pp == 0.0 && self.p_mm == 0.0
    }
}

/// `p_pp = p_mm = (1+e)/4`, `p_pm = p_mp = (1-e)/4`.
pub fn box_from_expectation(e: ExpectationValue) -> JointDistribution {
    let same = (1.0 + e.value()) / 4.0;
    let diff = (1.0 - e.value()) / 4.0;
    JointDistribution {
        p_pp: same,
        p_pm: diff,
        p_mp: diff,
        p_mm: same,
    }
}

pub fn sample_box(dist: &JointDistribution, gen: &mut SeededGenerator) -> Result<OutcomePair> {
    dist.validate()?;
    Ok(draw_box(dist, gen))
}

fn draw_box<R: Rng + ?Sized>(dist: &JointDistribution, rng: &mut R) -> OutcomePair {
    use Outcome::{Minus, Plus};
    let u = rng.random::<f64>();
    let mut edge = dist.p_pp;
    if u < edge {
        return OutcomePair::new(Plus, Plus);
    }
    edge += dist.p_pm;
    if u < edge {
        return OutcomePair::new(Plus, Minus);
    }
    edge += dist.p_mp;
    if u < edge {
        return OutcomePair::new(Minus, Plus);
    }
    if dist.p_mm > 0.0 {
        OutcomePair::new(Minus, Minus)
    } else {
        // u fell into rounding slack past the last positive cell
        [
            (dist.p_mp, OutcomePair::new(Minus, Plus)),
            (dist.p_pm, OutcomePair::new(Plus, Minus)),
            (dist.p_pp, OutcomePair::new(Plus, Plus)),
        ]
        .into_iter()
        .find(|(p, _)| *p > 0.0)
        .map(|(_, pair)| pair)
        .expect("validated distribution has positive mass")
    }
}

/// A labelled pair of measurement directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingPair {
    pub label: String,
    pub alpha: Direction,
    pub beta: Direction,
}

impl SettingPair {
    pub fn new(label: impl Into<String>, alpha: Direction, beta: Direction) -> Self {
        SettingPair {
            label: label.into(),
            alpha,
            beta,
        }
    }

    /// Planar directions at polar angles `alpha` and `beta`.
    pub fn planar(label: impl Into<String>, alpha: f64, beta: f64) -> Self {
        Self::new(label, Direction::planar(alpha), Direction::planar(beta))
    }

    pub fn angle(&self) -> Angle {
        Angle::between(&self.alpha, &self.beta)
    }
}

/// Labels of the four CHSH setting pairs, in the order they enter
/// `E(α',β) + E(α,β) + E(α,β') - E(α',β')`.
pub const CHSH_LABELS: [&str; 4] = ["ap_b", "a_b", "a_bp", "ap_bp"];

/// Four planar measurement directions, given by polar angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub alpha_prime: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

impl Default for ChshSettings {
    /// `α = π/2`, `α' = 0`, `β = π/4`, `β' = 3π/4`: the maximal-violation layout.
    fn default() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        ChshSettings {
            alpha_prime: 0.0,
            alpha: FRAC_PI_2,
            beta: FRAC_PI_4,
            beta_prime: 3.0 * FRAC_PI_4,
        }
    }
}

impl ChshSettings {
    fn polar_pairs(&self) -> [(f64, f64); 4] {
        [
            (self.alpha_prime, self.beta),
            (self.alpha, self.beta),
            (self.alpha, self.beta_prime),
            (self.alpha_prime, self.beta_prime),
        ]
    }

    pub fn pairs(&self) -> Vec<SettingPair> {
        CHSH_LABELS
            .iter()
            .zip(self.polar_pairs())
            .map(|(label, (a, b))| SettingPair::planar(*label, a, b))
            .collect()
    }

    /// Relative angles of the four pairs, folded onto `[0, π]` from the polar
    /// angle differences.
    pub fn angles(&self) -> Result<[Angle; 4]> {
        let p = self.polar_pairs();
        Ok([
            Angle::normalized(p[0].1 - p[0].0)?,
            Angle::normalized(p[1].1 - p[1].0)?,
            Angle::normalized(p[2].1 - p[2].0)?,
            Angle::normalized(p[3].1 - p[3].0)?,
        ])
    }

    /// Analytic expectation values of `model` at the four pairs.
    pub fn expectations(&self, model: &CorrelationModel) -> Result<[ExpectationValue; 4]> {
        let [a, b, c, d] = self.angles()?;
        Ok([
            model.evaluate(a)?,
            model.evaluate(b)?,
            model.evaluate(c)?,
            model.evaluate(d)?,
        ])
    }
}

/// How a model's trials are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mechanism {
    /// One hidden variable per trial, shared by all settings.
    LocalHiddenVariable,
    /// Each setting pair drawn from its own joint distribution.
    JointBox,
}

pub fn mechanism(model: &CorrelationModel) -> Mechanism {
    match model {
        CorrelationModel::Classical | CorrelationModel::QuasiQuantum => {
            Mechanism::LocalHiddenVariable
        }
        _ => Mechanism::JointBox,
    }
}

/// One trial across all settings of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    /// Present for local hidden variable runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<HiddenVariable>,
    /// Outcomes aligned with [`TrialSeries::labels`].
    pub outcomes: Vec<OutcomePair>,
}

/// Trials over a fixed list of labelled settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSeries {
    pub labels: Vec<String>,
    pub records: Vec<TrialRecord>,
}

impl TrialSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Outcomes of one setting across all trials.
    pub fn column(&self, label: &str) -> Option<Vec<OutcomePair>> {
        let k = self.label_index(label)?;
        Some(self.records.iter().map(|r| r.outcomes[k]).collect())
    }
}

/// Per-model trial source prepared for a fixed list of settings.
enum Source {
    Lhv(Vec<SettingPair>),
    Boxes(Vec<JointDistribution>),
}

impl Source {
    fn new(model: &CorrelationModel, settings: &[SettingPair]) -> Result<Self> {
        if settings.is_empty() {
            return domain("no setting pairs given");
        }
        Ok(match mechanism(model) {
            Mechanism::LocalHiddenVariable => {
                for s in settings {
                    check_planar(&s.alpha)?;
                    check_planar(&s.beta)?;
                }
                Source::Lhv(settings.to_vec())
            }
            Mechanism::JointBox => Source::Boxes(
                settings
                    .iter()
                    .map(|s| Ok(box_from_expectation(model.evaluate(s.angle())?)))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    fn draw(
        &self,
        rng: &mut SeededGenerator,
        out: &mut Vec<OutcomePair>,
    ) -> Option<HiddenVariable> {
        out.clear();
        match self {
            Source::Lhv(settings) => {
                let hv = HiddenVariable::sample(rng);
                out.extend(settings.iter().map(|s| hv.outcomes(&s.alpha, &s.beta)));
                Some(hv)
            }
            Source::Boxes(boxes) => {
                out.extend(boxes.iter().map(|d| draw_box(d, rng)));
                None
            }
        }
    }
}

fn batches(n_trials: u64) -> impl Iterator<Item = (u64, u64, u64)> {
    let count = n_trials.div_ceil(BATCH_TRIALS);
    (0..count).map(move |b| {
        let start = b * BATCH_TRIALS;
        (b, start, (start + BATCH_TRIALS).min(n_trials))
    })
}

/// Generates `n_trials` trials of `model` at every setting.
///
/// Local models share one hidden variable across all settings of a trial, so
/// the outcomes of every list are jointly defined. Other models draw each
/// setting from its own joint box. The result depends only on the generator's
/// identity; trial batches use [`SeededGenerator::substream`].
pub fn run_series(
    model: &CorrelationModel,
    settings: &[SettingPair],
    n_trials: u64,
    gen: &SeededGenerator,
) -> Result<TrialSeries> {
    if n_trials == 0 {
        return domain("n_trials must be positive");
    }
    let source = Source::new(model, settings)?;
    let chunks: Vec<Vec<TrialRecord>> = batches(n_trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, start, end)| {
            let mut rng = gen.substream(b);
            let mut buf = Vec::with_capacity(settings.len());
            (start..end)
                .map(|index| {
                    let hidden = source.draw(&mut rng, &mut buf);
                    TrialRecord {
                        index,
                        hidden,
                        outcomes: buf.clone(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(TrialSeries {
        labels: settings.iter().map(|s| s.label.clone()).collect(),
        records: chunks.into_iter().flatten().collect(),
    })
}

/// Integer sufficient statistics of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTally {
    pub labels: Vec<String>,
    pub n_trials: u64,
    /// Σ a·b per setting.
    pub product_sums: Vec<i64>,
    pub a_sums: Vec<i64>,
    pub b_sums: Vec<i64>,
    /// Σ (a·b)_k (a·b)_l, row-major `k * len + l`.
    pub product_cross: Vec<i64>,
}

impl SeriesTally {
    fn empty(labels: Vec<String>) -> Self {
        let k = labels.len();
        SeriesTally {
            labels,
            n_trials: 0,
            product_sums: vec![0; k],
            a_sums: vec![0; k],
            b_sums: vec![0; k],
            product_cross: vec![0; k * k],
        }
    }

    fn add(&mut self, pairs: &[OutcomePair]) {
        let k = pairs.len();
        self.n_trials += 1;
        for (i, p) in pairs.iter().enumerate() {
            self.product_sums[i] += p.product() as i64;
            self.a_sums[i] += p.a.value() as i64;
            self.b_sums[i] += p.b.value() as i64;
            for (l, q) in pairs.iter().enumerate() {
                self.product_cross[i * k + l] += (p.product() * q.product()) as i64;
            }
        }
    }

    fn merge(mut self, other: &SeriesTally) -> Self {
        self.n_trials += other.n_trials;
        let add = |x: &mut Vec<i64>, y: &Vec<i64>| x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
        add(&mut self.product_sums, &other.product_sums);
        add(&mut self.a_sums, &other.a_sums);
        add(&mut self.b_sums, &other.b_sums);
        add(&mut self.product_cross, &other.product_cross);
        self
    }

    fn n(&self) -> f64 {
        self.n_trials as f64
    }

    /// Empirical `⟨a b⟩` at setting `k`.
    pub fn expectation(&self, k: usize) -> f64 {
        self.product_sums[k] as f64 / self.n()
    }

    pub fn mean_a(&self, k: usize) -> f64 {
        self.a_sums[k] as f64 / self.n()
    }

    pub fn mean_b(&self, k: usize) -> f64 {
        self.b_sums[k] as f64 / self.n()
    }

    /// Mean and standard error of `Σ_k w_k (a b)_k`, using the sample
    /// covariance of the per-trial products.
    pub fn combination(&self, weights: &[f64]) -> (f64, f64) {
        let k = self.labels.len();
        let n = self.n();
        let mean: f64 = weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.expectation(i))
            .sum();
        let mut second = 0.0;
        for i in 0..k {
            for l in 0..k {
                second += weights[i] * weights[l] * self.product_cross[i * k + l] as f64;
            }
        }
        let var = (second / n - mean * mean).max(0.0);
        let se = if self.n_trials > 1 {
            (var / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        (mean, se)
    }

    /// Standard error of the product mean at setting `k`.
    pub fn expectation_se(&self, k: usize) -> f64 {
        let mut w = vec![0.0; self.labels.len()];
        w[k] = 1.0;
        self.combination(&w).1
    }
}

/// Streams `n_trials` trials into a [`SeriesTally`] without storing them.
/// Draws exactly the trials [`run_series`] would.
pub fn tally_series(
    model: &CorrelationModel,
    settings: &[SettingPair],
    n_trials: u64,
    gen: &SeededGenerator,
) -> Result<SeriesTally> {
    if n_trials == 0 {
        return domain("n_trials must be positive");
    }
    let source = Source::new(model, settings)?;
    let labels: Vec<String> = settings.iter().map(|s| s.label.clone()).collect();
    let parts: Vec<SeriesTally> = batches(n_trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, start, end)| {
            let mut rng = gen.substream(b);
            let mut buf = Vec::with_capacity(settings.len());
            let mut tally = SeriesTally::empty(labels.clone());
            for _ in start..end {
                source.draw(&mut rng, &mut buf);
                tally.add(&buf);
            }
            tally
        })
        .collect();
    Ok(parts
        .iter()
        .fold(SeriesTally::empty(labels.clone()), |acc, t| acc.merge(t)))
}
