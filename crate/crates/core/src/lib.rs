//! Two-party correlation experiments with dichotomic outcomes.
//!
//! The crate covers
//!
//! - expectation functions `E(θ)` for the local sign model, the quantum
//!   singlet, spin-`j` singlets, the sign box and noisy mixtures, with the
//!   maps between them ([`models`], [`fourier`]);
//! - reproducible trial generation from a local hidden variable or from
//!   joint boxes ([`sampling`], [`records`]);
//! - the four-list counting argument and the CHSH combination ([`lists`]);
//! - LHV feasibility of correlation quadruples ([`feasibility`]);
//! - exact spin-`j` operator algebra for the singlet correlation ([`spin`]);
//! - no-signalling checks ([`signalling`]);
//! - the `bellbox` command line ([`cli`]).
//!
//! Runnable walkthroughs live in `examples/`.

pub mod angle;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod fourier;
pub mod lists;
pub mod models;
pub mod records;
pub mod sampling;
pub mod signalling;
pub mod spin;

pub use angle::{Angle, Direction};
pub use error::{Error, Result};
pub use feasibility::{lhv_feasibility, FeasibilityVerdict};
pub use lists::{chsh, ChshScore, CountSummary, FourLists};
pub use models::{CorrelationModel, ExpectationValue};
pub use sampling::{ChshSettings, Outcome, OutcomePair, SeededGenerator, SettingPair, TrialSeries};
pub use spin::Spin;
