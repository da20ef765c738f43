//! CSV and JSON persistence of trial series.
//!
//! CSV layout, one row per trial and setting:
//!
//! ```text
//! trial_index,setting_label,outcome_a,outcome_b
//! 0,ap_b,1,-1
//! ```
//!
//! The CSV form carries outcomes only; JSON also keeps hidden variables.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{Outcome, OutcomePair, TrialRecord, TrialSeries};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    trial_index: u64,
    setting_label: String,
    outcome_a: i8,
    outcome_b: i8,
}

pub fn write_csv<W: Write>(series: &TrialSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &series.records {
        for (label, pair) in series.labels.iter().zip(&r.outcomes) {
            w.serialize(Row {
                trial_index: r.index,
                setting_label: label.clone(),
                outcome_a: pair.a.value(),
                outcome_b: pair.b.value(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<TrialSeries> {
    let mut reader = csv::Reader::from_reader(input);
    let mut labels: Vec<String> = Vec::new();
    let mut records: Vec<TrialRecord> = Vec::new();
    let mut labels_fixed = false;
    for row in reader.deserialize::<Row>() {
        let row = row?;
        let pair = OutcomePair::new(
            Outcome::try_from(row.outcome_a)?,
            Outcome::try_from(row.outcome_b)?,
        );
        let starts_new = records.last().is_none_or(|r| r.index != row.trial_index);
        if starts_new {
            if let Some(prev) = records.last() {
                labels_fixed = true;
                if prev.outcomes.len() != labels.len() {
                    return Err(Error::Inconsistent(format!(
                        "trial {} has {} settings, expected {}",
                        prev.index,
                        prev.outcomes.len(),
                        labels.len()
                    )));
                }
            }
            records.push(TrialRecord {
                index: row.trial_index,
                hidden: None,
                outcomes: Vec::with_capacity(labels.len()),
            });
        }
        let rec = records.last_mut().expect("pushed above");
        let position = rec.outcomes.len();
        if labels_fixed {
            if labels.get(position) != Some(&row.setting_label) {
                return Err(Error::Inconsistent(format!(
                    "trial {}: unexpected setting {:?} at position {position}",
                    rec.index, row.setting_label
                )));
            }
        } else {
            if labels.contains(&row.setting_label) {
                return Err(Error::Inconsistent(format!(
                    "trial {}: duplicate setting {:?}",
                    rec.index, row.setting_label
                )));
            }
            labels.push(row.setting_label);
        }
        rec.outcomes.push(pair);
    }
    if let Some(last) = records.last() {
        if last.outcomes.len() != labels.len() {
            return Err(Error::Inconsistent(format!(
                "trial {} is incomplete",
                last.index
            )));
        }
    }
    Ok(TrialSeries { labels, records })
}

pub fn write_json<W: Write>(series: &TrialSeries, out: W) -> Result<()> {
    serde_json::to_writer(out, series)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<TrialSeries> {
    Ok(serde_json::from_reader(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CorrelationModel;
    use crate::sampling::{run_series, ChshSettings, HiddenVariable, SeededGenerator};
    use proptest::prelude::*;

    fn strip_hidden(mut s: TrialSeries) -> TrialSeries {
        s.records.iter_mut().for_each(|r| r.hidden = None);
        s
    }

    #[test]
    fn csv_header_and_rows() {
        let series = TrialSeries {
            labels: vec!["a_b".into(), "ap_b".into()],
            records: vec![TrialRecord {
                index: 0,
                hidden: None,
                outcomes: vec![
                    OutcomePair::new(Outcome::Plus, Outcome::Minus),
                    OutcomePair::new(Outcome::Minus, Outcome::Minus),
                ],
            }],
        };
        let mut buf = Vec::new();
        write_csv(&series, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "trial_index,setting_label,outcome_a,outcome_b\n0,a_b,1,-1\n0,ap_b,-1,-1\n"
        );
    }

    #[test]
    fn csv_rejects_bad_rows() {
        let bad_outcome = "trial_index,setting_label,outcome_a,outcome_b\n0,a_b,0,1\n";
        assert!(read_csv(bad_outcome.as_bytes()).is_err());
        let missing = "trial_index,setting_label,outcome_a,outcome_b\n0,x,1,1\n0,y,1,1\n1,x,1,1\n";
        assert!(read_csv(missing.as_bytes()).is_err());
        let swapped =
            "trial_index,setting_label,outcome_a,outcome_b\n0,x,1,1\n0,y,1,1\n1,y,1,1\n1,x,1,1\n";
        assert!(read_csv(swapped.as_bytes()).is_err());
    }

    #[test]
    fn generated_series_round_trip() {
        let gen = SeededGenerator::new(3, 1);
        let s = run_series(
            &CorrelationModel::Classical,
            &ChshSettings::default().pairs(),
            500,
            &gen,
        )
        .unwrap();
        let mut json = Vec::new();
        write_json(&s, &mut json).unwrap();
        assert_eq!(read_json(json.as_slice()).unwrap(), s);

        let mut csv_bytes = Vec::new();
        write_csv(&s, &mut csv_bytes).unwrap();
        let back = read_csv(csv_bytes.as_slice()).unwrap();
        assert_eq!(back, strip_hidden(s));
        let mut again = Vec::new();
        write_csv(&back, &mut again).unwrap();
        assert_eq!(again, csv_bytes);
    }

    fn arb_series() -> impl Strategy<Value = TrialSeries> {
        (1usize..5, 1usize..30).prop_flat_map(|(k, n)| {
            let labels: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
            prop::collection::vec(
                (
                    prop::option::of(0.0..std::f64::consts::TAU),
                    prop::collection::vec((any::<bool>(), any::<bool>()), k),
                ),
                n,
            )
            .prop_map(move |rows| TrialSeries {
                labels: labels.clone(),
                records: rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, (phi, outs))| TrialRecord {
                        index: i as u64,
                        hidden: phi.map(|phi| HiddenVariable { phi }),
                        outcomes: outs
                            .into_iter()
                            .map(|(a, b)| {
                                let o = |x| if x { Outcome::Plus } else { Outcome::Minus };
                                OutcomePair::new(o(a), o(b))
                            })
                            .collect(),
                    })
                    .collect(),
            })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(s in arb_series()) {
            let mut buf = Vec::new();
            write_json(&s, &mut buf).unwrap();
            prop_assert_eq!(read_json(buf.as_slice()).unwrap(), s);
        }

        #[test]
        fn csv_round_trip_is_exact(s in arb_series()) {
            let mut buf = Vec::new();
            write_csv(&s, &mut buf).unwrap();
            let back = read_csv(buf.as_slice()).unwrap();
            let mut again = Vec::new();
            write_csv(&back, &mut again).unwrap();
            prop_assert_eq!(&again, &buf);
            prop_assert_eq!(back, strip_hidden(s));
        }
    }
}
