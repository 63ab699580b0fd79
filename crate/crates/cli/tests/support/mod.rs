//! Reference evaluation pipeline: takes the engine's seeded split, checks it
//! against the relevance rule, then recomputes every sweep point with the
//! brute-force oracle and tallies the confusion counts by hand.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use venue_core::evaluation::{split, SplitSpec};
use venue_core::{Channel, ConferenceInstance, ParticipantId, SessionId};

use crate::oracle::{brute_force, Cutoffs};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture() -> PathBuf {
    workspace_root().join("data/default.venue")
}

pub fn golden(channel: Channel) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{channel}.csv"))
}

/// Grid points as exact fractions.
pub fn grid(channel: Channel) -> Vec<(i128, i128)> {
    match channel {
        Channel::SocialContext => (-4..=4).map(|k| (k, 4)).collect(),
        Channel::SocialRelations => (0..=8).map(|k| (k, 10)).collect(),
    }
}

pub fn grid_f64(channel: Channel) -> Vec<f64> {
    grid(channel).into_iter().map(|(p, q)| p as f64 / q as f64).collect()
}

fn expected_train(n: usize) -> usize {
    // floor(0.8 n), but both sides non-empty
    let k = n * 4 / 5;
    k.clamp(1, n - 1)
}

/// Recomputes the relevance labels from the withheld part of the data and
/// checks them, together with the split sizes, against the engine's split.
type Labelled = Vec<((ParticipantId, SessionId), bool)>;

fn checked_split(conf: &ConferenceInstance, seed: u64) -> Result<(ConferenceInstance, Labelled), String> {
    let (train, labels) = split(conf, SplitSpec::with_seed(seed)).map_err(|e| e.to_string())?;
    for p in &conf.roster {
        let full = conf.ratings.of(p).map(|r| r.len()).unwrap_or(0);
        let kept = train.ratings.of(p).map(|r| r.len()).unwrap_or(0);
        if kept != expected_train(full) {
            return Err(format!("{p}: kept {kept} of {full} ratings"));
        }
        for (tag, r) in train.ratings.of(p).into_iter().flatten() {
            if conf.ratings.get(p, tag) != Some(*r) {
                return Err(format!("{p}: training rating on {tag:?} is not in the dataset"));
            }
        }
    }
    if train.contacts.len() != expected_train(conf.contacts.len()) {
        return Err(format!(
            "kept {} of {} contacts",
            train.contacts.len(),
            conf.contacts.len()
        ));
    }

    let mut pairs = Vec::new();
    for p in &conf.roster {
        for s in conf.sessions.iter().filter(|s| &s.presenter != p) {
            let by_rating = s.topic_tags.iter().any(|t| {
                let held_out = conf.ratings.get(p, t).is_some() && train.ratings.get(p, t).is_none();
                held_out && conf.ratings.get(p, t).unwrap() >= 4
            });
            let j = &s.presenter;
            let by_contact =
                conf.contacts.get(p, j).is_some_and(|c| c.frequency >= 1) && train.contacts.get(p, j).is_none();
            let relevant = by_rating || by_contact;
            if labels.get(p, &s.id) != Some(relevant) {
                return Err(format!("label for ({p}, {}) disagrees with the relevance rule", s.id));
            }
            pairs.push(((p.clone(), s.id.clone()), relevant));
        }
    }
    if labels.len() != pairs.len() {
        return Err(format!("{} labels, expected {}", labels.len(), pairs.len()));
    }
    Ok((train, pairs))
}

/// The sweep CSV for `channel`, computed without the engine's recommender.
pub fn oracle_csv(conf: &ConferenceInstance, channel: Channel, seed: u64) -> Result<String, String> {
    let (train, labels) = checked_split(conf, seed)?;
    let base = Cutoffs {
        gamma: (1, 1),
        beta: (1, 2),
        delta: (15, 100),
        top_n: conf.sessions.len(),
    };
    let t = conf.thresholds;
    if (t.gamma, t.beta, t.delta) != (1.0, 0.5, 0.15) {
        return Err(format!("fixture thresholds changed: {t:?}"));
    }

    let mut out = String::from("channel,threshold,e,f,g,h,precision,recall\n");
    for value in grid(channel) {
        let cut = match channel {
            Channel::SocialContext => Cutoffs { gamma: value, ..base },
            Channel::SocialRelations => Cutoffs { beta: value, ..base },
        };
        let recs = brute_force(&train, &cut);
        let retrieved: BTreeSet<(ParticipantId, SessionId)> = recs
            .iter()
            .flat_map(|(p, lists)| {
                let list = match channel {
                    Channel::SocialContext => &lists.social_context,
                    Channel::SocialRelations => &lists.social_relations,
                };
                list.iter().map(move |r| (p.clone(), r.session.clone()))
            })
            .collect();
        let (mut e, mut f, mut g, mut h) = (0u64, 0u64, 0u64, 0u64);
        for (pair, relevant) in &labels {
            match (retrieved.contains(pair), relevant) {
                (true, true) => e += 1,
                (true, false) => f += 1,
                (false, true) => g += 1,
                (false, false) => h += 1,
            }
        }
        let precision = if e + f == 0 { 0.0 } else { e as f64 / (e + f) as f64 };
        let recall = if e + g == 0 { 0.0 } else { e as f64 / (e + g) as f64 };
        let threshold = value.0 as f64 / value.1 as f64;
        out.push_str(&format!(
            "{channel},{threshold},{e},{f},{g},{h},{precision:.6},{recall:.6}\n"
        ));
    }
    Ok(out)
}

/// Recall column of a sweep CSV.
pub fn recalls(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}
