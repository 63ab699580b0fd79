//! Tie strength and presenter degree centrality over the contact log.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{ConferenceInstance, ContactLog, ParticipantId, Thresholds};
use crate::{Error, Result};

/// Contact frequency × contact minutes / frame length. Not capped at 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TieStrength(pub f64);

impl TieStrength {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeCentrality {
    /// Number of distinct roster members with at least one recorded contact.
    pub raw: usize,
    /// `raw / (N - 1)` for a roster of `N`.
    pub normalized: f64,
}

pub fn tie_strength(contacts: &ContactLog, a: &ParticipantId, b: &ParticipantId, frame_t: u32) -> Result<TieStrength> {
    if frame_t == 0 {
        return Err(Error::ZeroFrame);
    }
    if a == b {
        return Err(Error::SelfPair(a.clone()));
    }
    let value = contacts
        .get(a, b)
        .map(|c| f64::from(c.frequency) * f64::from(c.duration) / f64::from(frame_t))
        .unwrap_or(0.0);
    Ok(TieStrength(value))
}

pub fn passes_beta(tie: TieStrength, thresholds: &Thresholds) -> bool {
    tie.0 >= thresholds.beta
}

pub fn degree_centrality(conf: &ConferenceInstance, p: &ParticipantId) -> Result<DegreeCentrality> {
    conf.require_member(p)?;
    let n = conf.roster.len();
    if n < 2 {
        return Err(Error::RosterTooSmall(n));
    }
    let raw = conf
        .contacts
        .of(p)
        .filter(|(other, c)| c.frequency >= 1 && *other != p && conf.roster.contains(*other))
        .count();
    Ok(DegreeCentrality {
        raw,
        normalized: raw as f64 / (n - 1) as f64,
    })
}

/// Degree centrality of every roster member in one pass over the log.
pub fn all_degree_centralities(conf: &ConferenceInstance) -> Result<BTreeMap<ParticipantId, DegreeCentrality>> {
    let n = conf.roster.len();
    if n < 2 {
        return Err(Error::RosterTooSmall(n));
    }
    let mut raw: BTreeMap<&ParticipantId, usize> = conf.roster.iter().map(|p| (p, 0)).collect();
    for (pair, c) in conf.contacts.iter() {
        let (a, b) = (pair.first(), pair.second());
        if c.frequency == 0 || a == b || !conf.roster.contains(a) || !conf.roster.contains(b) {
            continue;
        }
        *raw.get_mut(a).expect("roster member") += 1;
        *raw.get_mut(b).expect("roster member") += 1;
    }
    Ok(raw
        .into_iter()
        .map(|(p, raw)| {
            (
                p.clone(),
                DegreeCentrality {
                    raw,
                    normalized: raw as f64 / (n - 1) as f64,
                },
            )
        })
        .collect())
}

pub fn passes_delta(centrality: DegreeCentrality, thresholds: &Thresholds) -> bool {
    centrality.normalized >= thresholds.delta
}
