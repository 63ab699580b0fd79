//! Offline evaluation: seeded train/test split, relevance labels from the
//! withheld data, confusion counts, precision/recall and threshold sweeps.
//!
//! Relevance rule: a `(participant, session)` pair is relevant when the
//! withheld data shows the participant rating one of the session's topic tags
//! at 4 or above, or a withheld contact (at least one meeting) with the
//! session's presenter. Precision and recall are reported as 0 when their
//! denominators are 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{ConferenceInstance, Contact, ContactLog, ParticipantId, RatingMatrix, SessionId, Tag, Thresholds};
use crate::recommender::{recommend_with, Channel, RecommendationSet, RecommenderOptions};
use crate::{Error, Result};

pub const RELEVANCE_RULE: &str =
    "relevant = withheld rating >= 4 on a session topic tag OR withheld contact with the session presenter";
pub const ZERO_DIVISION_RULE: &str = "precision and recall are 0 when their denominator is 0";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Number of the `n` items kept for training: `floor(n · fraction)`, clamped
/// to `[1, n − 1]` whenever `n ≥ 2` so both sides are non-empty.
pub fn train_count(n: usize, fraction: f64) -> usize {
    let k = (n as f64 * fraction + 1e-9).floor() as usize;
    if n >= 2 {
        k.clamp(1, n - 1)
    } else {
        k.min(n)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceLabels {
    labels: BTreeMap<(ParticipantId, SessionId), bool>,
}

impl RelevanceLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, participant: ParticipantId, session: SessionId, relevant: bool) {
        self.labels.insert((participant, session), relevant);
    }

    pub fn get(&self, participant: &ParticipantId, session: &SessionId) -> Option<bool> {
        self.labels.get(&(participant.clone(), session.clone())).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(ParticipantId, SessionId), bool)> {
        self.labels.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn relevant_count(&self) -> usize {
        self.labels.values().filter(|r| **r).count()
    }
}

/// Withholds a seeded `1 − train_fraction` share of every participant's
/// ratings and of the contact log, and labels every evaluated
/// `(participant, session)` pair from the withheld part. Availability,
/// sessions and thresholds carry over to the training instance unchanged.
pub fn split(conf: &ConferenceInstance, spec: SplitSpec) -> Result<(ConferenceInstance, RelevanceLabels)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::InvalidSplit(format!(
            "train_fraction {} must lie strictly between 0 and 1",
            spec.train_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut train_ratings = RatingMatrix::new();
    let mut test_ratings = RatingMatrix::new();
    for p in &conf.roster {
        let mut row: Vec<(&Tag, u8)> = conf
            .ratings
            .of(p)
            .map(|r| r.iter().map(|(t, v)| (t, *v)).collect())
            .unwrap_or_default();
        if row.len() < 2 {
            return Err(Error::TooFewRatings {
                participant: p.clone(),
                count: row.len(),
            });
        }
        row.shuffle(&mut rng);
        let keep = train_count(row.len(), spec.train_fraction);
        for (k, (tag, v)) in row.into_iter().enumerate() {
            let target = if k < keep {
                &mut train_ratings
            } else {
                &mut test_ratings
            };
            target.insert(p.clone(), tag.clone(), v);
        }
    }

    let mut contacts: Vec<(ParticipantId, ParticipantId, Contact)> = conf
        .contacts
        .iter()
        .map(|(k, c)| (k.first().clone(), k.second().clone(), *c))
        .collect();
    contacts.shuffle(&mut rng);
    let keep = train_count(contacts.len(), spec.train_fraction);
    let mut train_contacts = ContactLog::new();
    let mut test_contacts = ContactLog::new();
    for (k, (a, b, c)) in contacts.into_iter().enumerate() {
        let target = if k < keep {
            &mut train_contacts
        } else {
            &mut test_contacts
        };
        target.insert(a, b, c);
    }

    let mut labels = RelevanceLabels::new();
    for p in &conf.roster {
        for s in conf.sessions.iter().filter(|s| &s.presenter != p) {
            let by_rating = s
                .topic_tags
                .iter()
                .any(|t| test_ratings.get(p, t).is_some_and(|r| r >= 4));
            let by_contact = test_contacts.get(p, &s.presenter).is_some_and(|c| c.frequency >= 1);
            labels.insert(p.clone(), s.id.clone(), by_rating || by_contact);
        }
    }

    let train = ConferenceInstance {
        ratings: train_ratings,
        contacts: train_contacts,
        ..conf.clone()
    };
    Ok((train, labels))
}

/// Retrieval × relevance tallies over the evaluated pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    /// Retrieved and relevant.
    pub e: u64,
    /// Retrieved, not relevant.
    pub f: u64,
    /// Relevant but missed.
    pub g: u64,
    /// Neither.
    pub h: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.e + self.f + self.g + self.h
    }
}

pub fn confusion(recs: &RecommendationSet, labels: &RelevanceLabels, channel: Channel) -> Result<ConfusionCounts> {
    let retrieved = recs.pairs(channel);
    if let Some((p, s)) = retrieved.iter().find(|(p, s)| labels.get(p, s).is_none()) {
        return Err(Error::MissingLabel {
            participant: p.clone(),
            session: s.to_string(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (pair, relevant) in labels.iter() {
        match (retrieved.contains(pair), relevant) {
            (true, true) => c.e += 1,
            (true, false) => c.f += 1,
            (false, true) => c.g += 1,
            (false, false) => c.h += 1,
        }
    }
    Ok(c)
}

pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio(c.e, c.e + c.f)
}

pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio(c.e, c.e + c.g)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub counts: ConfusionCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub channel: Channel,
    pub points: Vec<SweepPoint>,
    /// Thresholds held fixed while the channel's own gate was varied.
    pub fixed: Thresholds,
    pub dataset: String,
    pub seed: Option<u64>,
}

pub const CSV_HEADER: [&str; 8] = ["channel", "threshold", "e", "f", "g", "h", "precision", "recall"];

impl SweepReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for p in &self.points {
            w.write_record([
                self.channel.to_string(),
                p.threshold.to_string(),
                p.counts.e.to_string(),
                p.counts.f.to_string(),
                p.counts.g.to_string(),
                p.counts.h.to_string(),
                format!("{:.6}", p.precision),
                format!("{:.6}", p.recall),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Unwritable(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} sweep over {}", self.channel, gate_name(self.channel));
        let _ = writeln!(out, "# dataset: {}", self.dataset);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# split seed: {seed}");
        }
        let _ = writeln!(
            out,
            "# fixed: gamma={} beta={} delta={} frame_t={}",
            self.fixed.gamma, self.fixed.beta, self.fixed.delta, self.fixed.frame_t
        );
        let _ = writeln!(out, "# {RELEVANCE_RULE}");
        let _ = writeln!(out, "# {ZERO_DIVISION_RULE}");
        let _ = writeln!(
            out,
            "{:>9} {:>6} {:>6} {:>6} {:>6} {:>10} {:>10}",
            gate_name(self.channel),
            "e",
            "f",
            "g",
            "h",
            "precision",
            "recall"
        );
        for p in &self.points {
            let _ = writeln!(
                out,
                "{:>9} {:>6} {:>6} {:>6} {:>6} {:>10.6} {:>10.6}",
                p.threshold, p.counts.e, p.counts.f, p.counts.g, p.counts.h, p.precision, p.recall
            );
        }
        out
    }
}

fn gate_name(channel: Channel) -> &'static str {
    match channel {
        Channel::SocialContext => "gamma",
        Channel::SocialRelations => "beta",
    }
}

/// Sensible grids: Pearson from −1 to 1, tie strength from 0 to 0.8.
pub fn default_grid(channel: Channel) -> Vec<f64> {
    match channel {
        Channel::SocialContext => vec![-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0],
        Channel::SocialRelations => vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
    }
}

fn with_gate(base: &Thresholds, channel: Channel, value: f64, untruncated: usize) -> Thresholds {
    let mut t = *base;
    match channel {
        Channel::SocialContext => t.gamma = value,
        Channel::SocialRelations => t.beta = value,
    }
    t.top_n = untruncated;
    t
}

/// Varies the channel's gate (gamma, or beta with delta fixed) over `grid`.
///
/// Lists are evaluated untruncated (`top_n` = number of sessions) so each
/// point measures the gate alone.
pub fn sweep(
    conf: &ConferenceInstance,
    labels: &RelevanceLabels,
    channel: Channel,
    grid: &[f64],
) -> Result<SweepReport> {
    sweep_with(conf, labels, channel, grid, RecommenderOptions::default())
}

pub fn sweep_with(
    conf: &ConferenceInstance,
    labels: &RelevanceLabels,
    channel: Channel,
    grid: &[f64],
    options: RecommenderOptions,
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".to_owned()));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("grid values must be finite".to_owned()));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidGrid("grid must be sorted ascending".to_owned()));
    }
    let untruncated = conf.sessions.len().max(1);
    let points = grid
        .par_iter()
        .map(|&value| {
            let inst = conf.with_thresholds(with_gate(&conf.thresholds, channel, value, untruncated));
            let recs = recommend_with(&inst, options)?;
            let counts = confusion(&recs, labels, channel)?;
            Ok(SweepPoint {
                threshold: value,
                precision: precision(&counts),
                recall: recall(&counts),
                counts,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        channel,
        points,
        fixed: conf.thresholds,
        dataset: String::new(),
        seed: None,
    })
}

/// Scorers compared in the ablation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scorer {
    /// Both channels, both relations branches.
    DualChannel,
    /// Ablation: similarity channel only.
    PearsonOnly,
    /// Ablation: relations channel gated on tie strength alone.
    TieOnly,
}

impl Scorer {
    pub const ALL: [Scorer; 3] = [Scorer::DualChannel, Scorer::PearsonOnly, Scorer::TieOnly];

    pub fn label(self) -> &'static str {
        match self {
            Scorer::DualChannel => "dual-channel",
            Scorer::PearsonOnly => "pearson-only (ablation)",
            Scorer::TieOnly => "tie-only (ablation)",
        }
    }

    pub fn options(self) -> RecommenderOptions {
        let all = RecommenderOptions::default();
        match self {
            Scorer::DualChannel => all,
            Scorer::PearsonOnly => RecommenderOptions {
                social_relations: false,
                ..all
            },
            Scorer::TieOnly => RecommenderOptions {
                social_context: false,
                centrality_branch: false,
                ..all
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub channel: Channel,
    pub scorer: Scorer,
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub counts: ConfusionCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn rows_for(&self, channel: Channel) -> impl Iterator<Item = &AblationRow> {
        self.rows.iter().filter(move |r| r.channel == channel)
    }

    pub fn row(&self, channel: Channel, scorer: Scorer) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.channel == channel && r.scorer == scorer)
    }

    /// One block per channel: scorer, gate threshold, precision, recall.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for channel in Channel::ALL {
            let title = match channel {
                Channel::SocialContext => "social context recommendation: precision and recall by scorer",
                Channel::SocialRelations => "social relations recommendation: precision and recall by scorer",
            };
            let gate = match channel {
                Channel::SocialContext => "Pearson threshold",
                Channel::SocialRelations => "Tie threshold",
            };
            let _ = writeln!(out, "{title}");
            let _ = writeln!(
                out,
                "{:<26} {:>17} {:>10} {:>10}",
                "Scorer", gate, "Precision", "Recall"
            );
            for r in self.rows_for(channel) {
                let _ = writeln!(
                    out,
                    "{:<26} {:>17} {:>10.6} {:>10.6}",
                    r.scorer.label(),
                    format!("{:.1}", r.threshold),
                    r.precision,
                    r.recall
                );
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(out, "# ablations are the dual-channel engine with parts switched off");
        let _ = writeln!(out, "# {RELEVANCE_RULE}");
        let _ = writeln!(out, "# {ZERO_DIVISION_RULE}");
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "channel",
            "scorer",
            "threshold",
            "e",
            "f",
            "g",
            "h",
            "precision",
            "recall",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.channel.to_string(),
                r.scorer.label().to_owned(),
                r.threshold.to_string(),
                r.counts.e.to_string(),
                r.counts.f.to_string(),
                r.counts.g.to_string(),
                r.counts.h.to_string(),
                format!("{:.6}", r.precision),
                format!("{:.6}", r.recall),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Unwritable(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Evaluates every scorer on both channels at the instance's own thresholds.
pub fn ablation_report(conf: &ConferenceInstance, labels: &RelevanceLabels) -> Result<AblationReport> {
    let untruncated = conf.sessions.len().max(1);
    let inst = conf.with_thresholds(Thresholds {
        top_n: untruncated,
        ..conf.thresholds
    });
    let mut rows = Vec::new();
    let per_scorer = Scorer::ALL
        .par_iter()
        .map(|&s| recommend_with(&inst, s.options()).map(|r| (s, r)))
        .collect::<Result<Vec<_>>>()?;
    for channel in Channel::ALL {
        for (scorer, recs) in &per_scorer {
            let counts = confusion(recs, labels, channel)?;
            rows.push(AblationRow {
                channel,
                scorer: *scorer,
                threshold: match channel {
                    Channel::SocialContext => conf.thresholds.gamma,
                    Channel::SocialRelations => conf.thresholds.beta,
                },
                precision: precision(&counts),
                recall: recall(&counts),
                counts,
            });
        }
    }
    Ok(AblationReport { rows })
}

/// Output of the full split → recommend → confusion → sweep pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRun {
    pub split: SplitSpec,
    pub sweep: SweepReport,
    pub ablation: AblationReport,
}

pub fn evaluate(
    conf: &ConferenceInstance,
    spec: SplitSpec,
    channel: Channel,
    grid: &[f64],
    dataset: &str,
) -> Result<EvaluationRun> {
    let (train, labels) = split(conf, spec)?;
    let mut report = sweep(&train, &labels, channel, grid)?;
    report.dataset = dataset.to_owned();
    report.seed = Some(spec.seed);
    let ablation = ablation_report(&train, &labels)?;
    Ok(EvaluationRun {
        split: spec,
        sweep: report,
        ablation,
    })
}

/// Participants appearing in `labels`.
pub fn evaluated_participants(labels: &RelevanceLabels) -> BTreeSet<ParticipantId> {
    labels.iter().map(|((p, _), _)| p.clone()).collect()
}
