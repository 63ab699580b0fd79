//! Dual-channel session recommendation.
//!
//! For every participant `i` and every session whose presenter `j` is not `i`:
//!
//! * the **social context** channel admits the session when
//!   `pearson(i, j) >= gamma`;
//! * the **social relations** channel admits it when
//!   `tie(i, j) >= beta` OR `centrality(j) >= delta`.
//!
//! Either way the session must then survive contextual post-filtering: one of
//! `i`'s availability slots must be at the session's location and cover its
//! whole time slot. The channels are evaluated independently, so a session
//! can be recommended on both.
//!
//! A participant's lists depend only on their own ratings, contacts and
//! availability plus public presenter data, which is what lets
//! [`recommend_for`] run per participant and still agree with [`recommend`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{
    validate, AvailabilityContext, AvailabilitySlot, ConferenceInstance, ParticipantId, Session, SessionId,
};
use crate::similarity::{self, passes_gamma, SimilarityScore};
use crate::social::{self, passes_beta, passes_delta, DegreeCentrality};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    SocialContext,
    SocialRelations,
}

impl Channel {
    pub const ALL: [Channel; 2] = [Channel::SocialContext, Channel::SocialRelations];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::SocialContext => "social_context",
            Channel::SocialRelations => "social_relations",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "social_context" | "context" => Ok(Channel::SocialContext),
            "social_relations" | "relations" => Ok(Channel::SocialRelations),
            other => Err(format!(
                "unknown channel {other:?} (expected social_context or social_relations)"
            )),
        }
    }
}

/// Relation types linking a participant to a recommended session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// A1: user–user social network link.
    #[serde(rename = "A1")]
    SocialNetwork,
    /// A2: the session's location/time annotation that matched.
    #[serde(rename = "A2")]
    Comment,
    /// A3: item content, via the session's topic tags.
    #[serde(rename = "A3")]
    ItemContent,
    /// A4: user–tag–item tag post.
    #[serde(rename = "A4")]
    TagPost,
}

impl RelationKind {
    pub fn code(self) -> &'static str {
        match self {
            RelationKind::SocialNetwork => "A1",
            RelationKind::Comment => "A2",
            RelationKind::ItemContent => "A3",
            RelationKind::TagPost => "A4",
        }
    }
}

/// Values of the gates that admitted a recommendation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GateValues {
    pub pearson: Option<f64>,
    pub tie_strength: Option<f64>,
    pub degree_centrality: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub relation_kinds: BTreeSet<RelationKind>,
    pub gate_values: GateValues,
    pub matched_slot: AvailabilitySlot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub participant: ParticipantId,
    pub session: SessionId,
    pub presenter: ParticipantId,
    pub channel: Channel,
    /// The gate value that admitted the session: the Pearson score on the
    /// context channel, the larger passing tie/centrality value otherwise.
    pub score: f64,
    pub explanation: Explanation,
}

pub fn explain(rec: &Recommendation) -> &Explanation {
    &rec.explanation
}

/// One participant's ranked lists.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParticipantRecommendations {
    pub social_context: Vec<Recommendation>,
    pub social_relations: Vec<Recommendation>,
}

impl ParticipantRecommendations {
    pub fn channel(&self, channel: Channel) -> &[Recommendation] {
        match channel {
            Channel::SocialContext => &self.social_context,
            Channel::SocialRelations => &self.social_relations,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Recommendation> {
        self.social_context.iter().chain(&self.social_relations)
    }

    pub fn is_empty(&self) -> bool {
        self.social_context.is_empty() && self.social_relations.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecommendationSet {
    by_participant: BTreeMap<ParticipantId, ParticipantRecommendations>,
}

impl RecommendationSet {
    pub fn get(&self, p: &ParticipantId) -> Option<&ParticipantRecommendations> {
        self.by_participant.get(p)
    }

    pub fn insert(&mut self, p: ParticipantId, recs: ParticipantRecommendations) {
        self.by_participant.insert(p, recs);
    }

    pub fn participants(&self) -> impl Iterator<Item = (&ParticipantId, &ParticipantRecommendations)> {
        self.by_participant.iter()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Recommendation> {
        self.by_participant.values().flat_map(ParticipantRecommendations::iter)
    }

    pub fn channel(&self, channel: Channel) -> impl Iterator<Item = &Recommendation> {
        self.by_participant
            .values()
            .flat_map(move |r| r.channel(channel).iter())
    }

    /// `(participant, session)` pairs recommended on `channel`.
    pub fn pairs(&self, channel: Channel) -> BTreeSet<(ParticipantId, SessionId)> {
        self.channel(channel)
            .map(|r| (r.participant.clone(), r.session.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Switches for ablations and the conjunctive reading of the relations gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecommenderOptions {
    pub social_context: bool,
    pub social_relations: bool,
    /// Tie-strength branch of the relations gate.
    pub tie_branch: bool,
    /// Degree-centrality branch of the relations gate.
    pub centrality_branch: bool,
    /// Also require the Pearson gate on the relations channel.
    pub strict: bool,
}

impl Default for RecommenderOptions {
    fn default() -> Self {
        Self {
            social_context: true,
            social_relations: true,
            tie_branch: true,
            centrality_branch: true,
            strict: false,
        }
    }
}

/// First availability slot at the session's location whose window covers
/// the whole session.
pub fn context_match(session: &Session, avail: &AvailabilityContext) -> Option<AvailabilitySlot> {
    avail
        .slots
        .iter()
        .find(|s| s.location == session.location && s.window.contains(&session.slot))
        .cloned()
}

struct Engine<'a> {
    conf: &'a ConferenceInstance,
    centrality: BTreeMap<ParticipantId, DegreeCentrality>,
    options: RecommenderOptions,
}

impl<'a> Engine<'a> {
    fn new(conf: &'a ConferenceInstance, options: RecommenderOptions) -> Result<Self> {
        let violations = validate(conf);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(Self {
            conf,
            centrality: social::all_degree_centralities(conf)?,
            options,
        })
    }

    fn for_participant(&self, i: &ParticipantId) -> Result<ParticipantRecommendations> {
        let conf = self.conf;
        let t = &conf.thresholds;
        let mut out = ParticipantRecommendations::default();
        let Some(avail) = conf.availability(i) else {
            return Ok(out);
        };
        let mut similarity: BTreeMap<&ParticipantId, SimilarityScore> = BTreeMap::new();

        for session in conf.sessions.iter().filter(|s| &s.presenter != i) {
            let Some(matched) = context_match(session, avail) else {
                continue;
            };
            let j = &session.presenter;
            let sim = match similarity.get(j) {
                Some(s) => *s,
                None => {
                    let s = similarity::pearson(&conf.ratings, i, j)?;
                    similarity.insert(j, s);
                    s
                }
            };

            if self.options.social_context && passes_gamma(sim, t) {
                let mut kinds = BTreeSet::from([RelationKind::TagPost, RelationKind::Comment]);
                if !session.topic_tags.is_empty() {
                    kinds.insert(RelationKind::ItemContent);
                }
                let pearson = sim.value();
                out.social_context.push(Recommendation {
                    participant: i.clone(),
                    session: session.id.clone(),
                    presenter: j.clone(),
                    channel: Channel::SocialContext,
                    score: pearson.unwrap_or_default(),
                    explanation: Explanation {
                        relation_kinds: kinds,
                        gate_values: GateValues {
                            pearson,
                            ..GateValues::default()
                        },
                        matched_slot: matched.clone(),
                    },
                });
            }

            if self.options.social_relations {
                let tie = social::tie_strength(&conf.contacts, i, j, t.frame_t)?;
                let centrality = self.centrality[j];
                let tie_ok = self.options.tie_branch && passes_beta(tie, t);
                let cent_ok = self.options.centrality_branch && passes_delta(centrality, t);
                let pearson_ok = !self.options.strict || passes_gamma(sim, t);
                if (tie_ok || cent_ok) && pearson_ok {
                    let gates = GateValues {
                        pearson: if self.options.strict { sim.value() } else { None },
                        tie_strength: tie_ok.then_some(tie.value()),
                        degree_centrality: cent_ok.then_some(centrality.normalized),
                    };
                    let score = gates
                        .tie_strength
                        .into_iter()
                        .chain(gates.degree_centrality)
                        .fold(f64::NEG_INFINITY, f64::max);
                    out.social_relations.push(Recommendation {
                        participant: i.clone(),
                        session: session.id.clone(),
                        presenter: j.clone(),
                        channel: Channel::SocialRelations,
                        score,
                        explanation: Explanation {
                            relation_kinds: BTreeSet::from([RelationKind::SocialNetwork, RelationKind::Comment]),
                            gate_values: gates,
                            matched_slot: matched,
                        },
                    });
                }
            }
        }

        rank(&mut out.social_context, t.top_n);
        rank(&mut out.social_relations, t.top_n);
        Ok(out)
    }
}

/// Score descending, then session id ascending; keep the first `top_n`.
pub(crate) fn rank(list: &mut Vec<Recommendation>, top_n: usize) {
    list.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.session.cmp(&b.session))
    });
    list.truncate(top_n);
}

pub fn recommend(conf: &ConferenceInstance) -> Result<RecommendationSet> {
    recommend_with(conf, RecommenderOptions::default())
}

pub fn recommend_with(conf: &ConferenceInstance, options: RecommenderOptions) -> Result<RecommendationSet> {
    let engine = Engine::new(conf, options)?;
    let lists = conf
        .roster
        .par_iter()
        .map(|p| engine.for_participant(p).map(|r| (p.clone(), r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RecommendationSet {
        by_participant: lists.into_iter().collect(),
    })
}

/// Recommendations for a single participant.
pub fn recommend_for(conf: &ConferenceInstance, participant: &ParticipantId) -> Result<ParticipantRecommendations> {
    recommend_for_with(conf, participant, RecommenderOptions::default())
}

pub fn recommend_for_with(
    conf: &ConferenceInstance,
    participant: &ParticipantId,
    options: RecommenderOptions,
) -> Result<ParticipantRecommendations> {
    conf.require_member(participant)?;
    Engine::new(conf, options)?.for_participant(participant)
}
