//! Socially-aware recommendation of presentation sessions for conference
//! participants.
//!
//! Two independent channels decide which sessions to suggest to a participant:
//!
//! * **social context**: the Pearson correlation of tag ratings between the
//!   participant and the presenter clears a threshold `gamma`;
//! * **social relations**: the participant–presenter tie strength clears
//!   `beta`, or the presenter's degree centrality clears `delta`.
//!
//! Candidates from either channel are kept only when the participant is
//! available at the session's room for its whole time slot.
//!
//! The crate also carries the dataset format and a seeded generator
//! ([`dataset`]) and an offline precision/recall harness ([`evaluation`]).

pub mod dataset;
mod error;
pub mod evaluation;
pub mod model;
pub mod recommender;
pub mod similarity;
pub mod social;

pub use error::{Error, Result};
pub use model::{
    validate, AvailabilityContext, AvailabilitySlot, ConferenceInstance, Contact, ContactLog, Location, ParticipantId,
    RatingMatrix, Session, SessionId, Tag, Thresholds, TimeSlot,
};
pub use recommender::{
    context_match, explain, recommend, recommend_for, recommend_for_with, recommend_with, Channel, Explanation,
    GateValues, ParticipantRecommendations, Recommendation, RecommendationSet, RecommenderOptions, RelationKind,
};
pub use similarity::{k_most_similar, passes_gamma, pearson, SimilarityScore};
pub use social::{degree_centrality, passes_beta, passes_delta, tie_strength, DegreeCentrality, TieStrength};
