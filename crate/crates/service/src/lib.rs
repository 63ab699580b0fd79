//! HTTP front end for the session recommender.
//!
//! Every response is computed from a single immutable [`Snapshot`]; writes are
//! queued, validated and published as a new snapshot version.
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/version` | current snapshot version |
//! | GET | `/sessions` | all sessions |
//! | GET | `/participants/{id}/recommendations` | per-channel lists; `channel`, `gamma`, `beta`, `delta`, `top_n` query overrides |
//! | PUT | `/participants/{id}/ratings` | replace the participant's tag ratings |
//! | PUT | `/participants/{id}/availability` | replace the participant's availability slots |
//! | PUT | `/participants/{id}/contacts` | replace the participant's contact records |
//! | GET | `/presenters/{id}/centrality` | raw and normalized degree centrality |

mod error;
mod state;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::{Path, Query, Request, State};
use axum::middleware::{self, Next};
use axum::response::Response;
use axum::routing::{get, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use venue_core::{
    degree_centrality, recommend_for, AvailabilityContext, AvailabilitySlot, Channel, Contact, ParticipantId,
    Recommendation, Session, Tag, Thresholds,
};

pub use error::ApiError;
pub use state::{AppState, Snapshot};

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/version", get(version))
        .route("/sessions", get(sessions))
        .route("/participants/{id}/recommendations", get(recommendations))
        .route("/participants/{id}/ratings", put(put_ratings))
        .route("/participants/{id}/availability", put(put_availability))
        .route("/participants/{id}/contacts", put(put_contacts))
        .route("/presenters/{id}/centrality", get(centrality))
        .layer(middleware::from_fn(log_requests))
        .with_state(state)
}

async fn log_requests(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let path = req.uri().path().to_owned();
    let started = Instant::now();
    let response = next.run(req).await;
    tracing::info!(
        %method,
        %path,
        status = response.status().as_u16(),
        elapsed_us = started.elapsed().as_micros() as u64,
        "request"
    );
    response
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VersionResponse {
    pub version: u64,
}

async fn version(State(state): State<Arc<AppState>>) -> Json<VersionResponse> {
    Json(VersionResponse {
        version: state.snapshot().version,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionsResponse {
    pub version: u64,
    pub sessions: Vec<Session>,
}

async fn sessions(State(state): State<Arc<AppState>>) -> Json<SessionsResponse> {
    let snap = state.snapshot();
    Json(SessionsResponse {
        version: snap.version,
        sessions: snap.conf.sessions.clone(),
    })
}

/// Query string of the recommendations endpoint. Values are parsed by hand
/// so malformed numbers produce a 422 with a violation list.
#[derive(Debug, Default, Deserialize)]
pub struct RecommendationQuery {
    pub channel: Option<String>,
    pub gamma: Option<String>,
    pub beta: Option<String>,
    pub delta: Option<String>,
    pub top_n: Option<String>,
}

impl RecommendationQuery {
    fn has_overrides(&self) -> bool {
        self.gamma.is_some() || self.beta.is_some() || self.delta.is_some() || self.top_n.is_some()
    }

    fn thresholds(&self, base: Thresholds) -> Result<Thresholds, ApiError> {
        fn parse<T: std::str::FromStr>(name: &str, raw: &Option<String>, v: &mut Vec<String>) -> Option<T> {
            let raw = raw.as_ref()?;
            let parsed = raw.trim().parse().ok();
            if parsed.is_none() {
                v.push(format!("{name} {raw:?} is not a number"));
            }
            parsed
        }
        let mut violations = Vec::new();
        let mut t = base;
        if let Some(g) = parse("gamma", &self.gamma, &mut violations) {
            t.gamma = g;
        }
        if let Some(b) = parse("beta", &self.beta, &mut violations) {
            t.beta = b;
        }
        if let Some(d) = parse("delta", &self.delta, &mut violations) {
            t.delta = d;
        }
        if let Some(n) = parse("top_n", &self.top_n, &mut violations) {
            t.top_n = n;
        }
        violations.extend(t.violations());
        if violations.is_empty() {
            Ok(t)
        } else {
            Err(ApiError::Unprocessable(violations))
        }
    }

    fn channel(&self) -> Result<Option<Channel>, ApiError> {
        match self.channel.as_deref() {
            None | Some("") => Ok(None),
            Some(c) => c.parse().map(Some).map_err(ApiError::unprocessable),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RecommendationsResponse {
    pub version: u64,
    pub participant: ParticipantId,
    /// Thresholds the lists were computed with.
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub social_context: Option<Vec<Recommendation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub social_relations: Option<Vec<Recommendation>>,
}

fn member(snap: &Snapshot, id: &str) -> Result<ParticipantId, ApiError> {
    let p = ParticipantId::new(id);
    if snap.conf.roster.contains(&p) {
        Ok(p)
    } else {
        Err(ApiError::NotFound(format!("unknown participant {id}")))
    }
}

async fn recommendations(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(query): Query<RecommendationQuery>,
) -> Result<Json<RecommendationsResponse>, ApiError> {
    let snap = state.snapshot();
    let participant = member(&snap, &id)?;
    let channel = query.channel()?;
    let thresholds = query.thresholds(snap.conf.thresholds)?;

    let lists = if query.has_overrides() {
        recommend_for(&snap.conf.with_thresholds(thresholds), &participant).map_err(ApiError::from_engine)?
    } else {
        snap.recs.get(&participant).cloned().unwrap_or_default()
    };
    let want = |c: Channel| channel.is_none_or(|only| only == c);
    Ok(Json(RecommendationsResponse {
        version: snap.version,
        participant,
        thresholds,
        social_context: want(Channel::SocialContext).then_some(lists.social_context),
        social_relations: want(Channel::SocialRelations).then_some(lists.social_relations),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WriteResponse {
    pub version: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RatingsUpdate {
    #[serde(default)]
    pub expected_version: Option<u64>,
    /// Tag → rating on the 1–5 scale. Replaces all of the participant's ratings.
    pub ratings: BTreeMap<String, i64>,
}

async fn put_ratings(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(body): Json<RatingsUpdate>,
) -> Result<Json<WriteResponse>, ApiError> {
    let p = member(&state.snapshot(), &id)?;
    let snap = state
        .apply(body.expected_version, |conf| {
            let mut row = BTreeMap::new();
            let mut violations = Vec::new();
            for (raw, r) in &body.ratings {
                let tag = Tag::new(raw);
                match u8::try_from(*r) {
                    Ok(v) => {
                        if row.insert(tag.clone(), v).is_some() {
                            violations.push(format!("duplicate tag {tag:?} after normalization"));
                        }
                    }
                    Err(_) => violations.push(format!("rating out of range: {p} rated {tag:?} {r}, expected 1..=5")),
                }
            }
            if !violations.is_empty() {
                return Err(ApiError::Unprocessable(violations));
            }
            conf.ratings.replace_participant(p.clone(), row);
            Ok(())
        })
        .await?;
    Ok(Json(WriteResponse { version: snap.version }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SlotBody {
    pub location: String,
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AvailabilityUpdate {
    #[serde(default)]
    pub expected_version: Option<u64>,
    pub slots: Vec<SlotBody>,
}

async fn put_availability(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(body): Json<AvailabilityUpdate>,
) -> Result<Json<WriteResponse>, ApiError> {
    let p = member(&state.snapshot(), &id)?;
    let snap = state
        .apply(body.expected_version, |conf| {
            let slots = body
                .slots
                .iter()
                .map(|s| AvailabilitySlot::new(s.location.as_str(), s.start, s.end))
                .collect();
            conf.availabilities
                .insert(p.clone(), AvailabilityContext::new(p.clone(), slots));
            Ok(())
        })
        .await?;
    Ok(Json(WriteResponse { version: snap.version }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ContactBody {
    pub participant: String,
    pub frequency: u32,
    /// Total minutes in contact.
    pub duration: u32,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ContactsUpdate {
    #[serde(default)]
    pub expected_version: Option<u64>,
    /// Replaces every contact record involving the participant.
    pub contacts: Vec<ContactBody>,
}

async fn put_contacts(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(body): Json<ContactsUpdate>,
) -> Result<Json<WriteResponse>, ApiError> {
    let p = member(&state.snapshot(), &id)?;
    let snap = state
        .apply(body.expected_version, |conf| {
            conf.contacts.remove_participant(&p);
            for c in &body.contacts {
                let other = ParticipantId::new(c.participant.as_str());
                if conf
                    .contacts
                    .insert(p.clone(), other, Contact::new(c.frequency, c.duration))
                    .is_some()
                {
                    return Err(ApiError::unprocessable(format!(
                        "duplicate contact with {}",
                        c.participant
                    )));
                }
            }
            Ok(())
        })
        .await?;
    Ok(Json(WriteResponse { version: snap.version }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CentralityResponse {
    pub version: u64,
    pub presenter: ParticipantId,
    pub raw: usize,
    pub normalized: f64,
}

async fn centrality(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<CentralityResponse>, ApiError> {
    let snap = state.snapshot();
    let p = ParticipantId::new(id.as_str());
    if !snap.conf.presenters.contains(&p) {
        return Err(ApiError::NotFound(format!("unknown presenter {id}")));
    }
    let c = degree_centrality(&snap.conf, &p).map_err(ApiError::from_engine)?;
    Ok(Json(CentralityResponse {
        version: snap.version,
        presenter: p,
        raw: c.raw,
        normalized: c.normalized,
    }))
}
