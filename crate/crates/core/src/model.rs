//! Domain types shared by the recommender, the evaluation harness and the
//! dataset layer.
//!
//! Containers here are deliberately permissive: they accept any value so that
//! malformed data can be represented and reported by [`validate`]. Every
//! engine entry point validates its input before computing anything.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

macro_rules! normalized_string {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            /// Builds the value from its normalized (trimmed, lowercased) form.
            pub fn new(raw: &str) -> Self {
                Self(normalize(raw))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self::new(&s)
            }
        }

        impl From<$name> for String {
            fn from(v: $name) -> String {
                v.0
            }
        }
    };
}

/// Trims surrounding whitespace and lowercases.
pub fn normalize(raw: &str) -> String {
    raw.trim().to_lowercase()
}

string_id!(
    /// Identifies a conference participant (presenters are participants too).
    ParticipantId
);
string_id!(SessionId);
normalized_string!(
    /// A research-interest keyword.
    Tag
);
normalized_string!(
    /// A venue (room or hall) code.
    Location
);

/// Half-open window `[start, end)` in minutes from conference open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeSlot {
    pub start: u32,
    pub end: u32,
}

impl TimeSlot {
    pub fn new(start: u32, end: u32) -> Self {
        Self { start, end }
    }

    pub fn is_well_formed(&self, frame_t: u32) -> bool {
        self.start < self.end && self.end <= frame_t
    }

    /// True when `inner` lies entirely within `self`.
    pub fn contains(&self, inner: &TimeSlot) -> bool {
        self.start <= inner.start && inner.end <= self.end
    }

    pub fn len(&self) -> u32 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for TimeSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// A place and window in which a participant can attend sessions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AvailabilitySlot {
    pub location: Location,
    pub window: TimeSlot,
}

impl AvailabilitySlot {
    pub fn new(location: impl Into<Location>, start: u32, end: u32) -> Self {
        Self {
            location: location.into(),
            window: TimeSlot::new(start, end),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailabilityContext {
    pub owner: ParticipantId,
    /// An empty list means the participant is unavailable all day.
    pub slots: Vec<AvailabilitySlot>,
}

impl AvailabilityContext {
    pub fn new(owner: ParticipantId, slots: Vec<AvailabilitySlot>) -> Self {
        Self { owner, slots }
    }
}

/// A presentation: the recommendable item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: SessionId,
    pub presenter: ParticipantId,
    pub location: Location,
    pub slot: TimeSlot,
    pub topic_tags: BTreeSet<Tag>,
}

/// Participant × tag ratings on the 1–5 scale.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingMatrix {
    by_participant: BTreeMap<ParticipantId, BTreeMap<Tag, u8>>,
}

impl RatingMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces a rating, returning the previous value.
    pub fn insert(&mut self, participant: ParticipantId, tag: Tag, rating: u8) -> Option<u8> {
        self.by_participant.entry(participant).or_default().insert(tag, rating)
    }

    pub fn get(&self, participant: &ParticipantId, tag: &Tag) -> Option<u8> {
        self.by_participant.get(participant)?.get(tag).copied()
    }

    /// All ratings by one participant, keyed by tag.
    pub fn of(&self, participant: &ParticipantId) -> Option<&BTreeMap<Tag, u8>> {
        self.by_participant.get(participant)
    }

    /// Replaces everything `participant` has rated.
    pub fn replace_participant(&mut self, participant: ParticipantId, ratings: BTreeMap<Tag, u8>) {
        if ratings.is_empty() {
            self.by_participant.remove(&participant);
        } else {
            self.by_participant.insert(participant, ratings);
        }
    }

    pub fn participants(&self) -> impl Iterator<Item = &ParticipantId> {
        self.by_participant
            .iter()
            .filter(|(_, r)| !r.is_empty())
            .map(|(p, _)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ParticipantId, &Tag, u8)> {
        self.by_participant
            .iter()
            .flat_map(|(p, row)| row.iter().map(move |(t, r)| (p, t, *r)))
    }

    pub fn len(&self) -> usize {
        self.by_participant.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unordered participant pair; construction puts the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey(ParticipantId, ParticipantId);

impl PairKey {
    pub fn new(a: ParticipantId, b: ParticipantId) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }

    pub fn first(&self) -> &ParticipantId {
        &self.0
    }

    pub fn second(&self) -> &ParticipantId {
        &self.1
    }

    pub fn involves(&self, p: &ParticipantId) -> bool {
        &self.0 == p || &self.1 == p
    }

    /// The member of the pair that is not `p`.
    pub fn other(&self, p: &ParticipantId) -> Option<&ParticipantId> {
        if &self.0 == p {
            Some(&self.1)
        } else if &self.1 == p {
            Some(&self.0)
        } else {
            None
        }
    }
}

/// Aggregate contact record for one pair: meeting count and total minutes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contact {
    pub frequency: u32,
    pub duration: u32,
}

impl Contact {
    pub fn new(frequency: u32, duration: u32) -> Self {
        Self { frequency, duration }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContactLog {
    entries: BTreeMap<PairKey, Contact>,
}

impl ContactLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ParticipantId, b: ParticipantId, contact: Contact) -> Option<Contact> {
        self.entries.insert(PairKey::new(a, b), contact)
    }

    pub fn get(&self, a: &ParticipantId, b: &ParticipantId) -> Option<Contact> {
        self.entries.get(&PairKey::new(a.clone(), b.clone())).copied()
    }

    /// Removes every entry involving `p`.
    pub fn remove_participant(&mut self, p: &ParticipantId) {
        self.entries.retain(|k, _| !k.involves(p));
    }

    /// Entries involving `p`, as (other participant, contact).
    pub fn of<'a>(&'a self, p: &'a ParticipantId) -> impl Iterator<Item = (&'a ParticipantId, Contact)> + 'a {
        self.entries
            .iter()
            .filter_map(move |(k, c)| k.other(p).map(|o| (o, *c)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PairKey, &Contact)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Gate thresholds and list sizing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Pearson similarity gate, in [-1, 1].
    pub gamma: f64,
    /// Tie-strength gate, ≥ 0.
    pub beta: f64,
    /// Normalized degree-centrality gate, ≥ 0.
    pub delta: f64,
    /// Conference frame length in minutes.
    pub frame_t: u32,
    pub top_n: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            beta: 0.5,
            delta: 0.15,
            frame_t: 720,
            top_n: 10,
        }
    }
}

impl Thresholds {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(-1.0..=1.0).contains(&self.gamma) {
            out.push(format!("gamma {} must lie in [-1, 1]", self.gamma));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            out.push(format!("beta {} must be a finite value >= 0", self.beta));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            out.push(format!("delta {} must lie in [0, 1]", self.delta));
        }
        if self.frame_t == 0 {
            out.push("frame_t must be positive".to_owned());
        }
        if self.top_n == 0 {
            out.push("top_n must be positive".to_owned());
        }
        out
    }

    pub fn check(&self) -> crate::Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(crate::Error::InvalidThresholds(v.join("; ")))
        }
    }
}

/// Everything the recommender knows about one conference.
#[derive(Debug, Clone, PartialEq)]
pub struct ConferenceInstance {
    pub roster: BTreeSet<ParticipantId>,
    pub presenters: BTreeSet<ParticipantId>,
    pub sessions: Vec<Session>,
    pub ratings: RatingMatrix,
    pub contacts: ContactLog,
    pub availabilities: BTreeMap<ParticipantId, AvailabilityContext>,
    pub thresholds: Thresholds,
}

impl ConferenceInstance {
    pub fn empty(thresholds: Thresholds) -> Self {
        Self {
            roster: BTreeSet::new(),
            presenters: BTreeSet::new(),
            sessions: Vec::new(),
            ratings: RatingMatrix::new(),
            contacts: ContactLog::new(),
            availabilities: BTreeMap::new(),
            thresholds,
        }
    }

    pub fn session(&self, id: &SessionId) -> Option<&Session> {
        self.sessions.iter().find(|s| &s.id == id)
    }

    pub fn availability(&self, p: &ParticipantId) -> Option<&AvailabilityContext> {
        self.availabilities.get(p)
    }

    pub fn with_thresholds(&self, thresholds: Thresholds) -> Self {
        Self {
            thresholds,
            ..self.clone()
        }
    }

    pub fn require_member(&self, p: &ParticipantId) -> crate::Result<()> {
        if self.roster.contains(p) {
            Ok(())
        } else {
            Err(crate::Error::UnknownParticipant(p.clone()))
        }
    }
}

/// Lists every invariant violation in `conf`; empty when the instance is
/// well formed. Never fails.
pub fn validate(conf: &ConferenceInstance) -> Vec<String> {
    let mut out = conf.thresholds.violations();
    let frame_t = conf.thresholds.frame_t;

    for p in &conf.roster {
        if p.as_str().is_empty() {
            out.push("roster contains an empty participant id".to_owned());
        }
    }
    for p in conf.presenters.difference(&conf.roster) {
        out.push(format!("presenter {p} is not in the roster"));
    }

    let mut seen = BTreeSet::new();
    for s in &conf.sessions {
        if s.id.as_str().is_empty() {
            out.push("session with an empty id".to_owned());
        }
        if !seen.insert(&s.id) {
            out.push(format!("duplicate session id {}", s.id));
        }
        if !conf.roster.contains(&s.presenter) {
            out.push(format!(
                "session {}: presenter {} is not in the roster",
                s.id, s.presenter
            ));
        } else if !conf.presenters.contains(&s.presenter) {
            out.push(format!(
                "session {}: {} is not listed as a presenter",
                s.id, s.presenter
            ));
        }
        if s.location.as_str().is_empty() {
            out.push(format!("session {}: empty location", s.id));
        }
        if !s.slot.is_well_formed(frame_t) {
            out.push(format!(
                "session {}: time slot {} is not within [0, {frame_t}] with start < end",
                s.id, s.slot
            ));
        }
        if s.topic_tags.iter().any(|t| t.as_str().is_empty()) {
            out.push(format!("session {}: empty topic tag", s.id));
        }
    }

    for (p, tag, r) in conf.ratings.iter() {
        if !conf.roster.contains(p) {
            out.push(format!("rating by {p} on {tag:?}: participant is not in the roster"));
        }
        if tag.as_str().is_empty() {
            out.push(format!("rating by {p}: empty tag"));
        }
        if !(1..=5).contains(&r) {
            out.push(format!("rating out of range: {p} rated {tag:?} {r}, expected 1..=5"));
        }
    }

    for (pair, c) in conf.contacts.iter() {
        let (a, b) = (pair.first(), pair.second());
        if a == b {
            out.push(format!("contact {a}-{b}: self-pair"));
        }
        for p in [a, b] {
            if !conf.roster.contains(p) {
                out.push(format!("contact {a}-{b}: {p} is not in the roster"));
            }
        }
        if (c.frequency == 0) != (c.duration == 0) {
            out.push(format!(
                "contact {a}-{b}: frequency {} and duration {} must be zero together",
                c.frequency, c.duration
            ));
        }
    }

    for (p, avail) in &conf.availabilities {
        if !conf.roster.contains(p) {
            out.push(format!("availability for {p}: participant is not in the roster"));
        }
        if &avail.owner != p {
            out.push(format!("availability keyed by {p} is owned by {}", avail.owner));
        }
        for slot in &avail.slots {
            if slot.location.as_str().is_empty() {
                out.push(format!("availability for {p}: empty location"));
            }
            if !slot.window.is_well_formed(frame_t) {
                out.push(format!(
                    "availability for {p}: window {} is not within [0, {frame_t}] with start < end",
                    slot.window
                ));
            }
        }
    }

    out
}
