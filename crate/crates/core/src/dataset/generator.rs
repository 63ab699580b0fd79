//! Seeded synthetic conference generator.
//!
//! Defaults describe a 78-person, 12-hour conference whose heaviest contact is
//! 7 meetings totalling 80 minutes. Ratings, contact frequencies and contact
//! durations are drawn uniformly since only their ranges are known.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{
    AvailabilityContext, AvailabilitySlot, ConferenceInstance, Contact, Location, ParticipantId, RatingMatrix, Session,
    SessionId, Tag, Thresholds, TimeSlot,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n_participants: usize,
    pub n_presenters: usize,
    pub n_sessions: usize,
    pub tag_vocabulary: usize,
    /// Probability that a participant rates a given tag.
    pub rating_density: f64,
    pub max_contact_duration: u32,
    pub max_contact_frequency: u32,
    /// Probability that a pair of participants met at all.
    pub contact_density: f64,
    pub frame_t: u32,
    pub session_length: u32,
    pub n_locations: usize,
    /// Probability that a participant is free in a given session block.
    pub availability_coverage: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            n_participants: 78,
            n_presenters: 20,
            n_sessions: 30,
            tag_vocabulary: 24,
            rating_density: 0.25,
            max_contact_duration: 80,
            max_contact_frequency: 7,
            contact_density: 0.1,
            frame_t: 720,
            session_length: 60,
            n_locations: 4,
            availability_coverage: 0.6,
        }
    }
}

impl GeneratorConfig {
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        let unit = |x: f64| x > 0.0 && x <= 1.0;
        if self.n_participants < 2 {
            return bad(format!("n_participants {} must be at least 2", self.n_participants));
        }
        if self.n_presenters == 0 || self.n_presenters > self.n_participants {
            return bad(format!(
                "n_presenters {} must lie in 1..={}",
                self.n_presenters, self.n_participants
            ));
        }
        if self.n_sessions == 0 {
            return bad("n_sessions must be at least 1".into());
        }
        if self.tag_vocabulary == 0 {
            return bad("tag_vocabulary must be at least 1".into());
        }
        if !unit(self.rating_density) {
            return bad(format!("rating_density {} must lie in (0, 1]", self.rating_density));
        }
        if !(0.0..=1.0).contains(&self.contact_density) {
            return bad(format!("contact_density {} must lie in [0, 1]", self.contact_density));
        }
        if !unit(self.availability_coverage) {
            return bad(format!(
                "availability_coverage {} must lie in (0, 1]",
                self.availability_coverage
            ));
        }
        if self.frame_t == 0 {
            return bad("frame_t must be positive".into());
        }
        if self.session_length == 0 || self.session_length > self.frame_t {
            return bad(format!(
                "session_length {} must lie in 1..={}",
                self.session_length, self.frame_t
            ));
        }
        if self.n_locations == 0 {
            return bad("n_locations must be at least 1".into());
        }
        let capacity = self.n_locations * (self.frame_t / self.session_length) as usize;
        if self.n_sessions > capacity {
            return bad(format!(
                "{} sessions cannot fit: {} locations × {} slots of {} minutes",
                self.n_sessions,
                self.n_locations,
                self.frame_t / self.session_length,
                self.session_length
            ));
        }
        Ok(())
    }

    fn blocks(&self) -> u32 {
        self.frame_t / self.session_length
    }
}

fn width(n: usize) -> usize {
    n.to_string().len().max(2)
}

pub fn generate(cfg: &GeneratorConfig) -> Result<ConferenceInstance> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let w = width(cfg.n_participants);
    let people: Vec<ParticipantId> = (1..=cfg.n_participants)
        .map(|k| ParticipantId::new(format!("p{k:0w$}")))
        .collect();
    let tags: Vec<Tag> = (1..=cfg.tag_vocabulary)
        .map(|k| Tag::new(&format!("topic-{k:0width$}", width = width(cfg.tag_vocabulary))))
        .collect();
    let locations: Vec<Location> = (1..=cfg.n_locations)
        .map(|k| Location::new(&format!("room-{k}")))
        .collect();

    let mut shuffled = people.clone();
    shuffled.shuffle(&mut rng);
    let mut presenter_order: Vec<ParticipantId> = shuffled[..cfg.n_presenters].to_vec();
    let presenters: BTreeSet<ParticipantId> = presenter_order.iter().cloned().collect();
    presenter_order.sort();

    // Every participant rates at least two tags (when the vocabulary allows)
    // so instances can always be split for evaluation.
    let min_rated = cfg.tag_vocabulary.min(2);
    let mut ratings = RatingMatrix::new();
    for p in &people {
        let mut row: BTreeMap<Tag, u8> = BTreeMap::new();
        for t in &tags {
            if rng.random_bool(cfg.rating_density) {
                row.insert(t.clone(), rng.random_range(1..=5));
            }
        }
        while row.len() < min_rated {
            let t = tags.choose(&mut rng).expect("non-empty vocabulary");
            if !row.contains_key(t) {
                row.insert(t.clone(), rng.random_range(1..=5));
            }
        }
        ratings.replace_participant(p.clone(), row);
    }

    let mut contacts = crate::model::ContactLog::new();
    let can_meet = cfg.max_contact_frequency > 0 && cfg.max_contact_duration > 0;
    for (i, a) in people.iter().enumerate() {
        for b in &people[i + 1..] {
            if can_meet && rng.random_bool(cfg.contact_density) {
                let frequency = rng.random_range(1..=cfg.max_contact_frequency);
                let duration = rng.random_range(1..=cfg.max_contact_duration);
                contacts.insert(a.clone(), b.clone(), Contact::new(frequency, duration));
            }
        }
    }

    let blocks = cfg.blocks();
    let mut cells: Vec<(u32, usize)> = (0..blocks)
        .flat_map(|b| (0..cfg.n_locations).map(move |l| (b, l)))
        .collect();
    cells.shuffle(&mut rng);
    let mut chosen = cells[..cfg.n_sessions].to_vec();
    chosen.sort();
    let sw = width(cfg.n_sessions);
    let mut sessions = Vec::with_capacity(cfg.n_sessions);
    for (k, (block, loc)) in chosen.into_iter().enumerate() {
        let n_tags = rng.random_range(1..=cfg.tag_vocabulary.min(3));
        let topic_tags: BTreeSet<Tag> = tags.choose_multiple(&mut rng, n_tags).cloned().collect();
        let start = block * cfg.session_length;
        sessions.push(Session {
            id: SessionId::new(format!("s{:0sw$}", k + 1)),
            presenter: presenter_order[k % presenter_order.len()].clone(),
            location: locations[loc].clone(),
            slot: TimeSlot::new(start, start + cfg.session_length),
            topic_tags,
        });
    }

    let mut availabilities = BTreeMap::new();
    for p in &people {
        let mut slots: Vec<AvailabilitySlot> = Vec::new();
        for block in 0..blocks {
            if !rng.random_bool(cfg.availability_coverage) {
                continue;
            }
            let location = locations.choose(&mut rng).expect("at least one location").clone();
            let (start, end) = (block * cfg.session_length, (block + 1) * cfg.session_length);
            match slots.last_mut() {
                Some(last) if last.location == location && last.window.end == start => last.window.end = end,
                _ => slots.push(AvailabilitySlot {
                    location,
                    window: TimeSlot::new(start, end),
                }),
            }
        }
        availabilities.insert(p.clone(), AvailabilityContext::new(p.clone(), slots));
    }

    Ok(ConferenceInstance {
        roster: people.into_iter().collect(),
        presenters,
        sessions,
        ratings,
        contacts,
        availabilities,
        thresholds: Thresholds {
            frame_t: cfg.frame_t,
            ..Thresholds::default()
        },
    })
}
