//! Brute-force reference recommender used by the integration and acceptance
//! tests. It shares no code with the engine: every gate is decided in exact
//! integer arithmetic and every score is kept as `num / sqrt(den_sq)`.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use venue_core::dataset::{generate, GeneratorConfig};
use venue_core::{
    AvailabilitySlot, ConferenceInstance, ParticipantId, ParticipantRecommendations, Recommendation, RecommendationSet,
    SessionId, Thresholds,
};

/// `num / sqrt(den_sq)` with `den_sq > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Exact {
    pub num: i128,
    pub den_sq: i128,
}

impl Exact {
    pub fn ratio(num: i128, den: i128) -> Self {
        assert!(den > 0);
        Self { num, den_sq: den * den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (self.den_sq as f64).sqrt()
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Exact {}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.num.signum(), other.num.signum());
        if a != b {
            return a.cmp(&b);
        }
        // same sign: compare squares, flipping for negatives
        let lhs = self.num * self.num * other.den_sq;
        let rhs = other.num * other.num * self.den_sq;
        if a >= 0 {
            lhs.cmp(&rhs)
        } else {
            rhs.cmp(&lhs)
        }
    }
}

/// Thresholds held as fractions so the oracle can compare exactly.
#[derive(Debug, Clone, Copy)]
pub struct Cutoffs {
    pub gamma: (i128, i128),
    pub beta: (i128, i128),
    pub delta: (i128, i128),
    pub top_n: usize,
}

impl Cutoffs {
    pub fn thresholds(&self, frame_t: u32) -> Thresholds {
        let f = |(p, q): (i128, i128)| p as f64 / q as f64;
        Thresholds {
            gamma: f(self.gamma),
            beta: f(self.beta),
            delta: f(self.delta),
            frame_t,
            top_n: self.top_n,
        }
    }

    pub fn random(rng: &mut impl Rng, n_sessions: usize) -> Self {
        Self {
            gamma: (rng.random_range(-4..=4), 4),
            beta: (rng.random_range(0..=8), 10),
            delta: (rng.random_range(0..=10), 10),
            top_n: rng.random_range(1..=n_sessions + 2),
        }
    }
}

pub fn random_instance(
    rng: &mut impl Rng,
    max_participants: usize,
    max_sessions: usize,
) -> (ConferenceInstance, Cutoffs) {
    let n_participants = rng.random_range(2..=max_participants);
    let n_sessions = rng.random_range(1..=max_sessions);
    let cfg = GeneratorConfig {
        seed: rng.random(),
        n_participants,
        n_presenters: rng.random_range(1..=n_participants.min(n_sessions)),
        n_sessions,
        tag_vocabulary: rng.random_range(2..=8),
        rating_density: rng.random_range(0.2..0.95),
        contact_density: rng.random_range(0.0..0.7),
        n_locations: rng.random_range(1..=3),
        availability_coverage: rng.random_range(0.3..0.95),
        ..GeneratorConfig::default()
    };
    let conf = generate(&cfg).expect("generator config is valid");
    let cut = Cutoffs::random(rng, n_sessions);
    let conf = conf.with_thresholds(cut.thresholds(cfg.frame_t));
    (conf, cut)
}

/// Mean-centred correlation over co-rated tags; `None` when undefined.
pub fn pearson_exact(conf: &ConferenceInstance, a: &ParticipantId, b: &ParticipantId) -> Option<Exact> {
    let (ra, rb) = (conf.ratings.of(a)?, conf.ratings.of(b)?);
    let pairs: Vec<(i128, i128)> = ra
        .iter()
        .filter_map(|(tag, &x)| rb.get(tag).map(|&y| (x as i128, y as i128)))
        .collect();
    let n = pairs.len() as i128;
    if n < 2 {
        return None;
    }
    let (sx, sy) = pairs.iter().fold((0, 0), |(sx, sy), (x, y)| (sx + x, sy + y));
    // deviations scaled by n to stay integral
    let dev: Vec<(i128, i128)> = pairs.iter().map(|(x, y)| (n * x - sx, n * y - sy)).collect();
    let cov: i128 = dev.iter().map(|(u, v)| u * v).sum();
    let vx: i128 = dev.iter().map(|(u, _)| u * u).sum();
    let vy: i128 = dev.iter().map(|(_, v)| v * v).sum();
    if vx == 0 || vy == 0 {
        return None;
    }
    Some(Exact {
        num: cov,
        den_sq: vx * vy,
    })
}

/// Direct floating-point evaluation of the correlation formula.
pub fn pearson_float(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for k in 0..n {
        num += (xs[k] - mx) * (ys[k] - my);
        dx += (xs[k] - mx).powi(2);
        dy += (ys[k] - my).powi(2);
    }
    if dx == 0.0 || dy == 0.0 {
        return None;
    }
    Some(num / (dx.sqrt() * dy.sqrt()))
}

pub fn tie_exact(conf: &ConferenceInstance, a: &ParticipantId, b: &ParticipantId) -> Exact {
    let c = conf.contacts.get(a, b).unwrap_or_default();
    Exact::ratio(
        c.frequency as i128 * c.duration as i128,
        conf.thresholds.frame_t as i128,
    )
}

pub fn centrality_exact(conf: &ConferenceInstance, j: &ParticipantId) -> Exact {
    let raw = conf
        .roster
        .iter()
        .filter(|m| *m != j && conf.contacts.get(m, j).is_some_and(|c| c.frequency >= 1))
        .count();
    Exact::ratio(raw as i128, conf.roster.len() as i128 - 1)
}

#[derive(Debug, Clone)]
pub struct Expected {
    pub session: SessionId,
    pub presenter: ParticipantId,
    pub score: Exact,
    pub pearson: Option<f64>,
    pub tie: Option<f64>,
    pub centrality: Option<f64>,
    pub kinds: Vec<&'static str>,
    pub slot: AvailabilitySlot,
}

#[derive(Debug, Clone, Default)]
pub struct ExpectedLists {
    pub social_context: Vec<Expected>,
    pub social_relations: Vec<Expected>,
}

fn frac((p, q): (i128, i128)) -> Exact {
    Exact::ratio(p, q)
}

pub fn brute_force_for(conf: &ConferenceInstance, cut: &Cutoffs, i: &ParticipantId) -> ExpectedLists {
    let mut out = ExpectedLists::default();
    let Some(avail) = conf.availabilities.get(i) else {
        return out;
    };
    for s in &conf.sessions {
        let j = &s.presenter;
        if j == i {
            continue;
        }
        let Some(slot) = avail
            .slots
            .iter()
            .find(|a| a.location == s.location && a.window.start <= s.slot.start && s.slot.end <= a.window.end)
        else {
            continue;
        };
        let r = pearson_exact(conf, i, j);
        if let Some(r) = r.filter(|r| *r >= frac(cut.gamma)) {
            let mut kinds = vec!["A2", "A4"];
            if !s.topic_tags.is_empty() {
                kinds.push("A3");
            }
            out.social_context.push(Expected {
                session: s.id.clone(),
                presenter: j.clone(),
                score: r,
                pearson: Some(r.to_f64()),
                tie: None,
                centrality: None,
                kinds,
                slot: slot.clone(),
            });
        }
        let tie = tie_exact(conf, i, j);
        let cent = centrality_exact(conf, j);
        let tie_ok = tie >= frac(cut.beta);
        let cent_ok = cent >= frac(cut.delta);
        if tie_ok || cent_ok {
            let score = match (tie_ok, cent_ok) {
                (true, true) => tie.max(cent),
                (true, false) => tie,
                _ => cent,
            };
            out.social_relations.push(Expected {
                session: s.id.clone(),
                presenter: j.clone(),
                score,
                pearson: None,
                tie: tie_ok.then(|| tie.to_f64()),
                centrality: cent_ok.then(|| cent.to_f64()),
                kinds: vec!["A1", "A2"],
                slot: slot.clone(),
            });
        }
    }
    for list in [&mut out.social_context, &mut out.social_relations] {
        list.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.session.cmp(&b.session)));
        list.truncate(cut.top_n);
    }
    out
}

pub fn brute_force(conf: &ConferenceInstance, cut: &Cutoffs) -> BTreeMap<ParticipantId, ExpectedLists> {
    conf.roster
        .iter()
        .map(|i| (i.clone(), brute_force_for(conf, cut, i)))
        .collect()
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9,
        _ => false,
    }
}

fn check_list(who: &ParticipantId, got: &[Recommendation], want: &[Expected]) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!(
            "{who}: {} recommendations, oracle has {}",
            got.len(),
            want.len()
        ));
    }
    for (g, w) in got.iter().zip(want) {
        let kinds: BTreeSet<String> = g
            .explanation
            .relation_kinds
            .iter()
            .map(|k| k.code().to_owned())
            .collect();
        let want_kinds: BTreeSet<String> = w.kinds.iter().map(|k| k.to_string()).collect();
        let gv = &g.explanation.gate_values;
        let ok = g.participant == *who
            && g.session == w.session
            && g.presenter == w.presenter
            && (g.score - w.score.to_f64()).abs() <= 1e-9
            && close(gv.pearson, w.pearson)
            && close(gv.tie_strength, w.tie)
            && close(gv.degree_centrality, w.centrality)
            && kinds == want_kinds
            && g.explanation.matched_slot == w.slot;
        if !ok {
            return Err(format!("{who}: engine {g:?} vs oracle {w:?}"));
        }
    }
    Ok(())
}

pub fn check_participant(
    who: &ParticipantId,
    got: &ParticipantRecommendations,
    want: &ExpectedLists,
) -> Result<(), String> {
    check_list(who, &got.social_context, &want.social_context)?;
    check_list(who, &got.social_relations, &want.social_relations)
}

pub fn check_set(got: &RecommendationSet, want: &BTreeMap<ParticipantId, ExpectedLists>) -> Result<(), String> {
    let got_ids: Vec<_> = got.participants().map(|(p, _)| p.clone()).collect();
    let want_ids: Vec<_> = want.keys().cloned().collect();
    if got_ids != want_ids {
        return Err(format!("participants differ: {got_ids:?} vs {want_ids:?}"));
    }
    for (p, lists) in got.participants() {
        check_participant(p, lists, &want[p])?;
    }
    Ok(())
}
