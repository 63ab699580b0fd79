//! User-based collaborative filtering: Pearson correlation over co-rated tags.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{ConferenceInstance, ParticipantId, RatingMatrix, Tag, Thresholds};
use crate::{Error, Result};

/// Pearson correlation between two participants, or `Undefined` when fewer
/// than two tags are co-rated or either side has zero variance on them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityScore {
    Defined(f64),
    Undefined,
}

impl SimilarityScore {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Defined(v) => Some(v),
            Self::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Self::Defined(_))
    }
}

/// Pearson correlation of paired observations.
///
/// Works on exact integer moments, `n·Σxy − Σx·Σy` over the square root of
/// the product of the two `n·Σx² − (Σx)²` terms, so perfect (dis)agreement
/// comes out as exactly ±1 and swapping the series is bit-identical.
pub fn correlation<I>(pairs: I) -> SimilarityScore
where
    I: IntoIterator<Item = (i64, i64)>,
{
    let (mut n, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128, 0i128);
    for (x, y) in pairs {
        let (x, y) = (i128::from(x), i128::from(y));
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    if n < 2 {
        return SimilarityScore::Undefined;
    }
    let var_x = n * sxx - sx * sx;
    let var_y = n * syy - sy * sy;
    if var_x == 0 || var_y == 0 {
        return SimilarityScore::Undefined;
    }
    let cov = n * sxy - sx * sy;
    // var_x·var_y is formed in f64 so the two factors commute exactly.
    let r = cov as f64 / ((var_x as f64) * (var_y as f64)).sqrt();
    SimilarityScore::Defined(r.clamp(-1.0, 1.0))
}

fn co_rated<'a>(a: &'a BTreeMap<Tag, u8>, b: &'a BTreeMap<Tag, u8>) -> impl Iterator<Item = (i64, i64)> + 'a {
    a.iter()
        .filter_map(move |(tag, &ra)| b.get(tag).map(|&rb| (i64::from(ra), i64::from(rb))))
}

/// Pearson correlation between `c` and `d` over the tags both have rated.
pub fn pearson(ratings: &RatingMatrix, c: &ParticipantId, d: &ParticipantId) -> Result<SimilarityScore> {
    if c == d {
        return Err(Error::SelfPair(c.clone()));
    }
    Ok(match (ratings.of(c), ratings.of(d)) {
        (Some(rc), Some(rd)) => correlation(co_rated(rc, rd)),
        _ => SimilarityScore::Undefined,
    })
}

/// [`pearson`] with roster membership checks.
pub fn pearson_in(conf: &ConferenceInstance, c: &ParticipantId, d: &ParticipantId) -> Result<SimilarityScore> {
    conf.require_member(c)?;
    conf.require_member(d)?;
    pearson(&conf.ratings, c, d)
}

pub fn passes_gamma(score: SimilarityScore, thresholds: &Thresholds) -> bool {
    score.value().is_some_and(|v| v >= thresholds.gamma)
}

/// The `k` candidates most similar to `target`, best first. Candidates with an
/// undefined score are dropped; equal scores are ordered by id.
pub fn k_most_similar(
    ratings: &RatingMatrix,
    target: &ParticipantId,
    candidates: &BTreeSet<ParticipantId>,
    k: usize,
) -> Vec<(ParticipantId, f64)> {
    if k == 0 {
        return Vec::new();
    }
    let mut scored: Vec<(ParticipantId, f64)> = candidates
        .iter()
        .filter(|c| *c != target)
        .filter_map(|c| pearson(ratings, target, c).ok()?.value().map(|v| (c.clone(), v)))
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    scored.truncate(k);
    scored
}
