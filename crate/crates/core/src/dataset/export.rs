//! CSV exports of the rating matrix and the contact log.

use crate::model::ConferenceInstance;
use crate::{Error, Result};

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Unwritable(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `participant,tag,rating`
pub fn ratings_csv(conf: &ConferenceInstance) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["participant", "tag", "rating"])?;
    for (p, tag, r) in conf.ratings.iter() {
        w.write_record([p.as_str(), tag.as_str(), &r.to_string()])?;
    }
    finish(w)
}

/// `participant_a,participant_b,frequency,duration,tie_strength`
pub fn contacts_csv(conf: &ConferenceInstance) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "participant_a",
        "participant_b",
        "frequency",
        "duration",
        "tie_strength",
    ])?;
    let frame = f64::from(conf.thresholds.frame_t.max(1));
    for (pair, c) in conf.contacts.iter() {
        let tie = f64::from(c.frequency) * f64::from(c.duration) / frame;
        w.write_record([
            pair.first().as_str(),
            pair.second().as_str(),
            &c.frequency.to_string(),
            &c.duration.to_string(),
            &format!("{tie:.6}"),
        ])?;
    }
    finish(w)
}
