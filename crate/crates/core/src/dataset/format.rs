//! Line-oriented dataset file (see `FORMAT.md` at the repository root).
//!
//! The first line is the versioned header `venue-dataset 1`. After it come
//! `[section]` blocks whose records are tab-separated fields. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::model::{
    AvailabilityContext, AvailabilitySlot, ConferenceInstance, Contact, Location, ParticipantId, Session, SessionId,
    Tag, Thresholds, TimeSlot,
};
use crate::{Error, Result};

pub const HEADER: &str = "venue-dataset 1";

const SECTIONS: [&str; 7] = [
    "thresholds",
    "roster",
    "presenters",
    "sessions",
    "ratings",
    "contacts",
    "availability",
];

pub fn load(path: impl AsRef<Path>) -> Result<ConferenceInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse(&text, &path.display().to_string())
}

pub fn save(conf: &ConferenceInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_string(conf)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

struct Parser<'a> {
    source: &'a str,
    line: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.to_owned(),
            line: self.line,
            message: message.into(),
        }
    }

    fn arity(&self, section: &str, fields: &[&str], expected: &str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(self.err(format!(
                "[{section}] expected {expected}, found {} field(s)",
                fields.len()
            )))
        }
    }

    fn number<T: std::str::FromStr>(&self, section: &str, field: &str, raw: &str) -> Result<T> {
        raw.parse()
            .map_err(|_| self.err(format!("[{section}] field `{field}`: cannot parse {raw:?} as a number")))
    }
}

/// Parses dataset text; `source` names the input in diagnostics.
pub fn parse(text: &str, source: &str) -> Result<ConferenceInstance> {
    let mut p = Parser { source, line: 0 };
    let mut lines = text.lines().enumerate();

    match lines.next() {
        Some((_, first)) if first.trim_end() == HEADER => {}
        Some((_, first)) => {
            p.line = 1;
            return Err(p.err(format!("expected header {HEADER:?}, found {first:?}")));
        }
        None => return Err(p.err("empty file")),
    }

    let mut thresholds: BTreeMap<String, String> = BTreeMap::new();
    let mut conf = ConferenceInstance::empty(Thresholds::default());
    let mut seen_sections = BTreeSet::new();
    let mut section: Option<&str> = None;

    for (idx, raw) in lines {
        p.line = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let Some(known) = SECTIONS.iter().find(|s| **s == name) else {
                return Err(p.err(format!("unknown section [{name}]")));
            };
            if !seen_sections.insert(*known) {
                return Err(p.err(format!("section [{name}] appears twice")));
            }
            section = Some(known);
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let Some(sec) = section else {
            return Err(p.err("record before the first [section]"));
        };
        match sec {
            "thresholds" => {
                p.arity(sec, &fields, "`key<TAB>value`", fields.len() == 2)?;
                if thresholds.insert(fields[0].to_owned(), fields[1].to_owned()).is_some() {
                    return Err(p.err(format!("[thresholds] duplicate key `{}`", fields[0])));
                }
            }
            "roster" | "presenters" => {
                p.arity(sec, &fields, "one participant id", fields.len() == 1)?;
                let set = if sec == "roster" {
                    &mut conf.roster
                } else {
                    &mut conf.presenters
                };
                if !set.insert(ParticipantId::new(fields[0])) {
                    return Err(p.err(format!("[{sec}] duplicate participant {}", fields[0])));
                }
            }
            "sessions" => {
                p.arity(
                    sec,
                    &fields,
                    "`id, presenter, location, start, end, tags...`",
                    fields.len() >= 5,
                )?;
                conf.sessions.push(Session {
                    id: SessionId::new(fields[0]),
                    presenter: ParticipantId::new(fields[1]),
                    location: Location::new(fields[2]),
                    slot: TimeSlot::new(p.number(sec, "start", fields[3])?, p.number(sec, "end", fields[4])?),
                    topic_tags: fields[5..].iter().map(|t| Tag::new(t)).collect(),
                });
            }
            "ratings" => {
                p.arity(sec, &fields, "`participant, tag, rating`", fields.len() == 3)?;
                let rating: u8 = p.number(sec, "rating", fields[2])?;
                if !(1..=5).contains(&rating) {
                    return Err(p.err(format!(
                        "[ratings] field `rating`: {rating} by {} on {:?} is out of range 1..=5",
                        fields[0], fields[1]
                    )));
                }
                let (who, tag) = (ParticipantId::new(fields[0]), Tag::new(fields[1]));
                if conf.ratings.get(&who, &tag).is_some() {
                    return Err(p.err(format!("[ratings] duplicate rating by {who} on {tag:?}")));
                }
                conf.ratings.insert(who, tag, rating);
            }
            "contacts" => {
                p.arity(
                    sec,
                    &fields,
                    "`participant, participant, frequency, duration`",
                    fields.len() == 4,
                )?;
                let (a, b) = (ParticipantId::new(fields[0]), ParticipantId::new(fields[1]));
                let contact = Contact::new(
                    p.number(sec, "frequency", fields[2])?,
                    p.number(sec, "duration", fields[3])?,
                );
                if conf.contacts.insert(a.clone(), b.clone(), contact).is_some() {
                    return Err(p.err(format!("[contacts] duplicate pair {a}-{b}")));
                }
            }
            "availability" => {
                p.arity(
                    sec,
                    &fields,
                    "`participant` or `participant, location, start, end`",
                    fields.len() == 1 || fields.len() == 4,
                )?;
                let owner = ParticipantId::new(fields[0]);
                let entry = conf
                    .availabilities
                    .entry(owner.clone())
                    .or_insert_with(|| AvailabilityContext::new(owner, Vec::new()));
                if fields.len() == 4 {
                    entry.slots.push(AvailabilitySlot {
                        location: Location::new(fields[1]),
                        window: TimeSlot::new(p.number(sec, "start", fields[2])?, p.number(sec, "end", fields[3])?),
                    });
                }
            }
            _ => unreachable!("section names come from SECTIONS"),
        }
    }

    p.line = 0;
    if !seen_sections.contains("thresholds") {
        return Err(p.err("missing [thresholds] section"));
    }
    let mut take = |key: &str| {
        thresholds
            .remove(key)
            .ok_or_else(|| p.err(format!("[thresholds] missing key `{key}`")))
    };
    let (gamma, beta, delta, frame_t, top_n) = (
        take("gamma")?,
        take("beta")?,
        take("delta")?,
        take("frame_t")?,
        take("top_n")?,
    );
    if let Some(extra) = thresholds.keys().next() {
        return Err(p.err(format!("[thresholds] unknown key `{extra}`")));
    }
    conf.thresholds = Thresholds {
        gamma: p.number("thresholds", "gamma", &gamma)?,
        beta: p.number("thresholds", "beta", &beta)?,
        delta: p.number("thresholds", "delta", &delta)?,
        frame_t: p.number("thresholds", "frame_t", &frame_t)?,
        top_n: p.number("thresholds", "top_n", &top_n)?,
    };
    Ok(conf)
}

fn field<'a>(what: &str, value: &'a str, leading: bool) -> Result<&'a str> {
    if value.is_empty() {
        return Err(Error::Unwritable(format!("{what} is empty")));
    }
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::Unwritable(format!(
            "{what} {value:?} contains a tab or line break"
        )));
    }
    if leading && (value.starts_with('#') || value.starts_with('[')) {
        return Err(Error::Unwritable(format!(
            "{what} {value:?} cannot start with '#' or '['"
        )));
    }
    Ok(value)
}

/// Serializes `conf`. Fails when an identifier cannot be represented (empty,
/// or containing a tab or line break).
pub fn to_string(conf: &ConferenceInstance) -> Result<String> {
    let mut out = String::new();
    let t = &conf.thresholds;
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "[thresholds]");
    let _ = writeln!(out, "gamma\t{}", t.gamma);
    let _ = writeln!(out, "beta\t{}", t.beta);
    let _ = writeln!(out, "delta\t{}", t.delta);
    let _ = writeln!(out, "frame_t\t{}", t.frame_t);
    let _ = writeln!(out, "top_n\t{}", t.top_n);

    let _ = writeln!(out, "[roster]");
    for p in &conf.roster {
        let _ = writeln!(out, "{}", field("participant id", p.as_str(), true)?);
    }
    let _ = writeln!(out, "[presenters]");
    for p in &conf.presenters {
        let _ = writeln!(out, "{}", field("presenter id", p.as_str(), true)?);
    }

    let _ = writeln!(out, "[sessions]");
    for s in &conf.sessions {
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            field("session id", s.id.as_str(), true)?,
            field("presenter id", s.presenter.as_str(), false)?,
            field("location", s.location.as_str(), false)?,
            s.slot.start,
            s.slot.end
        );
        for tag in &s.topic_tags {
            let _ = write!(out, "\t{}", field("tag", tag.as_str(), false)?);
        }
        out.push('\n');
    }

    let _ = writeln!(out, "[ratings]");
    for (p, tag, r) in conf.ratings.iter() {
        let _ = writeln!(
            out,
            "{}\t{}\t{r}",
            field("participant id", p.as_str(), true)?,
            field("tag", tag.as_str(), false)?
        );
    }

    let _ = writeln!(out, "[contacts]");
    for (pair, c) in conf.contacts.iter() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            field("participant id", pair.first().as_str(), true)?,
            field("participant id", pair.second().as_str(), false)?,
            c.frequency,
            c.duration
        );
    }

    let _ = writeln!(out, "[availability]");
    for (p, avail) in &conf.availabilities {
        if &avail.owner != p {
            return Err(Error::Unwritable(format!(
                "availability keyed by {p} is owned by {}",
                avail.owner
            )));
        }
        let id = field("participant id", p.as_str(), true)?;
        if avail.slots.is_empty() {
            let _ = writeln!(out, "{id}");
        }
        for slot in &avail.slots {
            let _ = writeln!(
                out,
                "{id}\t{}\t{}\t{}",
                field("location", slot.location.as_str(), false)?,
                slot.window.start,
                slot.window.end
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "venue-dataset 1
# three participants, one talk
[thresholds]
gamma\t1
beta\t0.5
delta\t0.15
frame_t\t720
top_n\t10
[roster]
alice
bob
carol
[presenters]
alice
[sessions]
s1\talice\tHallA\t60\t90\tML\tdata mining
[ratings]
bob\tml\t4
carol\tml\t2
[contacts]
bob\talice\t6\t70
[availability]
bob\thalla\t0\t720
carol
";

    fn pid(s: &str) -> ParticipantId {
        ParticipantId::new(s)
    }

    fn expected() -> ConferenceInstance {
        let mut conf = ConferenceInstance::empty(Thresholds {
            gamma: 1.0,
            beta: 0.5,
            delta: 0.15,
            frame_t: 720,
            top_n: 10,
        });
        conf.roster = ["alice", "bob", "carol"].into_iter().map(pid).collect();
        conf.presenters.insert(pid("alice"));
        conf.sessions.push(Session {
            id: SessionId::new("s1"),
            presenter: pid("alice"),
            location: Location::new("halla"),
            slot: TimeSlot::new(60, 90),
            topic_tags: [Tag::new("ml"), Tag::new("data mining")].into(),
        });
        conf.ratings.insert(pid("bob"), Tag::new("ml"), 4);
        conf.ratings.insert(pid("carol"), Tag::new("ml"), 2);
        conf.contacts.insert(pid("alice"), pid("bob"), Contact::new(6, 70));
        conf.availabilities.insert(
            pid("bob"),
            AvailabilityContext::new(pid("bob"), vec![AvailabilitySlot::new("halla", 0, 720)]),
        );
        conf.availabilities
            .insert(pid("carol"), AvailabilityContext::new(pid("carol"), vec![]));
        conf
    }

    #[test]
    fn fixture_matches_hand_built_value() {
        let conf = parse(FIXTURE, "fixture").unwrap();
        assert_eq!(conf, expected());
        assert!(crate::model::validate(&conf).is_empty());
        assert_eq!(parse(&to_string(&conf).unwrap(), "again").unwrap(), conf);
    }

    #[test]
    fn out_of_range_rating_names_the_record() {
        let text = FIXTURE.replace("carol\tml\t2", "carol\tml\t7");
        let err = parse(&text, "bad.dataset").unwrap_err().to_string();
        assert!(err.starts_with("bad.dataset:19:"), "{err}");
        assert!(
            err.contains("rating") && err.contains("carol") && err.contains('7'),
            "{err}"
        );
    }

    #[test]
    fn parse_diagnostics() {
        let cases = [
            ("venue-dataset 2\n", 1, "expected header"),
            (&FIXTURE.replace("[roster]", "[people]"), 9, "unknown section"),
            (
                &FIXTURE.replace("bob\talice\t6\t70", "bob\talice\tsix\t70"),
                21,
                "frequency",
            ),
            (&FIXTURE.replace("bob\thalla\t0\t720", "bob\thalla\t0"), 23, "expected"),
            (&FIXTURE.replace("top_n\t10\n", ""), 0, "top_n"),
        ];
        for (text, line, needle) in cases {
            match parse(text, "f") {
                Err(Error::Parse { line: l, message, .. }) => {
                    assert_eq!(l, line, "{message}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn unwritable_identifiers() {
        let mut conf = expected();
        conf.roster.insert(pid("bad\tid"));
        assert!(matches!(to_string(&conf), Err(Error::Unwritable(_))));
        let mut conf = expected();
        conf.roster.insert(pid("#hash"));
        assert!(matches!(to_string(&conf), Err(Error::Unwritable(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.dataset");
        save(&expected(), &path).unwrap();
        assert_eq!(load(&path).unwrap(), expected());
        assert!(matches!(load(dir.path().join("missing")), Err(Error::Io { .. })));
    }
}
