//! JSONL event fixtures.
//!
//! One record per line:
//!
//! ```json
//! {"id":"r1","ts":"2024-03-01T12:00:00Z","user":"u1","page":"p1","text":"…",
//!  "bot":false,"deleted":false,"new":false,"revert":false,"size_diff":12,
//!  "article_quality":{"ok":0.1,…},"edit_quality":{…},"label":1}
//! ```

use std::io::{BufRead, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use wikistream_core::event::{ArticleQuality, EditQuality, ReviewQuality};
use wikistream_core::{Label, Timestamp, WikiEvent};

use crate::error::{Error, Result};

/// Wire form of [`WikiEvent`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRecord {
    pub id: String,
    pub ts: DateTime<Utc>,
    pub user: String,
    pub page: String,
    pub text: String,
    pub bot: bool,
    pub deleted: bool,
    pub new: bool,
    pub revert: bool,
    pub size_diff: i64,
    pub article_quality: ArticleQuality,
    pub edit_quality: EditQuality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub review_quality: Option<ReviewQuality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

pub fn to_datetime(ts: Timestamp) -> DateTime<Utc> {
    DateTime::from_timestamp_millis(ts.0).unwrap_or_default()
}

pub fn format_ts(ts: Timestamp) -> String {
    to_datetime(ts).to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

impl From<EventRecord> for WikiEvent {
    fn from(r: EventRecord) -> Self {
        WikiEvent {
            event_id: r.id,
            timestamp: Timestamp(r.ts.timestamp_millis()),
            user_id: r.user,
            page_id: r.page,
            content: r.text,
            bot_flag: r.bot,
            deleted_flag: r.deleted,
            new_flag: r.new,
            revert_flag: r.revert,
            size_diff: r.size_diff,
            article_quality: r.article_quality,
            edit_quality: r.edit_quality,
            review_quality: r.review_quality,
            label: r.label,
        }
    }
}

impl From<&WikiEvent> for EventRecord {
    fn from(e: &WikiEvent) -> Self {
        EventRecord {
            id: e.event_id.clone(),
            ts: to_datetime(e.timestamp),
            user: e.user_id.clone(),
            page: e.page_id.clone(),
            text: e.content.clone(),
            bot: e.bot_flag,
            deleted: e.deleted_flag,
            new: e.new_flag,
            revert: e.revert_flag,
            size_diff: e.size_diff,
            article_quality: e.article_quality,
            edit_quality: e.edit_quality,
            review_quality: e.review_quality,
            label: e.label,
        }
    }
}

/// Parses and validates one record; `line` is 1-based and only used in
/// error messages.
pub fn parse_line(text: &str, line: usize) -> Result<WikiEvent> {
    let record: EventRecord =
        serde_json::from_str(text).map_err(|e| wikistream_core::Error::Parse {
            line,
            message: e.to_string(),
        })?;
    let event = WikiEvent::from(record);
    event.validate().map_err(|e| match e {
        wikistream_core::Error::Validation(m) => {
            wikistream_core::Error::Validation(format!("line {line}: {m}"))
        }
        other => other,
    })?;
    Ok(event)
}

/// Reads every non-blank line, in file order.
pub fn read_events(reader: impl BufRead) -> Result<Vec<WikiEvent>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<events>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(&line, i + 1)?);
    }
    Ok(out)
}

pub fn read_events_file(path: &Path) -> Result<Vec<WikiEvent>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_events(std::io::BufReader::new(f))
}

pub fn write_event(mut w: impl Write, event: &WikiEvent) -> Result<()> {
    serde_json::to_writer(&mut w, &EventRecord::from(event))?;
    w.write_all(b"\n").map_err(|e| Error::io("<events>", e))
}

pub fn write_events(mut w: impl Write, events: &[WikiEvent]) -> Result<()> {
    for e in events {
        write_event(&mut w, e)?;
    }
    w.flush().map_err(|e| Error::io("<events>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wikistream_core::synth::{generate, SynthConfig};

    const LINE: &str = r#"{"id":"r1","ts":"2024-03-01T12:00:00Z","user":"u1","page":"p1","text":"Hello there.","bot":false,"deleted":false,"new":true,"revert":false,"size_diff":-4,"article_quality":{"ok":0.5,"wp10b":0.1,"wp10c":0.1,"wp10fa":0.0,"wp10ga":0.0,"wp10start":0.1,"wp10stub":0.2},"edit_quality":{"damaging_false":0.9,"damaging_true":0.1,"goodfaith_false":0.2,"goodfaith_true":0.8},"label":1}"#;

    #[test]
    fn parses_reference_record() {
        let e = parse_line(LINE, 1).unwrap();
        assert_eq!(e.event_id, "r1");
        assert_eq!(e.timestamp, Timestamp(1_709_294_400_000));
        assert!(e.new_flag);
        assert_eq!(e.size_diff, -4);
        assert_eq!(e.review_quality, None);
        assert_eq!(e.label, Some(Label::Disinformation));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let input = format!("{LINE}\n\n{{not json\n");
        match read_events(input.as_bytes()) {
            Err(Error::Core(wikistream_core::Error::Parse { line, .. })) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = LINE.replace("\"damaging_true\":0.1", "\"damaging_true\":1.5");
        let err = parse_line(&bad, 7).unwrap_err().to_string();
        assert!(err.contains("line 7"), "{err}");
    }

    #[test]
    fn round_trips_synthetic_events() {
        let events = generate(&SynthConfig::new(50, 3));
        let mut buf = Vec::new();
        write_events(&mut buf, &events).unwrap();
        assert_eq!(read_events(buf.as_slice()).unwrap(), events);
    }

    proptest::proptest! {
        #[test]
        fn any_valid_record_round_trips(
            id in "[a-z0-9]{1,12}",
            millis in 0i64..4_000_000_000_000,
            text in "\\PC{0,80}",
            flags in proptest::array::uniform4(proptest::bool::ANY),
            size_diff in proptest::num::i64::ANY,
            stub in 0.0f64..=1.0,
            damaging in 0.0f64..=1.0,
            label in proptest::option::of(0u8..2),
        ) {
            let mut e = generate(&SynthConfig::new(1, 0)).remove(0);
            e.event_id = id;
            e.timestamp = Timestamp(millis);
            e.content = text;
            (e.bot_flag, e.deleted_flag, e.new_flag, e.revert_flag) = flags.into();
            e.size_diff = size_diff;
            e.article_quality = ArticleQuality { wp10stub: stub, ok: 1.0 - stub, ..Default::default() };
            e.edit_quality.damaging_true = damaging;
            e.label = label.map(|l| Label::from_index(usize::from(l)));
            let mut buf = Vec::new();
            write_event(&mut buf, &e).unwrap();
            let line = String::from_utf8(buf).unwrap();
            proptest::prop_assert_eq!(line.matches('\n').count(), 1);
            proptest::prop_assert_eq!(parse_line(line.trim_end(), 1).unwrap(), e);
        }
    }
}
