//! Service persistence: an append-only journal of admitted events and
//! feedback, an append-only feedback log, and periodic JSON checkpoints of
//! the whole session. Recovery loads the checkpoint and replays the
//! journal tail.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wikistream_core::explain::FeedbackRecord;
use wikistream_core::session::{LiveSession, SessionState};
use wikistream_core::text::TextAnalyzers;
use wikistream_core::{Label, Timestamp};

use crate::error::{Error, Result};
use crate::jsonl::EventRecord;

pub const JOURNAL: &str = "journal.jsonl";
pub const FEEDBACK: &str = "feedback.jsonl";
pub const CHECKPOINT: &str = "checkpoint.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Event {
        event: Box<EventRecord>,
        arrival: Timestamp,
    },
    Feedback {
        event_id: String,
        label: Label,
        timestamp: Timestamp,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalEntry {
    pub seq: u64,
    #[serde(flatten)]
    pub op: Op,
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    seq: u64,
    session: SessionState,
}

const CHECKPOINT_VERSION: u32 = 1;

fn append_file(path: &Path) -> Result<File> {
    OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))
}

fn write_line(file: &mut File, path: &Path, value: &impl Serialize) -> Result<()> {
    let mut line = serde_json::to_vec(value)?;
    line.push(b'\n');
    file.write_all(&line).map_err(|e| Error::io(path, e))
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    journal: File,
    feedback: File,
    seq: u64,
    checkpoint_seq: u64,
}

/// Parses the journal. A torn final line (crash mid-write) is cut off so
/// later appends start on a clean line.
fn read_journal(path: &Path) -> Result<Vec<JournalEntry>> {
    let text = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut out = Vec::new();
    let mut offset = 0usize;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let start = offset;
        offset += line.len();
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(entry) => out.push(entry),
            Err(e) if e.is_eof() && offset == text.len() => {
                tracing::warn!(line = i + 1, "dropping truncated journal line");
                let f = OpenOptions::new()
                    .write(true)
                    .open(path)
                    .map_err(|e| Error::io(path, e))?;
                f.set_len(start as u64).map_err(|e| Error::io(path, e))?;
            }
            Err(e) => {
                return Err(wikistream_core::Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                }
                .into())
            }
        }
    }
    Ok(out)
}

fn apply(session: &mut LiveSession, op: Op) -> Result<()> {
    match op {
        Op::Event { event, arrival } => {
            session.ingest((*event).into(), arrival)?;
        }
        Op::Feedback {
            event_id,
            label,
            timestamp,
        } => {
            session.submit_feedback(&event_id, label, timestamp)?;
        }
    }
    Ok(())
}

impl Store {
    /// Opens (creating if needed) `dir` and rebuilds the session: the last
    /// checkpoint, or `fresh()` when there is none, plus the journal tail.
    pub fn open(
        dir: &Path,
        analyzers: impl FnOnce() -> Result<TextAnalyzers>,
        fresh: impl FnOnce(TextAnalyzers) -> Result<LiveSession>,
    ) -> Result<(Store, LiveSession)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let cp_path = dir.join(CHECKPOINT);
        let checkpoint: Option<Checkpoint> = match std::fs::read_to_string(&cp_path) {
            Ok(s) => Some(serde_json::from_str(&s)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(Error::io(cp_path, e)),
        };
        let (mut session, checkpoint_seq) = match checkpoint {
            Some(cp) if cp.version == CHECKPOINT_VERSION => {
                (LiveSession::from_state(analyzers()?, cp.session), cp.seq)
            }
            Some(cp) => {
                return Err(wikistream_core::Error::Config(format!(
                    "unsupported checkpoint version {}",
                    cp.version
                ))
                .into())
            }
            None => (fresh(analyzers()?)?, 0),
        };
        let journal_path = dir.join(JOURNAL);
        let mut seq = checkpoint_seq;
        let mut replayed = 0usize;
        for entry in read_journal(&journal_path)? {
            if entry.seq <= checkpoint_seq {
                continue;
            }
            apply(&mut session, entry.op)?;
            seq = entry.seq;
            replayed += 1;
        }
        if replayed > 0 {
            tracing::info!(replayed, "replayed journal tail");
        }
        let store = Store {
            journal: append_file(&journal_path)?,
            feedback: append_file(&dir.join(FEEDBACK))?,
            dir: dir.to_path_buf(),
            seq,
            checkpoint_seq,
        };
        Ok((store, session))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Sequence number of the last journaled operation.
    pub fn seq(&self) -> u64 {
        self.seq
    }

    /// Operations since the last checkpoint.
    pub fn pending(&self) -> u64 {
        self.seq - self.checkpoint_seq
    }

    pub fn append(&mut self, op: Op) -> Result<u64> {
        let entry = JournalEntry {
            seq: self.seq + 1,
            op,
        };
        write_line(&mut self.journal, &self.dir.join(JOURNAL), &entry)?;
        self.seq = entry.seq;
        Ok(self.seq)
    }

    pub fn append_feedback(&mut self, record: &FeedbackRecord) -> Result<()> {
        write_line(&mut self.feedback, &self.dir.join(FEEDBACK), record)
    }

    /// Writes the checkpoint atomically (temp file + rename).
    pub fn checkpoint(&mut self, state: SessionState) -> Result<()> {
        let path = self.dir.join(CHECKPOINT);
        let tmp = self.dir.join(format!("{CHECKPOINT}.tmp"));
        let cp = Checkpoint {
            version: CHECKPOINT_VERSION,
            seq: self.seq,
            session: state,
        };
        let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        serde_json::to_writer(&mut f, &cp)?;
        f.sync_all().map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        self.journal
            .sync_data()
            .map_err(|e| Error::io(self.dir.join(JOURNAL), e))?;
        self.checkpoint_seq = self.seq;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wikistream_core::features::DatasetProfile;
    use wikistream_core::models::ModelKind;
    use wikistream_core::pipeline::{Pipeline, PipelineConfig};
    use wikistream_core::synth::{generate, SynthConfig};
    use wikistream_core::WikiEvent;

    fn fresh(kind: ModelKind) -> impl FnOnce(TextAnalyzers) -> Result<LiveSession> {
        move |a| {
            let cfg = PipelineConfig::new(DatasetProfile::Wikivoyage, kind, 5);
            Ok(LiveSession::new(Pipeline::with_defaults(a, &cfg)?))
        }
    }

    fn defaults() -> Result<TextAnalyzers> {
        Ok(TextAnalyzers::default_english())
    }

    fn feed(
        store: &mut Store,
        session: &mut LiveSession,
        events: &[WikiEvent],
    ) -> Vec<(String, u8, f64)> {
        events
            .iter()
            .map(|e| {
                let p = session.ingest(e.clone(), e.timestamp).unwrap();
                store
                    .append(Op::Event {
                        event: Box::new(e.into()),
                        arrival: e.timestamp,
                    })
                    .unwrap();
                (p.event_id, p.predicted.index() as u8, p.confidence)
            })
            .collect()
    }

    #[test]
    fn restart_resumes_with_identical_predictions() {
        let events = generate(&SynthConfig::new(300, 11));
        let (head, tail) = events.split_at(200);
        let reference = {
            let dir = tempfile::tempdir().unwrap();
            let (mut store, mut session) =
                Store::open(dir.path(), defaults, fresh(ModelKind::Arfc)).unwrap();
            feed(&mut store, &mut session, head);
            feed(&mut store, &mut session, tail)
        };
        let dir = tempfile::tempdir().unwrap();
        {
            let (mut store, mut session) =
                Store::open(dir.path(), defaults, fresh(ModelKind::Arfc)).unwrap();
            feed(&mut store, &mut session, &head[..150]);
            store.checkpoint(session.state()).unwrap();
            // Journaled but not checkpointed: must be replayed.
            feed(&mut store, &mut session, &head[150..]);
            let id = head[160].event_id.clone();
            let rec = session.submit_feedback(&id, Label::Disinformation, Timestamp(0));
            assert!(rec.is_ok());
        }
        // The feedback above was never journaled, so the reference (which
        // had none) must still match.
        let (mut store, mut session) =
            Store::open(dir.path(), defaults, fresh(ModelKind::Arfc)).unwrap();
        assert_eq!(store.seq(), 200);
        assert_eq!(store.pending(), 50);
        assert_eq!(feed(&mut store, &mut session, tail), reference);
    }

    #[test]
    fn feedback_is_journaled_and_replayed() {
        let events = generate(&SynthConfig::new(20, 3));
        let dir = tempfile::tempdir().unwrap();
        let id = events[5].event_id.clone();
        {
            let (mut store, mut session) =
                Store::open(dir.path(), defaults, fresh(ModelKind::Gnb)).unwrap();
            feed(&mut store, &mut session, &events);
            let rec = session
                .submit_feedback(&id, Label::Disinformation, Timestamp(9))
                .unwrap();
            store
                .append(Op::Feedback {
                    event_id: id.clone(),
                    label: rec.label,
                    timestamp: rec.timestamp,
                })
                .unwrap();
            store.append_feedback(&rec).unwrap();
        }
        let (_, session) = Store::open(dir.path(), defaults, fresh(ModelKind::Gnb)).unwrap();
        assert_eq!(session.feedback_ledger().applied_count(), 1);
        assert_eq!(
            session.contribution(&id).unwrap().feedback,
            Some(Label::Disinformation)
        );
        let log = std::fs::read_to_string(dir.path().join(FEEDBACK)).unwrap();
        assert_eq!(log.lines().count(), 1);
    }

    #[test]
    fn truncated_last_line_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let events = generate(&SynthConfig::new(3, 3));
        {
            let (mut store, mut session) =
                Store::open(dir.path(), defaults, fresh(ModelKind::Gnb)).unwrap();
            feed(&mut store, &mut session, &events);
        }
        let mut f = append_file(&dir.path().join(JOURNAL)).unwrap();
        f.write_all(b"{\"seq\":4,\"op\":\"ev").unwrap();
        let (mut store, mut session) =
            Store::open(dir.path(), defaults, fresh(ModelKind::Gnb)).unwrap();
        assert_eq!(store.seq(), 3);
        feed(
            &mut store,
            &mut session,
            &generate(&SynthConfig::new(4, 4))[3..],
        );
        drop(store);
        let (store, _) = Store::open(dir.path(), defaults, fresh(ModelKind::Gnb)).unwrap();
        assert_eq!(store.seq(), 4);
    }
}
