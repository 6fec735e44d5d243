//! Answers about specific curves (rank, Chabauty point sets) that are not computed here.
//!
//! Records are JSON lines `{"key", "q", "answer", "provenance"}` keyed by the canonical
//! curve key. `q` is `rank`, `points` or `chabauty:<p>`. A live oracle is an external
//! command reading `<key> <q>` lines and answering each with one JSON line.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::str::FromStr;
use std::sync::{mpsc, Mutex};
use std::time::Duration;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: conflicting answer for {key} ({q})")]
    Conflict { line: usize, key: String, q: String },
    #[error("oracle did not answer within {0:?}")]
    Timeout(Duration),
    #[error("oracle process: {0}")]
    Process(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    Rank,
    Points,
    /// Chabauty at a prime; 0 when the prime is not recorded.
    Chabauty(u64),
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Question::Rank => write!(f, "rank"),
            Question::Points => write!(f, "points"),
            Question::Chabauty(p) => write!(f, "chabauty:{p}"),
        }
    }
}

impl FromStr for Question {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rank" => Ok(Question::Rank),
            "points" => Ok(Question::Points),
            _ => s
                .strip_prefix("chabauty:")
                .and_then(|p| p.parse().ok())
                .map(Question::Chabauty)
                .ok_or_else(|| format!("unknown question {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Rank(u32),
    /// Complete list of the X-coordinates of affine points.
    XSet(Vec<BigRational>),
}

impl Answer {
    fn to_json(&self) -> Value {
        match self {
            Answer::Rank(r) => Value::from(*r),
            Answer::XSet(xs) => Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect()),
        }
    }

    fn from_json(q: Question, v: &Value) -> Result<Answer, String> {
        match q {
            Question::Rank => v
                .as_u64()
                .and_then(|r| u32::try_from(r).ok())
                .map(Answer::Rank)
                .ok_or_else(|| format!("rank must be a small non-negative integer, got {v}")),
            _ => {
                let arr = v.as_array().ok_or("point set must be an array")?;
                let mut xs = arr
                    .iter()
                    .map(|x| {
                        let s = x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
                        s.parse::<BigRational>().map_err(|_| format!("bad rational {s:?}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                xs.sort();
                xs.dedup();
                Ok(Answer::XSet(xs))
            }
        }
    }
}

/// One answered question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRecord {
    pub key: String,
    pub q: Question,
    pub answer: Answer,
    pub provenance: String,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    key: String,
    q: String,
    answer: Value,
    provenance: String,
}

impl OracleRecord {
    pub fn to_json_line(&self) -> String {
        let raw = RawRecord {
            key: self.key.clone(),
            q: self.q.to_string(),
            answer: self.answer.to_json(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn parse_line(s: &str) -> Result<Self, String> {
        let raw: RawRecord = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let q: Question = raw.q.parse()?;
        let answer = Answer::from_json(q, &raw.answer)?;
        Ok(OracleRecord { key: raw.key, q, answer, provenance: raw.provenance })
    }
}

/// Source of curve answers.
pub trait CurveOracle: Sync {
    fn query(&self, key: &str, q: Question) -> Result<Option<Answer>, OracleError>;

    fn rank(&self, key: &str) -> Result<Option<u32>, OracleError> {
        Ok(match self.query(key, Question::Rank)? {
            Some(Answer::Rank(r)) => Some(r),
            _ => None,
        })
    }

    /// Complete X-set of the affine points, with the questions whose answers gave it.
    /// A store holding several sets for one key answers with their intersection.
    fn point_set(&self, key: &str) -> Result<Option<(Vec<Question>, Vec<BigRational>)>, OracleError> {
        Ok(match self.query(key, Question::Points)? {
            Some(Answer::XSet(xs)) => Some((vec![Question::Points], xs)),
            _ => None,
        })
    }
}

/// Records loaded from JSON lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureStore {
    records: BTreeMap<(String, Question), OracleRecord>,
}

const BUNDLED: &str = include_str!("../fixtures/curves.jsonl");

impl FixtureStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// The answers shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse_str(BUNDLED).expect("bundled fixtures are well formed")
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn parse_str(s: &str) -> Result<Self, OracleError> {
        Self::from_reader(s.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, OracleError> {
        Self::from_reader(BufReader::new(std::fs::File::open(path)?))
    }

    pub fn from_reader(r: impl BufRead) -> Result<Self, OracleError> {
        let mut store = Self::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let rec = OracleRecord::parse_line(t).map_err(|msg| OracleError::Parse { line: i + 1, msg })?;
            store.insert_at(rec, i + 1)?;
        }
        Ok(store)
    }

    fn insert_at(&mut self, rec: OracleRecord, line: usize) -> Result<(), OracleError> {
        let k = (rec.key.clone(), rec.q);
        if let Some(old) = self.records.get(&k) {
            if old.answer != rec.answer {
                return Err(OracleError::Conflict { line, key: rec.key, q: rec.q.to_string() });
            }
            return Ok(());
        }
        self.records.insert(k, rec);
        Ok(())
    }

    /// Adds a record; an identical duplicate is ignored, a different answer is an error.
    pub fn insert(&mut self, rec: OracleRecord) -> Result<(), OracleError> {
        self.insert_at(rec, 0)
    }

    /// Adds all records of another store.
    pub fn merge(&mut self, other: FixtureStore) -> Result<(), OracleError> {
        for rec in other.records.into_values() {
            self.insert(rec)?;
        }
        Ok(())
    }

    pub fn lookup(&self, key: &str, q: Question) -> Option<&OracleRecord> {
        self.records.get(&(key.to_string(), q))
    }

    /// All point-set records for a key: `points` and every `chabauty:<p>`.
    pub fn point_sets(&self, key: &str) -> Vec<&OracleRecord> {
        self.records
            .range((key.to_string(), Question::Rank)..)
            .take_while(|((k, _), _)| k == key)
            .filter(|((_, q), _)| *q != Question::Rank)
            .map(|(_, r)| r)
            .collect()
    }

    /// Intersection of all recorded complete X-sets for the key, with the questions used.
    pub fn chabauty_for(&self, key: &str) -> Option<(Vec<Question>, Vec<BigRational>)> {
        let sets = self.point_sets(key);
        let mut qs = Vec::new();
        let mut acc: Option<Vec<BigRational>> = None;
        for r in sets {
            if let Answer::XSet(xs) = &r.answer {
                qs.push(r.q);
                acc = Some(match acc {
                    None => xs.clone(),
                    Some(a) => a.into_iter().filter(|x| xs.contains(x)).collect(),
                });
            }
        }
        acc.map(|a| (qs, a))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &OracleRecord> {
        self.records.values()
    }

    pub fn to_jsonl(&self) -> String {
        self.records.values().map(|r| r.to_json_line() + "\n").collect()
    }
}

impl CurveOracle for FixtureStore {
    fn query(&self, key: &str, q: Question) -> Result<Option<Answer>, OracleError> {
        Ok(self.lookup(key, q).map(|r| r.answer.clone()))
    }

    fn point_set(&self, key: &str) -> Result<Option<(Vec<Question>, Vec<BigRational>)>, OracleError> {
        Ok(self.chabauty_for(key))
    }
}

/// An external command kept running for the whole session. Each request is one line
/// `<key> <q>`; each response is one line holding the answer as JSON, or `null`.
pub struct LiveOracle {
    program: String,
    args: Vec<String>,
    timeout: Duration,
    session: Mutex<Option<Session>>,
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    lines: mpsc::Receiver<std::io::Result<String>>,
}

impl Drop for Session {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl LiveOracle {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        LiveOracle { program: program.into(), args, timeout: Duration::from_secs(600), session: Mutex::new(None) }
    }

    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.timeout = t;
        self
    }

    fn start(&self) -> Result<Session, OracleError> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped");
        let stdout = child.stdout.take().expect("piped");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Session { child, stdin, lines: rx })
    }

    /// Sends one question; None when the oracle answers `null`.
    pub fn ask(&self, key: &str, q: Question) -> Result<Option<Answer>, OracleError> {
        let mut guard = self.session.lock().unwrap_or_else(|e| e.into_inner());
        if guard.is_none() {
            *guard = Some(self.start()?);
        }
        let s = guard.as_mut().expect("started");
        writeln!(s.stdin, "{key} {q}")?;
        s.stdin.flush()?;
        let line = match s.lines.recv_timeout(self.timeout) {
            Ok(r) => r?,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                *guard = None;
                return Err(OracleError::Timeout(self.timeout));
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                *guard = None;
                return Err(OracleError::Process("oracle exited".into()));
            }
        };
        let v: Value = serde_json::from_str(line.trim()).map_err(|e| OracleError::Process(format!("{e}: {line:?}")))?;
        if v.is_null() {
            return Ok(None);
        }
        Answer::from_json(q, &v).map(Some).map_err(OracleError::Process)
    }
}

impl CurveOracle for LiveOracle {
    fn query(&self, key: &str, q: Question) -> Result<Option<Answer>, OracleError> {
        self.ask(key, q)
    }
}

/// Fixtures first, then an optional live oracle.
pub struct Chained<'a> {
    pub fixtures: &'a FixtureStore,
    pub live: Option<&'a LiveOracle>,
}

impl CurveOracle for Chained<'_> {
    fn query(&self, key: &str, q: Question) -> Result<Option<Answer>, OracleError> {
        if let Some(a) = self.fixtures.query(key, q)? {
            return Ok(Some(a));
        }
        match self.live {
            Some(l) => l.query(key, q),
            None => Ok(None),
        }
    }

    fn point_set(&self, key: &str) -> Result<Option<(Vec<Question>, Vec<BigRational>)>, OracleError> {
        if let Some(r) = self.fixtures.point_set(key)? {
            return Ok(Some(r));
        }
        match self.live {
            Some(l) => l.point_set(key),
            None => Ok(None),
        }
    }
}
