//! Canonical request-trace representation and its text format.
//!
//! ```text
//! # trace-v1 horizon=30
//! 0.125,c1_0
//! 0.5,r17
//! ```
//!
//! Timestamps are days since the trace origin. Rows must be sorted by
//! timestamp; rows with equal timestamps keep their file order, which is the
//! authoritative request order.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::{Error, Result};

const HEADER_TAG: &str = "# trace-v1";
const MAX_ID_LEN: usize = 64;

/// Opaque content identifier.
///
/// Cloning is cheap; generated traces share one allocation per content.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContentId(Arc<str>);

impl ContentId {
    /// Builds an id from a token in the file format: 1 to 64 visible ASCII
    /// characters, no comma.
    pub fn parse(token: &str) -> std::result::Result<Self, String> {
        if token.is_empty() {
            return Err("empty content id".into());
        }
        if token.len() > MAX_ID_LEN {
            return Err(format!("content id longer than {MAX_ID_LEN} characters"));
        }
        if let Some(c) = token.chars().find(|c| !c.is_ascii_graphic() || *c == ',') {
            return Err(format!("content id contains invalid character {c:?}"));
        }
        Ok(ContentId(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for ContentId {
    fn from(s: &str) -> Self {
        ContentId(Arc::from(s))
    }
}

impl From<String> for ContentId {
    fn from(s: String) -> Self {
        ContentId(Arc::from(s))
    }
}

impl Borrow<str> for ContentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ContentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ContentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// One content request.
#[derive(Clone, Debug, PartialEq)]
pub struct RequestEvent {
    /// Days since the trace origin.
    pub timestamp: f64,
    pub content_id: ContentId,
}

impl RequestEvent {
    pub fn new(timestamp: f64, content_id: impl Into<ContentId>) -> Self {
        RequestEvent {
            timestamp,
            content_id: content_id.into(),
        }
    }
}

/// A request sequence observed (or synthesised) over `[0, horizon]` days.
///
/// Fields are public so that callers can build arbitrary sequences;
/// [`validate`] reports which invariants a value breaks.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub events: Vec<RequestEvent>,
    pub horizon: f64,
}

impl Trace {
    /// Builds a trace and checks every invariant.
    pub fn new(events: Vec<RequestEvent>, horizon: f64) -> Result<Self> {
        let trace = Trace { events, horizon };
        match validate(&trace).into_iter().next() {
            None => Ok(trace),
            Some(v) => Err(Error::Validation {
                line: v.index().map_or(0, |i| i + 1),
                message: v.to_string(),
            }),
        }
    }

    /// Builds a trace whose horizon is its last timestamp (0 when empty).
    pub fn from_events(events: Vec<RequestEvent>) -> Result<Self> {
        let horizon = events.last().map_or(0.0, |e| e.timestamp);
        Trace::new(events, horizon)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Maps content ids to dense indices in order of first appearance.
    ///
    /// Returns the per-request index sequence and the index-to-id table.
    pub fn dense_ids(&self) -> (Vec<u32>, Vec<ContentId>) {
        let mut index: HashMap<&str, u32> = HashMap::new();
        let mut names = Vec::new();
        let seq = self
            .events
            .iter()
            .map(|e| {
                *index.entry(e.content_id.as_str()).or_insert_with(|| {
                    names.push(e.content_id.clone());
                    (names.len() - 1) as u32
                })
            })
            .collect();
        (seq, names)
    }

    /// Number of distinct content ids.
    pub fn distinct_contents(&self) -> usize {
        self.dense_ids().1.len()
    }
}

/// A broken [`Trace`] invariant, located at the first offending event.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonFiniteTimestamp { index: usize },
    NegativeTimestamp { index: usize },
    EmptyContentId { index: usize },
    Unsorted { index: usize },
    Horizon { index: usize },
    InvalidHorizon,
}

impl Violation {
    pub fn index(&self) -> Option<usize> {
        match *self {
            Violation::NonFiniteTimestamp { index }
            | Violation::NegativeTimestamp { index }
            | Violation::EmptyContentId { index }
            | Violation::Unsorted { index }
            | Violation::Horizon { index } => Some(index),
            Violation::InvalidHorizon => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFiniteTimestamp { index } => {
                write!(f, "finite: timestamp at index {index} is not finite")
            }
            Violation::NegativeTimestamp { index } => {
                write!(f, "non-negative: timestamp at index {index} is negative")
            }
            Violation::EmptyContentId { index } => {
                write!(f, "content id: empty id at index {index}")
            }
            Violation::Unsorted { index } => {
                write!(
                    f,
                    "unsorted: timestamp at index {index} precedes its predecessor"
                )
            }
            Violation::Horizon { index } => {
                write!(f, "horizon: timestamp at index {index} exceeds the horizon")
            }
            Violation::InvalidHorizon => write!(f, "horizon: not a finite non-negative value"),
        }
    }
}

/// Checks every [`Trace`] invariant; an empty result means the trace is valid.
///
/// At most one violation is reported per invariant, at its first offending
/// index.
pub fn validate(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let events = &trace.events;
    let first = |pred: &dyn Fn(usize) -> bool| (0..events.len()).find(|&i| pred(i));

    if !(trace.horizon.is_finite() && trace.horizon >= 0.0) {
        out.push(Violation::InvalidHorizon);
    }
    if let Some(index) = first(&|i| !events[i].timestamp.is_finite()) {
        out.push(Violation::NonFiniteTimestamp { index });
    }
    if let Some(index) = first(&|i| events[i].timestamp < 0.0) {
        out.push(Violation::NegativeTimestamp { index });
    }
    if let Some(index) = first(&|i| events[i].content_id.as_str().is_empty()) {
        out.push(Violation::EmptyContentId { index });
    }
    if let Some(index) = first(&|i| i > 0 && events[i].timestamp < events[i - 1].timestamp) {
        out.push(Violation::Unsorted { index });
    }
    if let Some(index) = first(&|i| events[i].timestamp > trace.horizon) {
        out.push(Violation::Horizon { index });
    }
    out
}

fn parse_header(line: &str, line_no: usize) -> Result<Option<f64>> {
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let rest = line
        .strip_prefix(HEADER_TAG)
        .ok_or_else(|| parse_err(format!("expected header starting with {HEADER_TAG:?}")))?;
    let mut horizon = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("horizon", v)) => {
                let h: f64 = v
                    .parse()
                    .map_err(|_| parse_err(format!("unparsable horizon {v:?}")))?;
                if !(h.is_finite() && h >= 0.0) {
                    return Err(parse_err(format!(
                        "horizon {v:?} is not a finite non-negative value"
                    )));
                }
                horizon = Some(h);
            }
            _ => return Err(parse_err(format!("unknown header field {field:?}"))),
        }
    }
    Ok(horizon)
}

/// Parses a trace in the `trace-v1` text format.
///
/// The header line is optional; without a `horizon=` field the horizon is the
/// last timestamp. Blank lines are ignored.
pub fn read_trace<R: BufRead>(reader: R) -> Result<Trace> {
    let mut events: Vec<RequestEvent> = Vec::new();
    let mut rows: Vec<usize> = Vec::new();
    let mut horizon = None;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        if line_no == 1 && line.starts_with('#') {
            horizon = parse_header(line, line_no)?;
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut cols = line.split(',');
        let (Some(ts), Some(id), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(parse_err(format!(
                "expected 2 columns, found {}",
                line.split(',').count()
            )));
        };
        let timestamp: f64 = ts
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("unparsable timestamp {ts:?}")))?;
        if !timestamp.is_finite() {
            return Err(parse_err(format!("non-finite timestamp {ts:?}")));
        }
        if timestamp < 0.0 {
            return Err(parse_err(format!("negative timestamp {ts:?}")));
        }
        let content_id = ContentId::parse(id).map_err(parse_err)?;
        if let Some(prev) = events.last() {
            if timestamp < prev.timestamp {
                return Err(Error::Validation {
                    line: line_no,
                    message: format!(
                        "unsorted: timestamp {timestamp} precedes {} on the previous row",
                        prev.timestamp
                    ),
                });
            }
        }
        events.push(RequestEvent {
            timestamp,
            content_id,
        });
        rows.push(line_no);
    }

    let horizon = match horizon {
        Some(h) => {
            if let Some(pos) = events.iter().position(|e| e.timestamp > h) {
                return Err(Error::Validation {
                    line: rows[pos],
                    message: format!("horizon: timestamp exceeds header horizon {h}"),
                });
            }
            h
        }
        None => events.last().map_or(0.0, |e| e.timestamp),
    };
    Ok(Trace { events, horizon })
}

/// Writes `trace` in the `trace-v1` format.
///
/// Reals use the shortest decimal form that parses back to the same `f64`,
/// so reading the output reproduces the trace exactly.
pub fn write_trace<W: Write>(trace: &Trace, mut writer: W) -> Result<()> {
    writeln!(writer, "{HEADER_TAG} horizon={}", trace.horizon)?;
    for e in &trace.events {
        writeln!(writer, "{},{}", e.timestamp, e.content_id)?;
    }
    writer.flush()?;
    Ok(())
}
