//! Arrival prefixes: finite monotone encodings of growing structures.
//!
//! Event `n` (1-based height) carries the relation of element `n` to the
//! elements `1..n-1`: an adjacency row for graphs, an incomparability row
//! for interval orders, a single bit for bitstrings, and a rational size
//! for packing instances. Truncating a valid prefix always yields a valid
//! prefix.

use crate::ratio::{format_rat, parse_rat, Rat};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    Graph,
    IntervalOrder,
    Packing,
    Bitstring,
}

impl StructureKind {
    /// Number of possible events at the given height, when finite.
    ///
    /// Graphs and interval orders branch by the 2^(n-1) possible relation
    /// rows, bitstrings by 2; packing sizes range over the rationals, so
    /// there is no finite bound.
    pub fn branching_bound(&self, height: usize) -> Option<u128> {
        match self {
            StructureKind::Graph | StructureKind::IntervalOrder => {
                let exp = (height - 1).min(127) as u32;
                Some(1u128 << exp)
            }
            StructureKind::Bitstring => Some(2),
            StructureKind::Packing => None,
        }
    }

    /// Required row length for relational kinds at height `n`.
    pub fn row_arity(&self, height: usize) -> Option<usize> {
        match self {
            StructureKind::Graph | StructureKind::IntervalOrder => Some(height - 1),
            StructureKind::Bitstring => Some(1),
            StructureKind::Packing => None,
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureKind::Graph => "graph",
            StructureKind::IntervalOrder => "interval-order",
            StructureKind::Packing => "packing",
            StructureKind::Bitstring => "bitstring",
        };
        f.write_str(s)
    }
}

/// One arrival event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    /// Relation row over the earlier elements (or a single bit for
    /// bitstring prefixes).
    Row(Vec<bool>),
    /// Item size for packing prefixes.
    Size(Rat),
}

impl Event {
    pub fn row(bits: &str) -> Event {
        Event::Row(bits.chars().map(|c| c == '1').collect())
    }

    pub fn as_row(&self) -> Option<&[bool]> {
        match self {
            Event::Row(r) => Some(r),
            Event::Size(_) => None,
        }
    }

    pub fn as_size(&self) -> Option<Rat> {
        match self {
            Event::Size(s) => Some(*s),
            Event::Row(_) => None,
        }
    }
}

pub fn row_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A finite monotone prefix of arrival events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalPrefix {
    kind: StructureKind,
    events: Vec<Event>,
}

/// Verdict of [`ArrivalPrefix::validate`]; invalid prefixes name the first
/// offending event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { height: usize, reason: String },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefixError {
    #[error("event {height}: {reason}")]
    BadEvent { height: usize, reason: String },
    #[error("line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

impl ArrivalPrefix {
    pub fn new(kind: StructureKind) -> Self {
        ArrivalPrefix { kind, events: Vec::new() }
    }

    /// Builds a prefix and validates every event.
    pub fn from_events(kind: StructureKind, events: Vec<Event>) -> Result<Self, PrefixError> {
        let p = ArrivalPrefix { kind, events };
        match p.validate() {
            Validity::Valid => Ok(p),
            Validity::Invalid { height, reason } => Err(PrefixError::BadEvent { height, reason }),
        }
    }

    /// Graph prefix from rows written as 0/1 strings, e.g. `["", "1", "01"]`.
    pub fn graph_from_rows(rows: &[&str]) -> Result<Self, PrefixError> {
        Self::from_events(StructureKind::Graph, rows.iter().map(|r| Event::row(r)).collect())
    }

    pub fn order_from_rows(rows: &[&str]) -> Result<Self, PrefixError> {
        Self::from_events(
            StructureKind::IntervalOrder,
            rows.iter().map(|r| Event::row(r)).collect(),
        )
    }

    pub fn bits_from_str(bits: &str) -> Result<Self, PrefixError> {
        Self::from_events(
            StructureKind::Bitstring,
            bits.chars().map(|c| Event::Row(vec![c == '1'])).collect(),
        )
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// Count of arrival events.
    pub fn height(&self) -> usize {
        self.events.len()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Event at 1-based height `n`.
    pub fn event(&self, n: usize) -> Option<&Event> {
        if n == 0 {
            return None;
        }
        self.events.get(n - 1)
    }

    /// Appends an event without validation; call [`validate`] or use
    /// [`push_checked`] when the source is untrusted.
    pub fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    pub fn push_checked(&mut self, e: Event) -> Result<(), PrefixError> {
        let height = self.height() + 1;
        check_event(self.kind, height, &e)
            .map_err(|reason| PrefixError::BadEvent { height, reason })?;
        self.events.push(e);
        Ok(())
    }

    /// The height-`m` truncation. Panics if `m` exceeds the height.
    pub fn truncate(&self, m: usize) -> ArrivalPrefix {
        assert!(m <= self.height(), "truncation beyond height");
        ArrivalPrefix { kind: self.kind, events: self.events[..m].to_vec() }
    }

    /// Checks event arity and alphabet; names the first offending event.
    pub fn validate(&self) -> Validity {
        for (i, e) in self.events.iter().enumerate() {
            let height = i + 1;
            if let Err(reason) = check_event(self.kind, height, e) {
                return Validity::Invalid { height, reason };
            }
        }
        Validity::Valid
    }

    /// Serialises to one JSONL record per event.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.events.iter().enumerate() {
            let rec = match e {
                Event::Row(bits) => serde_json::json!({"n": i + 1, "row": row_string(bits)}),
                Event::Size(s) => serde_json::json!({"n": i + 1, "size": format_rat(s)}),
            };
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the JSONL event format produced by [`to_jsonl`].
    pub fn from_jsonl(kind: StructureKind, text: &str) -> Result<Self, PrefixError> {
        let mut events = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| PrefixError::BadRecord {
                    line: lineno + 1,
                    reason: e.to_string(),
                })?;
            let n = v["n"].as_u64().ok_or_else(|| PrefixError::BadRecord {
                line: lineno + 1,
                reason: "missing event index `n`".into(),
            })? as usize;
            if n != events.len() + 1 {
                return Err(PrefixError::BadRecord {
                    line: lineno + 1,
                    reason: format!("event index {n} out of order"),
                });
            }
            let event = if kind == StructureKind::Packing {
                let s = v["size"].as_str().ok_or_else(|| PrefixError::BadRecord {
                    line: lineno + 1,
                    reason: "missing `size`".into(),
                })?;
                Event::Size(parse_rat(s).map_err(|e| PrefixError::BadRecord {
                    line: lineno + 1,
                    reason: e.to_string(),
                })?)
            } else {
                let s = v["row"].as_str().ok_or_else(|| PrefixError::BadRecord {
                    line: lineno + 1,
                    reason: "missing `row`".into(),
                })?;
                if let Some(c) = s.chars().find(|&c| c != '0' && c != '1') {
                    return Err(PrefixError::BadRecord {
                        line: lineno + 1,
                        reason: format!("bad row character {c:?}"),
                    });
                }
                Event::row(s)
            };
            events.push(event);
        }
        Self::from_events(kind, events)
    }
}

fn check_event(kind: StructureKind, height: usize, e: &Event) -> Result<(), String> {
    match (kind.row_arity(height), e) {
        (Some(arity), Event::Row(bits)) => {
            if bits.len() != arity {
                Err(format!("row has {} entries, needs {}", bits.len(), arity))
            } else {
                Ok(())
            }
        }
        (None, Event::Size(s)) => {
            if *s <= Rat::from_integer(0) {
                Err(format!("size {} is not positive", format_rat(s)))
            } else {
                Ok(())
            }
        }
        (Some(_), Event::Size(_)) => Err("size event in a relational prefix".into()),
        (None, Event::Row(_)) => Err("row event in a packing prefix".into()),
    }
}
