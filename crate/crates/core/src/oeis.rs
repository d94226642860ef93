//! OEIS b-file input/output and sequence diffing.
//!
//! A b-file is plain text, one `index value` pair per line with strictly
//! consecutive indices, optionally interleaved with `#` comment lines.
//! Values are arbitrary-precision, since record values overflow native
//! words long before the indices do.

use crate::error::{Error, Result};
use crate::eval::BigCount;
use num_bigint::BigUint;
use std::fmt;
use std::fmt::Write as _;

/// A sequence with consecutive indices starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    offset: i64,
    values: Vec<BigCount>,
}

impl Sequence {
    pub fn new(offset: i64, values: Vec<BigCount>) -> Sequence {
        Sequence { offset, values }
    }

    /// Index of the first term. Empty sequences report offset 1.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last term, if any.
    pub fn last_index(&self) -> Option<i64> {
        if self.values.is_empty() {
            None
        } else {
            Some(self.offset + self.values.len() as i64 - 1)
        }
    }

    /// Term at `index`, if within range.
    pub fn get(&self, index: i64) -> Option<&BigCount> {
        let pos = index.checked_sub(self.offset)?;
        if pos < 0 {
            return None;
        }
        self.values.get(pos as usize)
    }

    /// `(index, value)` pairs in order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigCount)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (self.offset + i as i64, v))
    }
}

/// Parses b-file text. `#` lines and blank lines are ignored; every other
/// line must be `index value` separated by spaces or tabs, with indices
/// strictly consecutive. Errors carry the 1-based line number. Text with no
/// terms parses as the empty sequence at offset 1.
pub fn parse_bfile(text: &str) -> Result<Sequence> {
    let mut offset: Option<i64> = None;
    let mut values: Vec<BigUint> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (index_text, value_text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::BFileParse {
                    line: line_no,
                    reason: format!("expected 'index value', found {line:?}"),
                })
            }
        };
        let index: i64 = index_text.parse().map_err(|_| Error::BFileParse {
            line: line_no,
            reason: format!("invalid index {index_text:?}"),
        })?;
        let value: BigUint = value_text.parse().map_err(|_| Error::BFileParse {
            line: line_no,
            reason: format!("invalid value {value_text:?}"),
        })?;
        match offset {
            None => offset = Some(index),
            Some(off) => {
                let expected = off + values.len() as i64;
                if index != expected {
                    return Err(Error::BFileGap {
                        line: line_no,
                        expected,
                        found: index,
                    });
                }
            }
        }
        values.push(value);
    }
    Ok(Sequence {
        offset: offset.unwrap_or(1),
        values,
    })
}

/// Writes a sequence in b-file format: `index value\n` per term, nothing
/// else. [`parse_bfile`] inverts it exactly.
pub fn write_bfile(s: &Sequence) -> String {
    let mut out = String::new();
    for (i, v) in s.terms() {
        writeln!(out, "{i} {v}").expect("string write cannot fail");
    }
    out
}

/// First disagreement between two sequences on their shared index range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstMismatch {
    pub index: i64,
    pub left: BigCount,
    pub right: BigCount,
}

/// Result of comparing two sequences index-by-index on their overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    /// Inclusive shared index range, if any indices are shared.
    pub overlap: Option<(i64, i64)>,
    pub first_mismatch: Option<FirstMismatch>,
    /// Terms of the left sequence outside the overlap.
    pub left_only: usize,
    /// Terms of the right sequence outside the overlap.
    pub right_only: usize,
}

impl DiffReport {
    /// True when the sequences agree everywhere they both have terms.
    /// Non-overlapping tails are reported but do not fail the match.
    pub fn is_match(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.overlap {
            Some((lo, hi)) => writeln!(f, "overlap {lo}..{hi}")?,
            None => writeln!(f, "no overlap")?,
        }
        match &self.first_mismatch {
            Some(m) => writeln!(
                f,
                "first mismatch at {}: left {} right {}",
                m.index, m.left, m.right
            )?,
            None => writeln!(f, "no mismatch in overlap")?,
        }
        write!(
            f,
            "left only {} right only {}",
            self.left_only, self.right_only
        )
    }
}

/// Compares two sequences on the index range they share. Tails present on
/// only one side are counted, not compared.
pub fn compare(a: &Sequence, b: &Sequence) -> DiffReport {
    let overlap = match (a.last_index(), b.last_index()) {
        (Some(a_hi), Some(b_hi)) => {
            let lo = a.offset.max(b.offset);
            let hi = a_hi.min(b_hi);
            if lo <= hi {
                Some((lo, hi))
            } else {
                None
            }
        }
        _ => None,
    };
    let in_overlap = |i: i64| overlap.is_some_and(|(lo, hi)| lo <= i && i <= hi);
    let first_mismatch = overlap.and_then(|(lo, hi)| {
        (lo..=hi).find_map(|i| {
            let left = a.get(i).expect("index within overlap");
            let right = b.get(i).expect("index within overlap");
            (left != right).then(|| FirstMismatch {
                index: i,
                left: left.clone(),
                right: right.clone(),
            })
        })
    });
    DiffReport {
        overlap,
        first_mismatch,
        left_only: a.terms().filter(|(i, _)| !in_overlap(*i)).count(),
        right_only: b.terms().filter(|(i, _)| !in_overlap(*i)).count(),
    }
}
