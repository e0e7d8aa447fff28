//! Partitions, Gollnitz-Gordon marking and row storage.
//!
//! A part receives the smallest positive mark not already used by a smaller
//! or equal part that sits within distance 2 of it (distance 1 when the part
//! is odd). Parts are marked from the smallest upward. Collecting the parts
//! by mark gives the rows of the partition.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integers extended by the two sentinels used at the ends of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Ext {
    pub fn finite(self) -> Option<i64> {
        match self {
            Ext::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is(self, v: i64) -> bool {
        self == Ext::Fin(v)
    }

    /// Adds a finite offset; sentinels absorb it.
    pub fn offset(self, d: i64) -> Ext {
        match self {
            Ext::Fin(v) => Ext::Fin(v + d),
            s => s,
        }
    }
}

impl PartialEq<i64> for Ext {
    fn eq(&self, other: &i64) -> bool {
        self.is(*other)
    }
}

impl PartialOrd<i64> for Ext {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Ext::Fin(*other)))
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::PosInf => write!(f, "+inf"),
        }
    }
}

/// A finite nonincreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Partition {
    parts: Vec<i64>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts already in nonincreasing order.
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = parts.iter().find(|&&p| p <= 0) {
            return Err(Error::InvalidPartition(format!("part {bad} is not positive")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not nonincreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts into nonincreasing order first.
    pub fn from_unsorted(mut parts: Vec<i64>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn weight(&self) -> i64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn count(&self, v: i64) -> usize {
        self.parts.iter().filter(|&&p| p == v).count()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.parts.contains(&v)
    }

    pub fn largest_odd(&self) -> Option<i64> {
        self.parts.iter().copied().find(|p| p % 2 == 1)
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub(crate) fn insert(&mut self, v: i64) {
        let at = self.parts.partition_point(|&p| p >= v);
        self.parts.insert(at, v);
    }

    pub(crate) fn remove(&mut self, v: i64) -> bool {
        match self.parts.iter().position(|&p| p == v) {
            Some(i) => {
                self.parts.remove(i);
                true
            }
            None => false,
        }
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<i64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<i64> {
    fn from(p: Partition) -> Vec<i64> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// One occurrence of a part together with its mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub value: i64,
    pub mark: usize,
    pub overlined: bool,
}

/// A partition with its canonical marking.
///
/// A special partition carries one overlined copy of its largest odd part;
/// that copy may not take mark 1, and among equal values the plain copies are
/// marked before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPartition {
    partition: Partition,
    overline: Option<i64>,
    // sorted by value descending, then mark ascending
    entries: Vec<Entry>,
    rows: Vec<Vec<i64>>,
}

/// An elementary change to a marked partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surgery {
    /// Remove the occurrence of `value` carrying `mark`.
    Remove { value: i64, mark: usize },
    /// Add a new occurrence, overlined or not.
    Add { value: i64, overlined: bool },
}

impl MarkedPartition {
    /// The ordinary marking.
    pub fn mark(p: &Partition) -> MarkedPartition {
        Self::build(p.clone(), None)
    }

    /// The special marking with the given overlined value.
    pub fn mark_special(p: &Partition, overline: Option<i64>) -> Result<MarkedPartition> {
        if let Some(v) = overline {
            if v % 2 == 0 {
                return Err(Error::InvalidOverline(format!("{v} is even")));
            }
            if p.largest_odd() != Some(v) {
                return Err(Error::InvalidOverline(format!("{v} is not the largest odd part of {p}")));
            }
        }
        Ok(Self::build(p.clone(), overline))
    }

    fn build(partition: Partition, overline: Option<i64>) -> MarkedPartition {
        // ascending, plain copies before the overlined one
        let mut order: Vec<(i64, bool)> = partition.parts.iter().rev().map(|&v| (v, false)).collect();
        if let Some(v) = overline {
            if let Some(last) = order.iter().rposition(|&(w, _)| w == v) {
                order[last].1 = true;
            }
        }
        let mut marked: Vec<Entry> = Vec::with_capacity(order.len());
        for (value, overlined) in order {
            let reach = if value % 2 == 0 { 2 } else { 1 };
            let mut used: u64 = 0;
            for e in marked.iter().rev() {
                if value - e.value > reach {
                    break;
                }
                if e.mark < 64 {
                    used |= 1 << e.mark;
                }
            }
            let mut mark = if overlined { 2 } else { 1 };
            while mark < 64 && used & (1 << mark) != 0 {
                mark += 1;
            }
            marked.push(Entry { value, mark, overlined });
        }
        marked.sort_by(|a, b| b.value.cmp(&a.value).then(a.mark.cmp(&b.mark)));
        let nrows = marked.iter().map(|e| e.mark).max().unwrap_or(0);
        let mut rows = vec![Vec::new(); nrows];
        for e in &marked {
            rows[e.mark - 1].push(e.value);
        }
        MarkedPartition { partition, overline, entries: marked, rows }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn parts(&self) -> &[i64] {
        self.partition.parts()
    }

    pub fn weight(&self) -> i64 {
        self.partition.weight()
    }

    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// The overlined value and its mark, if any.
    pub fn overline(&self) -> Option<(i64, usize)> {
        self.entries.iter().find(|e| e.overlined).map(|e| (e.value, e.mark))
    }

    pub fn is_special(&self) -> bool {
        self.overline.is_some()
    }

    /// Number of nonempty rows (the largest mark used).
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// The `i`-marked values in decreasing order; empty past the last row.
    pub fn row(&self, i: usize) -> &[i64] {
        if i == 0 || i > self.rows.len() {
            &[]
        } else {
            &self.rows[i - 1]
        }
    }

    /// Size of row `i`.
    pub fn row_len(&self, i: usize) -> usize {
        self.row(i).len()
    }

    /// Row `i`, position `j`, with `+inf` at position 0 and `-inf` just past the end.
    pub fn row_entry(&self, i: usize, j: usize) -> Result<Ext> {
        let row = self.row(i);
        if i == 0 || j > row.len() + 1 {
            return Err(Error::OutOfRange { row: i, index: j });
        }
        Ok(self.at(i, j))
    }

    /// Like [`row_entry`](Self::row_entry) but every position past the end reads `-inf`.
    pub fn at(&self, i: usize, j: usize) -> Ext {
        if j == 0 {
            return Ext::PosInf;
        }
        match self.row(i).get(j - 1) {
            Some(&v) => Ext::Fin(v),
            None => Ext::NegInf,
        }
    }

    /// Shorthand for row 2, which drives the whole classification.
    pub fn r2(&self, j: usize) -> Ext {
        self.at(2, j)
    }

    pub fn count(&self, v: i64) -> usize {
        self.entries.iter().filter(|e| e.value == v).count()
    }

    pub fn occurs(&self, v: i64) -> bool {
        self.entries.iter().any(|e| e.value == v)
    }

    /// Marks carried by the copies of `v`, ascending.
    pub fn marks_of(&self, v: i64) -> Vec<usize> {
        self.entries.iter().filter(|e| e.value == v).map(|e| e.mark).collect()
    }

    pub fn has(&self, v: i64, mark: usize) -> bool {
        self.entries.iter().any(|e| e.value == v && e.mark == mark)
    }

    pub fn largest_mark(&self, v: i64) -> Option<usize> {
        self.marks_of(v).into_iter().max()
    }

    pub fn smallest_mark(&self, v: i64) -> Option<usize> {
        self.marks_of(v).into_iter().min()
    }

    pub fn largest_odd(&self) -> Option<i64> {
        self.partition.largest_odd()
    }

    /// Applies all surgeries against the current marking, then re-marks.
    ///
    /// Removals are resolved first, so every `Remove` names a part of `self`.
    pub fn apply(&self, ops: &[Surgery]) -> Result<MarkedPartition> {
        let mut taken = vec![false; self.entries.len()];
        let mut parts = self.partition.clone();
        let mut overline = self.overline;
        for op in ops {
            if let Surgery::Remove { value, mark } = *op {
                let at = self
                    .entries
                    .iter()
                    .enumerate()
                    .position(|(i, e)| !taken[i] && e.value == value && e.mark == mark)
                    .ok_or(Error::TargetMissing { value, mark })?;
                taken[at] = true;
                parts.remove(value);
                if self.entries[at].overlined {
                    overline = None;
                }
            }
        }
        for op in ops {
            if let Surgery::Add { value, overlined } = *op {
                if value <= 0 {
                    return Err(Error::InvalidPartition(format!("part {value} is not positive")));
                }
                parts.insert(value);
                if overlined {
                    if overline.is_some() {
                        return Err(Error::InvalidOverline("two overlined parts".into()));
                    }
                    overline = Some(value);
                }
            }
        }
        MarkedPartition::mark_special(&parts, overline)
    }

    /// Replaces the `mark`-marked `value` by `new_value`, returning the result
    /// and the mark the new part receives.
    pub fn replace_part(
        &self,
        value: i64,
        mark: usize,
        new_value: i64,
        overlined: bool,
    ) -> Result<(MarkedPartition, usize)> {
        let next = self.apply(&[Surgery::Remove { value, mark }, Surgery::Add { value: new_value, overlined }])?;
        let new_mark = next
            .entries
            .iter()
            .filter(|e| e.value == new_value && e.overlined == overlined)
            .map(|e| e.mark)
            .max()
            .unwrap_or(0);
        Ok((next, new_mark))
    }

    /// The marking grid as the body of a LaTeX array.
    ///
    /// One column per distinct value in ascending order, the highest mark on
    /// top, trailing empty cells dropped and rows separated by `\\`.
    pub fn render_grid(&self) -> String {
        let cols = self.columns();
        let mut lines = Vec::with_capacity(self.rows.len());
        for mark in (1..=self.rows.len()).rev() {
            let cells: Vec<String> = cols.iter().map(|&v| self.cell(mark, v)).collect();
            let keep = cells.iter().rposition(|c| !c.is_empty()).map_or(0, |i| i + 1);
            lines.push(cells[..keep].join("&"));
        }
        lines.join("\\\\\n")
    }

    /// The same grid laid out in fixed-width columns for a terminal.
    pub fn render_table(&self) -> String {
        let cols = self.columns();
        let mut out = String::new();
        for mark in (1..=self.rows.len()).rev() {
            let cells: Vec<String> = cols
                .iter()
                .map(|&v| {
                    let c = self.cell(mark, v);
                    let c = c.replace("\\overline{", "^").replace('}', "");
                    let width = v.to_string().len() + 1;
                    format!("{c:>width$}")
                })
                .collect();
            out.push_str(&format!("{mark}:"));
            out.push_str(cells.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    fn columns(&self) -> Vec<i64> {
        let mut cols: Vec<i64> = self.partition.parts.clone();
        cols.dedup();
        cols.reverse();
        cols
    }

    fn cell(&self, mark: usize, v: i64) -> String {
        match self.entries.iter().find(|e| e.mark == mark && e.value == v) {
            Some(e) if e.overlined => format!("\\overline{{{v}}}"),
            Some(_) => v.to_string(),
            None => String::new(),
        }
    }

    /// Reads a grid in the format produced by [`render_grid`](Self::render_grid),
    /// tolerating `{\bf ..}` emphasis, trailing `&` and whitespace.
    ///
    /// The marking is recomputed and must agree with the rows as written.
    pub fn parse_grid(text: &str) -> Result<MarkedPartition> {
        let lines: Vec<&str> = text.split("\\\\").map(str::trim).filter(|l| !l.is_empty()).collect();
        let nrows = lines.len();
        let mut written: Vec<Vec<i64>> = vec![Vec::new(); nrows];
        let mut parts = Vec::new();
        let mut overline = None;
        for (k, line) in lines.iter().enumerate() {
            let mark = nrows - k;
            for cell in line.split('&') {
                let cell = cell.replace("{\\bf", "").replace(['{', '}', ' '], "");
                if cell.is_empty() {
                    continue;
                }
                let (digits, over) = match cell.strip_prefix("\\overline") {
                    Some(rest) => (rest.to_string(), true),
                    None => (cell.clone(), false),
                };
                let v: i64 = digits.parse().map_err(|_| Error::Parse(format!("bad grid cell {cell:?}")))?;
                if over {
                    overline = Some(v);
                }
                parts.push(v);
                written[mark - 1].push(v);
            }
        }
        let mp = MarkedPartition::mark_special(&Partition::from_unsorted(parts)?, overline)?;
        for row in &mut written {
            row.sort_unstable_by(|a, b| b.cmp(a));
        }
        if mp.rows != written {
            return Err(Error::Parse("rows disagree with the canonical marking".into()));
        }
        Ok(mp)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut rows = serde_json::Map::new();
        for (i, row) in self.rows.iter().enumerate() {
            rows.insert((i + 1).to_string(), serde_json::json!(row));
        }
        let overline = match self.overline() {
            Some((value, mark)) => serde_json::json!({ "value": value, "mark": mark }),
            None => serde_json::Value::Null,
        };
        serde_json::json!({ "rows": rows, "overline": overline })
    }

    /// Inverse of [`to_json`](Self::to_json); rejects non-canonical rows.
    pub fn from_json(v: &serde_json::Value) -> Result<MarkedPartition> {
        #[derive(Deserialize)]
        struct Raw {
            rows: BTreeMap<String, Vec<i64>>,
            overline: Option<RawOver>,
        }
        #[derive(Deserialize)]
        struct RawOver {
            value: i64,
            mark: usize,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut parts = Vec::new();
        let mut written = BTreeMap::new();
        for (k, row) in raw.rows {
            let mark: usize = k.parse().map_err(|_| Error::Parse(format!("bad row key {k:?}")))?;
            if mark == 0 {
                return Err(Error::Parse("row keys start at 1".into()));
            }
            parts.extend_from_slice(&row);
            written.insert(mark, row);
        }
        let mp =
            MarkedPartition::mark_special(&Partition::from_unsorted(parts)?, raw.overline.as_ref().map(|o| o.value))?;
        for (mark, row) in written {
            if mp.row(mark) != row.as_slice() {
                return Err(Error::Parse(format!("row {mark} is not the canonical marking")));
            }
        }
        if let Some(o) = raw.overline {
            if mp.overline() != Some((o.value, o.mark)) {
                return Err(Error::Parse("overline mark disagrees with the marking".into()));
            }
        }
        Ok(mp)
    }
}

impl fmt::Display for MarkedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_table())
    }
}
