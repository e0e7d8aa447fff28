//! Starting types of row-2 parts, cluster indexes, and the grouped
//! reduction and insertion types built on top of them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{Ext, MarkedPartition};

/// How a row-2 part sits against the 1-marked parts around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StartType {
    /// Below the largest odd part; not typed.
    #[serde(rename = "s-1")]
    Below,
    #[serde(rename = "s0")]
    S0,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "s2")]
    S2,
    #[serde(rename = "s3")]
    S3,
}

impl fmt::Display for StartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StartType::Below => "s-1",
            StartType::S0 => "s0",
            StartType::S1 => "s1",
            StartType::S2 => "s2",
            StartType::S3 => "s3",
        };
        f.write_str(s)
    }
}

/// Starting types and anchors for every row-2 index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StartingProfile {
    /// Number of row-2 parts exceeding every odd part.
    pub threshold: usize,
    types: Vec<StartType>,
    anchors: Vec<Option<i64>>,
}

impl StartingProfile {
    pub fn of(mp: &MarkedPartition) -> Result<StartingProfile> {
        let row = mp.row(2);
        let threshold = match mp.largest_odd() {
            Some(o) => row.iter().take_while(|&&v| v > o).count(),
            None => row.len(),
        };
        let one = |v: i64| mp.has(v, 1);
        let mut types = Vec::with_capacity(row.len());
        let mut anchors = Vec::with_capacity(row.len());
        let mut prev: Option<i64> = None;
        for (i, &v) in row.iter().enumerate() {
            let b = i + 1;
            if b > threshold {
                types.push(StartType::Below);
                anchors.push(None);
                continue;
            }
            let (ty, anchor) = if b == 1 {
                let clear = !mp.occurs(v + 2);
                if one(v - 1) && clear {
                    (StartType::S0, v - 1)
                } else if one(v - 2) && clear {
                    (StartType::S1, v - 2)
                } else if one(v + 2) {
                    (StartType::S2, v + 2)
                } else if one(v) {
                    (StartType::S3, v)
                } else {
                    return Err(Error::Untyped { index: b });
                }
            } else {
                let follows = !one(v + 2) || prev == Some(v + 2);
                if one(v - 1) && follows {
                    (StartType::S0, v - 1)
                } else if one(v - 2) && follows {
                    (StartType::S1, v - 2)
                } else if one(v + 2) && prev != Some(v + 2) {
                    (StartType::S2, v + 2)
                } else if one(v) {
                    (StartType::S3, v)
                } else {
                    return Err(Error::Untyped { index: b });
                }
            };
            types.push(ty);
            anchors.push(Some(anchor));
            prev = Some(anchor);
        }
        Ok(StartingProfile { threshold, types, anchors })
    }

    /// Type of row-2 index `b` (1-based); `None` outside the row.
    pub fn get(&self, b: usize) -> Option<StartType> {
        if b == 0 {
            None
        } else {
            self.types.get(b - 1).copied()
        }
    }

    pub fn anchor(&self, b: usize) -> Option<i64> {
        if b == 0 {
            None
        } else {
            self.anchors.get(b - 1).copied().flatten()
        }
    }

    pub fn types(&self) -> &[StartType] {
        &self.types
    }

    pub fn is(&self, b: usize, ty: StartType) -> bool {
        self.get(b) == Some(ty)
    }
}

/// Cluster indexes `p_1 > p_2 > ... = 1` above index `p`: each cluster is a
/// maximal run of row-2 parts spaced by 4 and sharing a starting type.
pub fn cluster_indexes(mp: &MarkedPartition, prof: &StartingProfile, p: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut pb = p + 1;
    while pb > 1 {
        let e = pb - 1;
        let (top, ty) = (mp.r2(e), prof.get(e));
        let mut q = e;
        while q > 1 && mp.r2(q - 1) == top.offset(4 * (e - q + 1) as i64) && prof.get(q - 1) == ty {
            q -= 1;
        }
        out.push(q);
        pb = q;
    }
    out
}

/// Group labels used when lowering row-2 parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionType {
    A1,
    A2,
    A3,
    B,
    C,
}

/// Group labels used when raising row-2 parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InsertionType {
    A1,
    A2,
    A3,
    B,
    C,
}

/// A run of row-2 indexes `lo..=hi` sharing one group label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Group<T> {
    pub lo: usize,
    pub hi: usize,
    pub kind: T,
}

/// Groups covering `1..=l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grouping<T> {
    pub l: usize,
    pub groups: Vec<Group<T>>,
}

impl<T: Copy> Grouping<T> {
    pub fn group_of(&self, b: usize) -> Option<&Group<T>> {
        self.groups.iter().find(|g| g.lo <= b && b <= g.hi)
    }

    pub fn kind(&self, b: usize) -> Option<T> {
        self.group_of(b).map(|g| g.kind)
    }

    pub fn same_group(&self, a: usize, b: usize) -> bool {
        match (self.group_of(a), self.group_of(b)) {
            (Some(x), Some(y)) => x.lo == y.lo,
            _ => false,
        }
    }
}

fn run_end(mp: &MarkedPartition, from: usize, limit: usize, up: bool) -> usize {
    // furthest index reachable from `from` by steps of 4 in row 2
    let base = mp.r2(from);
    let mut q = from;
    if up {
        while q > limit && mp.r2(q - 1) == base.offset(4 * (from - q + 1) as i64) {
            q -= 1;
        }
    } else {
        while q < limit && mp.r2(q + 1) == base.offset(-4 * (q + 1 - from) as i64) {
            q += 1;
        }
    }
    q
}

fn value(mp: &MarkedPartition, i: usize) -> i64 {
    match mp.r2(i) {
        Ext::Fin(v) => v,
        _ => unreachable!("index {i} inside row 2"),
    }
}

/// Reduction groups for indexes `1..=l`, built from the top of row 2 down,
/// each group as long as possible.
pub fn reduction_types(mp: &MarkedPartition, prof: &StartingProfile, l: usize) -> Result<Grouping<ReductionType>> {
    use StartType::*;
    let mut groups = Vec::new();
    let mut pb = 0;
    while pb < l {
        let lo = pb + 1;
        let far = run_end(mp, lo, l, false);
        let first = value(mp, lo);
        let mut found = None;
        for hi in (lo..=far).rev() {
            let all = |f: &dyn Fn(usize) -> bool| (lo..=hi).all(f);
            let last = value(mp, hi);
            let kind = if all(&|i| prof.is(i, S3) && mp.occurs(value(mp, i) + 2)) {
                Some(ReductionType::A1)
            } else if all(&|i| prof.is(i, S3)) && !mp.occurs(first + 2) && !mp.has(last - 4, 1) {
                Some(ReductionType::A2)
            } else if all(&|i| prof.is(i, S3)) && !mp.occurs(first + 2) && mp.has(last - 4, 1) {
                Some(ReductionType::A3)
            } else if all(&|i| prof.is(i, S2) && mp.count(value(mp, i) + 2) >= 2) {
                Some(ReductionType::B)
            } else if all(&|i| prof.is(i, S1) || prof.is(i, S2)) && mp.count(first + 2) <= 1 {
                Some(ReductionType::C)
            } else {
                None
            };
            if let Some(kind) = kind {
                found = Some(Group { lo, hi, kind });
                break;
            }
        }
        let g = found.ok_or(Error::UntypedGroup { kind: "reduction", index: lo })?;
        pb = g.hi;
        groups.push(g);
    }
    Ok(Grouping { l, groups })
}

/// Insertion groups for indexes `1..=l`, built from index `l` upward, each
/// group as long as possible.
pub fn insertion_types(mp: &MarkedPartition, prof: &StartingProfile, l: usize) -> Result<Grouping<InsertionType>> {
    use StartType::*;
    let mut groups = Vec::new();
    let mut pb = l + 1;
    while pb > 1 {
        let hi = pb - 1;
        let far = run_end(mp, hi, 1, true);
        let bottom = value(mp, hi);
        let mut found = None;
        for lo in far..=hi {
            let all = |f: &dyn Fn(usize) -> bool| (lo..=hi).all(f);
            let kind = if all(&|i| prof.is(i, S3) && mp.largest_mark(value(mp, i)).unwrap_or(0) > 2) {
                Some(InsertionType::A1)
            } else if all(&|i| prof.is(i, S1)) {
                Some(InsertionType::A2)
            } else if all(&|i| prof.is(i, S2)) && mp.count(bottom) == 1 {
                Some(InsertionType::A3)
            } else if all(&|i| prof.is(i, S2) && mp.count(value(mp, i)) >= 2) {
                Some(InsertionType::B)
            } else if all(&|i| prof.is(i, S3)) && mp.count(bottom) == 2 {
                Some(InsertionType::C)
            } else {
                None
            };
            if let Some(kind) = kind {
                found = Some(Group { lo, hi, kind });
                break;
            }
        }
        let g = found.ok_or(Error::UntypedGroup { kind: "insertion", index: hi })?;
        pb = g.lo;
        groups.push(g);
    }
    groups.reverse();
    Ok(Grouping { l, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sample_starting_types() {
        let mp = fixtures::get("pi1").unwrap();
        let prof = StartingProfile::of(&mp).unwrap();
        use StartType::*;
        assert_eq!(prof.types(), &[S2, S2, S3, S3, S1, S1, S0, Below, Below]);
        assert_eq!(prof.threshold, 7);
    }

    #[test]
    fn sample_clusters() {
        let mp = fixtures::get("pi1").unwrap();
        let prof = StartingProfile::of(&mp).unwrap();
        assert_eq!(cluster_indexes(&mp, &prof, 6), vec![5, 3, 1]);
        assert_eq!(cluster_indexes(&mp, &prof, 3), vec![3, 1]);
        assert!(cluster_indexes(&mp, &prof, 0).is_empty());
    }

    #[test]
    fn sample_insertion_groups() {
        let mp = fixtures::get("pi1").unwrap();
        let prof = StartingProfile::of(&mp).unwrap();
        let g = insertion_types(&mp, &prof, 4).unwrap();
        assert_eq!(
            g.groups,
            vec![
                Group { lo: 1, hi: 2, kind: InsertionType::A3 },
                Group { lo: 3, hi: 3, kind: InsertionType::C },
                Group { lo: 4, hi: 4, kind: InsertionType::A1 },
            ]
        );
    }

    #[test]
    fn sample_reduction_groups() {
        let mp = fixtures::get("pi3").unwrap();
        let prof = StartingProfile::of(&mp).unwrap();
        let g = reduction_types(&mp, &prof, 9).unwrap();
        use ReductionType::*;
        let got: Vec<_> = g.groups.iter().map(|g| (g.lo, g.hi, g.kind)).collect();
        assert_eq!(got, vec![(1, 2, A2), (3, 3, A1), (4, 5, A3), (6, 6, B), (7, 9, C)]);
    }
}
