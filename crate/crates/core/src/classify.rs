//! The three families indexed by `(p, t)` and their twelve subsets each.
//!
//! * `Lt`: no odd part reaches `2t+1`, which falls strictly between the
//!   `p`-th and `(p+1)`-th parts of row 2.
//! * `Sim`: the members of `Lt` that dilation can produce.
//! * `Eq`: the largest odd part is exactly `2t+1`.
//!
//! Every member of a family lies in exactly one subset; a member matching no
//! clause or several clauses is reported as an integrity error.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{Ext, MarkedPartition};
use crate::sets::is_in_c;
use crate::types::{cluster_indexes, reduction_types, Grouping, ReductionType, StartType, StartingProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lt,
    Sim,
    Eq,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Lt => "lt",
            Family::Sim => "sim",
            Family::Eq => "eq",
        })
    }
}

/// Where a partition sits: family, subset number `j` in `1..=12`, the pair
/// `(p, t)`, and the derived insertion index (for `Lt`, `Sim`) or division
/// index (for `Eq`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetLabel {
    pub family: Family,
    pub j: u8,
    pub p: usize,
    pub t: i64,
    pub index: i64,
    pub clusters: Vec<usize>,
}

/// A marked partition with its starting profile, for repeated queries.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub mp: MarkedPartition,
    pub k: usize,
    pub r: usize,
    pub in_c: bool,
    profile: Option<StartingProfile>,
}

impl Analysis {
    pub fn new(mp: MarkedPartition, k: usize, r: usize) -> Result<Analysis> {
        if k < r || r < 3 {
            return Err(Error::InvalidParameters(format!("need k >= r >= 3, got k={k} r={r}")));
        }
        let in_c = !mp.is_special() && is_in_c(k, r, &mp);
        let profile = if in_c { Some(StartingProfile::of(&mp)?) } else { None };
        Ok(Analysis { mp, k, r, in_c, profile })
    }

    pub fn profile(&self) -> Option<&StartingProfile> {
        self.profile.as_ref()
    }

    fn ty(&self, b: usize) -> Option<StartType> {
        self.profile.as_ref().and_then(|p| p.get(b))
    }

    fn is(&self, b: usize, ty: StartType) -> bool {
        self.ty(b) == Some(ty)
    }

    fn r2(&self, j: usize) -> Ext {
        self.mp.r2(j)
    }

    fn v(&self, j: usize) -> i64 {
        self.r2(j).finite().expect("index inside row 2")
    }

    /// Indexes `i <= p` with `row2[i] = row2[p] + 4(p - i) + shift`.
    fn chain(&self, p: usize, shift: i64) -> Vec<usize> {
        let base = self.r2(p);
        (1..=p).filter(|&i| self.r2(i) == base.offset(4 * (p - i) as i64 + shift)).collect()
    }

    fn clusters(&self, p: usize) -> Vec<usize> {
        match &self.profile {
            Some(prof) => cluster_indexes(&self.mp, prof, p),
            None => Vec::new(),
        }
    }

    /// Number of row-2 parts strictly above `x`.
    pub fn above(&self, x: i64) -> usize {
        self.mp.row(2).iter().take_while(|&&v| v > x).count()
    }

    pub fn reduction_grouping(&self, l: usize) -> Result<Grouping<ReductionType>> {
        let prof = self.profile.as_ref().ok_or_else(|| Error::NotMember("outside the family".into()))?;
        reduction_types(&self.mp, prof, l)
    }

    /// Subset of the strict family at `(p, t)`, if a member.
    pub fn classify_lt(&self, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
        use StartType::*;
        if !self.in_c || t < 0 {
            return Ok(None);
        }
        let odd = 2 * t + 1;
        if self.mp.largest_odd().is_some_and(|o| o >= odd) {
            return Ok(None);
        }
        let (a, b) = (self.r2(p), self.r2(p + 1));
        if !(b < odd && a > odd) {
            return Ok(None);
        }
        if a == 2 * t + 2 && !(self.is(p, S2) || self.is(p, S3)) {
            return Ok(None);
        }
        if b == 2 * t && !(self.is(p + 1, S0) || self.is(p + 1, S1)) {
            return Ok(None);
        }
        let ty = self.ty(p);
        let any_s23 = ty == Some(S2) || ty == Some(S3);
        let mp = &self.mp;
        let big_mark = |v: i64| mp.largest_mark(v).unwrap_or(0) > 2;
        let clusters = if p >= 1 { self.clusters(p) } else { Vec::new() };
        let p1 = clusters.first().copied();
        let top = |i: usize| self.r2(i);
        let mut hits = Vec::new();
        let x6 = 2 * t + 6;
        let x4 = 2 * t + 4;
        let x2 = 2 * t + 2;
        if a >= x6 && (a != x6 || (any_s23 && mp.largest_mark(x6) == Some(2))) {
            hits.push(1);
        }
        if a == x6 && !mp.occurs(x2) && (!any_s23 || big_mark(x6)) {
            hits.push(2);
        }
        if a == x6 && ty == Some(S3) && mp.occurs(x2) && big_mark(x6) {
            hits.push(3);
        }
        if a == x4 && ty == Some(S3) && mp.largest_mark(x4) == Some(2) {
            hits.push(4);
        }
        if a == x4 && ty == Some(S3) && big_mark(x4) {
            hits.push(5);
        }
        if a == x4 && ty == Some(S1) {
            hits.push(6);
        }
        if a == x4 && ty == Some(S2) {
            hits.push(7);
        }
        if a == x2 && ty == Some(S2) {
            hits.push(8);
        }
        if a == x2 && ty == Some(S3) {
            let p1 = p1.expect("p >= 1 has a first cluster");
            let base = self.v(p1);
            if !mp.occurs(base + 4) {
                hits.push(9);
            }
            if mp.occurs(base + 4) && !mp.occurs(base + 6) {
                hits.push(10);
            }
            if top(p1 - 1) == base + 6 && self.is(p1 - 1, S1) {
                hits.push(11);
            }
            if top(p1 - 1) == base + 6 && self.is(p1 - 1, S2) {
                hits.push(12);
            }
        }
        let j = self.single(Family::Lt, p, t, &hits)?;
        let index = match j {
            1..=5 => x2,
            6 => self.v(clusters[0]),
            7..=9 => self.v(clusters[0]) + 2,
            10 => self.v(clusters[0]) + 4,
            11 => self.v(clusters[1]),
            _ => self.v(clusters[1]) + 2,
        };
        Ok(Some(SubsetLabel { family: Family::Lt, j, p, t, index, clusters }))
    }

    /// Subset of the image family at `(p, t)`, if a member.
    pub fn classify_sim(&self, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
        use ReductionType::*;
        let Some(lt) = self.classify_lt(p, t)? else {
            return Ok(None);
        };
        let a = self.r2(p);
        let l = self.above(lt.index);
        let needs_types =
            (lt.j <= 5 && (a == 2 * t + 6 || a == 2 * t + 4)) || (lt.j >= 6 && self.r2(l) == lt.index + 4);
        let grouping = if needs_types { Some(self.reduction_grouping(l)?) } else { None };
        let kind = |i: usize| grouping.as_ref().and_then(|g| g.kind(i));
        let mut hits = Vec::new();
        if a >= 2 * t + 8 {
            hits.push(1);
        }
        if a == 2 * t + 6 && matches!(kind(p), Some(A1 | A2 | B)) && !self.mp.occurs(2 * t + 2) {
            hits.push(2);
        }
        if a == 2 * t + 6 && kind(p) == Some(A1) && self.mp.occurs(2 * t + 2) {
            hits.push(3);
        }
        if a == 2 * t + 6 && kind(p) == Some(C) && !self.mp.occurs(2 * t + 2) {
            hits.push(4);
        }
        if a == 2 * t + 4 && kind(p) == Some(A1) {
            hits.push(5);
        }
        if lt.j >= 6 && (self.r2(l) != lt.index + 4 || kind(l) == Some(A1)) {
            hits.push(lt.j);
        }
        if hits.is_empty() {
            return Ok(None);
        }
        let j = self.single(Family::Sim, p, t, &hits)?;
        Ok(Some(SubsetLabel { family: Family::Sim, j, ..lt }))
    }

    /// Subset of the equal family at `(p, t)`, if a member.
    pub fn classify_eq(&self, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
        use StartType::*;
        if !self.in_c || t < 0 {
            return Ok(None);
        }
        let mp = &self.mp;
        let odd = 2 * t + 1;
        if mp.largest_odd() != Some(odd) || mp.smallest_mark(odd).unwrap_or(0) > 2 {
            return Ok(None);
        }
        let (a, b) = (self.r2(p), self.r2(p + 1));
        let x2 = 2 * t + 2;
        if !(a >= x2 && b <= x2) {
            return Ok(None);
        }
        let ty = self.ty(p);
        // row-2 index holding 2t+2, if any
        let at2 = if a == x2 {
            Some(p)
        } else if b == x2 {
            Some(p + 1)
        } else {
            None
        };
        if let Some(i) = at2 {
            if self.is(i, S0) {
                let ok = b == x2 && self.chain(p + 1, 0).iter().any(|&q| mp.count(self.v(q)) == 1);
                if !ok {
                    return Ok(None);
                }
            }
            if self.is(i, S2) && a != x2 {
                return Ok(None);
            }
        }
        if mp.occurs(x2) && at2.is_none() {
            let ok = a == 2 * t + 4 && ty == Some(S3) && self.chain(p, 0).iter().any(|&q| !mp.occurs(self.v(q) + 2));
            if !ok {
                return Ok(None);
            }
        }

        let chain = if p >= 1 { self.chain(p, 0) } else { Vec::new() };
        let plus2_all = |pred: &dyn Fn(usize) -> bool| chain.iter().all(|&q| pred(mp.count(self.v(q) + 2)));
        let plus2_any = |pred: &dyn Fn(usize) -> bool| chain.iter().any(|&q| pred(mp.count(self.v(q) + 2)));
        let odd_mark = mp.smallest_mark(odd);
        let s_top = chain.first().copied();
        let s_once = chain.iter().copied().find(|&q| mp.count(self.v(q)) == 1);
        let x4 = 2 * t + 4;
        let x6 = 2 * t + 6;
        let mut hits = Vec::new();
        if a >= 2 * t + 8 {
            hits.push(1);
        }
        if a == x6 && matches!(ty, Some(S2 | S3)) && b < x2 && (ty != Some(S2) || plus2_all(&|c| c >= 2)) {
            hits.push(2);
        }
        if a == x6 && ty == Some(S3) && b == x2 && plus2_all(&|c| c >= 1) {
            hits.push(3);
        }
        if a == x6 && matches!(ty, Some(S1 | S2)) && b < x2 && (ty != Some(S2) || plus2_any(&|c| c == 1)) {
            hits.push(4);
        }
        if a == x4 && ty == Some(S3) && plus2_all(&|c| c >= 1) {
            hits.push(5);
        }
        if a == x4 && ty == Some(S3) && odd_mark == Some(1) && plus2_any(&|c| c == 0) {
            hits.push(6);
        }
        if a == x6 && b == x2 {
            let lower = self.chain(p + 1, 0);
            let first_once = lower.iter().copied().find(|&q| mp.count(self.v(q)) == 1);
            if first_once == Some(p + 1) && lower.iter().any(|&q| q < p + 1 && !mp.occurs(self.v(q) + 2)) {
                hits.push(7);
            }
        }
        if a == x4 && ty == Some(S3) && odd_mark == Some(2) && plus2_any(&|c| c == 0) {
            hits.push(8);
        }
        let shifted = |s: usize| self.chain(p, 2).into_iter().filter(move |&i| i < s);
        if a == x2 {
            let s = s_top.expect("p >= 1");
            if shifted(s).all(|i| self.is(i, S3) && mp.occurs(self.v(i) + 2)) {
                hits.push(9);
            }
            if shifted(s).any(|i| self.is(i, S3) && !mp.occurs(self.v(i) + 2)) {
                hits.push(11);
            }
        }
        if a == x6 && b == x2 {
            if let Some(s) = s_once {
                let above = chain.iter().copied().filter(|&i| i < s);
                if above.clone().all(|i| self.is(i, S3) && mp.occurs(self.v(i) + 2)) {
                    hits.push(10);
                }
                if above.clone().any(|i| !mp.occurs(self.v(i) + 2)) {
                    hits.push(12);
                }
            }
        }
        let j = self.single(Family::Eq, p, t, &hits)?;
        let first_gap = || chain.iter().copied().find(|&q| !mp.occurs(self.v(q) + 2));
        let missing = |what: &str| Error::Integrity(format!("no {what} for the division index at ({p},{t})"));
        let index = match j {
            1..=5 => x2,
            6 | 7 | 8 | 12 => self.v(first_gap().ok_or_else(|| missing("gap"))?),
            10 => self.v(s_once.ok_or_else(|| missing("single part"))?),
            9 => self.v(s_top.expect("p >= 1")) + 2,
            _ => {
                let s = self
                    .chain(p, 2)
                    .into_iter()
                    .find(|&q| !mp.occurs(self.v(q) + 2))
                    .ok_or_else(|| missing("shifted gap"))?;
                self.v(s)
            }
        };
        Ok(Some(SubsetLabel { family: Family::Eq, j, p, t, index, clusters: Vec::new() }))
    }

    fn single(&self, family: Family, p: usize, t: i64, hits: &[u8]) -> Result<u8> {
        match hits {
            [j] => Ok(*j),
            [] => Err(Error::Integrity(format!(
                "{} is in the {family} family at ({p},{t}) but in no subset",
                self.mp.partition()
            ))),
            _ => Err(Error::Integrity(format!(
                "{} is in the {family} family at ({p},{t}) and in subsets {hits:?}",
                self.mp.partition()
            ))),
        }
    }

    /// The unique `(p, t)` with `p + t = m` placing the partition in the strict family.
    pub fn find_pt_lt(&self, m: i64) -> Result<Option<SubsetLabel>> {
        self.find_pt(m, Family::Lt)
    }

    /// The unique `(p, t)` with `p + t = m` placing the partition in the equal family.
    pub fn find_pt_eq(&self, m: i64) -> Result<Option<SubsetLabel>> {
        self.find_pt(m, Family::Eq)
    }

    fn find_pt(&self, m: i64, family: Family) -> Result<Option<SubsetLabel>> {
        let mut found: Option<SubsetLabel> = None;
        for p in 0..=m.max(0) as usize {
            let t = m - p as i64;
            let hit = match family {
                Family::Lt => self.classify_lt(p, t)?,
                Family::Sim => self.classify_sim(p, t)?,
                Family::Eq => self.classify_eq(p, t)?,
            };
            if let Some(label) = hit {
                if let Some(prev) = &found {
                    return Err(Error::Integrity(format!(
                        "{} sits in the {family} family at both ({},{}) and ({p},{t})",
                        self.mp.partition(),
                        prev.p,
                        prev.t
                    )));
                }
                found = Some(label);
            }
        }
        Ok(found)
    }

    /// For `k = r = 3`: the `m` of the equal family holding the partition,
    /// read off from its largest odd part and row 2.
    pub fn find_m_eq33(&self) -> Option<i64> {
        use StartType::*;
        if !self.in_c || self.k != 3 || self.r != 3 {
            return None;
        }
        let t = (self.mp.largest_odd()? - 1) / 2;
        let l = self.above(2 * t + 1);
        let top = self.r2(l);
        if top > 2 * t + 2 || (top == 2 * t + 2 && self.is(l, S2)) {
            Some(l as i64 + t)
        } else if top == 2 * t + 2 && self.is(l, S0) {
            Some(l as i64 + t - 1)
        } else {
            None
        }
    }
}

/// Convenience wrappers marking `mp` afresh.
pub fn classify_lt(mp: &MarkedPartition, k: usize, r: usize, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
    Analysis::new(mp.clone(), k, r)?.classify_lt(p, t)
}

pub fn classify_sim(mp: &MarkedPartition, k: usize, r: usize, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
    Analysis::new(mp.clone(), k, r)?.classify_sim(p, t)
}

pub fn classify_eq(mp: &MarkedPartition, k: usize, r: usize, p: usize, t: i64) -> Result<Option<SubsetLabel>> {
    Analysis::new(mp.clone(), k, r)?.classify_eq(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn an(name: &str) -> Analysis {
        Analysis::new(fixtures::get(name).unwrap(), 4, 3).unwrap()
    }

    #[test]
    fn strict_family_sample() {
        let a = an("pi1");
        let expect = [
            ((6, 5), 6),
            ((5, 7), 6),
            ((4, 9), 5),
            ((4, 10), 12),
            ((3, 12), 12),
            ((2, 14), 7),
            ((2, 15), 8),
            ((1, 17), 8),
            ((0, 19), 1),
        ];
        for ((p, t), j) in expect {
            let got = a.classify_lt(p, t).unwrap().unwrap_or_else(|| panic!("({p},{t})"));
            assert_eq!(got.j, j, "({p},{t})");
        }
        assert_eq!(a.classify_lt(6, 5).unwrap().unwrap().index, 18);
        assert_eq!(a.classify_lt(3, 12).unwrap().unwrap().index, 38);
        for (p, t) in [(6, 6), (5, 8), (3, 11), (2, 13), (1, 16), (0, 18)] {
            assert!(a.classify_lt(p, t).unwrap().is_none(), "({p},{t})");
        }
    }

    #[test]
    fn equal_family_samples() {
        let got = an("pi1").classify_eq(6, 4).unwrap().unwrap();
        assert_eq!((got.j, got.index), (12, 26));
        let got = an("pi2").classify_eq(6, 5).unwrap().unwrap();
        assert_eq!((got.j, got.index), (6, 18));
    }

    #[test]
    fn worked_insertion_inputs() {
        for (name, (p, t), j) in [
            ("m6", (2, 1), 6),
            ("m7", (3, 1), 7),
            ("m8", (3, 2), 8),
            ("m9", (3, 0), 9),
            ("m10", (3, 0), 10),
            ("m11", (5, 0), 11),
            ("m12", (6, 0), 12),
        ] {
            let got = an(name).classify_sim(p, t).unwrap().unwrap_or_else(|| panic!("{name}"));
            assert_eq!(got.j, j, "{name}");
        }
    }

    #[test]
    fn worked_separation_inputs() {
        for (name, (p, t), j, d) in [
            ("omega6", (2, 1), 6, 10),
            ("omega7", (3, 1), 7, 16),
            ("omega8", (3, 2), 8, 16),
            ("omega9", (3, 0), 9, 12),
            ("omega10", (3, 0), 10, 14),
            ("omega11", (5, 0), 11, 20),
            ("omega12", (6, 0), 12, 26),
        ] {
            let got = an(name).classify_eq(p, t).unwrap().unwrap_or_else(|| panic!("{name}"));
            assert_eq!((got.j, got.index), (j, d), "{name}");
        }
    }

    #[test]
    fn empty_partition() {
        let a = Analysis::new(MarkedPartition::mark(&Default::default()), 3, 3).unwrap();
        let got = a.classify_lt(0, 0).unwrap().unwrap();
        assert_eq!((got.j, got.index), (1, 2));
        assert_eq!(a.find_pt_lt(0).unwrap().unwrap().p, 0);
    }
}
