//! Exhaustive drivers that run the maps over every member up to a weight
//! and report the first failure of each kind.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bijection::{dilate, insert_odd, phi_global, phi_pt, psi_global, psi_pt, reduce, separate_odd};
use crate::classify::{Analysis, Family};
use crate::error::Result;
use crate::partition::{MarkedPartition, Partition};
use crate::sets::{enumerate_c, enumerate_pairs};

/// Counts and failures gathered by a sweep.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: Report) -> Report {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// All members of the odd-part family of weight at most `max_weight`.
pub fn members(k: usize, r: usize, max_weight: i64) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for n in 0..=max_weight {
        out.extend(enumerate_c(k, r, n)?);
    }
    Ok(out)
}

/// Every `(p, t)` at which `an` could sit in the strict family with
/// `2p + 2t + 1 <= max_odd`.
pub fn strict_candidates(an: &Analysis, max_odd: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let n2 = an.mp.row_len(2);
    for p in 0..=n2 {
        let mut t = 0;
        while 2 * (p as i64) + 2 * t < max_odd {
            out.push((p, t));
            t += 1;
        }
    }
    out
}

/// Every `(p, t)` at which `an` could sit in the equal family.
pub fn equal_candidates(an: &Analysis) -> Vec<(usize, i64)> {
    match an.mp.largest_odd() {
        Some(o) => (0..=an.mp.row_len(2) + 1).map(|p| (p, (o - 1) / 2)).collect(),
        None => Vec::new(),
    }
}

/// How many members landed in each subset.
pub type Tally = BTreeMap<(Family, u8), usize>;

/// Checks that every member of each family at each `(p, t)` with
/// `2p + 2t + 1 <= max_odd` lands in exactly one subset, and tallies the
/// subsets hit.
pub fn subset_integrity(k: usize, r: usize, max_weight: i64, max_odd: i64) -> Result<(Report, Tally)> {
    let all = members(k, r, max_weight)?;
    let results: Vec<(Report, Vec<(Family, u8)>)> = all
        .par_iter()
        .map(|p| {
            let mut rep = Report::default();
            let mut hits = Vec::new();
            let an = match Analysis::new(MarkedPartition::mark(p), k, r) {
                Ok(an) => an,
                Err(e) => {
                    rep.fail(format!("{p}: {e}"));
                    return (rep, hits);
                }
            };
            for (pp, t) in strict_candidates(&an, max_odd) {
                for fam in [Family::Lt, Family::Sim] {
                    let got = match fam {
                        Family::Lt => an.classify_lt(pp, t),
                        _ => an.classify_sim(pp, t),
                    };
                    rep.checked += 1;
                    match got {
                        Ok(Some(label)) => hits.push((fam, label.j)),
                        Ok(None) => {}
                        Err(e) => rep.fail(format!("{p} ({pp},{t}) {fam}: {e}")),
                    }
                }
            }
            for (pp, t) in equal_candidates(&an) {
                if 2 * (pp as i64 + t) + 1 > max_odd {
                    continue;
                }
                rep.checked += 1;
                match an.classify_eq(pp, t) {
                    Ok(Some(label)) => hits.push((Family::Eq, label.j)),
                    Ok(None) => {}
                    Err(e) => rep.fail(format!("{p} ({pp},{t}) eq: {e}")),
                }
            }
            (rep, hits)
        })
        .collect();
    let mut tally = BTreeMap::new();
    let mut report = Report::default();
    for (rep, hits) in results {
        report = report.merge(rep);
        for h in hits {
            *tally.entry(h).or_insert(0) += 1;
        }
    }
    Ok((report, tally))
}

/// Reduction undoes dilation and separation undoes insertion on every member
/// up to `max_weight` and every `(p, t)` with `2p + 2t + 1 <= max_odd`, with
/// subsets and indexes carried across.
pub fn stage_round_trips(k: usize, r: usize, max_weight: i64, max_odd: i64) -> Result<Report> {
    let all = members(k, r, max_weight)?;
    let report = all
        .par_iter()
        .map(|p| {
            let mut rep = Report::default();
            let an = match Analysis::new(MarkedPartition::mark(p), k, r) {
                Ok(an) => an,
                Err(e) => {
                    rep.fail(format!("{p}: {e}"));
                    return rep;
                }
            };
            for (pp, t) in strict_candidates(&an, max_odd) {
                if let Err(msg) = check_dilation(&an, pp, t) {
                    rep.fail(format!("{p} ({pp},{t}) dilation: {msg}"));
                }
                if let Err(msg) = check_insertion(&an, pp, t) {
                    rep.fail(format!("{p} ({pp},{t}) insertion: {msg}"));
                }
                rep.checked += 1;
            }
            for (pp, t) in equal_candidates(&an) {
                if 2 * (pp as i64 + t) + 1 > max_odd {
                    continue;
                }
                if let Err(msg) = check_separation(&an, pp, t) {
                    rep.fail(format!("{p} ({pp},{t}) separation: {msg}"));
                }
                rep.checked += 1;
            }
            rep
        })
        .reduce(Report::default, Report::merge);
    Ok(report)
}

fn check_dilation(an: &Analysis, p: usize, t: i64) -> std::result::Result<(), String> {
    let s = |e: crate::Error| e.to_string();
    let Some(lt) = an.classify_lt(p, t).map_err(s)? else {
        return Ok(());
    };
    let mu = dilate(an, p, t).map_err(s)?;
    let l = mu.receipts[0].l as i64;
    if mu.result.weight() != an.mp.weight() + 2 * l || mu.result.len() != an.mp.len() {
        return Err(format!("size ledger broken: {}", mu.result.partition()));
    }
    let man = Analysis::new(mu.result.clone(), an.k, an.r).map_err(s)?;
    let sim = man
        .classify_sim(p, t)
        .map_err(s)?
        .ok_or_else(|| format!("{} not in the image family", mu.result.partition()))?;
    if sim.j != lt.j || sim.index != lt.index {
        return Err(format!("subset {}/{} became {}/{}", lt.j, lt.index, sim.j, sim.index));
    }
    let back = reduce(&man, p, t).map_err(s)?;
    if back.result != an.mp {
        return Err(format!("reduced to {}", back.result.partition()));
    }
    Ok(())
}

fn check_insertion(an: &Analysis, p: usize, t: i64) -> std::result::Result<(), String> {
    let s = |e: crate::Error| e.to_string();
    let Some(sim) = an.classify_sim(p, t).map_err(s)? else {
        return Ok(());
    };
    let om = insert_odd(an, p, t).map_err(s)?;
    let l = an.above(sim.index) as i64;
    if om.result.weight() != an.mp.weight() + 2 * (p as i64 - l) + 2 * t + 1 || om.result.len() != an.mp.len() + 1 {
        return Err(format!("size ledger broken: {}", om.result.partition()));
    }
    let oan = Analysis::new(om.result.clone(), an.k, an.r).map_err(s)?;
    let eq = oan
        .classify_eq(p, t)
        .map_err(s)?
        .ok_or_else(|| format!("{} not in the equal family", om.result.partition()))?;
    if eq.j != sim.j || eq.index != sim.index {
        return Err(format!("subset {}/{} became {}/{}", sim.j, sim.index, eq.j, eq.index));
    }
    let back = separate_odd(&oan, p, t).map_err(s)?;
    if back.result != an.mp {
        return Err(format!("separated to {}", back.result.partition()));
    }
    Ok(())
}

fn check_separation(an: &Analysis, p: usize, t: i64) -> std::result::Result<(), String> {
    let s = |e: crate::Error| e.to_string();
    let Some(eq) = an.classify_eq(p, t).map_err(s)? else {
        return Ok(());
    };
    let mu = separate_odd(an, p, t).map_err(s)?;
    let man = Analysis::new(mu.result.clone(), an.k, an.r).map_err(s)?;
    let sim = man
        .classify_sim(p, t)
        .map_err(s)?
        .ok_or_else(|| format!("{} not in the image family", mu.result.partition()))?;
    if sim.j != eq.j || sim.index != eq.index {
        return Err(format!("subset {}/{} became {}/{}", eq.j, eq.index, sim.j, sim.index));
    }
    let pi = reduce(&man, p, t).map_err(s)?;
    let pan = Analysis::new(pi.result.clone(), an.k, an.r).map_err(s)?;
    if pan.classify_lt(p, t).map_err(s)?.is_none() {
        return Err(format!("{} not in the strict family", pi.result.partition()));
    }
    let back = phi_pt(&pan, p, t).map_err(s)?;
    if back.result != an.mp {
        return Err(format!("came back as {}", back.result.partition()));
    }
    Ok(())
}

/// For each `(p, t)` with `2p + 2t + 1 <= max_odd`, maps every strict member
/// of weight `n` with `n + 2p + 2t + 1 <= max_target` and compares the images
/// with the equal-family members of the target weight.
pub fn pt_bijection(k: usize, r: usize, max_odd: i64, max_target: i64) -> Result<Report> {
    let all = members(k, r, max_target)?;
    type Key = (usize, i64);
    type Found = (Report, Vec<(Key, Partition, Partition)>, Vec<(Key, Partition)>);
    let per: Vec<Found> = all
        .par_iter()
        .map(|p| {
            let mut rep = Report::default();
            let mut images = Vec::new();
            let mut targets = Vec::new();
            let an = match Analysis::new(MarkedPartition::mark(p), k, r) {
                Ok(an) => an,
                Err(e) => {
                    rep.fail(format!("{p}: {e}"));
                    return (rep, images, targets);
                }
            };
            let w = p.weight();
            for (pp, t) in strict_candidates(&an, max_odd) {
                let add = 2 * (pp as i64 + t) + 1;
                if w + add > max_target {
                    continue;
                }
                match an.classify_lt(pp, t) {
                    Ok(Some(_)) => {}
                    Ok(None) => continue,
                    Err(e) => {
                        rep.fail(format!("{p} ({pp},{t}): {e}"));
                        continue;
                    }
                }
                rep.checked += 1;
                match phi_pt(&an, pp, t) {
                    Ok(out) => {
                        let img = out.result;
                        if img.weight() != w + add || img.len() != p.len() + 1 {
                            rep.fail(format!("{p} ({pp},{t}): size ledger broken"));
                        }
                        let ian = Analysis::new(img.clone(), k, r);
                        match ian.as_ref().map(|a| a.classify_eq(pp, t)) {
                            Ok(Ok(Some(_))) => {}
                            _ => {
                                rep.fail(format!("{p} ({pp},{t}): image {} outside the equal family", img.partition()))
                            }
                        }
                        if let Ok(ian) = ian {
                            match psi_pt(&ian, pp, t) {
                                Ok(back) if back.result.partition() == p => {}
                                Ok(back) => {
                                    rep.fail(format!("{p} ({pp},{t}): came back as {}", back.result.partition()))
                                }
                                Err(e) => rep.fail(format!("{p} ({pp},{t}) back: {e}")),
                            }
                        }
                        images.push(((pp, t), p.clone(), img.partition().clone()));
                    }
                    Err(e) => rep.fail(format!("{p} ({pp},{t}): {e}")),
                }
            }
            for (pp, t) in equal_candidates(&an) {
                if 2 * (pp as i64 + t) + 1 > max_odd {
                    continue;
                }
                match an.classify_eq(pp, t) {
                    Ok(Some(_)) => targets.push(((pp, t), p.clone())),
                    Ok(None) => {}
                    Err(e) => rep.fail(format!("{p} ({pp},{t}) eq: {e}")),
                }
            }
            (rep, images, targets)
        })
        .collect();
    let mut report = Report::default();
    let mut seen: HashSet<(Key, Partition)> = HashSet::new();
    let mut target_set: HashSet<(Key, Partition)> = HashSet::new();
    for (_, _, targets) in &per {
        for t in targets {
            target_set.insert(t.clone());
        }
    }
    let mut image_count = 0;
    for (rep, images, _) in per {
        report = report.merge(rep);
        for (key, src, img) in images {
            image_count += 1;
            if !seen.insert((key, img.clone())) {
                report.fail(format!("{src} at {key:?}: image {img} hit twice"));
            }
            if !target_set.contains(&(key, img.clone())) {
                report.fail(format!("{src} at {key:?}: image {img} is not an enumerated target"));
            }
        }
    }
    if image_count != target_set.len() {
        report.fail(format!("{image_count} images against {} targets", target_set.len()));
    }
    Ok(report)
}

/// The composite map is a bijection from pairs of weight `n` onto members of
/// weight `n` with `k = r = 3`, for every `n <= max_weight`.
pub fn global_bijection(max_weight: i64) -> Result<Report> {
    let (k, r) = (3, 3);
    let mut report = Report::default();
    for n in 0..=max_weight {
        let src = enumerate_pairs(k, r, n)?;
        let targets: HashSet<Partition> = enumerate_c(k, r, n)?.into_iter().collect();
        let outs: Vec<std::result::Result<Partition, String>> = src
            .par_iter()
            .map(|(pi, zeta)| {
                let out = phi_global(pi, zeta).map_err(|e| format!("{pi} {zeta}: {e}"))?;
                let img = out.result;
                if img.len() != pi.len() + zeta.len() {
                    return Err(format!("{pi} {zeta}: length ledger broken"));
                }
                let (a, b, _) = psi_global(&img).map_err(|e| format!("{pi} {zeta} back: {e}"))?;
                if &a != pi || &b != zeta {
                    return Err(format!("{pi} {zeta}: came back as {a} {b}"));
                }
                Ok(img.partition().clone())
            })
            .collect();
        let mut seen = HashSet::new();
        for o in outs {
            report.checked += 1;
            match o {
                Ok(img) => {
                    if !targets.contains(&img) {
                        report.fail(format!("n={n}: image {img} is not a member"));
                    }
                    if !seen.insert(img.clone()) {
                        report.fail(format!("n={n}: image {img} hit twice"));
                    }
                }
                Err(e) => report.fail(e),
            }
        }
        let back: Vec<Option<String>> = targets
            .par_iter()
            .map(|w| {
                let mp = MarkedPartition::mark(w);
                let (pi, zeta, _) = match psi_global(&mp) {
                    Ok(x) => x,
                    Err(e) => return Some(format!("{w}: {e}")),
                };
                match phi_global(&pi, &zeta) {
                    Ok(out) if out.result == mp => None,
                    Ok(out) => Some(format!("{w}: split as {pi} {zeta}, rebuilt as {}", out.result.partition())),
                    Err(e) => Some(format!("{w}: split as {pi} {zeta}: {e}")),
                }
            })
            .collect();
        for msg in back.into_iter().flatten() {
            report.fail(msg);
        }
        report.checked += targets.len();
        if seen.len() != targets.len() {
            report.fail(format!("n={n}: {} images against {} members", seen.len(), targets.len()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_are_clean() {
        assert!(stage_round_trips(4, 3, 12, 25).unwrap().ok());
        assert!(pt_bijection(4, 4, 13, 14).unwrap().ok());
        let g = global_bijection(10).unwrap();
        assert!(g.ok(), "{:?}", g.failures);
        assert!(g.checked > 0);
    }

    #[test]
    fn integrity_tally_sees_the_common_subsets() {
        let (rep, tally) = subset_integrity(3, 3, 12, 25).unwrap();
        assert!(rep.ok());
        assert!(tally.contains_key(&(Family::Lt, 1)));
        assert!(tally.contains_key(&(Family::Eq, 1)));
    }

    #[test]
    fn candidates_respect_the_bound() {
        let an = Analysis::new(MarkedPartition::mark(&Partition::new(vec![6, 4, 2]).unwrap()), 3, 3).unwrap();
        let c = strict_candidates(&an, 7);
        assert!(c.iter().all(|&(p, t)| 2 * (p as i64 + t) < 7));
        assert!(c.contains(&(0, 3)));
    }
}
