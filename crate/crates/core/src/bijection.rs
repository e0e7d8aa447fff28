//! Dilation and reduction of row 2, insertion and separation of the odd
//! part `2t+1`, and the maps composed from them.
//!
//! Every step names the parts it moves by value and mark in the current
//! marking, applies all moves at once and re-marks. A named part that is not
//! there aborts the map with the trace so far attached.

use serde::Serialize;

use crate::classify::{Analysis, SubsetLabel};
use crate::error::{Error, Result};
use crate::partition::{MarkedPartition, Partition, Surgery};
use crate::types::{insertion_types, Grouping, InsertionType, ReductionType};

/// One recorded intermediate partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub label: String,
    #[serde(serialize_with = "ser_grid")]
    pub grid: MarkedPartition,
}

fn ser_grid<S: serde::Serializer>(mp: &MarkedPartition, s: S) -> std::result::Result<S::Ok, S::Error> {
    mp.to_json().serialize(s)
}

/// The intermediate partitions of a map, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    fn push(&mut self, label: impl Into<String>, grid: &MarkedPartition) {
        self.steps.push(TraceStep { label: label.into(), grid: grid.clone() });
    }

    fn extend(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }
}

/// What a map did: sizes before and after and the data that drove it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Receipt {
    pub op: &'static str,
    pub p: usize,
    pub t: i64,
    pub j: u8,
    pub l: usize,
    pub index: i64,
    pub weight_in: i64,
    pub weight_out: i64,
    pub len_in: usize,
    pub len_out: usize,
}

/// Output of a map together with how it got there.
#[derive(Debug, Clone)]
pub struct Mapped {
    pub result: MarkedPartition,
    pub trace: Trace,
    pub receipts: Vec<Receipt>,
}

fn receipt(op: &'static str, label: &SubsetLabel, l: usize, from: &MarkedPartition, to: &MarkedPartition) -> Receipt {
    Receipt {
        op,
        p: label.p,
        t: label.t,
        j: label.j,
        l,
        index: label.index,
        weight_in: from.weight(),
        weight_out: to.weight(),
        len_in: from.len(),
        len_out: to.len(),
    }
}

fn remove(value: i64, mark: usize) -> Surgery {
    Surgery::Remove { value, mark }
}

fn add(value: i64) -> Surgery {
    Surgery::Add { value, overlined: false }
}

fn add_over(value: i64, overlined: bool) -> Surgery {
    Surgery::Add { value, overlined }
}

fn not_member(what: &str, mp: &MarkedPartition, p: usize, t: i64) -> Error {
    Error::NotMember(format!("{} is not in the {what} family at ({p},{t})", mp.partition()))
}

/// Mark of the moving odd part `v` (overlined or not) in `mp`.
fn mark_of_moving(mp: &MarkedPartition, v: i64, over: bool) -> Result<usize> {
    mp.entries()
        .iter()
        .filter(|e| e.value == v && e.overlined == over)
        .map(|e| e.mark)
        .max()
        .ok_or(Error::TargetMissing { value: v, mark: 0 })
}

/// Where the moving odd part sits between steps: it is `2t+1`, marked `r`.
#[derive(Debug, Clone, Copy)]
struct Moving {
    t2: i64,
    r: usize,
    over: bool,
}

fn basic_dilation(cur: &MarkedPartition, v: i64, kind: InsertionType) -> Result<(Vec<Surgery>, i64, bool)> {
    use InsertionType::*;
    let missing = |value: i64, mark: usize| Error::TargetMissing { value, mark };
    Ok(match kind {
        A1 => {
            let r = cur.largest_mark(v).ok_or(missing(v, 0))?;
            (vec![remove(v, r), add(v + 1)], v, false)
        }
        A2 => (vec![remove(v - 2, 1), add(v - 1)], v - 2, false),
        A3 => (vec![remove(v, 2), add_over(v + 1, true)], v, true),
        B => {
            let r = cur.largest_mark(v).ok_or(missing(v, 0))?;
            (vec![remove(v, r), add_over(v + 1, true)], v, true)
        }
        C => (vec![remove(v, 2), add(v + 1)], v, false),
    })
}

/// Raises the row-2 parts above the insertion index by 2 each.
pub fn dilate(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    let label = an.classify_lt(p, t)?.ok_or_else(|| not_member("strict", &an.mp, p, t))?;
    let l = an.above(label.index);
    let mut trace = Trace::default();
    let run = |trace: &mut Trace| -> Result<MarkedPartition> {
        let pi = &an.mp;
        if l == 0 {
            return Ok(pi.clone());
        }
        let prof = an.profile().expect("members are typed");
        let groups: Grouping<InsertionType> = insertion_types(pi, prof, l)?;
        let v = |b: usize| pi.r2(b).finite().expect("inside row 2");
        let kind = |b: usize| groups.kind(b).expect("grouped");

        let (ops, t2, over) = basic_dilation(pi, v(l), kind(l))?;
        let mut cur = pi.apply(&ops)?;
        let mut mv = Moving { t2, r: mark_of_moving(&cur, t2 + 1, over)?, over };
        trace.push(format!("step {l}"), &cur);

        for b in (2..=l).rev() {
            let lift = [remove(mv.t2 + 1, mv.r), add(mv.t2 + 2)];
            let next = if groups.same_group(b, b - 1) {
                let target = mv.t2 + 4;
                let r = (1..=mv.r)
                    .rev()
                    .find(|&r| cur.has(target, r))
                    .ok_or(Error::TargetMissing { value: target, mark: mv.r })?;
                let mut ops = lift.to_vec();
                ops.extend([remove(target, r), add_over(target + 1, mv.over)]);
                (ops, target, mv.over)
            } else {
                let (more, t2, over) = basic_dilation(&cur, v(b - 1), kind(b - 1))?;
                let mut ops = lift.to_vec();
                ops.extend(more);
                (ops, t2, over)
            };
            let (ops, t2, over) = next;
            cur = cur.apply(&ops)?;
            mv = Moving { t2, r: mark_of_moving(&cur, t2 + 1, over)?, over };
            trace.push(format!("step {}", b - 1), &cur);
        }
        cur = cur.apply(&[remove(mv.t2 + 1, mv.r), add(mv.t2 + 2)])?;
        Ok(cur)
    };
    let out = run(&mut trace).map_err(|e| e.with_trace(trace.clone()))?;
    trace.push("dilated", &out);
    let rc = receipt("dilate", &label, l, &an.mp, &out);
    Ok(Mapped { result: out, trace, receipts: vec![rc] })
}

fn basic_reduction(cur: &MarkedPartition, v: i64, kind: ReductionType) -> Result<(Vec<Surgery>, i64, bool)> {
    use ReductionType::*;
    Ok(match kind {
        A1 => {
            let r = cur.smallest_mark(v + 2).ok_or(Error::TargetMissing { value: v + 2, mark: 0 })?;
            (vec![remove(v + 2, r), add(v + 1)], v, false)
        }
        A2 => (vec![remove(v, 1), add(v - 1)], v - 2, false),
        A3 => (vec![remove(v, 2), add_over(v - 1, true)], v - 2, true),
        B => {
            let r = cur
                .marks_of(v + 2)
                .into_iter()
                .find(|&m| m != 1)
                .ok_or(Error::TargetMissing { value: v + 2, mark: 0 })?;
            (vec![remove(v + 2, r), add_over(v + 1, true)], v, true)
        }
        C => (vec![remove(v, 2), add(v - 1)], v - 2, false),
    })
}

/// Lowers the row-2 parts above the insertion index by 2 each; inverse of [`dilate`].
pub fn reduce(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    let label = an.classify_sim(p, t)?.ok_or_else(|| not_member("image", &an.mp, p, t))?;
    let l = an.above(label.index);
    let mut trace = Trace::default();
    let run = |trace: &mut Trace| -> Result<MarkedPartition> {
        let mu = &an.mp;
        if l == 0 {
            return Ok(mu.clone());
        }
        let groups = an.reduction_grouping(l)?;
        let v = |b: usize| mu.r2(b).finite().expect("inside row 2");
        let kind = |b: usize| groups.kind(b).expect("grouped");

        let (ops, t2, over) = basic_reduction(mu, v(1), kind(1))?;
        let mut cur = mu.apply(&ops)?;
        let mut mv = Moving { t2, r: mark_of_moving(&cur, t2 + 1, over)?, over };
        trace.push("step 1", &cur);
        for b in 1..l {
            let (more, t2, over) = basic_reduction(&cur, v(b + 1), kind(b + 1))?;
            let mut ops = vec![remove(mv.t2 + 1, mv.r), add(mv.t2)];
            ops.extend(more);
            cur = cur.apply(&ops)?;
            mv = Moving { t2, r: mark_of_moving(&cur, t2 + 1, over)?, over };
            trace.push(format!("step {}", b + 1), &cur);
        }
        cur = cur.apply(&[remove(mv.t2 + 1, mv.r), add(mv.t2)])?;
        Ok(cur)
    };
    let out = run(&mut trace).map_err(|e| e.with_trace(trace.clone()))?;
    trace.push("reduced", &out);
    let rc = receipt("reduce", &label, l, &an.mp, &out);
    Ok(Mapped { result: out, trace, receipts: vec![rc] })
}

/// Raise the `r_i`-marked copies of `values[i]` by 2, where `r` starts at the
/// largest mark of the last value and never increases going up row 2.
fn descending_marks(nu: &MarkedPartition, values: &[i64]) -> Result<Vec<Surgery>> {
    let mut ops = Vec::new();
    let mut r = usize::MAX;
    for &v in values.iter().rev() {
        let m = nu
            .marks_of(v)
            .into_iter()
            .filter(|&m| m <= r)
            .max()
            .ok_or(Error::TargetMissing { value: v, mark: r.min(99) })?;
        r = m;
        ops.push(remove(v, m));
        ops.push(add(v + 2));
    }
    Ok(ops)
}

/// Adds the odd part `2t+1`, shifting row-2 parts as its subset requires.
pub fn insert_odd(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    let label = an.classify_sim(p, t)?.ok_or_else(|| not_member("image", &an.mp, p, t))?;
    let mu = &an.mp;
    let odd = 2 * t + 1;
    let v = |b: usize| mu.r2(b).finite().expect("inside row 2");
    let cl = &label.clusters;
    let mut trace = Trace::default();
    let shift_ones = |lo: usize, hi: usize, from: i64, to: i64| -> Vec<Surgery> {
        (lo..=hi).flat_map(|i| [remove(v(i) + from, 1), add(v(i) + to)]).collect()
    };
    let run = |trace: &mut Trace| -> Result<MarkedPartition> {
        Ok(match label.j {
            1..=5 => mu.apply(&[add(odd)])?,
            6 => {
                let mut ops = vec![add(odd)];
                ops.extend(shift_ones(cl[0], p, -2, 0));
                mu.apply(&ops)?
            }
            7 => {
                let nu = mu.apply(&[add(odd)])?;
                trace.push("added", &nu);
                let vals: Vec<i64> = (cl[0]..=p).map(v).collect();
                nu.apply(&descending_marks(&nu, &vals)?)?
            }
            8 => {
                let mut ops = vec![add(odd)];
                ops.extend((cl[0]..=p).flat_map(|i| [remove(v(i), 2), add(v(i) + 2)]));
                mu.apply(&ops)?
            }
            9 | 10 => {
                let mut ops = vec![add(odd)];
                ops.extend(shift_ones(cl[0], p, 0, 2));
                mu.apply(&ops)?
            }
            11 => {
                let mut ops = vec![add(odd)];
                ops.extend(shift_ones(cl[0], p, 0, 2));
                ops.extend(shift_ones(cl[1], cl[0] - 1, -2, 0));
                mu.apply(&ops)?
            }
            _ => {
                let mut ops = vec![add(odd)];
                ops.extend(shift_ones(cl[0], p, 0, 2));
                let nu = mu.apply(&ops)?;
                trace.push("added", &nu);
                let vals: Vec<i64> = (cl[1]..cl[0]).map(v).collect();
                nu.apply(&descending_marks(&nu, &vals)?)?
            }
        })
    };
    let out = run(&mut trace).map_err(|e| e.with_trace(trace.clone()))?;
    trace.push("inserted", &out);
    let l = an.above(label.index);
    let rc = receipt("insert", &label, l, mu, &out);
    Ok(Mapped { result: out, trace, receipts: vec![rc] })
}

/// Lower copies of each value by 2, choosing the smallest mark other than 2.
fn lower_off_two(om: &MarkedPartition, values: &[i64]) -> Result<Vec<Surgery>> {
    let mut ops = Vec::new();
    for &v in values {
        let m = om.marks_of(v).into_iter().find(|&m| m != 2).ok_or(Error::TargetMissing { value: v, mark: 0 })?;
        ops.push(remove(v, m));
        ops.push(add(v - 2));
    }
    Ok(ops)
}

/// Removes the odd part `2t+1`, shifting row-2 parts back; inverse of [`insert_odd`].
pub fn separate_odd(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    let label = an.classify_eq(p, t)?.ok_or_else(|| not_member("equal", &an.mp, p, t))?;
    let om = &an.mp;
    let odd = 2 * t + 1;
    let odd_mark = om.smallest_mark(odd).expect("members hold 2t+1");
    let take = remove(odd, odd_mark);
    let v = |b: usize| om.r2(b).finite().expect("inside row 2");
    let l = an.above(label.index);
    let chain_top = |once: bool| {
        let base = v(p);
        (1..=p)
            .find(|&s| om.r2(s) == base + 4 * (p - s) as i64 && (!once || om.count(v(s)) == 1))
            .expect("p itself is on the chain")
    };
    let shift_ones = |lo: usize, hi: usize, from: i64, to: i64| -> Vec<Surgery> {
        (lo..=hi).flat_map(|i| [remove(v(i) + from, 1), add(v(i) + to)]).collect()
    };
    let mut trace = Trace::default();
    let run = |trace: &mut Trace| -> Result<MarkedPartition> {
        Ok(match label.j {
            1..=5 => om.apply(&[take])?,
            6 => {
                let mut ops = vec![take];
                ops.extend(shift_ones(l + 1, p, 0, -2));
                om.apply(&ops)?
            }
            7 => {
                let vals: Vec<i64> = (l + 1..=p).map(v).collect();
                let nu = om.apply(&lower_off_two(om, &vals)?)?;
                trace.push("lowered", &nu);
                let m = nu.smallest_mark(odd).ok_or(Error::TargetMissing { value: odd, mark: 0 })?;
                nu.apply(&[remove(odd, m)])?
            }
            8 => {
                let mut ops = vec![take];
                ops.extend((l + 1..=p).flat_map(|i| [remove(v(i), 2), add(v(i) - 2)]));
                om.apply(&ops)?
            }
            9 => {
                let mut ops = vec![take];
                ops.extend(shift_ones(l + 1, p, 2, 0));
                om.apply(&ops)?
            }
            10 => {
                let mut ops = vec![take];
                ops.extend(shift_ones(l + 2, p + 1, 2, 0));
                om.apply(&ops)?
            }
            11 => {
                let s = chain_top(false);
                let mut ops = vec![take];
                ops.extend(shift_ones(s, p, 2, 0));
                if s > l + 1 {
                    ops.extend(shift_ones(l + 1, s - 1, 0, -2));
                }
                om.apply(&ops)?
            }
            _ => {
                let s = chain_top(true);
                let vals: Vec<i64> = (l + 1..s).map(v).collect();
                let nu = om.apply(&lower_off_two(om, &vals)?)?;
                trace.push("lowered", &nu);
                let m = nu.smallest_mark(odd).ok_or(Error::TargetMissing { value: odd, mark: 0 })?;
                let mut ops = vec![remove(odd, m)];
                ops.extend(shift_ones(s + 1, p + 1, 2, 0));
                nu.apply(&ops)?
            }
        })
    };
    let out = run(&mut trace).map_err(|e| e.with_trace(trace.clone()))?;
    trace.push("separated", &out);
    let rc = receipt("separate", &label, l, om, &out);
    Ok(Mapped { result: out, trace, receipts: vec![rc] })
}

fn chain(
    first: Mapped,
    k: usize,
    r: usize,
    p: usize,
    t: i64,
    second: fn(&Analysis, usize, i64) -> Result<Mapped>,
) -> Result<Mapped> {
    let an = Analysis::new(first.result, k, r)?;
    let mut trace = first.trace;
    let next = second(&an, p, t).map_err(|e| e.with_trace(trace.clone()))?;
    trace.extend(next.trace);
    let mut receipts = first.receipts;
    receipts.extend(next.receipts);
    Ok(Mapped { result: next.result, trace, receipts })
}

/// Dilate, then insert `2t+1`.
pub fn phi_pt(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    chain(dilate(an, p, t)?, an.k, an.r, p, t, insert_odd)
}

/// Separate `2t+1`, then reduce.
pub fn psi_pt(an: &Analysis, p: usize, t: i64) -> Result<Mapped> {
    chain(separate_odd(an, p, t)?, an.k, an.r, p, t, reduce)
}

/// [`phi_pt`] at the unique `(p, t)` with `p + t = m`.
pub fn phi_m(an: &Analysis, m: i64) -> Result<Mapped> {
    let label = an
        .find_pt_lt(m)?
        .ok_or_else(|| Error::NotMember(format!("{} has no strict-family split of {m}", an.mp.partition())))?;
    phi_pt(an, label.p, label.t)
}

/// [`psi_pt`] at the unique `(p, t)` with `p + t = m`.
pub fn psi_m(an: &Analysis, m: i64) -> Result<Mapped> {
    let label = an
        .find_pt_eq(m)?
        .ok_or_else(|| Error::NotMember(format!("{} has no equal-family split of {m}", an.mp.partition())))?;
    psi_pt(an, label.p, label.t)
}

/// The `m` of the equal family holding a member with odd parts.
///
/// Uses the direct reading for `k = r = 3` and otherwise scans row 2 with
/// `t` fixed by the largest odd part.
pub fn find_m_eq(an: &Analysis) -> Result<Option<i64>> {
    if an.k == 3 && an.r == 3 {
        return Ok(an.find_m_eq33());
    }
    let Some(o) = an.mp.largest_odd() else {
        return Ok(None);
    };
    let t = (o - 1) / 2;
    for p in 0..=an.mp.row_len(2) + 1 {
        if an.classify_eq(p, t)?.is_some() {
            return Ok(Some(p as i64 + t));
        }
    }
    Ok(None)
}

/// Inserts the odd parts of `zeta` into the even-part member `pi` one at a
/// time, smallest first. Only `k = r = 3` is covered: for larger `k` the odd
/// parts of a member need not be distinct.
pub fn phi_global(pi: &Partition, zeta: &Partition) -> Result<Mapped> {
    let (k, r) = (3, 3);
    let mut ms: Vec<i64> = zeta.parts().iter().map(|z| (z - 1) / 2).collect();
    if zeta.parts().iter().any(|z| z % 2 == 0) || ms.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPartition(format!("{zeta} is not a set of distinct odd parts")));
    }
    ms.sort_unstable();
    let mut cur = MarkedPartition::mark(pi);
    let mut trace = Trace::default();
    let mut receipts = Vec::new();
    for m in ms {
        let an = Analysis::new(cur, k, r)?;
        let step = phi_m(&an, m).map_err(|e| e.with_trace(trace.clone()))?;
        trace.push(format!("m={m}"), &step.result);
        receipts.extend(step.receipts);
        cur = step.result;
    }
    Ok(Mapped { result: cur, trace, receipts })
}

/// Strips the odd parts one at a time, largest `m` first; inverse of [`phi_global`].
pub fn psi_global(mp: &MarkedPartition) -> Result<(Partition, Partition, Trace)> {
    let (k, r) = (3, 3);
    let mut cur = mp.clone();
    let mut zeta = Vec::new();
    let mut trace = Trace::default();
    let guard = mp.parts().iter().filter(|v| *v % 2 == 1).count();
    while cur.largest_odd().is_some() {
        if zeta.len() >= guard {
            return Err(Error::Integrity("odd parts did not run out".into()).with_trace(trace));
        }
        let an = Analysis::new(cur, k, r)?;
        let m = find_m_eq(&an)?.ok_or_else(|| {
            Error::NotMember(format!("{} is in no equal family", an.mp.partition())).with_trace(trace.clone())
        })?;
        let step = psi_m(&an, m).map_err(|e| e.with_trace(trace.clone()))?;
        zeta.push(2 * m + 1);
        trace.push(format!("m={m}"), &step.result);
        cur = step.result;
    }
    Ok((cur.partition().clone(), Partition::from_unsorted(zeta)?, trace))
}
