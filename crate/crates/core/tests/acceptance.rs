//! One line per acceptance criterion. Runs without the libtest harness so
//! the report reads top to bottom; exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ggbij::bijection::{dilate, insert_odd, phi_m, psi_m, reduce, separate_odd};
use ggbij::qseries::{cell_series, companion_bivariate, multisum, product_side};
use ggbij::sets::{count_b, enumerate_c, enumerate_e, enumerate_e_cell};
use ggbij::sweep::{self, equal_candidates, members, strict_candidates};
use ggbij::types::{cluster_indexes, insertion_types, InsertionType, StartType};
use ggbij::{fixtures, Analysis, BressoudParams, Ext, MarkedPartition, Partition};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PAIRS: [(usize, usize); 3] = [(3, 3), (4, 3), (4, 4)];

fn params() -> Vec<BressoudParams> {
    vec![
        BressoudParams::new(vec![1], 2, 3, 3).unwrap(),
        BressoudParams::new(vec![1], 2, 4, 3).unwrap(),
        BressoudParams::new(vec![1, 2], 3, 3, 3).unwrap(),
    ]
}

fn show(p: &BressoudParams) -> String {
    format!("alphas={:?} eta={} k={} r={}", p.alphas, p.eta, p.k, p.r)
}

fn companion() -> Outcome {
    let qmax = 36;
    let bi = companion_bivariate(qmax).map_err(|e| e.to_string())?;
    let mut total = 0;
    for n in 0..=qmax {
        let mut by_len: BTreeMap<usize, usize> = BTreeMap::new();
        for p in enumerate_c(3, 3, n as i64).unwrap() {
            *by_len.entry(p.len()).or_default() += 1;
        }
        for l in 0..=n.max(bi.degree(n)) {
            let want = by_len.get(&l).copied().unwrap_or(0);
            let got = bi.coeff(n, l);
            if got != want.into() {
                return Err(format!("x^{l} q^{n}: series {got}, enumeration {want}"));
            }
            total += want;
        }
    }
    let x1 = bi.at_x_one();
    let prod = product_side(&params()[0], qmax).map_err(|e| e.to_string())?;
    if let Some(n) = x1.first_mismatch(&prod) {
        return Err(format!("x=1 differs from the product at q^{n}"));
    }
    Ok(format!("{total} partitions, n <= {qmax}"))
}

fn product() -> Outcome {
    let mut notes = Vec::new();
    for p in params() {
        let s = product_side(&p, 36).map_err(|e| e.to_string())?;
        let counts = count_b(&p, 36);
        for (n, &c) in counts.iter().enumerate() {
            if *s.coeff(n) != c.into() {
                return Err(format!("{}: q^{n} product {} enumeration {c}", show(&p), s.coeff(n)));
            }
        }
        notes.push(format!("{}", counts.iter().sum::<usize>()));
    }
    Ok(format!("n <= 36, member totals {}", notes.join("/")))
}

fn sum_product() -> Outcome {
    let mut all = params();
    all.push(BressoudParams::new(vec![1], 2, 4, 4).unwrap());
    for p in &all {
        let a = multisum(p, 40).map_err(|e| e.to_string())?;
        let b = product_side(p, 40).map_err(|e| e.to_string())?;
        if let Some(n) = a.first_mismatch(&b) {
            return Err(format!("{}: q^{n} sum {} product {}", show(p), a.coeff(n), b.coeff(n)));
        }
    }
    Ok(format!("{} parameter sets to q^40", all.len()))
}

fn row_tuples(len: usize, top: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=top {
        for mut rest in row_tuples(len - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn cells() -> Outcome {
    let qmax = 40;
    let mut cells = 0;
    for k in 3..=4 {
        for r in 3..=k {
            let mut sum = ggbij::qseries::Bivariate::zero(qmax);
            for rows in row_tuples(k - 1, 4) {
                let bi = cell_series(&rows, r, qmax).map_err(|e| e.to_string())?;
                let per_n: Vec<Vec<Partition>> =
                    (0..=qmax as i64).into_par_iter().map(|n| enumerate_e_cell(&rows, r, n).unwrap()).collect();
                for (n, found) in per_n.iter().enumerate() {
                    for p in found {
                        if MarkedPartition::mark(p).row_len(1) != rows[0] {
                            return Err(format!("{p} enumerated in the wrong cell {rows:?}"));
                        }
                    }
                    let l: usize = rows.iter().sum();
                    let want = found.len();
                    if found.iter().any(|p| p.len() != l) || bi.coeff(n, l) != want.into() {
                        return Err(format!(
                            "k={k} r={r} rows {rows:?}: q^{n} cell {} enumeration {want}",
                            bi.coeff(n, l)
                        ));
                    }
                }
                sum.add_assign(&bi);
                cells += 1;
            }
            // cells with a first row above 4 start beyond q^40
            for n in 0..=qmax {
                let want = enumerate_e(k, r, n as i64).unwrap().len();
                if *sum.at_x_one().coeff(n) != want.into() {
                    return Err(format!(
                        "k={k} r={r}: cells summed give {} at q^{n}, family has {want}",
                        sum.at_x_one().coeff(n)
                    ));
                }
            }
        }
    }
    Ok(format!("{cells} cells to q^{qmax}, sums match the even-part families"))
}

fn report(r: ggbij::Result<sweep::Report>, what: &str, notes: &mut Vec<String>) -> Result<(), String> {
    let r = r.map_err(|e| e.to_string())?;
    if !r.ok() {
        return Err(format!("{what}: {}", r.failures.join("; ")));
    }
    notes.push(format!("{what} {}", r.checked));
    Ok(())
}

fn pt_bijection() -> Outcome {
    let mut notes = Vec::new();
    for (k, r) in PAIRS {
        report(sweep::pt_bijection(k, r, 29, 30), &format!("({k},{r})"), &mut notes)?;
    }
    Ok(format!("maps checked: {}", notes.join(", ")))
}

fn stages() -> Outcome {
    let mut notes = Vec::new();
    for (k, r) in PAIRS {
        report(sweep::stage_round_trips(k, r, 30, 29), &format!("({k},{r})"), &mut notes)?;
    }
    Ok(format!("(member, p, t) checked: {}", notes.join(", ")))
}

fn integrity() -> Outcome {
    let mut notes = Vec::new();
    for (k, r) in PAIRS {
        let (rep, tally) = sweep::subset_integrity(k, r, 28, 57).map_err(|e| e.to_string())?;
        if !rep.ok() {
            return Err(format!("({k},{r}): {}", rep.failures.join("; ")));
        }
        notes.push(format!("({k},{r}) {} probes, {} subsets seen", rep.checked, tally.len()));
    }
    Ok(notes.join(", "))
}

fn global() -> Outcome {
    let mut notes = Vec::new();
    report(sweep::global_bijection(26), "pairs and members", &mut notes)?;
    Ok(format!("n <= 26, {}", notes.join("")))
}

/// Collects failures of the per-member statements over one family.
#[derive(Default)]
struct Props {
    fails: Vec<String>,
    hits: BTreeMap<String, usize>,
}

impl Props {
    fn check(&mut self, ok: bool, what: &str, p: &Partition, at: (usize, i64)) {
        *self.hits.entry(what.to_string()).or_default() += 1;
        if !ok && self.fails.len() < 10 {
            self.fails.push(format!("{what}: {p} at {at:?}"));
        }
    }

    fn merge(mut self, o: Props) -> Props {
        for (k, v) in o.hits {
            *self.hits.entry(k).or_default() += v;
        }
        self.fails.extend(o.fails);
        self
    }
}

const STATEMENTS: &[&str] = &[
    "even neighbour mark",
    "p + t >= N2",
    "marks at most 1 below a high row",
    "insertion index pair",
    "cluster top + 4 at most once",
    "insertion type at the top of the shift",
    "no 2-marked 2t beside a 1-marked 2t",
    "image subsets inside the strict subsets",
    "division index pair",
    "chain bottom + 2 absent",
    "chain above the bottom is s3",
    "even-part member is strict exactly from N2",
    "exactly one equal-family m",
    "direct m agrees with the scan",
    "equal member is strict exactly above m",
    "weight and length receipts",
    "m-level maps invert",
    "image chains exactly above m",
];

fn member_props(an: &Analysis, max_odd: i64) -> Props {
    use StartType::*;
    let mut out = Props::default();
    let mp = &an.mp;
    let p0 = mp.partition();
    let prof = an.profile().unwrap();
    let n2 = mp.row_len(2);

    // marks of 2t+2 sit above the mark of 2t+1
    for &o in mp.parts().iter().filter(|v| *v % 2 == 1) {
        if mp.occurs(o + 1) {
            let top = *mp.marks_of(o).iter().max().unwrap();
            out.check(mp.marks_of(o + 1).iter().all(|&m| m > top), "even neighbour mark", p0, (0, o));
        }
    }

    for (p, t) in strict_candidates(an, max_odd) {
        if let Some(lt) = an.classify_lt(p, t).unwrap() {
            out.check(p as i64 + t >= n2 as i64, "p + t >= N2", p0, (p, t));
            if mp.r2(p) >= Ext::Fin(2 * t + 6) {
                let low = |v: i64| mp.marks_of(v).iter().all(|&m| m <= 1);
                out.check(low(2 * t + 2) && low(2 * t + 4), "marks at most 1 below a high row", p0, (p, t));
            }
            out.check(!(mp.occurs(lt.index) && mp.occurs(lt.index + 2)), "insertion index pair", p0, (p, t));
            if p >= 1 && mp.r2(p).is(2 * t + 2) && prof.is(p, S3) {
                let first = cluster_indexes(mp, prof, p)[0];
                let v = mp.r2(first).finite().unwrap() + 4;
                out.check(mp.count(v) <= 1, "cluster top + 4 at most once", p0, (p, t));
            }
            let l = an.above(lt.index);
            if l >= 1 {
                let top = mp.r2(l).finite().unwrap();
                if top == lt.index + 2 || top == lt.index + 4 {
                    let kind = insertion_types(mp, prof, l).unwrap().kind(l).unwrap();
                    use InsertionType::*;
                    let ok = match lt.j {
                        1 => top == 2 * t + 6 && matches!(kind, A3 | C),
                        2 => top == 2 * t + 6 && matches!(kind, A1 | A2 | B),
                        3 => top == 2 * t + 6 && kind == A1,
                        4 => top == 2 * t + 4 && kind == C,
                        5 => top == 2 * t + 4 && kind == A1,
                        _ => top == lt.index + 4 && matches!(kind, A1 | C),
                    };
                    out.check(ok, "insertion type at the top of the shift", p0, (p, t));
                }
            }
        }
        if let Some(sim) = an.classify_sim(p, t).unwrap() {
            if mp.has(2 * t, 1) {
                out.check(!mp.has(2 * t, 2), "no 2-marked 2t beside a 1-marked 2t", p0, (p, t));
            }
            if sim.j <= 5 {
                let lt = an.classify_lt(p, t).unwrap().map(|l| l.j);
                let allowed: &[u8] = match sim.j {
                    1 => &[1],
                    2 | 4 => &[1, 2],
                    3 => &[1, 3],
                    _ => &[4, 5],
                };
                out.check(
                    lt.is_some_and(|j| allowed.contains(&j)),
                    "image subsets inside the strict subsets",
                    p0,
                    (p, t),
                );
            }
        }
    }

    for (p, t) in equal_candidates(an) {
        let Some(eq) = an.classify_eq(p, t).unwrap() else { continue };
        out.check(!(mp.occurs(eq.index) && mp.occurs(eq.index + 2)), "division index pair", p0, (p, t));
        if mp.r2(p + 1).is(2 * t + 2) {
            let on_chain = |i: usize| mp.r2(i).is(2 * t + 2 + 4 * (p + 1 - i) as i64);
            let s = (1..=p + 1).find(|&i| on_chain(i) && matches!(prof.get(i), Some(S0 | S1)));
            match s {
                Some(s) => {
                    let v = mp.r2(s).finite().unwrap();
                    out.check(!mp.occurs(v + 2), "chain bottom + 2 absent", p0, (p, t));
                    let above_ok = (1..s).filter(|&i| on_chain(i)).all(|i| prof.is(i, S3));
                    out.check(above_ok, "chain above the bottom is s3", p0, (p, t));
                }
                None => out.check(false, "chain bottom exists", p0, (p, t)),
            }
        }
    }
    out
}

fn theorem_props(an: &Analysis, max_m: i64, weight_cap: i64) -> Props {
    let mut out = Props::default();
    let mp = &an.mp;
    let p0 = mp.partition();
    let n2 = mp.row_len(2) as i64;
    let in_lt: Vec<Option<ggbij::SubsetLabel>> = match (0..=max_m).map(|m| an.find_pt_lt(m)).collect() {
        Ok(v) => v,
        Err(e) => {
            out.check(false, &format!("unique split in the strict family ({e})"), p0, (0, 0));
            return out;
        }
    };
    if mp.largest_odd().is_none() {
        for m in 0..=max_m {
            out.check(
                in_lt[m as usize].is_some() == (m >= n2),
                "even-part member is strict exactly from N2",
                p0,
                (0, m),
            );
        }
    }
    let eq_ms: Vec<i64> =
        match (0..=max_m + n2 + 1).map(|m| an.find_pt_eq(m).map(|x| (m, x))).collect::<ggbij::Result<Vec<_>>>() {
            Ok(v) => v.into_iter().filter(|(_, x)| x.is_some()).map(|(m, _)| m).collect(),
            Err(e) => {
                out.check(false, &format!("unique split in the equal family ({e})"), p0, (0, 0));
                return out;
            }
        };
    if an.k == 3 && an.r == 3 && mp.largest_odd().is_some() {
        out.check(eq_ms.len() == 1, "exactly one equal-family m", p0, (0, 0));
        out.check(eq_ms.first().copied() == an.find_m_eq33(), "direct m agrees with the scan", p0, (0, 0));
    }
    if let Some(&m) = eq_ms.first() {
        for m2 in 0..=max_m {
            out.check(
                in_lt[m2 as usize].is_some() == (m < m2),
                "equal member is strict exactly above m",
                p0,
                (m as usize, m2),
            );
        }
    }
    for (m, lab) in in_lt.iter().enumerate() {
        let m = m as i64;
        if lab.is_none() || mp.weight() + 2 * m + 1 > weight_cap {
            continue;
        }
        let Ok(img) = phi_m(an, m) else {
            out.check(false, "strict member maps", p0, (0, m));
            continue;
        };
        let w = &img.result;
        out.check(
            w.weight() == mp.weight() + 2 * m + 1 && w.len() == mp.len() + 1,
            "weight and length receipts",
            p0,
            (0, m),
        );
        let wan = Analysis::new(w.clone(), an.k, an.r).unwrap();
        let back = psi_m(&wan, m).map(|b| b.result == *mp).unwrap_or(false);
        out.check(back, "m-level maps invert", p0, (0, m));
        for m2 in 0..=max_m {
            let hit = wan.find_pt_lt(m2).map(|x| x.is_some()).unwrap_or(false);
            out.check(hit == (m < m2), "image chains exactly above m", p0, (0, m));
        }
    }
    out
}

fn properties() -> Outcome {
    let mut notes = Vec::new();
    let mut seen = Props::default();
    for (k, r) in PAIRS {
        let all = members(k, r, 28).unwrap();
        let props = all
            .par_iter()
            .map(|p| {
                let an = Analysis::new(MarkedPartition::mark(p), k, r).unwrap();
                let mut out = member_props(&an, 57);
                if p.weight() <= 26 {
                    out = out.merge(theorem_props(&an, 14, 26));
                }
                out
            })
            .reduce(Props::default, Props::merge);
        if !props.fails.is_empty() {
            return Err(format!("({k},{r}): {}", props.fails.join("; ")));
        }
        notes.push(format!("({k},{r}) {}", props.hits.values().sum::<usize>()));
        seen = seen.merge(props);
    }
    let idle: Vec<&str> = STATEMENTS.iter().copied().filter(|s| !seen.hits.contains_key(*s)).collect();
    if !idle.is_empty() {
        return Err(format!("never exercised: {}", idle.join(", ")));
    }
    Ok(format!("{} statements, instances checked: {}", STATEMENTS.len(), notes.join(", ")))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn golden() -> Outcome {
    let an = |name: &str| Analysis::new(fixtures::get(name).unwrap(), 4, 3).unwrap();
    let mut produced: Vec<(String, MarkedPartition)> = Vec::new();
    for name in ["pi1", "pi2", "pi3"] {
        produced.push((name.into(), MarkedPartition::mark(fixtures::get(name).unwrap().partition())));
    }
    let dil = dilate(&an("pi1"), 6, 5).map_err(|e| e.to_string())?;
    for (step, name) in dil.trace.steps.iter().zip(["dil4", "dil3", "dil2", "dil1", "mu"]) {
        produced.push((name.into(), step.grid.clone()));
    }
    produced.push(("pi1".into(), reduce(&an("mu"), 6, 5).map_err(|e| e.to_string())?.result));
    for (j, pt) in [(6, (2, 1)), (7, (3, 1)), (8, (3, 2)), (9, (3, 0)), (10, (3, 0)), (11, (5, 0)), (12, (6, 0))] {
        let out = insert_odd(&an(&format!("m{j}")), pt.0, pt.1).map_err(|e| e.to_string())?;
        if j == 7 || j == 12 {
            produced.push((format!("nu{j}"), out.trace.steps[0].grid.clone()));
        }
        produced.push((format!("omega{j}"), out.result));
        let back = separate_odd(&an(&format!("omega{j}")), pt.0, pt.1).map_err(|e| e.to_string())?;
        produced.push((format!("m{j}"), back.result));
    }
    for (name, grid) in &produced {
        let want = fixtures::get(name).unwrap();
        if grid.rows() != want.rows() || grid.overline() != want.overline() {
            return Err(format!("{name}: produced rows {:?}, printed rows {:?}", grid.rows(), want.rows()));
        }
        let path = golden_dir().join(format!("{name}.txt"));
        let frozen = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if grid.render_grid() != frozen {
            return Err(format!("{name}: rendering drifted from {}", path.display()));
        }
    }
    Ok(format!("{} grids from marking, dilation, reduction, insertion and separation", produced.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("companion identity by length and weight", companion),
        ("product side against enumeration", product),
        ("multisum equals product", sum_product),
        ("cell identity", cells),
        ("(p,t) bijection", pt_bijection),
        ("dilation/reduction and insertion/separation round trips", stages),
        ("twelve-subset integrity", integrity),
        ("global bijection for k = r = 3", global),
        ("lemma and theorem property suite", properties),
        ("golden grids", golden),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
