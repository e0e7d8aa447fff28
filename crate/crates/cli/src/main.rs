use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ggbij::bijection::{self, Mapped, Trace};
use ggbij::qseries::{self, Series};
use ggbij::sets::{self, BressoudParams};
use ggbij::{fixtures, sweep, Analysis, Error, Family, MarkedPartition, Partition};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ggbij", version, about = "Marked partitions, odd-part bijections and q-series checks")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Accepted for scripts; output order never depends on scheduling.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the marking grid of a partition.
    Mark {
        #[command(flatten)]
        input: Input,
    },
    /// Place a partition in the strict, image or equal family at (p,t) or m.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        kr: Kr,
        #[command(flatten)]
        at: At,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Apply one of the maps.
    Map {
        #[arg(long, value_enum)]
        op: Op,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        kr: Kr,
        #[command(flatten)]
        at: At,
        /// Distinct odd parts to insert (for --op phi).
        #[arg(long)]
        zeta: Option<String>,
        /// Also print every intermediate grid.
        #[arg(long)]
        trace: bool,
    },
    /// Count members by weight as CSV.
    Count {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 20)]
        max_n: i64,
    },
    /// List members of one weight as JSON lines.
    Enumerate {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        n: i64,
    },
    /// Check an identity coefficient by coefficient.
    Verify {
        #[arg(long, value_enum)]
        identity: Identity,
        #[arg(long, default_value = "1", value_delimiter = ',')]
        alphas: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        eta: i64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 30)]
        qmax: usize,
        /// Largest first-row size tried by the cell check.
        #[arg(long, default_value_t = 4)]
        max_row: usize,
    },
    /// Run the round-trip sweeps up to a weight bound.
    Roundtrip {
        #[command(flatten)]
        kr: Kr,
        #[arg(long, default_value_t = 20)]
        max_weight: i64,
    },
}

#[derive(Args)]
struct Input {
    /// Parts as `6,4,2` or `[6,4,2]`.
    #[arg(long, alias = "partition", conflicts_with = "fixture")]
    parts: Option<String>,
    /// A stored worked example (see `--fixture list`).
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct Kr {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args)]
struct At {
    #[arg(long, requires = "t")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    t: Option<i64>,
    #[arg(long, conflicts_with_all = ["p", "t"])]
    m: Option<i64>,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long, value_enum, default_value_t = SetName::C)]
    set: SetName,
    #[arg(long, default_value = "1", value_delimiter = ',')]
    alphas: Vec<i64>,
    #[arg(long, default_value_t = 2)]
    eta: i64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    r: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetName {
    /// General members with the given residues and modulus step.
    B,
    /// Odd-residue members.
    C,
    /// Even-part members.
    E,
    /// Pairs of an even-part member and distinct odd parts, k = r = 3.
    F33,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Lt,
    Sim,
    Eq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Dilate,
    Reduce,
    Insert,
    Separate,
    PhiPt,
    PsiPt,
    PhiM,
    PsiM,
    Phi,
    Psi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Identity {
    /// Multisum against enumeration.
    Conjecture,
    /// Product side against enumeration.
    Product,
    /// Bivariate companion against enumeration by length.
    Companion,
    /// Cell sums against enumeration of each cell.
    Cell,
}

/// What went wrong, split by exit code.
enum Fail {
    Usage(String),
    Check(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::InvalidPartition(_) | Error::InvalidParameters(_) | Error::Parse(_) | Error::NotMember(_) => {
                Fail::Usage(e.to_string())
            }
            other => Fail::Check(other.to_string()),
        }
    }
}

type Run = Result<bool, Fail>;

fn parse_parts(text: &str) -> Result<Partition, Fail> {
    let t = text.trim();
    let values: Vec<i64> = if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| Fail::Usage(format!("bad JSON partition: {e}")))?
    } else if t.is_empty() {
        Vec::new()
    } else {
        t.split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|e| Fail::Usage(format!("bad part {s:?}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    if values.windows(2).any(|w| w[0] < w[1]) {
        eprintln!("warning: parts were not in decreasing order; sorted");
    }
    Ok(Partition::from_unsorted(values)?)
}

impl Input {
    fn load(&self) -> Result<(MarkedPartition, Option<(usize, usize)>), Fail> {
        match (&self.parts, &self.fixture) {
            (Some(text), _) => Ok((MarkedPartition::mark(&parse_parts(text)?), None)),
            (None, Some(name)) => {
                if name == "list" {
                    for n in fixtures::names() {
                        println!("{n}");
                    }
                    std::process::exit(0);
                }
                Ok((fixtures::get(name)?, fixtures::params(name)))
            }
            (None, None) => Err(Fail::Usage("give --parts or --fixture".into())),
        }
    }
}

impl Kr {
    fn resolve(&self, hint: Option<(usize, usize)>) -> (usize, usize) {
        let (hk, hr) = hint.unwrap_or((3, 3));
        (self.k.unwrap_or(hk), self.r.unwrap_or(hr))
    }
}

fn print_grid(label: &str, mp: &MarkedPartition) {
    if !label.is_empty() {
        println!("% {label}");
    }
    println!("{}", mp.render_grid());
}

fn print_trace(trace: &Trace) {
    for step in &trace.steps {
        print_grid(&step.label, &step.grid);
        println!();
    }
}

fn mark(fmt: Format, input: &Input) -> Run {
    let (mp, _) = input.load()?;
    match fmt {
        Format::Text => println!("{}", mp.render_grid()),
        Format::Json => println!("{}", mp.to_json()),
    }
    Ok(true)
}

fn classify(fmt: Format, input: &Input, kr: &Kr, at: &At, family: Option<FamilyArg>) -> Run {
    let (mp, hint) = input.load()?;
    let (k, r) = kr.resolve(hint);
    let an = Analysis::new(mp, k, r)?;
    let families = match family {
        Some(FamilyArg::Lt) => vec![Family::Lt],
        Some(FamilyArg::Sim) => vec![Family::Sim],
        Some(FamilyArg::Eq) => vec![Family::Eq],
        None => vec![Family::Lt, Family::Sim, Family::Eq],
    };
    let mut found = Vec::new();
    for fam in families {
        let label = match (at.p, at.t, at.m) {
            (Some(p), Some(t), _) => match fam {
                Family::Lt => an.classify_lt(p, t)?,
                Family::Sim => an.classify_sim(p, t)?,
                Family::Eq => an.classify_eq(p, t)?,
            },
            (_, _, Some(m)) => match fam {
                Family::Lt => an.find_pt_lt(m)?,
                Family::Eq => an.find_pt_eq(m)?,
                Family::Sim => {
                    let mut hit = None;
                    for p in 0..=m.max(0) as usize {
                        if let Some(l) = an.classify_sim(p, m - p as i64)? {
                            hit = Some(l);
                        }
                    }
                    hit
                }
            },
            _ => return Err(Fail::Usage("give --p and --t, or --m".into())),
        };
        if let Some(l) = label {
            found.push(l);
        }
    }
    let types: Vec<String> =
        an.profile().map(|p| p.types().iter().map(|t| t.to_string()).collect()).unwrap_or_default();
    match fmt {
        Format::Json => {
            let out: Vec<Value> = found
                .iter()
                .map(|l| {
                    let index_key = if l.family == Family::Eq { "division_index" } else { "insertion_index" };
                    json!({
                        "family": l.family,
                        "j": l.j,
                        "p": l.p,
                        "t": l.t,
                        index_key: l.index,
                        "clusters": l.clusters,
                        "types": types,
                    })
                })
                .collect();
            println!("{}", Value::Array(out));
        }
        Format::Text => {
            if found.is_empty() {
                println!("{} is in none of the requested families", an.mp.partition());
            }
            for l in &found {
                let index = if l.family == Family::Eq { "D" } else { "I" };
                println!("{} ({},{}) subset {} {index}={} clusters {:?}", l.family, l.p, l.t, l.j, l.index, l.clusters);
            }
            println!("starting types: {}", types.join(" "));
        }
    }
    Ok(true)
}

fn map(fmt: Format, op: Op, input: &Input, kr: &Kr, at: &At, zeta: Option<&str>, trace: bool) -> Run {
    let (mp, hint) = input.load()?;
    let (k, r) = kr.resolve(hint);
    let need_pt = || match (at.p, at.t) {
        (Some(p), Some(t)) => Ok((p, t)),
        _ => Err(Fail::Usage("this op needs --p and --t".into())),
    };
    let need_m = || at.m.ok_or_else(|| Fail::Usage("this op needs --m".into()));
    let an = || Analysis::new(mp.clone(), k, r);
    let mapped: Mapped = match op {
        Op::Dilate => {
            let (p, t) = need_pt()?;
            bijection::dilate(&an()?, p, t)?
        }
        Op::Reduce => {
            let (p, t) = need_pt()?;
            bijection::reduce(&an()?, p, t)?
        }
        Op::Insert => {
            let (p, t) = need_pt()?;
            bijection::insert_odd(&an()?, p, t)?
        }
        Op::Separate => {
            let (p, t) = need_pt()?;
            bijection::separate_odd(&an()?, p, t)?
        }
        Op::PhiPt => {
            let (p, t) = need_pt()?;
            bijection::phi_pt(&an()?, p, t)?
        }
        Op::PsiPt => {
            let (p, t) = need_pt()?;
            bijection::psi_pt(&an()?, p, t)?
        }
        Op::PhiM => bijection::phi_m(&an()?, need_m()?)?,
        Op::PsiM => bijection::psi_m(&an()?, need_m()?)?,
        Op::Phi => {
            let z = parse_parts(zeta.unwrap_or(""))?;
            bijection::phi_global(mp.partition(), &z)?
        }
        Op::Psi => {
            let (pi, z, tr) = bijection::psi_global(&mp)?;
            match fmt {
                Format::Json => {
                    let mut out = json!({ "partition": pi, "zeta": z });
                    if trace {
                        out["trace"] = serde_json::to_value(&tr).expect("plain data");
                    }
                    println!("{out}");
                }
                Format::Text => {
                    if trace {
                        print_trace(&tr);
                    }
                    println!("partition {pi}");
                    println!("zeta {z}");
                }
            }
            return Ok(true);
        }
    };
    match fmt {
        Format::Json => {
            let mut out = json!({
                "partition": mapped.result.partition(),
                "grid": mapped.result.to_json(),
                "receipts": mapped.receipts,
            });
            if trace {
                out["trace"] = serde_json::to_value(&mapped.trace).expect("plain data");
            }
            println!("{out}");
        }
        Format::Text => {
            if trace {
                print_trace(&mapped.trace);
            }
            println!("{}", mapped.result.render_grid());
        }
    }
    Ok(true)
}

fn bressoud(set: &SetArgs) -> Result<BressoudParams, Fail> {
    Ok(BressoudParams::new(set.alphas.clone(), set.eta, set.k, set.r)?)
}

fn enumerate_set(set: &SetArgs, n: i64) -> Result<Vec<Value>, Fail> {
    Ok(match set.set {
        SetName::B => sets::enumerate_b(&bressoud(set)?, n).into_iter().map(|p| json!(p)).collect(),
        SetName::C => sets::enumerate_c(set.k, set.r, n)?.into_iter().map(|p| json!(p)).collect(),
        SetName::E => sets::enumerate_e(set.k, set.r, n)?.into_iter().map(|p| json!(p)).collect(),
        SetName::F33 => sets::enumerate_f33(n).into_iter().map(|(p, z)| json!({ "partition": p, "zeta": z })).collect(),
    })
}

fn count(set: &SetArgs, max_n: i64) -> Run {
    println!("n,count");
    for n in 0..=max_n {
        println!("{n},{}", enumerate_set(set, n)?.len());
    }
    Ok(true)
}

fn enumerate(set: &SetArgs, n: i64) -> Run {
    for v in enumerate_set(set, n)? {
        println!("{v}");
    }
    Ok(true)
}

fn verdict(fmt: Format, what: &str, mismatch: Option<String>) -> Run {
    let ok = mismatch.is_none();
    match fmt {
        Format::Json => println!("{}", json!({ "identity": what, "pass": ok, "mismatch": mismatch })),
        Format::Text => match &mismatch {
            None => println!("PASS {what}"),
            Some(m) => println!("FAIL {what}: {m}"),
        },
    }
    Ok(ok)
}

fn against_counts(s: &Series, params: &BressoudParams, side: &str) -> Option<String> {
    let counts = sets::count_b(params, s.qmax() as i64);
    counts
        .iter()
        .enumerate()
        .find(|(n, &c)| *s.coeff(*n) != c.into())
        .map(|(n, c)| format!("q^{n}: {side} {} enumeration {c}", s.coeff(n)))
}

fn row_tuples(len: usize, top: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    (0..=top)
        .flat_map(|first| {
            row_tuples(len - 1, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn verify(fmt: Format, identity: Identity, params: BressoudParams, qmax: usize, max_row: usize) -> Run {
    match identity {
        Identity::Conjecture => {
            let s = qseries::multisum(&params, qmax)?;
            verdict(fmt, "conjecture", against_counts(&s, &params, "multisum"))
        }
        Identity::Product => {
            let s = qseries::product_side(&params, qmax)?;
            verdict(fmt, "product", against_counts(&s, &params, "product"))
        }
        Identity::Companion => {
            let bi = qseries::companion_bivariate(qmax)?;
            let mut mismatch = None;
            'outer: for n in 0..=qmax {
                let mut by_len: BTreeMap<usize, usize> = BTreeMap::new();
                for p in sets::enumerate_c(3, 3, n as i64)? {
                    *by_len.entry(p.len()).or_default() += 1;
                }
                for l in 0..=n.max(bi.degree(n)) {
                    let want = by_len.get(&l).copied().unwrap_or(0);
                    if bi.coeff(n, l) != want.into() {
                        mismatch = Some(format!("x^{l} q^{n}: series {} enumeration {want}", bi.coeff(n, l)));
                        break 'outer;
                    }
                }
            }
            verdict(fmt, "companion", mismatch)
        }
        Identity::Cell => {
            let mut mismatch = None;
            'cells: for rows in row_tuples(params.k - 1, max_row) {
                let bi = qseries::cell_series(&rows, params.r, qmax)?;
                let l: usize = rows.iter().sum();
                for n in 0..=qmax {
                    let want = sets::enumerate_e_cell(&rows, params.r, n as i64)?.len();
                    if bi.coeff(n, l) != want.into() {
                        mismatch = Some(format!("rows {rows:?} q^{n}: cell {} enumeration {want}", bi.coeff(n, l)));
                        break 'cells;
                    }
                }
            }
            verdict(fmt, "cell", mismatch)
        }
    }
}

fn roundtrip(fmt: Format, kr: &Kr, max_weight: i64) -> Run {
    let (k, r) = kr.resolve(None);
    let max_odd = 2 * max_weight + 1;
    let mut results = vec![
        ("(p,t) bijection", sweep::pt_bijection(k, r, max_odd, max_weight)?),
        ("stage round trips", sweep::stage_round_trips(k, r, max_weight, max_odd)?),
    ];
    if (k, r) == (3, 3) {
        results.push(("global bijection", sweep::global_bijection(max_weight)?));
    }
    let ok = results.iter().all(|(_, rep)| rep.ok());
    match fmt {
        Format::Json => {
            let out: Vec<Value> = results
                .iter()
                .map(|(name, rep)| json!({ "sweep": name, "checked": rep.checked, "failures": rep.failures }))
                .collect();
            println!("{}", Value::Array(out));
        }
        Format::Text => {
            for (name, rep) in &results {
                let verdict = if rep.ok() { "PASS" } else { "FAIL" };
                println!("{verdict} {name}: {} checked", rep.checked);
                for f in &rep.failures {
                    println!("  {f}");
                }
            }
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Run {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Mark { input } => mark(fmt, input),
        Cmd::Classify { input, kr, at, family } => classify(fmt, input, kr, at, *family),
        Cmd::Map { op, input, kr, at, zeta, trace } => map(fmt, *op, input, kr, at, zeta.as_deref(), *trace),
        Cmd::Count { set, max_n } => count(set, *max_n),
        Cmd::Enumerate { set, n } => enumerate(set, *n),
        Cmd::Verify { identity, alphas, eta, k, r, qmax, max_row } => {
            let params = BressoudParams::new(alphas.clone(), *eta, *k, *r)?;
            verify(fmt, *identity, params, *qmax, *max_row)
        }
        Cmd::Roundtrip { kr, max_weight } => roundtrip(fmt, kr, *max_weight),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_in_either_spelling() {
        let a = parse_parts("6, 4,2").ok().unwrap();
        let b = parse_parts("[6,4,2]").ok().unwrap();
        assert_eq!(a, b);
        assert!(parse_parts("").ok().unwrap().is_empty());
        assert!(parse_parts("[]").ok().unwrap().is_empty());
        assert_eq!(parse_parts("2,6,4").ok().unwrap().parts(), &[6, 4, 2]);
        assert!(matches!(parse_parts("0"), Err(Fail::Usage(_))));
        assert!(matches!(parse_parts("[1,"), Err(Fail::Usage(_))));
    }
}
