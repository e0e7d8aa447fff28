//! Membership tests and exhaustive enumerators for the partition families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{MarkedPartition, Partition};

/// Parameters of the Bressoud-type family: admissible residues `alphas`
/// modulo `eta`, the gap length `k` and the small-part bound `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BressoudParams {
    pub alphas: Vec<i64>,
    pub eta: i64,
    pub k: usize,
    pub r: usize,
}

impl BressoudParams {
    pub fn new(alphas: Vec<i64>, eta: i64, k: usize, r: usize) -> Result<Self> {
        let p = BressoudParams { alphas, eta, k, r };
        p.validate()?;
        Ok(p)
    }

    /// The odd-part family: residue 1 modulo 2.
    pub fn odd(k: usize, r: usize) -> Result<Self> {
        BressoudParams::new(vec![1], 2, k, r)
    }

    pub fn lambda(&self) -> usize {
        self.alphas.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.eta < 1 {
            return bad(format!("modulus {} must be positive", self.eta));
        }
        if self.alphas.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("residues {:?} must be strictly increasing", self.alphas));
        }
        if self.alphas.iter().any(|&a| a <= 0 || a >= self.eta) {
            return bad(format!("residues {:?} must lie strictly between 0 and {}", self.alphas, self.eta));
        }
        let lam = self.alphas.len();
        for i in 0..lam {
            if self.alphas[i] != self.eta - self.alphas[lam - 1 - i] {
                return bad(format!("residues {:?} are not symmetric modulo {}", self.alphas, self.eta));
            }
        }
        if !(self.k >= self.r && self.r >= lam && self.k >= 1) {
            return bad(format!("need k >= r >= {lam}, got k={} r={}", self.k, self.r));
        }
        Ok(())
    }

    fn admissible(&self, v: i64) -> bool {
        let m = v.rem_euclid(self.eta);
        m == 0 || self.alphas.contains(&m)
    }
}

/// Direct test of the four defining conditions.
pub fn is_bressoud_b(params: &BressoudParams, p: &Partition) -> bool {
    let parts = p.parts();
    let eta = params.eta;
    if !parts.iter().all(|&v| params.admissible(v)) {
        return false;
    }
    if parts.windows(2).any(|w| w[0] == w[1] && w[0] % eta != 0) {
        return false;
    }
    let span = params.k - 1;
    for i in 0..parts.len() {
        if i + span < parts.len() {
            let (a, b) = (parts[i], parts[i + span]);
            let need = if a % eta == 0 { eta + 1 } else { eta };
            if a - b < need {
                return false;
            }
        }
    }
    parts.iter().filter(|&&v| v <= eta).count() < params.r
}

/// Membership in the odd-part family through the marking: no repeated odd
/// part, parts 1 and 2 marked at most `r - 1`, and at most `k - 1` rows.
pub fn is_in_c(k: usize, r: usize, mp: &MarkedPartition) -> bool {
    let parts = mp.parts();
    if parts.windows(2).any(|w| w[0] == w[1] && w[0] % 2 == 1) {
        return false;
    }
    if mp.num_rows() + 1 > k {
        return false;
    }
    mp.entries().iter().filter(|e| e.value <= 2).all(|e| e.mark < r)
}

/// As [`is_in_c`], with no odd parts at all.
pub fn is_in_e(k: usize, r: usize, mp: &MarkedPartition) -> bool {
    mp.parts().iter().all(|v| v % 2 == 0) && is_in_c(k, r, mp)
}

struct Search<'a> {
    params: &'a BressoudParams,
    even_only: bool,
}

impl Search<'_> {
    fn extend(&self, parts: &mut Vec<i64>, left: i64, small: usize, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition::new(parts.clone()).expect("search keeps parts ordered"));
            return;
        }
        let eta = self.params.eta;
        let span = self.params.k - 1;
        let top = parts.last().map_or(left, |&l| l.min(left));
        for x in (1..=top).rev() {
            if !self.params.admissible(x) || (self.even_only && x % 2 != 0) {
                continue;
            }
            if parts.last() == Some(&x) && x % eta != 0 {
                continue;
            }
            if parts.len() >= span {
                let a = parts[parts.len() - span];
                let need = if a % eta == 0 { eta + 1 } else { eta };
                if a - x < need {
                    continue;
                }
            }
            let small = small + usize::from(x <= eta);
            if small >= self.params.r {
                continue;
            }
            parts.push(x);
            self.extend(parts, left - x, small, out);
            parts.pop();
        }
    }

    fn run(&self, n: i64) -> Vec<Partition> {
        if n < 0 {
            return Vec::new();
        }
        if n == 0 {
            return if self.params.r >= 1 { vec![Partition::empty()] } else { Vec::new() };
        }
        if self.params.k == 1 {
            return Vec::new();
        }
        (1..=n)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let ok = self.params.admissible(first) && !(self.even_only && first % 2 != 0);
                let small = usize::from(first <= self.params.eta);
                if ok && small < self.params.r {
                    let mut parts = vec![first];
                    self.extend(&mut parts, n - first, small, &mut out);
                }
                out
            })
            .flatten()
            .collect()
    }
}

/// All members of weight `n`, in decreasing lexicographic order.
pub fn enumerate_b(params: &BressoudParams, n: i64) -> Vec<Partition> {
    Search { params, even_only: false }.run(n)
}

/// Members of the odd-part family of weight `n`.
pub fn enumerate_c(k: usize, r: usize, n: i64) -> Result<Vec<Partition>> {
    let params = BressoudParams::odd(k, r)?;
    Ok(enumerate_b(&params, n))
}

/// Members of the odd-part family with only even parts.
pub fn enumerate_e(k: usize, r: usize, n: i64) -> Result<Vec<Partition>> {
    let params = BressoudParams::odd(k, r)?;
    Ok(Search { params: &params, even_only: true }.run(n))
}

/// Even-part members whose row sizes are exactly `rows` (for rows `1..k-1`).
pub fn enumerate_e_cell(rows: &[usize], r: usize, n: i64) -> Result<Vec<Partition>> {
    let k = rows.len() + 1;
    Ok(enumerate_e(k, r, n)?
        .into_iter()
        .filter(|p| {
            let mp = MarkedPartition::mark(p);
            (1..k).all(|i| mp.row_len(i) == rows[i - 1])
        })
        .collect())
}

/// Partitions into distinct odd parts at least `2 * min_index + 1`, of weight
/// at most `max_weight`, ordered by weight.
pub fn enumerate_i(min_index: i64, max_weight: i64) -> Vec<Partition> {
    fn go(parts: &mut Vec<i64>, smallest: i64, left: i64, out: &mut Vec<Partition>) {
        out.push(Partition::from_unsorted(parts.clone()).expect("positive parts"));
        let mut v = smallest;
        while v <= left {
            parts.push(v);
            go(parts, v + 2, left - v, out);
            parts.pop();
            v += 2;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 2 * min_index + 1, max_weight, &mut out);
    out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.parts().cmp(b.parts())));
    out
}

/// Pairs of an even-part member and a set of distinct odd parts above its
/// second row, with total weight `n`.
pub fn enumerate_pairs(k: usize, r: usize, n: i64) -> Result<Vec<(Partition, Partition)>> {
    let mut out = Vec::new();
    for a in (0..=n).step_by(2) {
        for pi in enumerate_e(k, r, a)? {
            let n2 = MarkedPartition::mark(&pi).row_len(2) as i64;
            for zeta in enumerate_i(n2, n - a) {
                if zeta.weight() == n - a {
                    out.push((pi.clone(), zeta));
                }
            }
        }
    }
    Ok(out)
}

/// [`enumerate_pairs`] for `k = r = 3`.
pub fn enumerate_f33(n: i64) -> Vec<(Partition, Partition)> {
    enumerate_pairs(3, 3, n).expect("valid parameters")
}

/// Member counts for weights `0..=max_n`.
pub fn count_b(params: &BressoudParams, max_n: i64) -> Vec<usize> {
    (0..=max_n).map(|n| enumerate_b(params, n).len()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(params: &BressoudParams, n: i64) -> Vec<Partition> {
        fn all(n: i64, max: i64) -> Vec<Vec<i64>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in (1..=max.min(n)).rev() {
                for mut rest in all(n - first, first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        all(n, n).into_iter().map(|v| Partition::new(v).unwrap()).filter(|p| is_bressoud_b(params, p)).collect()
    }

    #[test]
    fn validation() {
        assert!(BressoudParams::new(vec![1], 2, 3, 3).is_ok());
        assert!(BressoudParams::new(vec![1, 2], 3, 3, 3).is_ok());
        assert!(BressoudParams::new(vec![1], 3, 3, 3).is_err());
        assert!(BressoudParams::new(vec![1, 2], 3, 3, 1).is_err());
    }

    #[test]
    fn search_matches_filter() {
        for params in [
            BressoudParams::new(vec![1], 2, 3, 3).unwrap(),
            BressoudParams::new(vec![1], 2, 4, 3).unwrap(),
            BressoudParams::new(vec![1, 2], 3, 3, 3).unwrap(),
            BressoudParams::new(vec![], 1, 3, 2).unwrap(),
        ] {
            for n in 0..=18 {
                assert_eq!(enumerate_b(&params, n), brute(&params, n), "{params:?} n={n}");
            }
        }
    }

    #[test]
    fn marking_test_agrees() {
        for (k, r) in [(3, 3), (4, 3), (4, 4), (5, 3)] {
            let params = BressoudParams::odd(k, r).unwrap();
            for n in 0..=18 {
                for p in
                    brute(&BressoudParams::new(vec![1], 2, 9, 9).unwrap(), n).into_iter().chain(enumerate_b(&params, n))
                {
                    let mp = MarkedPartition::mark(&p);
                    assert_eq!(is_in_c(k, r, &mp), is_bressoud_b(&params, &p), "{p} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn odd_sets() {
        let got: Vec<Vec<i64>> = enumerate_i(0, 4).into_iter().map(Vec::from).collect();
        assert_eq!(got, vec![vec![], vec![1], vec![3], vec![3, 1]]);
        assert!(enumerate_i(2, 4).iter().all(|p| p.is_empty()));
    }

    #[test]
    fn empty_partition_everywhere() {
        assert_eq!(enumerate_c(3, 3, 0).unwrap(), vec![Partition::empty()]);
        assert_eq!(enumerate_f33(0).len(), 1);
    }
}
