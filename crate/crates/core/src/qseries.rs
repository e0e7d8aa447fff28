//! Truncated power series with big-integer coefficients, and the sum and
//! product sides of the identities.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sets::BressoudParams;

/// `sum c_n q^n` known exactly for `n <= qmax`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn zero(qmax: usize) -> Series {
        Series { coeffs: vec![BigInt::zero(); qmax + 1] }
    }

    pub fn one(qmax: usize) -> Series {
        Series::monomial(qmax, 0, 1)
    }

    /// `c q^e`, or zero when `e > qmax`.
    pub fn monomial(qmax: usize, e: usize, c: i64) -> Series {
        let mut s = Series::zero(qmax);
        if e <= qmax {
            s.coeffs[e] = BigInt::from(c);
        }
        s
    }

    pub fn from_coeffs(qmax: usize, cs: &[i64]) -> Series {
        let mut s = Series::zero(qmax);
        for (i, &c) in cs.iter().enumerate().take(qmax + 1) {
            s.coeffs[i] = BigInt::from(c);
        }
        s
    }

    pub fn qmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as `i64`, failing on overflow.
    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| c.to_i64().ok_or_else(|| Error::Series(format!("coefficient {c} overflows"))))
            .collect()
    }

    /// Multiplies in place by `1 + sign q^e`.
    pub fn mul_binomial(&mut self, e: usize, sign: i64) {
        if e == 0 {
            if sign == -1 {
                self.coeffs.iter_mut().for_each(|c| c.set_zero());
            } else {
                self.coeffs.iter_mut().for_each(|c| *c *= 2);
            }
            return;
        }
        for n in (e..self.coeffs.len()).rev() {
            let lower = self.coeffs[n - e].clone();
            if sign < 0 {
                self.coeffs[n] -= lower;
            } else {
                self.coeffs[n] += lower;
            }
        }
    }

    /// Divides in place by `1 - q^e`, `e >= 1`.
    pub fn div_one_minus(&mut self, e: usize) -> Result<()> {
        if e == 0 {
            return Err(Error::Series("division by 1 - q^0".into()));
        }
        for n in e..self.coeffs.len() {
            let lower = self.coeffs[n - e].clone();
            self.coeffs[n] += lower;
        }
        Ok(())
    }

    /// Multiplies by `q^e`, dropping what falls past `qmax`.
    pub fn shift(&self, e: usize) -> Series {
        let mut s = Series::zero(self.qmax());
        for n in e..=self.qmax() {
            s.coeffs[n] = self.coeffs[n - e].clone();
        }
        s
    }

    /// Multiplicative inverse; the constant term must be `1` or `-1`.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::Series(format!("constant term {c0} is not a unit")));
        }
        let mut inv = Series::zero(self.qmax());
        inv.coeffs[0] = c0.clone();
        for n in 1..=self.qmax() {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &inv.coeffs[n - i];
            }
            inv.coeffs[n] = -(acc * c0);
        }
        Ok(inv)
    }

    /// The value at an integer point, using only the known coefficients.
    pub fn eval(&self, q: i64) -> BigInt {
        let q = BigInt::from(q);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }

    /// First index where the two series differ.
    pub fn first_mismatch(&self, other: &Series) -> Option<usize> {
        (0..=self.qmax().min(other.qmax())).find(|&n| self.coeffs[n] != other.coeffs[n])
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        let q = self.qmax().min(o.qmax());
        Series { coeffs: (0..=q).map(|n| &self.coeffs[n] + &o.coeffs[n]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        let q = self.qmax().min(o.qmax());
        Series { coeffs: (0..=q).map(|n| &self.coeffs[n] - &o.coeffs[n]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let q = self.qmax().min(o.qmax());
        let mut s = Series::zero(q);
        for (i, a) in self.coeffs.iter().enumerate().take(q + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(q + 1 - i) {
                s.coeffs[i + j] += a * b;
            }
        }
        s
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match n {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "q^{n}")?,
                _ => write!(f, "{a}q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.qmax() + 1)
    }
}

/// `sum c_{n,l} x^l q^n`, exact in `q` up to `qmax` and in `x` completely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivariate {
    // coeffs[n][l]
    coeffs: Vec<Vec<BigInt>>,
}

impl Bivariate {
    pub fn zero(qmax: usize) -> Bivariate {
        Bivariate { coeffs: vec![Vec::new(); qmax + 1] }
    }

    /// `x^l` times a series in `q`.
    pub fn from_series(s: &Series, l: usize) -> Bivariate {
        let mut b = Bivariate::zero(s.qmax());
        for (n, c) in s.coeffs.iter().enumerate() {
            if !c.is_zero() {
                b.coeffs[n] = vec![BigInt::zero(); l + 1];
                b.coeffs[n][l] = c.clone();
            }
        }
        b
    }

    pub fn qmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize, l: usize) -> BigInt {
        self.coeffs[n].get(l).cloned().unwrap_or_default()
    }

    /// Largest power of `x` with a nonzero coefficient at `q^n`.
    pub fn degree(&self, n: usize) -> usize {
        self.coeffs[n].iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Multiplies in place by `1 + x q^e`, `e >= 1`.
    pub fn mul_xbinomial(&mut self, e: usize) {
        for n in (e..self.coeffs.len()).rev() {
            let lower = self.coeffs[n - e].clone();
            let row = &mut self.coeffs[n];
            if row.len() < lower.len() + 1 {
                row.resize(lower.len() + 1, BigInt::zero());
            }
            for (l, c) in lower.into_iter().enumerate() {
                row[l + 1] += c;
            }
        }
    }

    pub fn add_assign(&mut self, o: &Bivariate) {
        for (row, orow) in self.coeffs.iter_mut().zip(&o.coeffs) {
            if row.len() < orow.len() {
                row.resize(orow.len(), BigInt::zero());
            }
            for (a, b) in row.iter_mut().zip(orow) {
                *a += b;
            }
        }
    }

    /// Sets `x = 1`.
    pub fn at_x_one(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|row| row.iter().sum()).collect() }
    }
}

/// `(a q^offset; q^step)_count`-style finite product
/// `prod_{i<count} (1 + sign q^{offset + i*step})`; `count = None` runs
/// until the exponents pass `qmax`.
pub fn pochhammer(qmax: usize, sign: i64, offset: usize, step: usize, count: Option<usize>) -> Result<Series> {
    let mut s = Series::one(qmax);
    mul_pochhammer(&mut s, sign, offset, step, count)?;
    Ok(s)
}

fn mul_pochhammer(s: &mut Series, sign: i64, offset: usize, step: usize, count: Option<usize>) -> Result<()> {
    if count.is_none() && step == 0 {
        return Err(Error::Series("infinite product with step 0".into()));
    }
    let mut i = 0;
    loop {
        if count.is_some_and(|c| i >= c) {
            break;
        }
        let e = offset + i * step;
        if e > s.qmax() {
            break;
        }
        s.mul_binomial(e, sign);
        i += 1;
    }
    Ok(())
}

/// Divides by `(q^step; q^step)_count`.
fn div_q_factorial(s: &mut Series, step: usize, count: usize) -> Result<()> {
    for i in 1..=count {
        let e = i * step;
        if e > s.qmax() {
            break;
        }
        s.div_one_minus(e)?;
    }
    Ok(())
}

fn to_usize(v: i64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Series(format!("{what} {v} is negative")))
}

/// Visits every `N_1 >= ... >= N_len >= 0` whose cost, a sum of
/// nondecreasing per-index costs, stays within `budget`.
fn for_each_tuple(len: usize, budget: i64, cost: &dyn Fn(usize, usize) -> i64, f: &mut dyn FnMut(&[usize])) {
    fn go(
        ns: &mut Vec<usize>,
        len: usize,
        budget: i64,
        cost: &dyn Fn(usize, usize) -> i64,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if ns.len() == len {
            f(ns);
            return;
        }
        let i = ns.len();
        let cap = ns.last().copied().unwrap_or(usize::MAX);
        let mut n = 0;
        while n <= cap {
            let c = cost(i, n);
            if c > budget {
                break;
            }
            ns.push(n);
            go(ns, len, budget - c, cost, f);
            ns.pop();
            n += 1;
        }
    }
    go(&mut Vec::new(), len, budget, cost, f);
}

/// The multiple sum side of the Bressoud-type identity, to `q^qmax`.
pub fn multisum(params: &BressoudParams, qmax: usize) -> Result<Series> {
    params.validate()?;
    let eta = params.eta;
    let (k, r, lam) = (params.k, params.r, params.lambda());
    let len = k - 1;
    let alpha = |s: usize| params.alphas[s - 1];
    // exponent contributed by N_i = n once the finite products are pulled out
    let cost = move |i: usize, n: usize| -> i64 {
        let (s, n) = (i + 1, n as i64);
        let mut c = eta * n * n;
        if s >= r {
            c += eta * n;
        }
        if s <= lam {
            c -= n * alpha(s) + eta * n * (n - 1) / 2;
        }
        c
    };
    let mut total = Series::zero(qmax);
    let mut err = None;
    for_each_tuple(len, qmax as i64, &cost, &mut |ns: &[usize]| {
        let lead: i64 = ns.iter().enumerate().map(|(i, &n)| cost(i, n)).sum();
        let mut term = Series::monomial(qmax, lead as usize, 1);
        let step = eta as usize;
        let res: Result<()> = (|| {
            for i in 0..len {
                let gap = if i + 1 < len { ns[i] - ns[i + 1] } else { ns[i] };
                div_q_factorial(&mut term, step, gap)?;
            }
            for s in 1..=lam {
                let n = ns.get(s - 1).copied().unwrap_or(0);
                mul_pochhammer(&mut term, 1, to_usize(alpha(s), "residue")?, step, Some(n))?;
            }
            for s in 2..=lam {
                let prev = ns.get(s - 2).copied().unwrap_or(0) as i64;
                let off = to_usize(eta - alpha(s) + eta * prev, "offset")?;
                mul_pochhammer(&mut term, 1, off, step, None)?;
            }
            Ok(())
        })();
        match res {
            Ok(()) => total = &total + &term,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// The infinite product side of the Bressoud-type identity, to `q^qmax`.
pub fn product_side(params: &BressoudParams, qmax: usize) -> Result<Series> {
    params.validate()?;
    let eta = params.eta;
    let (k, r, lam) = (params.k as i64, params.r as i64, params.lambda() as i64);
    let half = |twice: i64, what: &str| -> Result<usize> {
        if twice % 2 != 0 {
            return Err(Error::Series(format!("{what} exponent {twice}/2 is not an integer")));
        }
        to_usize(twice / 2, what)
    };
    let modulus = to_usize(eta * (2 * k - lam + 1), "modulus")?;
    let a = half(eta * (2 * r - lam), "first")?;
    let b = half(eta * (4 * k - 2 * r - lam + 2), "second")?;
    let step = eta as usize;
    let mut s = Series::one(qmax);
    for &al in &params.alphas {
        mul_pochhammer(&mut s, 1, to_usize(al, "residue")?, step, None)?;
    }
    for off in [a, b, modulus] {
        if off == 0 {
            return Ok(Series::zero(qmax));
        }
        mul_pochhammer(&mut s, -1, off, modulus, None)?;
    }
    let mut i = 1;
    while i * step <= qmax {
        s.div_one_minus(i * step)?;
        i += 1;
    }
    Ok(s)
}

/// The generating function, by length and weight, of the odd-part family
/// with `k = r = 3`.
pub fn companion_bivariate(qmax: usize) -> Result<Bivariate> {
    let mut total = Bivariate::zero(qmax);
    let cost = |_: usize, n: usize| 2 * (n * n) as i64;
    let mut err = None;
    for_each_tuple(2, qmax as i64, &cost, &mut |ns: &[usize]| {
        let (n1, n2) = (ns[0], ns[1]);
        let mut term = Series::monomial(qmax, 2 * (n1 * n1 + n2 * n2), 1);
        if let Err(e) = div_q_factorial(&mut term, 2, n1 - n2).and_then(|_| div_q_factorial(&mut term, 2, n2)) {
            err = Some(e);
            return;
        }
        let mut b = Bivariate::from_series(&term, n1 + n2);
        let mut e = 1 + 2 * n2;
        while e <= qmax {
            b.mul_xbinomial(e);
            e += 2;
        }
        total.add_assign(&b);
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// The single-cell sum for row sizes `rows` (length `k - 1`), carrying `x^{sum rows}`.
pub fn cell_series(rows: &[usize], r: usize, qmax: usize) -> Result<Bivariate> {
    if rows.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameters(format!("row sizes {rows:?} must be nonincreasing")));
    }
    let len = rows.len();
    let mut e = 0;
    for (i, &n) in rows.iter().enumerate() {
        e += n * n;
        if i + 1 >= r {
            e += n;
        }
    }
    let mut term = Series::monomial(qmax, 2 * e, 1);
    for i in 0..len {
        let gap = if i + 1 < len { rows[i] - rows[i + 1] } else { rows[i] };
        div_q_factorial(&mut term, 2, gap)?;
    }
    Ok(Bivariate::from_series(&term, rows.iter().sum()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(cs: &[i64]) -> Series {
        Series::from_coeffs(cs.len() - 1, cs)
    }

    #[test]
    fn ring_laws() {
        let a = s(&[1, 2, 0, -1, 3]);
        let b = s(&[2, -1, 1, 0, 5]);
        let c = s(&[0, 1, 1, 1, 1]);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a * &a.inverse().unwrap(), Series::one(4));
    }

    #[test]
    fn euler_pentagonal() {
        let p = pochhammer(20, -1, 1, 1, None).unwrap();
        let want = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0];
        assert_eq!(p.to_i64s().unwrap(), want);
    }

    #[test]
    fn zero_base_kills_product() {
        let p = pochhammer(5, -1, 0, 1, Some(3)).unwrap();
        assert_eq!(p, Series::zero(5));
    }

    #[test]
    fn inverse_needs_unit() {
        assert!(s(&[2, 1]).inverse().is_err());
    }

    #[test]
    fn division_matches_inverse() {
        let mut a = s(&[1, 3, 0, 2, 1, 0, 0]);
        let b = a.clone();
        a.div_one_minus(2).unwrap();
        let d = &b * &pochhammer(6, -1, 2, 1, Some(1)).unwrap().inverse().unwrap();
        assert_eq!(a, d);
    }

    #[test]
    fn eval_and_display() {
        let a = s(&[1, -2, 0, 1]);
        assert_eq!(a.eval(2), BigInt::from(5));
        assert_eq!(a.to_string(), "1 - 2q^1 + q^3 + O(q^4)");
    }

    #[test]
    fn cell_with_no_rows() {
        let c = cell_series(&[0, 0], 3, 6).unwrap();
        assert_eq!(c.at_x_one(), Series::one(6));
    }
}
