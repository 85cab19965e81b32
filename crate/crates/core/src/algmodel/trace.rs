//! Symbolic expansion of `Tr(U_N^l)` in the independent symbols
//! `alpha_m, conj(alpha_m)` and the comparison with the `D_{2k,l}` prediction.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::enumerate::enum_d;
use crate::coeff::GaussRat;
use crate::error::AlgebraError;
use crate::laurent::{LaurentPoly, VarKind, VarTable};
use crate::opuc::VerblunskySeq;

/// Largest `k * l` accepted by the symbolic trace.
pub const TRACE_WORK_LIMIT: usize = 40;

/// `prod alpha_{a} prod conj(alpha_{c})`, indices sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlphaMonomial {
    pub alpha: Vec<i32>,
    pub conj: Vec<i32>,
}

impl AlphaMonomial {
    fn new(mut alpha: Vec<i32>, mut conj: Vec<i32>) -> Self {
        alpha.sort_unstable();
        conj.sort_unstable();
        AlphaMonomial { alpha, conj }
    }

    pub fn degree(&self) -> usize {
        self.alpha.len() + self.conj.len()
    }

    pub fn within(&self, lo: i32, hi: i32) -> bool {
        self.alpha.iter().chain(&self.conj).all(|&i| lo <= i && i <= hi)
    }

    pub fn eval(&self, alpha: &VerblunskySeq) -> Complex64 {
        let a = self.alpha.iter().fold(Complex64::one(), |acc, &i| acc * alpha.get(i as i64));
        self.conj.iter().fold(a, |acc, &i| acc * alpha.get(i as i64).conj())
    }
}

impl fmt::Display for AlphaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .alpha
            .iter()
            .map(|i| format!("a[{i}]"))
            .chain(self.conj.iter().map(|i| format!("conj(a[{i}])")))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `Tr(U_N^l)` (optionally only its homogeneous part of a given degree)
/// as integer-coefficient polynomial in the alpha symbols.
#[derive(Clone, Debug)]
pub struct SymbolicTrace {
    pub n: usize,
    pub l: usize,
    pub terms: BTreeMap<AlphaMonomial, i64>,
}

impl SymbolicTrace {
    /// Numeric value with `alpha_{-1} = -1` and the sequence values elsewhere.
    pub fn eval(&self, alpha: &VerblunskySeq) -> Complex64 {
        self.terms.iter().map(|(m, c)| m.eval(alpha) * *c as f64).sum()
    }

    /// The same polynomial over [`alpha_table`].
    pub fn to_laurent(&self) -> LaurentPoly {
        let table = alpha_table(self.n);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; table.len()];
            for &i in &m.alpha {
                e[alpha_slot(i)] += 1;
            }
            for &i in &m.conj {
                e[alpha_slot(i) + 1] += 1;
            }
            (e, GaussRat::from_int(*c))
        });
        LaurentPoly::from_terms(&table, terms)
    }
}

fn alpha_slot(i: i32) -> usize {
    2 * (i + 1) as usize
}

/// `alpham1, conj_alpham1, alpha0, conj_alpha0, ..., alpha{n-1}, conj_alpha{n-1}`.
pub fn alpha_table(n: usize) -> Arc<VarTable> {
    let mut entries = Vec::with_capacity(2 * n + 2);
    for m in -1..n as i32 {
        let name = if m < 0 { "alpham1".to_string() } else { format!("alpha{m}") };
        let slot = alpha_slot(m);
        entries.push((name.clone(), VarKind::Conjugate(slot + 1)));
        entries.push((format!("conj_{name}"), VarKind::Conjugate(slot)));
    }
    VarTable::new(entries).expect("well-formed alpha table")
}

struct Walker<'a> {
    n: i32,
    l: usize,
    start: i32,
    degree: Option<usize>,
    alpha: Vec<i32>,
    conj: Vec<i32>,
    out: &'a mut BTreeMap<AlphaMonomial, i64>,
}

impl Walker<'_> {
    fn deg(&self) -> usize {
        self.alpha.len() + self.conj.len()
    }

    /// Closed walks of `U~`, whose entries are `-alpha_{v-1} conj(alpha_c)` for
    /// `c >= v` and `1 - alpha_c conj(alpha_c)` for `c = v - 1`.
    fn step(&mut self, v: i32, taken: usize, sign: i64) {
        let left = self.l - taken;
        if left == 0 {
            if v == self.start && self.degree.is_none_or(|d| d == self.deg()) {
                let m = AlphaMonomial::new(self.alpha.clone(), self.conj.clone());
                *self.out.entry(m).or_insert(0) += sign;
            }
            return;
        }
        let after = (left - 1) as i32;
        let cap = self.degree.unwrap_or(usize::MAX);
        // upward or diagonal
        if self.deg() + 2 <= cap {
            let hi = (self.start + after).min(self.n - 1);
            for c in v..=hi {
                if c < self.start && after == 0 {
                    continue;
                }
                self.alpha.push(v - 1);
                self.conj.push(c);
                self.step(c, taken + 1, -sign);
                self.alpha.pop();
                self.conj.pop();
            }
        }
        // down
        if v >= 1 {
            let c = v - 1;
            let reachable = c >= self.start || after >= 1;
            let needs_up = c < self.start;
            if reachable && (!needs_up || self.deg() + 2 <= cap) {
                self.step(c, taken + 1, sign);
            }
            if reachable && self.deg() + 2 + if needs_up { 2 } else { 0 } <= cap {
                self.alpha.push(c);
                self.conj.push(c);
                self.step(c, taken + 1, -sign);
                self.alpha.pop();
                self.conj.pop();
            }
        }
    }
}

/// `Tr(U_N^l)`, or its homogeneous part of degree `degree` when given.
pub fn trace_symbolic(l: usize, n: usize, degree: Option<usize>) -> Result<SymbolicTrace, AlgebraError> {
    if l == 0 || n == 0 {
        return Err(AlgebraError::Precondition("trace needs l >= 1 and N >= 1".into()));
    }
    let k = degree.map_or(l, |d| d / 2);
    if k * l > TRACE_WORK_LIMIT {
        return Err(AlgebraError::Precondition(format!("k*l = {} exceeds the limit {TRACE_WORK_LIMIT}", k * l)));
    }
    let mut terms = BTreeMap::new();
    for start in 0..n as i32 {
        let mut w = Walker {
            n: n as i32,
            l,
            start,
            degree,
            alpha: Vec::with_capacity(2 * l),
            conj: Vec::with_capacity(2 * l),
            out: &mut terms,
        };
        w.step(start, 0, 1);
    }
    terms.retain(|_, c| *c != 0);
    Ok(SymbolicTrace { n, l, terms })
}

/// `g_{2k}(Tr(U~_N^l))` over `N_sym` symbols.
pub fn g2k_trace_symbolic(k: usize, l: usize, n_sym: usize) -> Result<SymbolicTrace, AlgebraError> {
    let d = l;
    if n_sym < l + 6 * d {
        return Err(AlgebraError::Precondition(format!("N_sym = {n_sym} is below l + 6d = {}", l + 6 * d)));
    }
    trace_symbolic(l, n_sym, Some(2 * k))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientMismatch {
    pub monomial: String,
    pub trace: String,
    pub predicted: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma5Report {
    pub k: usize,
    pub l: usize,
    pub n_sym: usize,
    /// Interior monomial classes compared.
    pub classes: usize,
    pub mismatches: Vec<CoefficientMismatch>,
}

impl Lemma5Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `(-1)^k (l/k) sum_n sum_{D_{2k,l}} prod alpha_{n+i_p} conj(alpha_{n+j_p})`,
/// restricted to monomials supported in `[lo, hi]`.
pub fn lemma5_prediction(k: usize, l: usize, lo: i32, hi: i32) -> BTreeMap<AlphaMonomial, BigRational> {
    let weight = BigRational::new(BigInt::from(if k.is_multiple_of(2) { l as i64 } else { -(l as i64) }), BigInt::from(k));
    let tuples = enum_d(k, l as u32);
    let mut out: BTreeMap<AlphaMonomial, BigRational> = BTreeMap::new();
    let span = 2 * l as i32;
    for n in lo - span..=hi + span {
        for t in &tuples {
            let m = AlphaMonomial::new(t.0.iter().map(|p| n + p.0).collect(), t.0.iter().map(|p| n + p.1).collect());
            if m.within(lo, hi) {
                *out.entry(m).or_insert_with(BigRational::zero) += &weight;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Compares interior coefficients of the degree-`2k` part of `Tr(U~^l)` with
/// the `D_{2k,l}` prediction, window `[2d, N_sym - 2d]` with `d = l`.
pub fn lemma5_check(k: usize, l: usize) -> Result<Lemma5Report, AlgebraError> {
    let d = l;
    let n_sym = l + 6 * d;
    let (lo, hi) = (2 * d as i32, (n_sym - 2 * d) as i32);
    let trace = g2k_trace_symbolic(k, l, n_sym)?;
    let got: BTreeMap<AlphaMonomial, BigRational> = trace
        .terms
        .into_iter()
        .filter(|(m, _)| m.within(lo, hi))
        .map(|(m, c)| (m, BigRational::from_integer(BigInt::from(c))))
        .collect();
    let want = lemma5_prediction(k, l, lo, hi);
    let zero = BigRational::zero();
    let mut mismatches = Vec::new();
    let keys: std::collections::BTreeSet<&AlphaMonomial> = got.keys().chain(want.keys()).collect();
    for m in &keys {
        let g = got.get(*m).unwrap_or(&zero);
        let w = want.get(*m).unwrap_or(&zero);
        if g != w {
            mismatches.push(CoefficientMismatch { monomial: m.to_string(), trace: g.to_string(), predicted: w.to_string() });
        }
    }
    Ok(Lemma5Report { k, l, n_sym, classes: keys.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opuc::ggt_matrix;

    fn mono(a: &[i32], c: &[i32]) -> AlphaMonomial {
        AlphaMonomial::new(a.to_vec(), c.to_vec())
    }

    #[test]
    fn first_power_is_diagonal_sum() {
        let t = trace_symbolic(1, 6, None).unwrap();
        assert_eq!(t.terms.len(), 6);
        for m in 0..6 {
            assert_eq!(t.terms[&mono(&[m - 1], &[m])], -1);
        }
    }

    #[test]
    fn second_power_degree_two() {
        let t = trace_symbolic(2, 14, Some(2)).unwrap();
        assert_eq!(t.terms[&mono(&[5], &[7])], -2);
        let t4 = trace_symbolic(2, 14, Some(4)).unwrap();
        assert_eq!(t4.terms[&mono(&[5, 6], &[6, 7])], 2);
    }

    #[test]
    fn matches_matrix_powers() {
        for n in 1..=8 {
            let a = VerblunskySeq::random_finite(n as u64, n, 0.9);
            let u = ggt_matrix(&a, n).unwrap();
            let dense = u.power_traces_dense(4);
            for l in 1..=4 {
                let s = trace_symbolic(l, n, None).unwrap().eval(&a);
                assert!((s - dense[l - 1]).norm() < 1e-10, "N={n} l={l}: {s} vs {}", dense[l - 1]);
            }
        }
    }

    #[test]
    fn lemma5_small_cases() {
        for (k, l) in [(1, 1), (1, 3), (2, 2), (2, 3)] {
            let r = lemma5_check(k, l).unwrap();
            assert!(r.passed(), "k={k} l={l}: {:?}", &r.mismatches[..r.mismatches.len().min(3)]);
            assert!(r.classes > 0);
        }
        let p = lemma5_prediction(1, 3, 6, 15);
        assert_eq!(p[&mono(&[8], &[11])], BigRational::from_integer((-3).into()));
        let p = lemma5_prediction(2, 2, 4, 10);
        assert_eq!(p[&mono(&[5, 6], &[6, 7])], BigRational::from_integer(2.into()));
    }

    #[test]
    fn laurent_form() {
        let t = trace_symbolic(1, 2, None).unwrap();
        let p = t.to_laurent();
        assert_eq!(p.len(), 2);
        let tab = p.table().clone();
        let s = tab.index_of("alpham1").unwrap();
        assert_eq!(tab.kind(s), VarKind::Conjugate(s + 1));
        assert_eq!(p.conjugate().conjugate(), p);
    }
}
