//! Sparse multivariate Laurent polynomials over the Gaussian rationals.
//!
//! Every polynomial is tied to a [`VarTable`] that fixes the variable order
//! and each variable's role. Pair variables `x1, y1, ..., xk, yk` take part in
//! the quotient relation `prod(x_i y_i) = 1`; unit symbols `z_j` stand for
//! `e^{i theta_j}` and conjugate to their inverses.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration is
//! in lexicographic order on exponents (variables in table order). That order
//! is the canonical term order for printing and diffing.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::coeff::GaussRat;
use crate::error::{AlgebraError, ParseError};

pub type Exponents = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `x_p` (1-based pair index); conjugates to `y_p`.
    PairX(usize),
    /// `y_p`; conjugates to `x_p`.
    PairY(usize),
    /// Unit-modulus symbol; conjugates to its inverse.
    Unit,
    /// Independent symbol whose conjugate is the variable at the given slot.
    Conjugate(usize),
    /// Real symbol, fixed by conjugation.
    Real,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    pairs: usize,
}

impl VarTable {
    /// Builds a table from `(name, kind)` entries.
    ///
    /// Pair variables, when present, must form complete `x_p, y_p` pairs for
    /// `p = 1..k`; conjugate partners must point at each other.
    pub fn new(entries: Vec<(String, VarKind)>) -> Result<Arc<Self>, AlgebraError> {
        let mut names = Vec::with_capacity(entries.len());
        let mut kinds = Vec::with_capacity(entries.len());
        for (name, kind) in entries {
            if names.contains(&name) {
                return Err(AlgebraError::Precondition(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            kinds.push(kind);
        }
        let pairs = kinds.iter().filter(|k| matches!(k, VarKind::PairX(_))).count();
        for p in 1..=pairs {
            let xs = kinds.iter().filter(|&&k| k == VarKind::PairX(p)).count();
            let ys = kinds.iter().filter(|&&k| k == VarKind::PairY(p)).count();
            if xs != 1 || ys != 1 {
                return Err(AlgebraError::MissingPairs(pairs));
            }
        }
        if kinds.iter().filter(|k| matches!(k, VarKind::PairY(_))).count() != pairs {
            return Err(AlgebraError::MissingPairs(pairs));
        }
        for (i, k) in kinds.iter().enumerate() {
            if let VarKind::Conjugate(j) = *k {
                if j >= kinds.len() || kinds[j] != VarKind::Conjugate(i) {
                    return Err(AlgebraError::Precondition(format!(
                        "conjugate partner of `{}` is not mutual",
                        names[i]
                    )));
                }
            }
        }
        Ok(Arc::new(VarTable { names, kinds, pairs }))
    }

    /// `x1, y1, ..., xk, yk, z1, ..., z_units`.
    pub fn algebra(k: usize, units: usize) -> Arc<Self> {
        Self::algebra_with(k, units, &[])
    }

    /// Like [`VarTable::algebra`] with extra real variables appended.
    pub fn algebra_with(k: usize, units: usize, extra: &[&str]) -> Arc<Self> {
        let mut entries = Vec::new();
        for p in 1..=k {
            entries.push((format!("x{p}"), VarKind::PairX(p)));
            entries.push((format!("y{p}"), VarKind::PairY(p)));
        }
        for j in 1..=units {
            entries.push((format!("z{j}"), VarKind::Unit));
        }
        for e in extra {
            entries.push((e.to_string(), VarKind::Real));
        }
        Self::new(entries).expect("well-formed algebra table")
    }

    /// Real variables only.
    pub fn plain(names: &[&str]) -> Arc<Self> {
        Self::new(names.iter().map(|n| (n.to_string(), VarKind::Real)).collect())
            .expect("distinct names")
    }

    /// Returns a new table with `extra` real variables appended.
    pub fn extended(&self, extra: &[&str]) -> Result<Arc<Self>, AlgebraError> {
        let mut entries: Vec<(String, VarKind)> =
            self.names.iter().cloned().zip(self.kinds.iter().copied()).collect();
        for e in extra {
            entries.push((e.to_string(), VarKind::Real));
        }
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.kinds[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of `(x_p, y_p)` pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    pub fn x(&self, p: usize) -> usize {
        self.kinds.iter().position(|&k| k == VarKind::PairX(p)).expect("pair index in range")
    }

    pub fn y(&self, p: usize) -> usize {
        self.kinds.iter().position(|&k| k == VarKind::PairY(p)).expect("pair index in range")
    }

    /// Slots of all pair variables.
    pub fn pair_slots(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| matches!(self.kinds[i], VarKind::PairX(_) | VarKind::PairY(_)))
            .collect()
    }

    /// Slots of unit symbols in table order.
    pub fn unit_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i] == VarKind::Unit).collect()
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// A Laurent polynomial with exact coefficients; no stored zeros.
#[derive(Clone)]
pub struct LaurentPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Exponents, GaussRat>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        VarTable::same(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl LaurentPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        LaurentPoly { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, GaussRat::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: GaussRat) -> Self {
        Self::monomial(table, vec![0; table.len()], c)
    }

    pub fn monomial(table: &Arc<VarTable>, exps: Exponents, c: GaussRat) -> Self {
        assert_eq!(exps.len(), table.len(), "exponent arity must match the table");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { table: table.clone(), terms }
    }

    /// The single variable at `slot`.
    pub fn var(table: &Arc<VarTable>, slot: usize) -> Self {
        Self::var_pow(table, slot, 1)
    }

    pub fn var_pow(table: &Arc<VarTable>, slot: usize, e: i32) -> Self {
        let mut exps = vec![0; table.len()];
        exps[slot] = e;
        Self::monomial(table, exps, GaussRat::one())
    }

    /// Variable looked up by name; panics if absent.
    pub fn named(table: &Arc<VarTable>, name: &str) -> Self {
        let slot = table.index_of(name).unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Self::var(table, slot)
    }

    pub fn from_terms<I>(table: &Arc<VarTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, GaussRat)>,
    {
        let mut p = Self::zero(table);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> GaussRat {
        self.terms.get(exps).cloned().unwrap_or_else(GaussRat::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((exps, c))` for a single-term polynomial.
    pub fn as_monomial(&self) -> Option<(&Exponents, &GaussRat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, exps: Exponents, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<(), AlgebraError> {
        if VarTable::same(&self.table, &other.table) {
            Ok(())
        } else {
            Err(AlgebraError::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_table(other)?;
        let (small, large) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Exponents, GaussRat> = HashMap::with_capacity(small.len() * large.len());
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &c,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { table: self.table.clone(), terms })
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        LaurentPoly { table: self.table.clone(), terms }
    }

    /// Multiplies by the monomial `prod var^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { table: self.table.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a single-term polynomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        let inv = c.inv()?;
        Some(Self::monomial(&self.table, e.iter().map(|x| -x).collect(), inv))
    }

    /// Integer power; negative exponents need an invertible (single-term) base.
    pub fn pow_i(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.monomial_inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Applies the table's conjugation: `i -> -i`, `z -> 1/z`, `x_p <-> y_p`.
    pub fn conjugate(&self) -> Self {
        let t = &self.table;
        let mut out = Self::zero(t);
        for (e, c) in &self.terms {
            let mut ne = vec![0; e.len()];
            for (i, &x) in e.iter().enumerate() {
                match t.kind(i) {
                    VarKind::PairX(p) => ne[t.y(p)] += x,
                    VarKind::PairY(p) => ne[t.x(p)] += x,
                    VarKind::Unit => ne[i] -= x,
                    VarKind::Conjugate(j) => ne[j] += x,
                    VarKind::Real => ne[i] += x,
                }
            }
            out.add_term(ne, &c.conj());
        }
        out
    }

    /// Canonical representative modulo `prod(x_i y_i) - 1`: every monomial's
    /// pair-exponent subvector is shifted along the all-ones direction until
    /// its minimum entry is 0. Non-pair variables are untouched.
    pub fn normal_form(&self) -> Self {
        let slots = self.table.pair_slots();
        if slots.is_empty() {
            return self.clone();
        }
        let mut out = Self::zero(&self.table);
        for (e, c) in &self.terms {
            let m = slots.iter().map(|&s| e[s]).min().unwrap();
            let mut ne = e.clone();
            for &s in &slots {
                ne[s] -= m;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Multiplies by `(prod x_i y_i)^t`.
    pub fn pair_shift(&self, t: i32) -> Self {
        let mut s = vec![0; self.table.len()];
        for slot in self.table.pair_slots() {
            s[slot] = t;
        }
        self.shift(&s)
    }

    /// Minimum exponent of each variable over all terms (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(acc) => acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.table.len()])
    }

    /// `Err(NegativeExponent)` unless every exponent of the listed slots is >= 0.
    pub fn require_nonnegative(&self, slots: &[usize]) -> Result<(), AlgebraError> {
        let mins = self.min_exponents();
        for &s in slots {
            if mins[s] < 0 {
                return Err(AlgebraError::NegativeExponent(self.table.name(s).to_string()));
            }
        }
        Ok(())
    }

    /// Exact quotient `self / divisor`, or `NonDivisible`.
    ///
    /// Both operands are stripped of their monomial content, the resulting
    /// ordinary polynomials are divided with lex leading terms, and the
    /// monomial ratio is restored. Over a single divisor the remainder is zero
    /// exactly when the division is exact, so the loop stops at the first
    /// leading term that the divisor's leading term does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.check_table(divisor)?;
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        let mp = self.min_exponents();
        let mq = divisor.min_exponents();
        let neg = |v: &Exponents| v.iter().map(|x| -x).collect::<Exponents>();
        let mut rem = self.shift(&neg(&mp));
        let q = divisor.shift(&neg(&mq));
        let (lq_e, lq_c) = q.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let lq_inv = lq_c.inv().unwrap();
        let mut quot = Self::zero(&self.table);
        while let Some((le, lc)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if le.iter().zip(&lq_e).any(|(a, b)| a < b) {
                return Err(AlgebraError::NonDivisible(format!(
                    "leading term {} of the remainder is not divisible by {}",
                    fmt_monomial(&self.table, &le),
                    fmt_monomial(&self.table, &lq_e)
                )));
            }
            let te: Exponents = le.iter().zip(&lq_e).map(|(a, b)| a - b).collect();
            let tc = &lc * &lq_inv;
            for (qe, qc) in &q.terms {
                let e: Exponents = qe.iter().zip(&te).map(|(a, b)| a + b).collect();
                rem.add_term(e, &-(qc * &tc));
            }
            quot.add_term(te, &tc);
        }
        let back: Exponents = mp.iter().zip(&mq).map(|(a, b)| a - b).collect();
        Ok(quot.shift(&back))
    }

    /// Simultaneous substitution `var -> binding`; bindings share the table.
    pub fn substitute(&self, bindings: &[(usize, LaurentPoly)]) -> Result<Self, AlgebraError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        for (_, b) in bindings {
            self.check_table(b)?;
        }
        let inverses: Vec<Option<LaurentPoly>> =
            bindings.iter().map(|(_, b)| b.monomial_inverse()).collect();
        // group terms by the exponents of the bound variables
        let mut groups: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Vec<i32> = bindings.iter().map(|(s, _)| e[*s]).collect();
            let mut rest = e.clone();
            for (s, _) in bindings {
                rest[*s] = 0;
            }
            groups.entry(key).or_insert_with(|| Self::zero(&self.table)).add_term(rest, c);
        }
        let mut power_cache: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = Self::zero(&self.table);
        for (key, rest) in groups {
            let mut acc = rest;
            for (bi, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match power_cache.get(&(bi, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if e > 0 {
                            bindings[bi].1.pow(e as u32)
                        } else {
                            inverses[bi]
                                .as_ref()
                                .ok_or_else(|| {
                                    AlgebraError::NonInvertibleBinding(
                                        self.table.name(bindings[bi].0).to_string(),
                                    )
                                })?
                                .pow(e.unsigned_abs())
                        };
                        power_cache.insert((bi, e), p.clone());
                        p
                    }
                };
                acc = &acc * &pw;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Moves the polynomial onto `target`, matching variables by name.
    /// Variables missing from `target` must not occur.
    pub fn reindex(&self, target: &Arc<VarTable>) -> Result<Self, AlgebraError> {
        if VarTable::same(&self.table, target) {
            return Ok(LaurentPoly { table: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> =
            (0..self.table.len()).map(|i| target.index_of(self.table.name(i))).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = x,
                    None => return Err(AlgebraError::UnknownVariable(self.table.name(i).to_string())),
                }
            }
            out.add_term(ne, c);
        }
        Ok(out)
    }

    /// Terms whose exponent vector satisfies `keep`.
    pub fn filter_terms<F: Fn(&Exponents) -> bool>(&self, keep: F) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        LaurentPoly { table: self.table.clone(), terms }
    }

    /// Numeric value with every variable assigned.
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.table.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(values)
                    .fold(c.to_complex(), |acc, (&x, v)| if x == 0 { acc } else { acc * v.powi(x) })
            })
            .sum()
    }

    /// Replaces the listed variables by numbers, keeping the others symbolic.
    pub fn specialize(&self, assignments: &[(usize, Complex64)]) -> NumericPoly {
        let mut acc: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut val = c.to_complex();
            let mut ne = e.clone();
            for &(s, v) in assignments {
                if ne[s] != 0 {
                    val *= v.powi(ne[s]);
                    ne[s] = 0;
                }
            }
            *acc.entry(ne).or_insert_with(|| Complex64::new(0.0, 0.0)) += val;
        }
        NumericPoly { table: self.table.clone(), terms: acc.into_iter().collect() }
    }
}

/// Divided difference `D(p_1, ..., p_n)(f) = sum_i f(p_i) / prod_{j != i} (p_j - p_i)`
/// of `f` viewed as univariate in `var` (other variables act as parameters).
///
/// Evaluated by the recursion
/// `D(p1, ..., pn) = (D(p1, p3, ..., pn) - D(p2, p3, ..., pn)) / (p2 - p1)`
/// with exact division at every step, so a failed division means the input
/// does not produce a polynomial. Subsets are memoised.
pub fn divided_diff(points: &[LaurentPoly], f: &LaurentPoly, var: usize) -> Result<LaurentPoly, AlgebraError> {
    if points.is_empty() {
        return Err(AlgebraError::Precondition("divided difference needs at least one point".into()));
    }
    for p in points {
        f.check_table(p)?;
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(AlgebraError::DuplicatePoint);
            }
        }
    }
    let mut memo: HashMap<Vec<usize>, LaurentPoly> = HashMap::new();
    dd_rec(points, f, var, (0..points.len()).collect(), &mut memo)
}

fn dd_rec(
    points: &[LaurentPoly],
    f: &LaurentPoly,
    var: usize,
    idx: Vec<usize>,
    memo: &mut HashMap<Vec<usize>, LaurentPoly>,
) -> Result<LaurentPoly, AlgebraError> {
    if let Some(v) = memo.get(&idx) {
        return Ok(v.clone());
    }
    let out = if idx.len() == 1 {
        f.substitute(&[(var, points[idx[0]].clone())])?
    } else {
        let (i1, i2) = (idx[0], idx[1]);
        let without2: Vec<usize> = idx.iter().copied().filter(|&i| i != i2).collect();
        let without1: Vec<usize> = idx.iter().copied().filter(|&i| i != i1).collect();
        let a = dd_rec(points, f, var, without2, memo)?;
        let b = dd_rec(points, f, var, without1, memo)?;
        let num = &a - &b;
        let den = &points[i2] - &points[i1];
        num.exact_div(&den)?
    };
    memo.insert(idx, out.clone());
    Ok(out)
}

/// A polynomial whose coefficients have been specialised to floating point.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    pub table: Arc<VarTable>,
    pub terms: Vec<(Exponents, Complex64)>,
}

impl NumericPoly {
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(values).fold(*c, |acc, (&x, v)| if x == 0 { acc } else { acc * v.powi(x) }))
            .sum()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            /// Panics when the operands use different tables.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("variable table mismatch")
            }
        }
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("variable table mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPoly { table: self.table.clone(), terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_monomial(table: &VarTable, e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| format!("{}^{}", table.name(i), x))
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// `(a/b+c/d*i)*x1^e1*y1^e2 + ...` in canonical term order; `0` for zero.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*{}", c, fmt_monomial(&self.table, e))?;
        }
        Ok(())
    }
}

impl LaurentPoly {
    /// Parses the [`Display`](fmt::Display) format back over `table`.
    pub fn parse(table: &Arc<VarTable>, s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let mut out = Self::zero(table);
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let term = term.trim();
            let body = term.strip_prefix('(').ok_or_else(|| ParseError::Monomial(term.to_string()))?;
            let (coef, rest) = body.split_once(")*").ok_or_else(|| ParseError::Monomial(term.to_string()))?;
            let c: GaussRat = coef.parse()?;
            let mut exps = vec![0; table.len()];
            if rest != "1" {
                for factor in rest.split('*') {
                    let (name, e) = factor.split_once('^').ok_or_else(|| ParseError::Monomial(factor.to_string()))?;
                    let slot = table.index_of(name).ok_or_else(|| ParseError::UnknownVariable(name.to_string()))?;
                    exps[slot] += e.parse::<i32>().map_err(|_| ParseError::Monomial(factor.to_string()))?;
                }
            }
            out.add_term(exps, &c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> Arc<VarTable> {
        VarTable::algebra(1, 1)
    }

    fn q(a: i64, b: i64) -> GaussRat {
        GaussRat::frac(a, b)
    }

    #[test]
    fn distributive_expansion() {
        let t = k1();
        let x = LaurentPoly::named(&t, "x1");
        let y = LaurentPoly::named(&t, "y1");
        let z = LaurentPoly::named(&t, "z1");
        let zi = LaurentPoly::var_pow(&t, t.index_of("z1").unwrap(), -1);
        let p = &(&x - &zi) * &(&y - &z);
        let expect = &(&(&(&x * &y) - &(&z * &x)) - &(&zi * &y)) + &LaurentPoly::one(&t);
        assert_eq!(p, expect);
        assert_eq!(&p * &LaurentPoly::one(&t), p);
    }

    #[test]
    fn conjugate_table() {
        let t = k1();
        let x = LaurentPoly::named(&t, "x1");
        let zi = LaurentPoly::var_pow(&t, t.index_of("z1").unwrap(), -1);
        let y = LaurentPoly::named(&t, "y1");
        let z = LaurentPoly::named(&t, "z1");
        assert_eq!((&x - &zi).conjugate(), &y - &z);
        // numeric cross-check at x1 = conj(a), y1 = a, z1 = e^{i theta}
        let a = Complex64::new(0.3, -0.4);
        let w = Complex64::from_polar(1.0, 0.7);
        let p = &(&x - &zi) * &LaurentPoly::constant(&t, GaussRat::new(q(1, 3).re, q(2, 5).re));
        let vals = [a.conj(), a, w];
        let lhs = p.conjugate().eval(&vals);
        let rhs = p.eval(&vals).conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn normal_form_examples() {
        let t = k1();
        let mono = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^1*y1^2").unwrap();
        assert_eq!(mono.normal_form(), LaurentPoly::named(&t, "y1"));
        let rel = &(&LaurentPoly::named(&t, "x1") * &LaurentPoly::named(&t, "y1")) - &LaurentPoly::one(&t);
        assert!(rel.normal_form().is_zero());
        let t2 = VarTable::algebra(2, 0);
        let rel2 = LaurentPoly::parse(&t2, "(1/1+0/1*i)*x1^1*y1^1*x2^1*y2^1 + (-1/1+0/1*i)*1").unwrap();
        assert!(rel2.normal_form().is_zero());
        let p = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^1*y1^2 + (-1/1+0/1*i)*y1^1").unwrap();
        assert!(p.normal_form().is_zero());
    }

    #[test]
    fn exact_division_examples() {
        let t = VarTable::plain(&["x1", "x2"]);
        let p = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^2 + (-1/1+0/1*i)*x2^2").unwrap();
        let d = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^1 + (-1/1+0/1*i)*x2^1").unwrap();
        assert_eq!(p.exact_div(&d).unwrap(), LaurentPoly::parse(&t, "(1/1+0/1*i)*x2^1 + (1/1+0/1*i)*x1^1").unwrap());
        let p3 = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^3 + (-1/1+0/1*i)*x2^3").unwrap();
        let expect = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^2 + (1/1+0/1*i)*x1^1*x2^1 + (1/1+0/1*i)*x2^2").unwrap();
        assert_eq!(p3.exact_div(&d).unwrap(), expect);
        let bad = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^2 + (1/1+0/1*i)*x2^1").unwrap();
        assert!(matches!(bad.exact_div(&d), Err(AlgebraError::NonDivisible(_))));
        assert!(matches!(p.exact_div(&LaurentPoly::zero(&t)), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn exact_division_with_negative_exponents() {
        let t = VarTable::plain(&["a", "b"]);
        let p = LaurentPoly::parse(&t, "(1/1+0/1*i)*a^-2 + (-1/1+0/1*i)*b^-2").unwrap();
        let d = LaurentPoly::parse(&t, "(1/1+0/1*i)*a^1 + (-1/1+0/1*i)*b^1").unwrap();
        // (a^-2 - b^-2)/(a - b) = -(a + b)/(a^2 b^2)
        let expect = LaurentPoly::parse(&t, "(-1/1+0/1*i)*a^-2*b^-1 + (-1/1+0/1*i)*a^-1*b^-2").unwrap();
        assert_eq!(p.exact_div(&d).unwrap(), expect);
    }

    #[test]
    fn substitution_examples() {
        let t = VarTable::algebra_with(1, 1, &["u", "v"]);
        let xy = &LaurentPoly::named(&t, "x1") * &LaurentPoly::named(&t, "y1");
        let z = LaurentPoly::named(&t, "z1");
        let zi = z.monomial_inverse().unwrap();
        let bx = &LaurentPoly::named(&t, "u") + &zi;
        let by = &LaurentPoly::named(&t, "v") + &z;
        let out = xy.substitute(&[(t.x(1), bx), (t.y(1), by)]).unwrap();
        let expect = LaurentPoly::parse(
            &t,
            "(1/1+0/1*i)*u^1*v^1 + (1/1+0/1*i)*z1^1*u^1 + (1/1+0/1*i)*z1^-1*v^1 + (1/1+0/1*i)*1",
        )
        .unwrap();
        assert_eq!(out, expect);
        assert_eq!(xy.substitute(&[]).unwrap(), xy);
    }

    #[test]
    fn substitution_into_univariate() {
        let t = VarTable::algebra_with(1, 0, &["w"]);
        let w = t.index_of("w").unwrap();
        // 1 - (w + 1/w)/2 at w = x1 y1^2
        let h = LaurentPoly::parse(&t, "(-1/2+0/1*i)*w^-1 + (1/1+0/1*i)*1 + (-1/2+0/1*i)*w^1").unwrap();
        let arg = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^1*y1^2").unwrap();
        let out = h.substitute(&[(w, arg)]).unwrap();
        let expect =
            LaurentPoly::parse(&t, "(-1/2+0/1*i)*x1^-1*y1^-2 + (1/1+0/1*i)*1 + (-1/2+0/1*i)*x1^1*y1^2").unwrap();
        assert_eq!(out, expect);
        let non_inv = LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^1 + (1/1+0/1*i)*1").unwrap();
        assert!(matches!(h.substitute(&[(w, non_inv)]), Err(AlgebraError::NonInvertibleBinding(_))));
    }

    #[test]
    fn divided_difference_examples() {
        let t = VarTable::plain(&["x", "x1", "x2", "x3"]);
        let pts: Vec<_> = ["x1", "x2", "x3"].iter().map(|n| LaurentPoly::named(&t, n)).collect();
        let f = LaurentPoly::parse(&t, "(1/1+0/1*i)*x^2").unwrap();
        assert_eq!(divided_diff(&pts[..1], &f, 0).unwrap(), LaurentPoly::parse(&t, "(1/1+0/1*i)*x1^2").unwrap());
        assert_eq!(
            divided_diff(&pts[..2], &f, 0).unwrap(),
            LaurentPoly::parse(&t, "(-1/1+0/1*i)*x2^1 + (-1/1+0/1*i)*x1^1").unwrap()
        );
        let lin = LaurentPoly::named(&t, "x");
        assert!(divided_diff(&pts, &lin, 0).unwrap().is_zero());
        let dup = vec![pts[0].clone(), pts[0].clone()];
        assert_eq!(divided_diff(&dup, &f, 0), Err(AlgebraError::DuplicatePoint));
    }

    #[test]
    fn table_mismatch_is_reported() {
        let a = LaurentPoly::one(&VarTable::algebra(1, 0));
        let b = LaurentPoly::one(&VarTable::algebra(2, 0));
        assert_eq!(a.checked_mul(&b), Err(AlgebraError::VarTableMismatch));
    }

    #[test]
    fn text_round_trip() {
        let t = VarTable::algebra(2, 1);
        let s = "(-3/4-1/2*i)*y2^-1*z1^3 + (1/1+0/1*i)*x1^2*y1^1";
        let p = LaurentPoly::parse(&t, s).unwrap();
        assert_eq!(LaurentPoly::parse(&t, &p.to_string()).unwrap(), p);
        assert_eq!(LaurentPoly::zero(&t).to_string(), "0");
    }
}
