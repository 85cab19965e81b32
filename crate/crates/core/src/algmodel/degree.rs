//! The capped Taylor degree `L_{2k}` at `(z1^{-1}, z1, ...)` and the search for
//! representatives of a class that raise it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::GaussRat;
use crate::error::AlgebraError;
use crate::laurent::{Exponents, LaurentPoly};

fn center_bindings(p: &LaurentPoly) -> Result<(LaurentPoly, Vec<(usize, usize)>), AlgebraError> {
    let table = p.table();
    let k = table.pair_count();
    if k == 0 {
        return Err(AlgebraError::MissingPairs(0));
    }
    let z = *table
        .unit_slots()
        .first()
        .ok_or_else(|| AlgebraError::Precondition("the Taylor center needs the unit symbol z1".into()))?;
    p.require_nonnegative(&table.pair_slots())?;
    let names: Vec<String> = (1..=k).flat_map(|q| [format!("u{q}"), format!("v{q}")]).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ext = table.extended(&refs)?;
    let pe = p.reindex(&ext)?;
    let z_ext = ext.index_of(table.name(z)).unwrap();
    let mut bindings = Vec::with_capacity(2 * k);
    let mut uv = Vec::with_capacity(k);
    for q in 1..=k {
        let (u, v) = (ext.index_of(&format!("u{q}")).unwrap(), ext.index_of(&format!("v{q}")).unwrap());
        bindings.push((ext.x(q), &LaurentPoly::var(&ext, u) + &LaurentPoly::var_pow(&ext, z_ext, -1)));
        bindings.push((ext.y(q), &LaurentPoly::var(&ext, v) + &LaurentPoly::var(&ext, z_ext)));
        uv.push((u, v));
    }
    Ok((pe.substitute(&bindings)?, uv))
}

/// `min over Taylor terms of sum_p (deg_{u_p} /\ d + deg_{v_p} /\ d)` after
/// `x_p -> u_p + z1^{-1}`, `y_p -> v_p + z1`. `None` for the zero polynomial.
pub fn l_degree(p: &LaurentPoly, d: usize) -> Result<Option<u32>, AlgebraError> {
    let (expanded, uv) = center_bindings(p)?;
    let d = d as i32;
    Ok(expanded
        .terms()
        .map(|(e, _)| uv.iter().map(|&(u, v)| e[u].min(d) + e[v].min(d)).sum::<i32>() as u32)
        .min())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    #[serde(skip)]
    pub representative: Option<LaurentPoly>,
    pub representative_text: String,
    pub initial: Option<u32>,
    pub achieved: Option<u32>,
}

fn binom(n: i32, r: i32) -> BigInt {
    if r < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Reduced row echelon form built one row at a time, with two right-hand sides.
struct Echelon {
    cols: usize,
    rows: Vec<(usize, Vec<BigRational>, [BigRational; 2])>,
}

impl Echelon {
    fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    /// Returns `false` when the row makes the system inconsistent.
    fn push(&mut self, mut row: Vec<BigRational>, mut rhs: [BigRational; 2]) -> bool {
        for (pc, prow, prhs) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for c in 0..self.cols {
                if !prow[c].is_zero() {
                    row[c] -= &f * &prow[c];
                }
            }
            rhs[0] -= &f * &prhs[0];
            rhs[1] -= &f * &prhs[1];
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return rhs[0].is_zero() && rhs[1].is_zero();
        };
        let inv = row[pc].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        rhs[0] *= &inv;
        rhs[1] *= &inv;
        for (_, prow, prhs) in self.rows.iter_mut() {
            if prow[pc].is_zero() {
                continue;
            }
            let f = prow[pc].clone();
            for c in 0..self.cols {
                if !row[c].is_zero() {
                    prow[c] -= &f * &row[c];
                }
            }
            prhs[0] -= &f * &rhs[0];
            prhs[1] -= &f * &rhs[1];
        }
        self.rows.push((pc, row, rhs));
        true
    }

    /// Pivot variables from the right-hand sides, free variables zero.
    fn solution(&self) -> Vec<GaussRat> {
        let mut x = vec![GaussRat::zero(); self.cols];
        for (pc, _, rhs) in &self.rows {
            x[*pc] = GaussRat::new(rhs[0].clone(), rhs[1].clone());
        }
        x
    }
}

struct Group {
    /// Full exponent vectors of the reduced monomials.
    exps: Vec<Exponents>,
    /// `(beta_p, gamma_p)` per pair.
    pairs: Vec<Vec<(i32, i32)>>,
    coeffs: Vec<GaussRat>,
}

/// Taylor multi-indices `(a_1, b_1, ..., a_k, b_k)` with entries up to `bound`
/// and capped degree below `t`.
fn low_multi_indices(k: usize, bound: i32, d: i32, t: i32) -> Vec<Vec<i32>> {
    fn rec(left: usize, bound: i32, d: i32, room: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in 0..=bound {
            let c = a.min(d);
            if c > room {
                break;
            }
            cur.push(a);
            rec(left - 1, bound, d, room - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t > 0 {
        rec(2 * k, bound, d, t - 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Splits each coefficient of `group` over shifts `(prod x y)^t`, `t <= budget`,
/// so that all Taylor coefficients of capped degree `< target` vanish.
fn solve_group(group: &Group, k: usize, d: i32, target: i32, budget: i32) -> Option<Vec<GaussRat>> {
    let m = group.exps.len();
    let cols = m * (budget as usize + 1);
    let col = |mi: usize, t: i32| t as usize * m + mi;
    let mut ech = Echelon::new(cols);
    for (mi, c) in group.coeffs.iter().enumerate() {
        let mut row = vec![BigRational::zero(); cols];
        for t in 0..=budget {
            row[col(mi, t)] = BigRational::one();
        }
        if !ech.push(row, [c.re.clone(), c.im.clone()]) {
            return None;
        }
    }
    let bound = group.pairs.iter().flat_map(|p| p.iter().flat_map(|&(b, g)| [b, g])).max().unwrap_or(0) + budget;
    for idx in low_multi_indices(k, bound, d, target) {
        let mut row = vec![BigRational::zero(); cols];
        let mut any = false;
        for (mi, pairs) in group.pairs.iter().enumerate() {
            for t in 0..=budget {
                let mut v = BigInt::one();
                for (p, &(b, g)) in pairs.iter().enumerate() {
                    v *= binom(b + t, idx[2 * p]) * binom(g + t, idx[2 * p + 1]);
                    if v.is_zero() {
                        break;
                    }
                }
                if !v.is_zero() {
                    row[col(mi, t)] = BigRational::from_integer(v);
                    any = true;
                }
            }
        }
        if any && !ech.push(row, [BigRational::zero(), BigRational::zero()]) {
            return None;
        }
    }
    Some(ech.solution())
}

/// Looks for a representative of the class of `p` modulo `prod x_i y_i - 1`
/// (inside `A_{2k}`, shifts up to `budget`) with the largest `L_{2k}`.
///
/// Each reduced monomial may be spread over `(prod x y)^t`, `0 <= t <= budget`.
/// After rescaling `x -> z1^{-1} X`, `y -> z1 Y` the Taylor coefficients at
/// `X = Y = 1` are binomial products, so "`L >= T`" is a linear system in the
/// split coefficients, solved exactly for increasing `T`. The result is
/// rechecked with [`l_degree`] and a normal-form comparison. When nothing
/// beats `L(p)`, `p` itself is returned.
pub fn representative_search(p: &LaurentPoly, d: usize, budget: u32) -> Result<SearchOutcome, AlgebraError> {
    let initial = l_degree(p, d)?;
    let unchanged = |achieved| SearchOutcome {
        representative_text: p.to_string(),
        representative: Some(p.clone()),
        initial,
        achieved,
    };
    let table = p.table().clone();
    let k = table.pair_count();
    let max = (2 * k * d) as u32;
    let Some(l0) = initial else { return Ok(unchanged(None)) };
    if l0 >= max {
        return Ok(unchanged(initial));
    }
    let nf = p.normal_form();
    let pair_slots = table.pair_slots();
    let z = table.unit_slots()[0];
    let mut groups: BTreeMap<Exponents, Group> = BTreeMap::new();
    for (e, c) in nf.terms() {
        let mut key = e.clone();
        let mut zshift = 0;
        for &s in &pair_slots {
            key[s] = 0;
        }
        let pairs: Vec<(i32, i32)> = (1..=k).map(|q| (e[table.x(q)], e[table.y(q)])).collect();
        for &(b, g) in &pairs {
            zshift += g - b;
        }
        key[z] += zshift;
        let g = groups.entry(key).or_insert_with(|| Group { exps: Vec::new(), pairs: Vec::new(), coeffs: Vec::new() });
        g.exps.push(e.clone());
        g.pairs.push(pairs);
        g.coeffs.push(c.clone());
    }
    let budget = budget as i32;
    let mut best: Option<(u32, LaurentPoly)> = None;
    for target in l0 + 1..=max {
        let mut q = LaurentPoly::zero(&table);
        let mut ok = true;
        for g in groups.values() {
            match solve_group(g, k, d as i32, target as i32, budget) {
                None => {
                    ok = false;
                    break;
                }
                Some(sol) => {
                    let m = g.exps.len();
                    for (i, c) in sol.into_iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let (t, mi) = ((i / m) as i32, i % m);
                        let mut e = g.exps[mi].clone();
                        for &s in &pair_slots {
                            e[s] += t;
                        }
                        q = &q + &LaurentPoly::monomial(&table, e, c);
                    }
                }
            }
        }
        if !ok {
            break;
        }
        best = Some((target, q));
    }
    let Some((target, q)) = best else { return Ok(unchanged(initial)) };
    if q.normal_form() != nf {
        return Err(AlgebraError::IdentityViolation("representative changed the class".into()));
    }
    let achieved = l_degree(&q, d)?;
    if achieved.is_some_and(|a| a < target) {
        return Err(AlgebraError::IdentityViolation(format!(
            "representative reaches L = {achieved:?}, expected at least {target}"
        )));
    }
    Ok(SearchOutcome { representative_text: q.to_string(), representative: Some(q), initial, achieved })
}
