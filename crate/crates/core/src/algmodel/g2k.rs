//! `G_{2k}` from the trace expansion and `G'_{2k}` from the Hall-Littlewood
//! double sum, with the identities tying them together.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basis::HLBasis;
use super::enumerate::enum_d;
use crate::coeff::GaussRat;
use crate::error::AlgebraError;
use crate::laurent::{divided_diff, LaurentPoly, VarTable};
use crate::trig::ExactTrigPoly;

/// `numer / denom` where `denom` only involves unit symbols (it is `k Z_H`).
#[derive(Clone, Debug, PartialEq)]
pub struct GFraction {
    pub numer: LaurentPoly,
    pub denom: LaurentPoly,
}

impl GFraction {
    /// The plain polynomial when the denominator is a nonzero constant.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        let c = self.denom.as_constant()?;
        Some(self.numer.scale(&c.inv()?))
    }

    /// Equality of the two fractions modulo `prod x_i y_i - 1`.
    pub fn same_class(&self, other: &GFraction) -> bool {
        (&self.numer * &other.denom).normal_form() == (&other.numer * &self.denom).normal_form()
    }
}

impl fmt::Display for GFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "[{}] / [{}]", self.numer, self.denom),
        }
    }
}

fn sign(k: usize) -> GaussRat {
    GaussRat::from_int(if k % 2 == 1 { 1 } else { -1 })
}

/// Working context: the table `x1, y1, ..., xk, yk, z1, ..., zK`, the basis
/// monomials and `h_l` moved onto that table.
pub(crate) struct Context {
    pub table: Arc<VarTable>,
    pub basis: HLBasis,
    pub h: Vec<LaurentPoly>,
    pub d: usize,
    pub k: usize,
}

impl Context {
    pub fn new(k: usize, h: &ExactTrigPoly) -> Result<Self, AlgebraError> {
        if k == 0 {
            return Err(AlgebraError::Precondition("k must be positive".into()));
        }
        let units = h.table().unit_slots().len();
        let table = VarTable::algebra(k, units);
        let basis = HLBasis::new(&table, k)?;
        let d = h.degree();
        let h = (-(d as i64)..=d as i64).map(|l| h.h(l).reindex(&table)).collect::<Result<Vec<_>, _>>()?;
        Ok(Context { table, basis, h, d, k })
    }

    pub fn h(&self, l: i64) -> &LaurentPoly {
        &self.h[(l + self.d as i64) as usize]
    }

    pub fn z_h(&self) -> &LaurentPoly {
        self.h(0)
    }

    pub fn denom(&self) -> LaurentPoly {
        self.z_h().scale(&GaussRat::from_int(self.k as i64))
    }

    fn mono(&self, exps: Vec<i32>) -> LaurentPoly {
        LaurentPoly::monomial(&self.table, exps, GaussRat::from_int(1))
    }
}

/// `sum_{D_{2k,l}} prod x_p^{i_p} y_p^{j_p}` and its mirror
/// `sum_{D_{2k,l}} prod y_{p-1}^{i_p} x_p^{j_p}` with `y_0 = y_k`.
fn d_sums(ctx: &Context, l: usize) -> (LaurentPoly, LaurentPoly) {
    let t = &ctx.table;
    let k = ctx.k;
    let mut pos = LaurentPoly::zero(t);
    let mut neg = LaurentPoly::zero(t);
    for tuple in enum_d(k, l as u32) {
        let mut ep = vec![0; t.len()];
        let mut en = vec![0; t.len()];
        for (p, &(i, j)) in tuple.0.iter().enumerate() {
            let p = p + 1;
            ep[t.x(p)] += i;
            ep[t.y(p)] += j;
            en[t.y(if p == 1 { k } else { p - 1 })] += i;
            en[t.x(p)] += j;
        }
        pos = &pos + &ctx.mono(ep);
        neg = &neg + &ctx.mono(en);
    }
    (pos, neg)
}

/// `G_{2k}` assembled from the trace expansion:
/// `(-1)^{k+1}/(k Z_H) sum_{l=1}^{d} [h_l S_l + h_{-l} S~_l]`, numerator in normal form.
pub fn build_g2k_trace(k: usize, h: &ExactTrigPoly) -> Result<GFraction, AlgebraError> {
    let ctx = Context::new(k, h)?;
    let mut acc = LaurentPoly::zero(&ctx.table);
    for l in 1..=ctx.d {
        let (pos, neg) = d_sums(&ctx, l);
        acc = &acc + &(ctx.h(l as i64) * &pos);
        acc = &acc + &(ctx.h(-(l as i64)) * &neg);
    }
    Ok(GFraction { numer: acc.scale(&sign(k)).normal_form(), denom: ctx.denom() })
}

/// `sum_{p,q} H(a_p b_q) / (prod_{s!=p}(1 - a_s/a_p) prod_{t!=q}(b_q/b_t - 1))`
/// as `prod b * D(b)[Y]( D(a)[X]( X^{k-1} Y^{-1} H(XY) ) )`, exact.
pub(crate) fn hl_route_a(ctx: &Context) -> Result<LaurentPoly, AlgebraError> {
    let ext = ctx.table.extended(&["X", "Y"])?;
    let (xs, ys) = (ext.index_of("X").unwrap(), ext.index_of("Y").unwrap());
    let k = ctx.k as i32;
    let mut f = LaurentPoly::zero(&ext);
    for l in -(ctx.d as i64)..=ctx.d as i64 {
        let mut e = vec![0; ext.len()];
        e[xs] = k - 1 + l as i32;
        e[ys] = l as i32 - 1;
        let m = LaurentPoly::monomial(&ext, e, GaussRat::from_int(1));
        f = &f + &(&ctx.h(l).reindex(&ext)? * &m);
    }
    let a = ctx.basis.a.iter().map(|p| p.reindex(&ext)).collect::<Result<Vec<_>, _>>()?;
    let b = ctx.basis.b.iter().map(|p| p.reindex(&ext)).collect::<Result<Vec<_>, _>>()?;
    let inner = divided_diff(&a, &f, xs)?;
    let outer = divided_diff(&b, &inner, ys)?;
    let prod_b = b.iter().fold(LaurentPoly::one(&ext), |acc, m| &acc * m);
    (&outer * &prod_b).reindex(&ctx.table)
}

/// Complete homogeneous symmetric polynomial `h_m(vars)`; zero for `m < 0`.
pub fn complete_homogeneous(m: i64, vars: &[LaurentPoly]) -> Option<LaurentPoly> {
    let table = vars.first()?.table().clone();
    if m < 0 {
        return Some(LaurentPoly::zero(&table));
    }
    let m = m as usize;
    // row[j] = h_j(vars[..i])
    let mut row: Vec<LaurentPoly> = (0..=m).map(|j| if j == 0 { LaurentPoly::one(&table) } else { LaurentPoly::zero(&table) }).collect();
    for v in vars {
        for j in 1..=m {
            let add = v * &row[j - 1];
            row[j] = &row[j] + &add;
        }
    }
    Some(row.swap_remove(m))
}

/// The same double sum through complete homogeneous sums:
/// `h_0 (-1)^{k+1} + sum_l [h_l h_l(a) (prod b) h_{l-k}(b) + h_{-l} h_l(e) (prod d) h_{l-k}(d)]`.
/// Equal to route A modulo `prod x_i y_i - 1`.
pub(crate) fn hl_route_b(ctx: &Context) -> LaurentPoly {
    let k = ctx.k as i64;
    let hb = &ctx.basis;
    let prod = |v: &[LaurentPoly]| v.iter().fold(LaurentPoly::one(&ctx.table), |acc, m| &acc * m);
    let (prod_b, prod_d) = (prod(&hb.b), prod(&hb.d));
    let mut acc = ctx.h(0).scale(&sign(ctx.k));
    for l in 1..=ctx.d as i64 {
        let ha = complete_homogeneous(l, &hb.a).unwrap();
        let hbq = complete_homogeneous(l - k, &hb.b).unwrap();
        acc = &acc + &(&(ctx.h(l) * &ha) * &(&prod_b * &hbq));
        let he = complete_homogeneous(l, &hb.e).unwrap();
        let hd = complete_homogeneous(l - k, &hb.d).unwrap();
        acc = &acc + &(&(ctx.h(-l) * &he) * &(&prod_d * &hd));
    }
    acc
}

/// `G'_{2k}` with both evaluations of the double sum.
#[derive(Clone, Debug)]
pub struct HlBuild {
    pub g: GFraction,
    /// Double sum by divided differences (exact, not reduced).
    pub route_a: LaurentPoly,
    /// Double sum by complete homogeneous sums (exact, not reduced).
    pub route_b: LaurentPoly,
}

/// `G'_{2k} = (-1)^{k+1}/(k Z_H) * double sum - 1/k`; numerator in normal form.
/// Fails with `IdentityViolation` if the two routes disagree.
pub fn build_g2k_hl(k: usize, h: &ExactTrigPoly) -> Result<HlBuild, AlgebraError> {
    let ctx = Context::new(k, h)?;
    let route_a = hl_route_a(&ctx)?;
    let route_b = hl_route_b(&ctx);
    let diff = (&route_a - &route_b).normal_form();
    if !diff.is_zero() {
        return Err(AlgebraError::IdentityViolation(format!("routes disagree at k={k}: {diff}")));
    }
    let numer = (&route_a.scale(&sign(k)) - ctx.z_h()).normal_form();
    Ok(HlBuild { g: GFraction { numer, denom: ctx.denom() }, route_a, route_b })
}

/// `(-1)^{k+1}/(k Z_H) * double sum`, i.e. `G'_{2k} + 1/k`, numerator in normal form.
pub fn g2k_hl_part(k: usize, h: &ExactTrigPoly) -> Result<GFraction, AlgebraError> {
    let b = build_g2k_hl(k, h)?;
    let numer = (&b.g.numer + &b.g.denom.scale(&GaussRat::frac(1, k as i64))).normal_form();
    Ok(GFraction { numer, denom: b.g.denom })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantSum {
    pub k: usize,
    /// `sum_p 1/prod_{s!=p}(1 - a_s/a_p)`.
    pub a_factor: String,
    /// `sum_q 1/prod_{t!=q}(b_q/b_t - 1)`.
    pub b_factor: String,
    pub total: String,
    /// `(-1)^{k+1}`.
    pub expected: i64,
}

impl ConstantSum {
    pub fn passed(&self) -> bool {
        self.total == GaussRat::from_int(self.expected).to_string()
    }
}

/// Evaluates both factors of the constant double sum through divided
/// differences at the basis monomials.
pub fn constant_sum_check(k: usize) -> Result<ConstantSum, AlgebraError> {
    let table = VarTable::algebra_with(k, 0, &["X"]);
    let xs = table.index_of("X").unwrap();
    let basis = HLBasis::new(&table, k)?;
    let flip = GaussRat::from_int(if k % 2 == 1 { 1 } else { -1 });
    let xpow = |e: i32| {
        let mut v = vec![0; table.len()];
        v[xs] = e;
        LaurentPoly::monomial(&table, v, GaussRat::from_int(1))
    };
    // sum_p a_p^{k-1} / prod_{s!=p}(a_p - a_s) = (-1)^{k-1} D(a)(X^{k-1})
    let fa = divided_diff(&basis.a, &xpow(k as i32 - 1), xs)?.scale(&flip);
    // sum_q b_q^{-1} prod b / prod_{t!=q}(b_q - b_t) = (-1)^{k-1} prod b D(b)(X^{-1})
    let prod_b = basis.b.iter().fold(LaurentPoly::one(&table), |acc, m| &acc * m);
    let fb = (&divided_diff(&basis.b, &xpow(-1), xs)? * &prod_b).scale(&flip);
    let ca = fa
        .as_constant()
        .ok_or_else(|| AlgebraError::IdentityViolation(format!("a-factor is not constant: {fa}")))?;
    let cb = fb
        .as_constant()
        .ok_or_else(|| AlgebraError::IdentityViolation(format!("b-factor is not constant: {fb}")))?;
    let total = &ca * &cb;
    Ok(ConstantSum {
        k,
        a_factor: ca.to_string(),
        b_factor: cb.to_string(),
        total: total.to_string(),
        expected: if k % 2 == 1 { 1 } else { -1 },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub k: usize,
    pub multiplicities: Vec<u32>,
    pub passed: bool,
    pub diff: Option<String>,
}

/// `G_{2k}` (trace side) against `G'_{2k}` (double-sum side) modulo
/// `prod x_i y_i - 1`, for generic angles.
pub fn theorem3_check(k: usize, h: &ExactTrigPoly) -> Result<Theorem3Report, AlgebraError> {
    let trace = build_g2k_trace(k, h)?;
    let hl = build_g2k_hl(k, h)?.g;
    let diff = (&trace.numer - &hl.numer).normal_form();
    Ok(Theorem3Report {
        k,
        multiplicities: h.multiplicities().to_vec(),
        passed: diff.is_zero() && trace.denom == hl.denom,
        diff: (!diff.is_zero()).then(|| diff.to_string()),
    })
}

/// `H(x1 y1^2)` against `2^{-d} prod_j (y1 - z_j)^{m_j} (x1 - z_j^{-1})^{m_j}`
/// modulo `x1 y1 - 1`, generic angles. Returns the reduced difference.
pub fn gz_identity(multiplicities: &[u32]) -> Result<LaurentPoly, AlgebraError> {
    let h = ExactTrigPoly::generic(multiplicities).map_err(|e| AlgebraError::Precondition(e.to_string()))?;
    let units = h.table().unit_slots().len();
    let table = VarTable::algebra_with(1, units, &["W"]);
    let w = table.index_of("W").unwrap();
    let hw = h.as_univariate(&table, w)?;
    let arg = LaurentPoly::monomial(&table, {
        let mut e = vec![0; table.len()];
        e[table.x(1)] = 1;
        e[table.y(1)] = 2;
        e
    }, GaussRat::from_int(1));
    let lhs = hw.substitute(&[(w, arg)])?;
    let x = LaurentPoly::var(&table, table.x(1));
    let y = LaurentPoly::var(&table, table.y(1));
    let mut rhs = LaurentPoly::constant(&table, GaussRat::frac(1, 1 << h.degree()));
    for (j, &m) in h.multiplicities().iter().enumerate() {
        let zs = table.unit_slots()[j];
        let (z, zi) = (LaurentPoly::var(&table, zs), LaurentPoly::var_pow(&table, zs, -1));
        let factor = &(&y - &z) * &(&x - &zi);
        rhs = &rhs * &factor.pow(m);
    }
    Ok((&lhs - &rhs).normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::CriticalPoints;

    fn fixed(num: i64, den: i64, m: u32) -> ExactTrigPoly {
        ExactTrigPoly::from_points(&CriticalPoints::single(num, den, m).unwrap()).unwrap()
    }

    fn parse(t: &Arc<VarTable>, terms: &[(&[i32], i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t, terms.iter().map(|(e, n, d)| (e.to_vec(), GaussRat::frac(*n, *d))))
    }

    #[test]
    fn trace_side_k1_origin() {
        let g = build_g2k_trace(1, &fixed(0, 1, 1)).unwrap().as_poly().unwrap();
        let t = g.table().clone();
        assert_eq!(g, parse(&t, &[(&[1, 0, 0], -1, 2), (&[0, 1, 0], -1, 2)]));
    }

    #[test]
    fn trace_side_k1_generic() {
        let h = ExactTrigPoly::generic(&[1]).unwrap();
        let g = build_g2k_trace(1, &h).unwrap().as_poly().unwrap();
        let t = g.table().clone();
        // -(z^{-1} y1 + z x1)/2
        assert_eq!(g, parse(&t, &[(&[0, 1, -1], -1, 2), (&[1, 0, 1], -1, 2)]));
    }

    #[test]
    fn trace_side_vanishes_below_k() {
        assert!(build_g2k_trace(2, &fixed(0, 1, 1)).unwrap().numer.is_zero());
        assert!(build_g2k_hl(2, &fixed(0, 1, 1)).unwrap().g.numer.is_zero());
    }

    #[test]
    fn hl_side_k1_origin() {
        let b = build_g2k_hl(1, &fixed(0, 1, 1)).unwrap();
        let g = b.g.as_poly().unwrap();
        let t = g.table().clone();
        assert_eq!(g, parse(&t, &[(&[1, 0, 0], -1, 2), (&[0, 1, 0], -1, 2)]));
    }

    #[test]
    fn routes_agree_and_match_trace() {
        for (k, m) in [(1, vec![1]), (1, vec![2]), (2, vec![2]), (2, vec![1, 1])] {
            let h = ExactTrigPoly::generic(&m).unwrap();
            let r = theorem3_check(k, &h).unwrap();
            assert!(r.passed, "k={k} m={m:?}: {:?}", r.diff);
        }
    }

    #[test]
    fn constant_sums() {
        for (k, want) in [(1, 1), (2, -1), (3, 1), (4, -1)] {
            let c = constant_sum_check(k).unwrap();
            assert_eq!(c.a_factor, GaussRat::from_int(1).to_string());
            assert_eq!(c.expected, want);
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn constant_weight_cancels() {
        // with H replaced by its constant term the double sum is h_0 (-1)^{k+1}
        for k in 1..=3 {
            let h = ExactTrigPoly::generic(&[2]).unwrap();
            let ctx = Context::new(k, &h).unwrap();
            let mut c = ctx;
            let d = c.d;
            for l in 1..=d as i64 {
                let z = LaurentPoly::zero(&c.table);
                c.h[(l + d as i64) as usize] = z.clone();
                c.h[(-l + d as i64) as usize] = z;
            }
            let s = hl_route_a(&c).unwrap();
            assert_eq!(s, c.z_h().scale(&sign(k)));
        }
    }

    #[test]
    fn gz_degree_two() {
        for m in [vec![1], vec![3], vec![1, 2]] {
            assert!(gz_identity(&m).unwrap().is_zero(), "{m:?}");
        }
    }

    #[test]
    fn complete_homogeneous_small() {
        let t = VarTable::plain(&["a", "b"]);
        let v = [LaurentPoly::named(&t, "a"), LaurentPoly::named(&t, "b")];
        let h2 = complete_homogeneous(2, &v).unwrap();
        let a = &v[0];
        let b = &v[1];
        assert_eq!(h2, &(&(a * a) + &(a * b)) + &(b * b));
        assert!(complete_homogeneous(-1, &v).unwrap().is_zero());
    }
}
