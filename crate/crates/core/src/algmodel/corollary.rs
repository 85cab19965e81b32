//! The denominator-cleared polynomial of the site expansion and its numeric partial sums.

use num_complex::Complex64;

use super::g2k::{hl_route_a, Context, GFraction};
use super::phi::PhiProgram;
use crate::coeff::GaussRat;
use crate::error::{AlgebraError, LabError};
use crate::opuc::VerblunskySeq;
use crate::trig::{CriticalPoints, ExactTrigPoly};

/// `(-1)^{k+1}/(k Z_H) * double sum * (prod x_i y_i)^{2d}`, exact, with every
/// pair exponent checked to be nonnegative.
///
/// Every pair exponent of the double sum is at least `-2d`, so the power
/// `2d` always clears it; for `k = d` this is `(prod x_i y_i)^{2k}`.
pub fn corollary_poly(k: usize, h: &ExactTrigPoly) -> Result<GFraction, AlgebraError> {
    if k == 0 || k > h.degree() {
        return Err(AlgebraError::Precondition(format!("need 1 <= k <= d, got k={k}, d={}", h.degree())));
    }
    let ctx = Context::new(k, h)?;
    let sign = GaussRat::from_int(if k % 2 == 1 { 1 } else { -1 });
    let numer = hl_route_a(&ctx)?.pair_shift(2 * ctx.d as i32).scale(&sign);
    let mins = numer.min_exponents();
    if let Some(&s) = ctx.table.pair_slots().iter().find(|&&s| mins[s] < 0) {
        return Err(AlgebraError::IdentityViolation(format!(
            "cleared double sum still has a negative power of {}",
            ctx.table.name(s)
        )));
    }
    Ok(GFraction { numer, denom: ctx.denom() })
}

/// Precompiled cleared polynomials for `k = 1..=d` at fixed angles.
#[derive(Clone, Debug)]
pub struct CorollaryEvaluator {
    programs: Vec<PhiProgram>,
    degree: usize,
}

impl CorollaryEvaluator {
    pub fn new(points: &CriticalPoints) -> Result<Self, AlgebraError> {
        let h = ExactTrigPoly::generic(&points.multiplicities()).map_err(|e| AlgebraError::Precondition(e.to_string()))?;
        let units = points.units();
        let mut programs = Vec::new();
        for k in 1..=h.degree() {
            let g = corollary_poly(k, &h)?;
            let t = g.denom.table();
            let mut vals = vec![Complex64::new(1.0, 0.0); t.len()];
            for (s, u) in t.unit_slots().into_iter().zip(&units) {
                vals[s] = *u;
            }
            let z = g.denom.eval(&vals);
            let prog = PhiProgram::compile(&g.numer, &units)?;
            programs.push(prog.scaled(1.0 / z));
        }
        Ok(CorollaryEvaluator { programs, degree: h.degree() })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest forward offset any term reads.
    pub fn reach(&self) -> i64 {
        self.programs.iter().map(|p| p.max_exponent()).max().unwrap_or(0)
    }

    /// The summand at site `n`:
    /// `sum_k phi_{2k}(...)_n - log(1 - |alpha_n|^2) - sum_k |alpha_n|^{2k}/k`.
    pub fn site(&self, alpha: &VerblunskySeq, n: i64) -> f64 {
        let r = alpha.get(n).norm_sqr();
        let poly: f64 = self.programs.iter().map(|p| p.eval(alpha, n).re).sum();
        let series: f64 = (1..=self.degree).map(|k| r.powi(k as i32) / k as f64).sum();
        poly - (1.0 - r).ln() - series
    }

    /// Partial sums at each `N` in the increasing list `ns`.
    pub fn partial_sums(&self, alpha: &VerblunskySeq, ns: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(ns.len());
        let mut acc = 0.0;
        let mut n = 0usize;
        for &target in ns {
            while n < target {
                acc += self.site(alpha, n as i64);
                n += 1;
            }
            out.push(acc);
        }
        out
    }
}

/// `sum_{n<N} (sum_k [phi_{2k}(P_k)]_n - log(1 - |alpha_n|^2) - sum_k |alpha_n|^{2k}/k)`.
pub fn corollary_eval(alpha: &VerblunskySeq, n: usize, points: &CriticalPoints) -> Result<f64, LabError> {
    if points.degree() >= n {
        return Err(crate::error::OpucError::DegreeTooLarge { d: points.degree(), n }.into());
    }
    let ev = CorollaryEvaluator::new(points)?;
    Ok(ev.partial_sums(alpha, &[n])[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::opuc::sum_rule_functional;
    use crate::trig::NumericTrigPoly;

    #[test]
    fn k1_origin_polynomial() {
        let h = ExactTrigPoly::from_points(&CriticalPoints::single(0, 1, 1).unwrap()).unwrap();
        let p = corollary_poly(1, &h).unwrap().as_poly().unwrap();
        let t = p.table().clone();
        let want = LaurentPoly::from_terms(
            &t,
            [
                (vec![2, 2, 0], GaussRat::from_int(1)),
                (vec![3, 4, 0], GaussRat::frac(-1, 2)),
                (vec![1, 0, 0], GaussRat::frac(-1, 2)),
            ],
        );
        assert_eq!(p, want);
    }

    #[test]
    fn rejects_k_above_degree() {
        let h = ExactTrigPoly::generic(&[1]).unwrap();
        assert!(matches!(corollary_poly(2, &h), Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn exponents_in_range() {
        for m in [vec![2], vec![1, 1], vec![3]] {
            let h = ExactTrigPoly::generic(&m).unwrap();
            let d = h.degree() as i32;
            for k in 1..=h.degree() {
                let g = corollary_poly(k, &h).unwrap();
                let t = g.numer.table().clone();
                for (e, _) in g.numer.terms() {
                    for s in t.pair_slots() {
                        assert!((0..=4 * k as i32 * d).contains(&e[s]), "k={k} m={m:?} exps {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_sequence() {
        let pts = CriticalPoints::single(1, 3, 2).unwrap();
        assert_eq!(corollary_eval(&VerblunskySeq::zero(), 10, &pts).unwrap(), 0.0);
    }

    #[test]
    fn stabilises_with_trace_route() {
        let pts = CriticalPoints::single(1, 2, 2).unwrap();
        let h = NumericTrigPoly::new(&pts);
        let a = VerblunskySeq::random_finite(9, 5, 0.8);
        let ev = CorollaryEvaluator::new(&pts).unwrap();
        let ns = [20, 30, 40];
        let c = ev.partial_sums(&a, &ns);
        let f: Vec<f64> = ns.iter().map(|&n| sum_rule_functional(&a, n, &h).unwrap()).collect();
        assert!((c[0] - c[2]).abs() < 1e-12 && (f[0] - f[2]).abs() < 1e-12);
        assert!(((c[0] - f[0]) - (c[1] - f[1])).abs() < 1e-12);
    }
}
