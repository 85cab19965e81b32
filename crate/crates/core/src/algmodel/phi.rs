//! The evaluation map `phi_{2k}`: `prod_p x_p^b_p y_p^g_p -> prod_p alpha_{n+b_p} conj(alpha_{n+g_p})`.

use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::laurent::{LaurentPoly, VarKind};
use crate::opuc::VerblunskySeq;

/// A polynomial in `A_{2k}` with numeric coefficients, ready for repeated
/// evaluation along a sequence.
#[derive(Clone, Debug)]
pub struct PhiProgram {
    k: usize,
    /// `(beta_p, gamma_p)` per pair, and the coefficient.
    terms: Vec<(Vec<(i64, i64)>, Complex64)>,
}

impl PhiProgram {
    /// Compiles `p`, replacing every unit symbol by the matching entry of
    /// `units` (in table order). Negative pair exponents are rejected.
    pub fn compile(p: &LaurentPoly, units: &[Complex64]) -> Result<Self, AlgebraError> {
        let table = p.table();
        let k = table.pair_count();
        table
            .pair_slots()
            .iter()
            .try_for_each(|&s| p.require_nonnegative(&[s]))?;
        let unit_slots = table.unit_slots();
        if units.len() < unit_slots.len() {
            return Err(AlgebraError::Precondition(format!(
                "{} unit values given for {} unit symbols",
                units.len(),
                unit_slots.len()
            )));
        }
        for i in 0..table.len() {
            if matches!(table.kind(i), VarKind::Real | VarKind::Conjugate(_)) && p.terms().any(|(e, _)| e[i] != 0) {
                return Err(AlgebraError::Precondition(format!("`{}` is not a pair or unit variable", table.name(i))));
            }
        }
        let assignments: Vec<(usize, Complex64)> = unit_slots.iter().copied().zip(units.iter().copied()).collect();
        let numeric = p.specialize(&assignments);
        let terms = numeric
            .terms
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(e, c)| {
                let exps = (1..=k).map(|q| (e[table.x(q)] as i64, e[table.y(q)] as i64)).collect();
                (exps, c)
            })
            .collect();
        Ok(PhiProgram { k, terms })
    }

    /// Every coefficient multiplied by `s`.
    pub fn scaled(mut self, s: Complex64) -> Self {
        for (_, c) in &mut self.terms {
            *c *= s;
        }
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `[phi_{2k}(p)]_n`.
    pub fn eval(&self, alpha: &VerblunskySeq, n: i64) -> Complex64 {
        self.terms
            .iter()
            .map(|(exps, c)| exps.iter().fold(*c, |acc, &(b, g)| acc * alpha.get(n + b) * alpha.get(n + g).conj()))
            .sum()
    }

    /// Largest exponent in any slot.
    pub fn max_exponent(&self) -> i64 {
        self.terms.iter().flat_map(|(e, _)| e.iter().flat_map(|&(b, g)| [b, g])).max().unwrap_or(0)
    }
}

/// `[phi_{2k}(p)]_n` for `p` free of unit symbols.
pub fn phi_eval(p: &LaurentPoly, alpha: &VerblunskySeq, n: i64) -> Result<Complex64, AlgebraError> {
    Ok(PhiProgram::compile(p, &[])?.eval(alpha, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::GaussRat;
    use crate::laurent::VarTable;

    fn seq() -> VerblunskySeq {
        VerblunskySeq::random_finite(5, 10, 0.9)
    }

    #[test]
    fn single_pair() {
        let t = VarTable::algebra(1, 0);
        let p = LaurentPoly::monomial(&t, vec![1, 2], GaussRat::from_int(1));
        let a = seq();
        let v = phi_eval(&p, &a, 3).unwrap();
        assert!((v - a.get(4) * a.get(5).conj()).norm() < 1e-15);
    }

    #[test]
    fn pair_permutation_invariance() {
        let t = VarTable::algebra(2, 0);
        let p = LaurentPoly::monomial(&t, vec![1, 1, 2, 2], GaussRat::from_int(1));
        let q = LaurentPoly::monomial(&t, vec![2, 2, 1, 1], GaussRat::from_int(1));
        let a = seq();
        let vp = phi_eval(&p, &a, 2).unwrap();
        let want = a.get(3).norm_sqr() * a.get(4).norm_sqr();
        assert!((vp.re - want).abs() < 1e-15 && vp.im.abs() < 1e-15);
        assert!((vp - phi_eval(&q, &a, 2).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn constant_maps_to_power_of_modulus() {
        let a = seq();
        for k in 1..=3 {
            let t = VarTable::algebra(k, 0);
            let v = phi_eval(&LaurentPoly::one(&t), &a, 1).unwrap();
            assert!((v.re - a.get(1).norm_sqr().powi(k as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_negative_exponents() {
        let t = VarTable::algebra(1, 0);
        let p = LaurentPoly::monomial(&t, vec![-1, 0], GaussRat::from_int(1));
        assert!(matches!(phi_eval(&p, &seq(), 0), Err(AlgebraError::NegativeExponent(_))));
    }
}
