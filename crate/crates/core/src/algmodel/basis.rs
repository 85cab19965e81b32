//! The monomials `a, b, c, d, e` that turn the trace sums into
//! Hall-Littlewood type double sums.

use std::sync::Arc;

use crate::coeff::GaussRat;
use crate::error::AlgebraError;
use crate::laurent::{LaurentPoly, VarTable};

#[derive(Clone, Debug)]
pub struct HLBasis {
    pub k: usize,
    /// `a[p-1] = a_{k,p}`, and likewise for the others.
    pub a: Vec<LaurentPoly>,
    pub b: Vec<LaurentPoly>,
    pub c: Vec<LaurentPoly>,
    pub d: Vec<LaurentPoly>,
    /// `e[p-1] = e_{k,p}` for `p = 1..=k`; `e_{k,k+1} = e_{k,1}`.
    pub e: Vec<LaurentPoly>,
}

fn mono(table: &Arc<VarTable>, slots: impl IntoIterator<Item = (usize, i32)>) -> LaurentPoly {
    let mut exps = vec![0; table.len()];
    for (s, e) in slots {
        exps[s] += e;
    }
    LaurentPoly::monomial(table, exps, GaussRat::from_int(1))
}

impl HLBasis {
    pub fn new(table: &Arc<VarTable>, k: usize) -> Result<Self, AlgebraError> {
        if k == 0 || table.pair_count() < k {
            return Err(AlgebraError::MissingPairs(k));
        }
        let x = |s: usize| table.x(s);
        let y = |s: usize| table.y(s);
        let a = (1..=k)
            .map(|p| mono(table, (p..=k).map(|s| (y(s), 1)).chain((p + 1..=k).map(|s| (x(s), 1)))))
            .collect();
        let b = (1..=k).map(|p| mono(table, (1..=p).flat_map(|s| [(x(s), 1), (y(s), 1)]))).collect();
        let c: Vec<LaurentPoly> = (1..=k)
            .map(|p| mono(table, (p..=k).map(|s| (x(s), 1)).chain((p..k).map(|s| (y(s), 1)))))
            .collect();
        let d = (1..=k)
            .map(|p| mono(table, (1..=p).flat_map(|s| [(y(if s == 1 { k } else { s - 1 }), 1), (x(s), 1)])))
            .collect();
        let mut e = c.clone();
        e[0] = c[0].pair_shift(-1);
        Ok(HLBasis { k, a, b, c, d, e })
    }

    /// `e_{k,p}` for `p = 1..=k+1`.
    pub fn e_at(&self, p: usize) -> &LaurentPoly {
        if p == self.k + 1 {
            &self.e[0]
        } else {
            &self.e[p - 1]
        }
    }

    pub fn pair_product(&self) -> LaurentPoly {
        self.b[self.k - 1].clone()
    }

    /// `d_{k,p} e_{k,q+1} a_{k,p} b_{k,q} = (prod x_i y_i)^2` for all `p, q`.
    pub fn check_monomial_relation(&self) -> Result<(), AlgebraError> {
        let target = self.pair_product().pow(2);
        for p in 1..=self.k {
            for q in 1..=self.k {
                let lhs = &(&(&self.d[p - 1] * self.e_at(q + 1)) * &self.a[p - 1]) * &self.b[q - 1];
                if lhs != target {
                    return Err(AlgebraError::IdentityViolation(format!("d e a b relation at p={p}, q={q}: {lhs}")));
                }
            }
        }
        Ok(())
    }

    /// `prod_{s!=p}(1 - a_s/a_p) prod_{t!=q}(b_q/b_t - 1)`
    /// against `prod_{s!=q}(1 - e_{s+1}/e_{q+1}) prod_{t!=p}(d_p/d_t - 1)`,
    /// both expanded as Laurent polynomials and compared exactly.
    pub fn check_denominator_relation(&self) -> Result<(), AlgebraError> {
        let table = self.a[0].table().clone();
        let one = LaurentPoly::one(&table);
        let inv = |m: &LaurentPoly| m.monomial_inverse().expect("basis elements are monomials");
        for p in 1..=self.k {
            for q in 1..=self.k {
                let mut lhs = one.clone();
                for s in (1..=self.k).filter(|&s| s != p) {
                    lhs = &lhs * &(&one - &(&self.a[s - 1] * &inv(&self.a[p - 1])));
                }
                for t in (1..=self.k).filter(|&t| t != q) {
                    lhs = &lhs * &(&(&self.b[q - 1] * &inv(&self.b[t - 1])) - &one);
                }
                let mut rhs = one.clone();
                for s in (1..=self.k).filter(|&s| s != q) {
                    rhs = &rhs * &(&one - &(self.e_at(s + 1) * &inv(self.e_at(q + 1))));
                }
                for t in (1..=self.k).filter(|&t| t != p) {
                    rhs = &rhs * &(&(&self.d[p - 1] * &inv(&self.d[t - 1])) - &one);
                }
                if lhs != rhs {
                    return Err(AlgebraError::IdentityViolation(format!(
                        "denominator relation at p={p}, q={q}: difference {}",
                        &lhs - &rhs
                    )));
                }
            }
        }
        Ok(())
    }
}
