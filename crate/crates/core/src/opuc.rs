//! Verblunsky sequences, truncated GGT matrices, the trace functional and
//! Bernstein-Szego quadrature.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::OpucError;
use crate::trig::NumericTrigPoly;

/// `alpha_0, alpha_1, ...` stored up to its length; zero beyond, with the
/// conventions `alpha_{-1} = -1` and `alpha_n = 0` for `n < -1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct VerblunskySeq {
    values: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for VerblunskySeq {
    type Error = OpucError;
    fn try_from(v: Vec<Complex64>) -> Result<Self, OpucError> {
        VerblunskySeq::new(v)
    }
}

impl From<VerblunskySeq> for Vec<Complex64> {
    fn from(s: VerblunskySeq) -> Self {
        s.values
    }
}

impl VerblunskySeq {
    pub fn new(values: Vec<Complex64>) -> Result<Self, OpucError> {
        for (index, a) in values.iter().enumerate() {
            let modulus = a.norm();
            if modulus.is_nan() || modulus >= 1.0 {
                return Err(OpucError::OutsideDisk { index, modulus });
            }
        }
        Ok(VerblunskySeq { values })
    }

    pub fn zero() -> Self {
        VerblunskySeq { values: Vec::new() }
    }

    /// `len` values drawn uniformly from the disk of radius `rmax`, seeded.
    pub fn random_finite(seed: u64, len: usize, rmax: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..len)
            .map(|_| {
                let r = rmax * rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
            })
            .collect();
        VerblunskySeq::new(values).expect("rmax < 1")
    }

    pub fn get(&self, n: i64) -> Complex64 {
        match n {
            -1 => Complex64::new(-1.0, 0.0),
            n if n < -1 => Complex64::zero(),
            n => self.values.get(n as usize).copied().unwrap_or_else(Complex64::zero),
        }
    }

    /// `rho_n = sqrt(1 - |alpha_n|^2)`.
    pub fn rho(&self, n: i64) -> f64 {
        (1.0 - self.get(n).norm_sqr()).sqrt()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// One past the last nonzero entry.
    pub fn support(&self) -> usize {
        self.values.iter().rposition(|a| !a.is_zero()).map_or(0, |i| i + 1)
    }
}

/// The `N x N` top-left corner of the GGT matrix.
#[derive(Clone, Debug)]
pub struct GgtMatrix {
    entries: DMatrix<Complex64>,
}

/// `(U)_{kl} = -alpha_{k-1} conj(alpha_l) prod_{j=k}^{l-1} rho_j` for `k <= l`,
/// `rho_l` on the subdiagonal, zero below.
pub fn ggt_matrix(alpha: &VerblunskySeq, n: usize) -> Result<GgtMatrix, OpucError> {
    if n == 0 {
        return Err(OpucError::EmptyTruncation);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let left = -alpha.get(k as i64 - 1);
        let mut rho_prod = 1.0;
        for l in k..n {
            m[(k, l)] = left * alpha.get(l as i64).conj() * rho_prod;
            rho_prod *= alpha.rho(l as i64);
        }
        if k + 1 < n {
            m[(k + 1, k)] = Complex64::new(alpha.rho(k as i64), 0.0);
        }
    }
    Ok(GgtMatrix { entries: m })
}

impl GgtMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// `Tr(U^l)` for `l = 1..=lmax`.
    ///
    /// A closed walk of length `l` in a Hessenberg pattern never leaves a
    /// window of radius `l - 1` around its start, so each diagonal entry of
    /// `U^l` is propagated on that window only.
    pub fn power_traces(&self, lmax: usize) -> Vec<Complex64> {
        let n = self.size();
        let mut traces = vec![Complex64::zero(); lmax];
        if lmax == 0 {
            return traces;
        }
        let radius = lmax - 1;
        for i in 0..n {
            let lo = i.saturating_sub(radius);
            let hi = (i + radius).min(n - 1);
            let width = hi - lo + 1;
            let mut row = vec![Complex64::zero(); width];
            row[i - lo] = Complex64::new(1.0, 0.0);
            for trace in traces.iter_mut() {
                let mut next = vec![Complex64::zero(); width];
                for (a, ra) in row.iter().enumerate() {
                    if ra.is_zero() {
                        continue;
                    }
                    for (b, nb) in next.iter_mut().enumerate() {
                        *nb += ra * self.entries[(lo + a, lo + b)];
                    }
                }
                row = next;
                *trace += row[i - lo];
            }
        }
        traces
    }

    /// Same as [`GgtMatrix::power_traces`] by dense repeated multiplication.
    pub fn power_traces_dense(&self, lmax: usize) -> Vec<Complex64> {
        let mut p = self.entries.clone();
        let mut out = Vec::with_capacity(lmax);
        for l in 1..=lmax {
            if l > 1 {
                p = &p * &self.entries;
            }
            out.push(p.trace());
        }
        out
    }
}

/// `Tr V(U) = -(2/Z_H) Re sum_{l=1}^{d} (h_l / l) Tr(U^l)`.
///
/// Negative powers in `V` are read as powers of the adjoint, so the
/// `l < 0` half is the complex conjugate of the `l > 0` half.
pub fn trace_v(u: &GgtMatrix, h: &NumericTrigPoly) -> Result<f64, OpucError> {
    let d = h.degree();
    if d >= u.size() {
        return Err(OpucError::DegreeTooLarge { d, n: u.size() });
    }
    let traces = u.power_traces(d);
    let s: Complex64 = traces.iter().enumerate().map(|(i, t)| h.h(i as i64 + 1) / (i as f64 + 1.0) * t).sum();
    Ok(-2.0 / h.z_h() * s.re)
}

/// `sum_{n<N} log(1 - |alpha_n|^2)`.
pub fn log_term(alpha: &VerblunskySeq, n: usize) -> f64 {
    (0..n).map(|i| (1.0 - alpha.get(i as i64).norm_sqr()).ln()).sum()
}

/// `Tr V(U_N) - sum_{n<N} log(1 - |alpha_n|^2)`.
pub fn sum_rule_functional(alpha: &VerblunskySeq, n: usize, h: &NumericTrigPoly) -> Result<f64, OpucError> {
    let u = ggt_matrix(alpha, n)?;
    Ok(trace_v(&u, h)? - log_term(alpha, n))
}

/// `(phi_n(z), phi_n^*(z))` after `n` steps of the Szego recursion.
pub fn szego_eval(alpha: &VerblunskySeq, n: usize, z: Complex64) -> (Complex64, Complex64) {
    let mut phi = Complex64::new(1.0, 0.0);
    let mut star = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let a = alpha.get(k as i64);
        let next = z * phi - a.conj() * star;
        star -= a * z * phi;
        phi = next;
    }
    (phi, star)
}

fn trapezoid_log_weight(alpha: &VerblunskySeq, h: &NumericTrigPoly, grid: usize) -> f64 {
    let n0 = alpha.support();
    let log_norm = log_term(alpha, n0);
    let total: f64 = (0..grid)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / grid as f64;
            let (_, star) = szego_eval(alpha, n0, Complex64::from_polar(1.0, theta));
            h.eval(theta) * (log_norm - star.norm_sqr().ln())
        })
        .sum();
    total / grid as f64
}

const MAX_GRID: usize = 1 << 22;

/// Trapezoid value of `(1/2pi) int H(e^{i theta}) log w(theta) d theta` for the
/// Bernstein-Szego weight `w = prod (1 - |alpha_n|^2) / |phi^*_{N0}(e^{i theta})|^2`.
///
/// The grid starts at `grid` and is doubled until two successive values agree
/// to `1e-10`.
pub fn bs_weight_quadrature(alpha: &VerblunskySeq, h: &NumericTrigPoly, grid: usize) -> Result<f64, OpucError> {
    if grid < 1024 {
        return Err(OpucError::GridTooSmall(grid));
    }
    let mut g = grid;
    let mut prev = trapezoid_log_weight(alpha, h, g);
    while g < MAX_GRID {
        g *= 2;
        let next = trapezoid_log_weight(alpha, h, g);
        if (next - prev).abs() < 1e-10 {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::CriticalPoints;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(v: &[Complex64]) -> VerblunskySeq {
        VerblunskySeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ggt_small_cases() {
        let a = seq(&[c(0.3, 0.1), c(-0.2, 0.4)]);
        let u1 = ggt_matrix(&a, 1).unwrap();
        assert!((u1.entries()[(0, 0)] - a.get(0).conj()).norm() < 1e-15);
        let u2 = ggt_matrix(&a, 2).unwrap();
        let r0 = a.rho(0);
        let e = u2.entries();
        assert!((e[(0, 0)] - a.get(0).conj()).norm() < 1e-15);
        assert!((e[(0, 1)] - a.get(1).conj() * r0).norm() < 1e-15);
        assert!((e[(1, 0)] - c(r0, 0.0)).norm() < 1e-15);
        assert!((e[(1, 1)] + a.get(0) * a.get(1).conj()).norm() < 1e-15);
        let z = ggt_matrix(&VerblunskySeq::zero(), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(z.entries()[(i, j)], c(want, 0.0));
            }
        }
        assert!(matches!(ggt_matrix(&a, 0), Err(OpucError::EmptyTruncation)));
    }

    #[test]
    fn rejects_outside_disk() {
        assert!(matches!(VerblunskySeq::new(vec![c(0.6, 0.8)]), Err(OpucError::OutsideDisk { index: 0, .. })));
    }

    #[test]
    fn banded_traces_match_dense() {
        let a = VerblunskySeq::random_finite(7, 12, 0.9);
        let u = ggt_matrix(&a, 10).unwrap();
        let fast = u.power_traces(5);
        let slow = u.power_traces_dense(5);
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).norm() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn zero_sequence_has_traceless_powers() {
        let u = ggt_matrix(&VerblunskySeq::zero(), 6).unwrap();
        assert!(u.power_traces(5).iter().all(|t| t.norm() == 0.0));
    }

    #[test]
    fn adjoint_powers_match_inverse_when_unitary() {
        let mut v = VerblunskySeq::random_finite(11, 3, 0.7).values().to_vec();
        v.push(Complex64::from_polar(1.0 - 1e-13, 0.9));
        let a = seq(&v);
        let u = ggt_matrix(&a, 4).unwrap();
        let inv = u.entries().clone().try_inverse().unwrap();
        let mut p = inv.clone();
        let traces = u.power_traces(3);
        for t in &traces {
            assert!((p.trace() - t.conj()).norm() < 1e-10);
            p = &p * &inv;
        }
    }

    #[test]
    fn trace_v_first_order() {
        let h = NumericTrigPoly::new(&CriticalPoints::single(0, 1, 1).unwrap());
        let a = VerblunskySeq::random_finite(3, 9, 0.8);
        let n = 7;
        let u = ggt_matrix(&a, n).unwrap();
        let want: f64 = -(0..n as i64).map(|k| (a.get(k - 1) * a.get(k).conj()).re).sum::<f64>();
        assert!((trace_v(&u, &h).unwrap() - want).abs() < 1e-13);
        let small = ggt_matrix(&a, 1).unwrap();
        assert!(matches!(trace_v(&small, &h), Err(OpucError::DegreeTooLarge { d: 1, n: 1 })));
    }

    #[test]
    fn functional_half_at_origin() {
        let h = NumericTrigPoly::new(&CriticalPoints::single(0, 1, 1).unwrap());
        let a = seq(&[c(0.5, 0.0)]);
        let f = sum_rule_functional(&a, 4, &h).unwrap();
        assert!((f - (0.5 - 0.75f64.ln())).abs() < 1e-14);
        assert_eq!(sum_rule_functional(&VerblunskySeq::zero(), 5, &h).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_single_coefficient() {
        let a = seq(&[c(0.5, 0.0)]);
        let one = NumericTrigPoly::constant_one();
        let q = bs_weight_quadrature(&a, &one, 4096).unwrap();
        assert!((q - 0.75f64.ln()).abs() < 1e-10);
        let h = NumericTrigPoly::new(&CriticalPoints::single(1, 3, 2).unwrap());
        assert!(bs_weight_quadrature(&VerblunskySeq::zero(), &h, 2048).unwrap().abs() < 1e-15);
        assert!(matches!(bs_weight_quadrature(&a, &one, 512), Err(OpucError::GridTooSmall(512))));
    }
}
