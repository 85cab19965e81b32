use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use sumrule_core::algmodel::complete_homogeneous;
use sumrule_core::opuc::{ggt_matrix, VerblunskySeq};
use sumrule_core::trig::{Angle, CriticalPoint, CriticalPoints, NumericTrigPoly};
use sumrule_core::{divided_diff, GaussRat, LaurentPoly, VarTable};

fn algebra() -> Arc<VarTable> {
    VarTable::algebra(2, 1)
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(n, d, i)| {
        let mut c = GaussRat::frac(n, d);
        c.im = GaussRat::frac(i, d).re;
        c
    })
}

fn poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    let table = algebra();
    prop::collection::vec((prop::collection::vec(-3i32..=3, 5), gauss()), 0..max_terms)
        .prop_map(move |terms| LaurentPoly::from_terms(&table, terms))
}

fn nonzero_poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    poly(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn distinct_rationals(n: usize) -> impl Strategy<Value = Vec<GaussRat>> {
    prop::collection::btree_set((-40i64..=40).prop_filter("nonzero", |v| *v != 0), n)
        .prop_map(|s| s.into_iter().map(|v| GaussRat::frac(v, 7)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_idempotent_and_shift_invariant(p in poly(8), t in -4i32..=4) {
        let nf = p.normal_form();
        prop_assert_eq!(nf.normal_form(), nf.clone());
        prop_assert_eq!(p.pair_shift(t).normal_form(), nf);
    }

    #[test]
    fn exact_div_inverts_mul(p in poly(5), q in nonzero_poly(4)) {
        let prod = &p * &q;
        prop_assert_eq!(prod.exact_div(&q).unwrap(), p);
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism(p in poly(6), q in poly(6)) {
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!((&p * &q).conjugate(), &p.conjugate() * &q.conjugate());
        prop_assert_eq!((&p + &q).conjugate(), &p.conjugate() + &q.conjugate());
    }

    #[test]
    fn gauss_rational_text_round_trip(c in gauss()) {
        prop_assert_eq!(c.to_string().parse::<GaussRat>().unwrap(), c);
    }

    /// The recursive divided difference against the closed sum at exact rational points.
    #[test]
    fn divided_difference_matches_closed_sum(vals in distinct_rationals(4), m in -2i32..=6, n in 1usize..=4) {
        let table = VarTable::plain(&["X", "t1", "t2", "t3", "t4"]);
        let pts: Vec<LaurentPoly> = (1..=n).map(|i| LaurentPoly::var(&table, i)).collect();
        let f = LaurentPoly::var_pow(&table, 0, m);
        let dd = divided_diff(&pts, &f, 0).unwrap();
        let bind: Vec<(usize, LaurentPoly)> =
            (0..4).map(|i| (i + 1, LaurentPoly::constant(&table, vals[i].clone()))).collect();
        let got = dd.substitute(&bind).unwrap().as_constant().unwrap();
        let mut want = GaussRat::from(0);
        for i in 0..n {
            let mut den = GaussRat::from(1);
            for j in 0..n {
                if j != i {
                    den = &den * &(&vals[j] - &vals[i]);
                }
            }
            let fi = if m >= 0 { vals[i].pow(m as u32) } else { vals[i].inv().unwrap().pow((-m) as u32) };
            want = &want + &(&fi / &den);
        }
        prop_assert_eq!(got, want);
    }

    /// `D(t_1..t_n)(X^m) = (-1)^{n-1} h_{m-n+1}(t)` for `m >= 0`.
    #[test]
    fn divided_difference_of_power_is_complete_homogeneous(m in 0i64..=7, n in 1usize..=4) {
        let table = VarTable::plain(&["X", "t1", "t2", "t3", "t4"]);
        let pts: Vec<LaurentPoly> = (1..=n).map(|i| LaurentPoly::var(&table, i)).collect();
        let dd = divided_diff(&pts, &LaurentPoly::var_pow(&table, 0, m as i32), 0).unwrap();
        let h = complete_homogeneous(m - n as i64 + 1, &pts).unwrap();
        let sign = GaussRat::from(if n % 2 == 1 { 1 } else { -1 });
        prop_assert_eq!(dd, h.scale(&sign));
    }

    /// `sum_p 1 / prod_{s != p} (1 - a_s / a_p) = 1`.
    #[test]
    fn partial_fraction_sum_is_one(vals in distinct_rationals(5), k in 1usize..=5) {
        let mut total = GaussRat::from(0);
        for p in 0..k {
            let mut den = GaussRat::from(1);
            for s in 0..k {
                if s != p {
                    den = &den * &(&GaussRat::from(1) - &(&vals[s] / &vals[p]));
                }
            }
            total = &total + &den.inv().unwrap();
        }
        prop_assert_eq!(total, GaussRat::from(1));
    }

    /// Real, nonnegative, with Fourier series matching the product form.
    #[test]
    fn trig_poly_fourier_matches_product(
        angles in prop::collection::btree_set(0i64..24, 1..=3),
        mults in prop::collection::vec(1u32..=2, 3),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let pts: Vec<CriticalPoint> = angles
            .iter()
            .zip(&mults)
            .map(|(&a, &m)| CriticalPoint { angle: Angle::pi_fraction(a, 12), multiplicity: m })
            .collect();
        let h = NumericTrigPoly::new(&CriticalPoints::new(pts).unwrap());
        let d = h.degree() as i64;
        for l in 0..=d {
            prop_assert!((h.h(-l) - h.h(l).conj()).norm() < 1e-12);
        }
        prop_assert!(h.z_h() > 0.0);
        prop_assert!((h.eval(theta) - h.eval_product(theta)).abs() < 1e-10);
        prop_assert!(h.eval(theta) > -1e-12);
    }

    /// Truncated GGT matrices of finitely supported sequences: banded traces equal dense ones.
    #[test]
    fn banded_traces_match_dense(seed in 0u64..1000, support in 1usize..6, n in 1usize..12) {
        let alpha = VerblunskySeq::random_finite(seed, support, 0.8);
        let u = ggt_matrix(&alpha, n).unwrap();
        let (a, b) = (u.power_traces(4), u.power_traces_dense(4));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn ggt_is_contraction(seed in 0u64..1000, n in 2usize..10) {
        let alpha = VerblunskySeq::random_finite(seed, 8, 0.9);
        let u = ggt_matrix(&alpha, n).unwrap().entries().clone();
        let g = u.adjoint() * &u;
        // U* U = I - (rank one) for a truncated unitary; all eigenvalues in [0, 1]
        let eig = g.map(|c: Complex64| c).symmetric_eigenvalues();
        prop_assert!(eig.iter().all(|&e| e > -1e-10 && e < 1.0 + 1e-10));
    }
}
