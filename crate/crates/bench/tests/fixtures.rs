// The benchmark inputs must build and agree before their timings mean anything.

use sumrule_core::algmodel::theorem3_check;
use sumrule_core::lab::SequenceFamily;
use sumrule_core::opuc::ggt_matrix;
use sumrule_core::trig::{Angle, ExactTrigPoly};

#[test]
fn theorem3_fixture_passes() {
    let h = ExactTrigPoly::generic(&[2]).unwrap();
    assert!(theorem3_check(2, &h).unwrap().passed);
}

#[test]
fn trace_fixture_banded_matches_dense() {
    let fam = SequenceFamily::PowerDecay { c: 0.3, gamma: 0.4, theta_over_pi: Angle::pi_fraction(1, 3) };
    let alpha = fam.materialize(201, 0, None).unwrap();
    let u = ggt_matrix(&alpha, 200).unwrap();
    for (a, b) in u.power_traces(3).iter().zip(&u.power_traces_dense(3)) {
        assert!((a - b).norm() < 1e-9);
    }
}
