use std::f64::consts::FRAC_PI_4;
use triscord::correlations::{conditional_entropy, Branch};
use triscord::oracle::{cross_validate, cross_validate_with, grid_minimize, GridSpec};
use triscord::xstate::{build_rho, sample_many, XParams};

fn near_multiple(x: f64, unit: f64, tol: f64) -> bool {
    let r = (x / unit).round();
    (x - r * unit).abs() <= tol
}

#[test]
fn ghz_minimum_is_zero_at_theta_origin() {
    let rho = build_rho(&XParams::GHZ).unwrap();
    let spec = GridSpec::new(32, 32, false).unwrap();
    let min = grid_minimize(&rho, &spec).unwrap();
    assert!(min.value.abs() < 1e-12);
    assert_eq!(min.argmin.theta1, 0.0);
    assert_eq!(min.argmin.theta2, 0.0);
}

#[test]
fn random_triples_agree_with_closed_form() {
    let spec = GridSpec::new(24, 24, true).unwrap();
    for p in sample_many(77, 12) {
        let r = cross_validate(&p, &spec).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.grid_gap >= -1e-9 && r.grid_gap < 1e-2, "{r:?}");
        // minimisers sit on the symmetry orbit of the closed-form points
        let t = r.oracle_argmin.transformed();
        assert!(near_multiple(t.theta1, FRAC_PI_4, 1e-3), "{r:?}");
        assert!(near_multiple(t.theta2, FRAC_PI_4, 1e-3), "{r:?}");
    }
}

#[test]
fn analytic_values_above_the_oracle_are_rejected() {
    let spec = GridSpec::new(16, 16, true).unwrap();
    let p = XParams::new(0.0, 1.0, -1.0);
    let r = cross_validate_with(&p, &spec, |q| {
        conditional_entropy(q).map(|c| (c.value + 0.05, c.branch))
    })
    .unwrap();
    assert!(!r.pass && !r.grid_pass);
    assert!(r.gap < 0.0);
    let wrong_branch = cross_validate_with(&p, &spec, |_| Ok((1.0, Branch::S1))).unwrap();
    assert!(!wrong_branch.pass);
}
