use proptest::prelude::*;
use std::f64::consts::PI;
use triscord::correlations::{
    branch_angles, conditional_entropy, gtqd, j3, negativity_analytic, negativity_numeric_on, s2,
    s3, s_rel, t3, Branch, MeasurementAngles,
};
use triscord::entropy::{s_ab, s_total};
use triscord::linalg::Subsystem;
use triscord::oracle::{measured_entropy, pvm_pair, RawAngles};
use triscord::xstate::{build_rho, XParams};

/// Basis permutation that relabels qubit `q` (bit `2 - q` of the index) as `order[q]`.
fn qubit_permutation(order: [usize; 3]) -> Vec<usize> {
    (0..8)
        .map(|k| (0..3).map(|q| ((k >> (2 - q)) & 1) << (2 - order[q])).sum())
        .collect()
}

fn lerp(lo: f64, hi: f64, t: f64) -> f64 {
    lo + (hi - lo) * t
}

prop_compose! {
    fn valid_params()(u in 0.0..=1.0f64, v in 0.0..=1.0f64, w in 0.0..=1.0f64) -> XParams {
        let a1 = lerp(-3.0, 1.0, u);
        let (c1_lo, c1_hi) = XParams::c1_bounds(a1);
        let (c2_lo, c2_hi) = XParams::c2_bounds(a1);
        XParams::new(a1, lerp(c1_lo, c1_hi, v), lerp(c2_lo, c2_hi, w))
    }
}

prop_compose! {
    fn raw_angles()(t1 in 0.0..PI, p1 in 0.0..2.0 * PI, t2 in 0.0..PI, p2 in 0.0..2.0 * PI) -> RawAngles {
        RawAngles::new(t1, p1, t2, p2)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn state_is_invariant_under_qubit_permutations(p in valid_params()) {
        let rho = build_rho(&p).unwrap();
        for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0]] {
            prop_assert!(rho.max_abs_diff(&rho.permuted(&qubit_permutation(perm)).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn correlations_are_nonnegative(p in valid_params()) {
        prop_assert!(gtqd(&p).unwrap() >= 0.0);
        prop_assert!(t3(&p).unwrap() >= -1e-12);
        prop_assert!(j3(&p).unwrap() >= -1e-12);
    }

    #[test]
    fn discord_is_total_minus_classical(p in valid_params()) {
        let (d, t, j) = (gtqd(&p).unwrap(), t3(&p).unwrap(), j3(&p).unwrap());
        prop_assert!((d - (t - j)).abs() < 1e-12);
        let expected = 1.0 + s_ab(&p).unwrap() - s_total(&p).unwrap();
        prop_assert!((t - expected).abs() < 1e-12);
    }

    #[test]
    fn discord_is_even_in_the_coherences(p in valid_params()) {
        let flipped = XParams::new(p.a1, -p.c1, -p.c2);
        prop_assert!((gtqd(&p).unwrap() - gtqd(&flipped).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn analytic_negativity_matches_every_cut(p in valid_params()) {
        let rho = build_rho(&p).unwrap();
        let n = negativity_analytic(&p).unwrap();
        for s in Subsystem::ALL {
            prop_assert!((n - negativity_numeric_on(&rho, s).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn measured_entropy_matches_s_rel(p in valid_params(), raw in raw_angles()) {
        let rho = build_rho(&p).unwrap();
        let direct = measured_entropy(&rho, &pvm_pair(raw)).unwrap();
        prop_assert!((direct - s_rel(&p, &raw.transformed()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn minimum_lies_below_sampled_angles(p in valid_params(), raw in raw_angles()) {
        let cond = conditional_entropy(&p).unwrap().value;
        prop_assert!(cond <= s_rel(&p, &raw.transformed()).unwrap() + 1e-10);
    }

    #[test]
    fn s3_beats_s2_exactly_for_opposite_signs(p in valid_params()) {
        if let Some(v3) = s3(&p).unwrap() {
            let v2 = s2(&p).unwrap();
            prop_assume!((v3 - v2).abs() > 1e-12);
            prop_assert_eq!(v3 < v2, p.c1 * p.c2 < 0.0);
        }
    }

    #[test]
    fn branch_points_are_stationary(p in valid_params()) {
        let h = 1e-5;
        for branch in Branch::ALL {
            let Some(at) = branch_angles(&p, branch) else { continue };
            // a stationary point well inside the domain; avoid log singularities
            let f = |a: MeasurementAngles| s_rel(&p, &a).unwrap();
            let bump = |axis: usize, d: f64| {
                let mut a = at;
                match axis {
                    0 => a.theta1 += d,
                    1 => a.theta2 += d,
                    _ => a.phi2 += d,
                }
                a
            };
            for axis in 0..3 {
                let g = (f(bump(axis, h)) - f(bump(axis, -h))) / (2.0 * h);
                prop_assume!(g.is_finite());
                prop_assert!(g.abs() < 1e-6, "{branch} axis {axis} derivative {g:e} at {p}");
            }
        }
    }
}
