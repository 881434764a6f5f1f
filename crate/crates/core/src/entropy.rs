//! Base-2 entropy primitives and the closed-form entropies of the symmetric
//! X-state and its two-qubit marginal. All values are in bits.

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, DensityMatrix};
use crate::xstate::XParams;

/// Arguments in `[-ZERO_CLAMP, 0)` are treated as exact zeros.
pub const ZERO_CLAMP: f64 = 1e-12;
/// Eigenvalues down to `-EIGEN_CLAMP` are accepted as rounding noise of a PSD matrix.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// `x·log2(x)` with `0·log2(0) = 0`.
pub fn xlog2(x: f64) -> Result<f64> {
    if x.is_nan() || x < -ZERO_CLAMP {
        return Err(Error::Domain(format!("x log2 x undefined for x = {x:e}")));
    }
    Ok(xlog2_clamped(x))
}

#[inline]
pub(crate) fn xlog2_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `(1+x)log2(1+x) + (1-x)log2(1-x)` on `|x| ≤ 1`.
pub fn epsilon(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + ZERO_CLAMP {
        return Err(Error::Domain(format!(
            "epsilon undefined for |x| = {:e} > 1",
            x.abs()
        )));
    }
    let x = x.abs().min(1.0);
    Ok(xlog2_clamped(1.0 + x) + xlog2_clamped(1.0 - x))
}

/// `(3+x)log2(3+x) + (3-3x)log2(3-3x) - 2(3-x)log2(3-x)` on `[-3, 1]`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(-3.0 - ZERO_CLAMP..=1.0 + ZERO_CLAMP).contains(&x) {
        return Err(Error::Domain(format!(
            "gamma undefined for x = {x} outside [-3, 1]"
        )));
    }
    Ok(xlog2(3.0 + x)? + xlog2(3.0 - 3.0 * x)? - 2.0 * xlog2(3.0 - x)?)
}

/// `-Σ p log2 p` over a probability vector, with the 0·log 0 convention.
pub fn shannon(probs: &[f64]) -> Result<f64> {
    probs.iter().try_fold(0.0, |acc, &p| Ok(acc - xlog2(p)?))
}

/// Entropy of the distribution `(p, 1-p)`, given both eigenvalues of a qubit state.
pub(crate) fn qubit_entropy(lo: f64, hi: f64) -> f64 {
    -(xlog2_clamped(lo) + xlog2_clamped(hi))
}

/// Closed-form `S(ρ)` of the symmetric X-state.
pub fn s_total(params: &XParams) -> Result<f64> {
    params.require_valid()?;
    let XParams { a1, c1, c2 } = *params;
    let bracket = 2.0 * (3.0 + a1) * 3f64.log2()
        - xlog2(1.0 - a1 - c1)?
        - xlog2(1.0 - a1 + c1)?
        - xlog2(3.0 + a1 - 3.0 * c2)?
        - xlog2(3.0 + a1 + 3.0 * c2)?;
    Ok(3.0 + bracket / 8.0)
}

/// Closed-form `S(ρ_AB)`; depends on `a1` only.
pub fn s_ab(params: &XParams) -> Result<f64> {
    params.require_valid()?;
    let a1 = params.a1;
    Ok(-xlog2(3.0 - a1)? / 6.0 - xlog2(3.0 + a1)? / 6.0 + 2.0 + 3f64.log2())
}

/// `-Tr ρ log2 ρ` from the Jacobi spectrum.
pub fn von_neumann_numeric(rho: &DensityMatrix) -> Result<f64> {
    let eig = jacobi_eigenvalues(rho)?;
    let mut s = 0.0;
    for &l in &eig {
        if l < -EIGEN_CLAMP {
            return Err(Error::NotAState(l));
        }
        s -= xlog2_clamped(l);
    }
    Ok(s)
}

/// `I(ρ_AB) = S(ρ_A) + S(ρ_B) - S(ρ_AB)`, with both single-qubit marginals maximally mixed.
pub fn mutual_info_ab(params: &XParams) -> Result<f64> {
    Ok(2.0 - s_ab(params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, Subsystem};
    use crate::xstate::{build_rho, param_rng};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn xlog2_examples() {
        assert_eq!(xlog2(0.0).unwrap(), 0.0);
        assert_eq!(xlog2(1.0).unwrap(), 0.0);
        assert_eq!(xlog2(0.5).unwrap(), -0.5);
        assert_eq!(xlog2(-1e-13).unwrap(), 0.0);
        assert!(xlog2(-1e-9).is_err());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(0.0).unwrap(), 0.0);
        assert_eq!(epsilon(1.0).unwrap(), 2.0);
        assert_eq!(epsilon(-1.0).unwrap(), 2.0);
        // (1+r)log2(1+r) + (1-r)log2(1-r) at r = 1/sqrt2, evaluated independently in f64 Python
        assert!(close(
            epsilon(std::f64::consts::FRAC_1_SQRT_2).unwrap(),
            0.798248,
            1e-6
        ));
        assert!(epsilon(1.0 + 1e-13).is_ok());
        assert!(epsilon(1.01).is_err());
    }

    #[test]
    fn epsilon_is_even_and_monotone() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let e = epsilon(x).unwrap();
            assert_eq!(e, epsilon(-x).unwrap());
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(0.0).unwrap(), 0.0);
        assert!(close(gamma(-3.0).unwrap(), 12.0, 1e-12));
        assert!(close(gamma(1.0).unwrap(), 4.0, 1e-12));
        assert!(gamma(1.5).is_err());
        assert!(gamma(-3.5).is_err());
    }

    #[test]
    fn shannon_of_uniform() {
        assert!(close(shannon(&[0.25; 4]).unwrap(), 2.0, 1e-15));
        assert_eq!(shannon(&[1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn s_total_examples() {
        assert!(close(s_total(&XParams::GHZ).unwrap(), 0.0, 1e-14));
        assert!(close(
            s_total(&XParams::MAXIMALLY_MIXED).unwrap(),
            3.0,
            1e-14
        ));
        assert!(s_total(&XParams::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn s_ab_examples() {
        assert!(close(
            s_ab(&XParams::new(0.0, 0.0, 0.0)).unwrap(),
            2.0,
            1e-14
        ));
        assert!(close(
            s_ab(&XParams::new(-3.0, 0.0, 0.0)).unwrap(),
            1.0,
            1e-14
        ));
        assert!(close(
            s_ab(&XParams::new(1.0, 0.0, 0.0)).unwrap(),
            1.918296,
            1e-6
        ));
    }

    #[test]
    fn mutual_info_examples() {
        assert!(close(
            mutual_info_ab(&XParams::new(0.0, 0.0, 0.0)).unwrap(),
            0.0,
            1e-14
        ));
        assert!(close(
            mutual_info_ab(&XParams::new(-3.0, 4.0, 0.0)).unwrap(),
            1.0,
            1e-14
        ));
        assert!(close(
            mutual_info_ab(&XParams::new(1.0, 0.0, 0.0)).unwrap(),
            0.081704,
            1e-6
        ));
    }

    #[test]
    fn von_neumann_examples() {
        let id8 = DensityMatrix::maximally_mixed(8).unwrap();
        assert!(close(von_neumann_numeric(&id8).unwrap(), 3.0, 1e-14));
        let ghz = build_rho(&XParams::GHZ).unwrap();
        assert!(close(von_neumann_numeric(&ghz).unwrap(), 0.0, 1e-12));
        let bad = DensityMatrix::from_diagonal(&[1.5, -0.5]).unwrap();
        assert!(matches!(
            von_neumann_numeric(&bad),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn closed_forms_match_numeric_entropies() {
        let mut rng = param_rng(19);
        for _ in 0..300 {
            let p = XParams::sample(&mut rng);
            let rho = build_rho(&p).unwrap();
            let s = s_total(&p).unwrap();
            assert!(close(s, von_neumann_numeric(&rho).unwrap(), 1e-10), "{p}");
            assert!((-1e-12..=3.0 + 1e-12).contains(&s));
            let ab = partial_trace(&rho, Subsystem::C).unwrap();
            let sab = s_ab(&p).unwrap();
            assert!(close(sab, von_neumann_numeric(&ab).unwrap(), 1e-10), "{p}");
            assert!((1.0 - 1e-12..=2.0 + 1e-12).contains(&sab));
        }
    }
}
