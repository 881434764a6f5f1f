//! Closed-form conditional entropy `S(ρ_A|BC)`, genuine tripartite discord
//! and related correlation measures for the symmetric X-state family.
//!
//! The measured entropy after a product projective measurement on B and C
//! is a function `s_rel` of four angles. Its global minimum is attained at
//! one of three points, giving three closed-form candidates:
//!
//! ```text
//! S1 = s_rel(0,   0,   0, 0)    = 1 - γ(a1)/12
//! S2 = s_rel(π/4, π/4, 0, 0)    = 1 - ε((3c2 + c1)/4)/2
//! S3 = s_rel(π/4, π/4, 0, φ̄2)   = 1 - ε(√((c1 - c2)³/c1)/4)/2,   cos φ̄2 = -(c1 + c2)/(2c1)
//! ```
//!
//! `S(ρ_A|BC)` is `min{S1, S3}` when `|3c1| ≥ |c2|` and `c1·c2 < 0`, and
//! `min{S1, S2}` otherwise.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::{epsilon, gamma, s_ab, s_total, xlog2_clamped, ZERO_CLAMP};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, partial_transpose, DensityMatrix, Subsystem};
use crate::xstate::XParams;

/// ε arguments in `(1, 1 + EPS_ARG_SLACK]` are clamped to 1.
pub const EPS_ARG_SLACK: f64 = 1e-9;
/// Candidates closer than this are considered tied.
pub const TIE_TOL: f64 = 1e-12;
/// Discord values in `[-NONNEG_CLAMP, 0)` are reported as 0.
pub const NONNEG_CLAMP: f64 = 1e-10;

/// Measurement angles in the transformed coordinates used by the λ-set:
/// `phi1` is the difference and `phi2` the sum of the raw B and C phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl MeasurementAngles {
    pub const fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Self {
        MeasurementAngles {
            theta1,
            theta2,
            phi1,
            phi2,
        }
    }

    pub const ORIGIN: MeasurementAngles = MeasurementAngles::new(0.0, 0.0, 0.0, 0.0);
    pub const DIAGONAL: MeasurementAngles = MeasurementAngles::new(FRAC_PI_4, FRAC_PI_4, 0.0, 0.0);

    /// Thetas reduced to `[0, π)`, phis to `[0, 2π)`.
    pub fn reduced(&self) -> Self {
        MeasurementAngles {
            theta1: self.theta1.rem_euclid(PI),
            theta2: self.theta2.rem_euclid(PI),
            phi1: self.phi1.rem_euclid(2.0 * PI),
            phi2: self.phi2.rem_euclid(2.0 * PI),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSet {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub lambda_c: f64,
    /// `λ_1, λ_2 = λ_B ± r_12` and `λ_3, λ_4 = λ_A ± r_34`.
    pub lambda_i: [f64; 4],
}

#[inline]
fn clamped_sqrt(radicand: f64, what: &str) -> Result<f64> {
    if radicand < -ZERO_CLAMP {
        return Err(Error::Numeric(format!(
            "negative {what} radicand {radicand:e}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

pub fn lambda_set(params: &XParams, angles: &MeasurementAngles) -> Result<LambdaSet> {
    params.require_valid()?;
    lambda_set_unchecked(params, angles)
}

fn lambda_set_unchecked(params: &XParams, angles: &MeasurementAngles) -> Result<LambdaSet> {
    let XParams { a1, c1, c2 } = *params;
    let (s1, k1) = (2.0 * angles.theta1).sin_cos();
    let (s2, k2) = (2.0 * angles.theta2).sin_cos();
    let (cf1, cf2) = (angles.phi1.cos(), angles.phi2.cos());

    let lambda_a = 3.0 + a1 * k1 * k2;
    let lambda_b = 3.0 - a1 * k1 * k2;
    let f = (c1 - c2).powi(2) + 4.0 * c2 * (cf1 + cf2) * (c2 * cf1 + c1 * cf2);
    let lambda_c = 9.0 / 16.0 * (s1 * s2).powi(2) * f;
    if lambda_c < -ZERO_CLAMP {
        return Err(Error::Numeric(format!("negative lambda_C {lambda_c:e}")));
    }
    let lambda_c = lambda_c.max(0.0);

    let r12 = clamped_sqrt(a1 * a1 * (k1 + k2).powi(2) + lambda_c, "lambda_1,2")?;
    let r34 = clamped_sqrt(a1 * a1 * (k1 - k2).powi(2) + lambda_c, "lambda_3,4")?;
    let lambda_i = [
        lambda_b + r12,
        lambda_b - r12,
        lambda_a + r34,
        lambda_a - r34,
    ];
    if let Some(&bad) = lambda_i.iter().find(|&&l| l < -NONNEG_CLAMP) {
        return Err(Error::Numeric(format!(
            "negative eigenvalue {bad:e} in lambda set"
        )));
    }
    Ok(LambdaSet {
        lambda_a,
        lambda_b,
        lambda_c,
        lambda_i,
    })
}

/// Average entropy of A after measuring B and C at `angles` (transformed coordinates).
pub fn s_rel(params: &XParams, angles: &MeasurementAngles) -> Result<f64> {
    params.require_valid()?;
    s_rel_unchecked(params, angles)
}

pub(crate) fn s_rel_unchecked(params: &XParams, angles: &MeasurementAngles) -> Result<f64> {
    let l = lambda_set_unchecked(params, angles)?;
    let outer = xlog2_clamped(l.lambda_a) + xlog2_clamped(l.lambda_b);
    let inner: f64 = l.lambda_i.iter().map(|&x| xlog2_clamped(x)).sum();
    Ok(1.0 + outer / 6.0 - inner / 12.0)
}

fn guarded_epsilon(arg: f64) -> Option<f64> {
    let a = arg.abs();
    if a > 1.0 + EPS_ARG_SLACK || a.is_nan() {
        return None;
    }
    epsilon(a.min(1.0)).ok()
}

pub fn s1(params: &XParams) -> Result<f64> {
    params.require_valid()?;
    Ok(1.0 - gamma(params.a1)? / 12.0)
}

pub fn s2(params: &XParams) -> Result<f64> {
    params.require_valid()?;
    let arg = (3.0 * params.c2 + params.c1) / 4.0;
    guarded_epsilon(arg)
        .map(|e| 1.0 - e / 2.0)
        .ok_or_else(|| Error::Numeric(format!("S2 argument {arg} outside [-1, 1]")))
}

/// The ε argument of S3 when the second family of φ2-extrema exists.
fn s3_argument(params: &XParams) -> Option<f64> {
    let XParams { c1, c2, .. } = *params;
    if c1 == 0.0 {
        return None;
    }
    let cos_bar = -(c1 + c2) / (2.0 * c1);
    if !(-1.0..=1.0).contains(&cos_bar) {
        return None;
    }
    let ratio = (c1 - c2) / c1;
    if ratio < 0.0 {
        return None;
    }
    let arg = ((c1 - c2).powi(3) / c1).max(0.0).sqrt() / 4.0;
    (arg <= 1.0 + EPS_ARG_SLACK).then_some(arg)
}

pub fn s3_applicable(params: &XParams) -> bool {
    s3_argument(params).is_some()
}

/// `φ̄2 = arccos(-(c1 + c2)/(2c1))`, when S3 is applicable.
pub fn phi2_bar(params: &XParams) -> Option<f64> {
    s3_argument(params)?;
    let cos_bar = -(params.c1 + params.c2) / (2.0 * params.c1);
    Some(cos_bar.clamp(-1.0, 1.0).acos())
}

/// `None` when the S3 stationary point does not exist for these parameters.
pub fn s3(params: &XParams) -> Result<Option<f64>> {
    params.require_valid()?;
    Ok(s3_argument(params)
        .and_then(guarded_epsilon)
        .map(|e| 1.0 - e / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    S1,
    S2,
    S3,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::S1, Branch::S2, Branch::S3];

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::S1 => "S1",
            Branch::S2 => "S2",
            Branch::S3 => "S3",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidates {
    pub s1: f64,
    pub s2: f64,
    pub s3: Option<f64>,
}

impl Candidates {
    pub fn get(&self, branch: Branch) -> Option<f64> {
        match branch {
            Branch::S1 => Some(self.s1),
            Branch::S2 => Some(self.s2),
            Branch::S3 => self.s3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondEntropyResult {
    pub value: f64,
    pub branch: Branch,
    pub angles: MeasurementAngles,
    pub candidates: Candidates,
}

/// Angle point at which `branch` is attained.
pub fn branch_angles(params: &XParams, branch: Branch) -> Option<MeasurementAngles> {
    match branch {
        Branch::S1 => Some(MeasurementAngles::ORIGIN),
        Branch::S2 => Some(MeasurementAngles::DIAGONAL),
        Branch::S3 => {
            phi2_bar(params).map(|phi| MeasurementAngles::new(FRAC_PI_4, FRAC_PI_4, 0.0, phi))
        }
    }
}

/// Which branches compete for the minimum under the selection rule.
pub fn competing_branches(params: &XParams) -> [Branch; 2] {
    let XParams { c1, c2, .. } = *params;
    if (3.0 * c1).abs() >= c2.abs() && c1 * c2 < 0.0 {
        [Branch::S1, Branch::S3]
    } else {
        [Branch::S1, Branch::S2]
    }
}

/// `S(ρ_A|BC)` from the closed-form candidates and the branch-selection rule.
pub fn conditional_entropy(params: &XParams) -> Result<CondEntropyResult> {
    let candidates = Candidates {
        s1: s1(params)?,
        s2: s2(params)?,
        s3: s3(params)?,
    };
    let pool: Vec<(Branch, f64)> = competing_branches(params)
        .iter()
        .filter_map(|&b| candidates.get(b).map(|v| (b, v)))
        .collect();
    let min = pool.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    // pool is ordered S1 < S2 < S3, so the first near-minimal entry wins ties
    let (branch, _) = pool
        .iter()
        .copied()
        .find(|&(_, v)| v - min <= TIE_TOL)
        .expect("S1 is always a candidate");
    let angles = branch_angles(params, branch).expect("winning branch has a defining angle");
    Ok(CondEntropyResult {
        value: min,
        branch,
        angles,
        candidates,
    })
}

fn clamp_nonneg(x: f64) -> f64 {
    if (-NONNEG_CLAMP..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// Genuine tripartite quantum discord `D³ = S(ρ_A|BC) + S(ρ_AB) - S(ρ)`.
pub fn gtqd(params: &XParams) -> Result<f64> {
    let cond = conditional_entropy(params)?;
    Ok(clamp_nonneg(cond.value + s_ab(params)? - s_total(params)?))
}

/// Genuine tripartite total correlations `T³ = S(ρ_A) + S(ρ_AB) - S(ρ)`.
pub fn t3(params: &XParams) -> Result<f64> {
    Ok(1.0 + s_ab(params)? - s_total(params)?)
}

/// Genuine tripartite classical correlations `J³ = S(ρ_A) - S(ρ_A|BC)`.
pub fn j3(params: &XParams) -> Result<f64> {
    Ok(1.0 - conditional_entropy(params)?.value)
}

/// Closed-form tripartite negativity of the symmetric X-state.
pub fn negativity_analytic(params: &XParams) -> Result<f64> {
    params.require_valid()?;
    let XParams { a1, c1, c2 } = *params;
    let s = (3.0 + a1 - 3.0 * c1).abs()
        + (3.0 + a1 + 3.0 * c1).abs()
        + 2.0 * (3.0 + a1 - 3.0 * c2).abs()
        + 2.0 * (3.0 + a1 + 3.0 * c2).abs()
        + 3.0 * (1.0 - a1 - c2).abs()
        + 3.0 * (1.0 - a1 + c2).abs();
    let n = s / 24.0 - 1.0;
    Ok(if (-ZERO_CLAMP..0.0).contains(&n) {
        0.0
    } else {
        n
    })
}

/// `Σ|λ_i(ρ^{T_s})| - 1` for the partial transpose on `subsystem`.
pub fn negativity_numeric_on(rho: &DensityMatrix, subsystem: Subsystem) -> Result<f64> {
    let eig = jacobi_eigenvalues(&partial_transpose(rho, subsystem)?)?;
    let n = eig.iter().map(|l| l.abs()).sum::<f64>() - 1.0;
    Ok(if (-ZERO_CLAMP..0.0).contains(&n) {
        0.0
    } else {
        n
    })
}

/// Negativity across the C | AB cut.
pub fn negativity_numeric(rho: &DensityMatrix) -> Result<f64> {
    negativity_numeric_on(rho, Subsystem::C)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub params: XParams,
    pub s_rho: f64,
    pub s_ab: f64,
    pub s_cond: f64,
    pub branch: Branch,
    pub d3: f64,
    pub t3: f64,
    pub j3: f64,
    pub n3: f64,
}

pub fn report(params: &XParams) -> Result<CorrelationReport> {
    let s_rho = s_total(params)?;
    let s_ab_v = s_ab(params)?;
    let cond = conditional_entropy(params)?;
    let t3 = 1.0 + s_ab_v - s_rho;
    let j3 = 1.0 - cond.value;
    Ok(CorrelationReport {
        params: *params,
        s_rho,
        s_ab: s_ab_v,
        s_cond: cond.value,
        branch: cond.branch,
        d3: clamp_nonneg(cond.value + s_ab_v - s_rho),
        t3,
        j3,
        n3: negativity_analytic(params)?,
    })
}
