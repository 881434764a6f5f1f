//! First-principles `S(ρ_A|BC)`: measure B and C with explicit product
//! projective measurements, compute the average entropy of the conditional
//! states of A, and minimise by exhaustive grid search.
//!
//! Nothing here uses the λ-set or the closed-form candidates; the module
//! only sees an 8×8 density matrix.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{conditional_entropy, Branch, MeasurementAngles};
use crate::entropy::qubit_entropy;
use crate::error::{Error, Result};
use crate::linalg::{hermitian2_eigenvalues, DensityMatrix, Hermitian2};
use crate::xstate::{build_rho, XParams};

/// Outcomes with smaller probability are dropped from entropy sums.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Slack allowed for an analytic value lying below the oracle minimum.
pub const ANALYTIC_SLACK: f64 = 1e-9;
/// Grid values this close to the minimum are tied; the lexicographically first wins.
pub const TIE_TOL: f64 = 1e-12;
/// Golden-section iterations per coordinate during refinement.
const GOLDEN_ITERS: usize = 60;

/// Raw basis angles: `(theta1, phi1)` parametrise the basis of B and
/// `(theta2, phi2)` the basis of C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawAngles {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl RawAngles {
    pub const fn new(theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Self {
        RawAngles {
            theta1,
            phi1,
            theta2,
            phi2,
        }
    }

    /// Coordinates of the closed-form λ-set: phase difference first, sum second.
    pub fn transformed(&self) -> MeasurementAngles {
        MeasurementAngles::new(
            self.theta1,
            self.theta2,
            self.phi1 - self.phi2,
            self.phi1 + self.phi2,
        )
    }

    /// `self + t·dir`, with `dir` ordered as `(theta1, phi1, theta2, phi2)`.
    fn shifted(&self, dir: [f64; 4], t: f64) -> Self {
        RawAngles::new(
            self.theta1 + t * dir[0],
            self.phi1 + t * dir[1],
            self.theta2 + t * dir[2],
            self.phi2 + t * dir[3],
        )
    }
}

type Qubit = [Complex64; 2];

/// Two orthonormal qubit vectors `cos θ|0⟩ + e^{iφ} sin θ|1⟩` and
/// `sin θ|0⟩ - e^{iφ} cos θ|1⟩`.
fn qubit_basis(theta: f64, phi: f64) -> [Qubit; 2] {
    let (s, c) = theta.sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), phase * s],
        [Complex64::new(s, 0.0), -phase * c],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvmPair {
    pub basis_b: [Qubit; 2],
    pub basis_c: [Qubit; 2],
    pub raw_angles: RawAngles,
}

impl PvmPair {
    /// Largest entry of `Σ_ij Π_i^B ⊗ Π_j^C − I` in absolute value.
    pub fn completeness_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for x in 0..4 {
            for y in 0..4 {
                let mut s = Complex64::new(0.0, 0.0);
                for b in &self.basis_b {
                    for c in &self.basis_c {
                        let v = kron(b, c);
                        s += v[x] * v[y].conj();
                    }
                }
                let id = if x == y { 1.0 } else { 0.0 };
                worst = worst.max((s - id).norm());
            }
        }
        worst
    }

    /// Largest deviation of either basis from orthonormality.
    pub fn orthonormality_error(&self) -> f64 {
        let dot = |u: &Qubit, v: &Qubit| u[0].conj() * v[0] + u[1].conj() * v[1];
        [&self.basis_b, &self.basis_c]
            .iter()
            .map(|basis| {
                let n0 = (dot(&basis[0], &basis[0]).re - 1.0).abs();
                let n1 = (dot(&basis[1], &basis[1]).re - 1.0).abs();
                let o = dot(&basis[0], &basis[1]).norm();
                n0.max(n1).max(o)
            })
            .fold(0.0, f64::max)
    }
}

fn kron(b: &Qubit, c: &Qubit) -> [Complex64; 4] {
    [b[0] * c[0], b[0] * c[1], b[1] * c[0], b[1] * c[1]]
}

pub fn pvm_pair(raw: RawAngles) -> PvmPair {
    let raw = RawAngles::new(
        raw.theta1.rem_euclid(2.0 * PI),
        raw.phi1.rem_euclid(2.0 * PI),
        raw.theta2.rem_euclid(2.0 * PI),
        raw.phi2.rem_euclid(2.0 * PI),
    );
    PvmPair {
        basis_b: qubit_basis(raw.theta1, raw.phi1),
        basis_c: qubit_basis(raw.theta2, raw.phi2),
        raw_angles: raw,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub p: f64,
    /// Normalised post-measurement state of A; `None` for zero-probability outcomes.
    pub conditional: Option<Hermitian2>,
}

fn require_state_shape(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 8 {
        return Err(Error::InvalidInput(format!(
            "expected an 8x8 three-qubit state, got {0}x{0}",
            rho.dim()
        )));
    }
    if !rho.is_symmetric() {
        return Err(Error::InvalidInput("state matrix is not symmetric".into()));
    }
    Ok(())
}

/// Unnormalised `Tr_BC[(I ⊗ |v⟩⟨v|) ρ]` for a two-qubit vector `v` on BC.
fn project_bc(rho: &DensityMatrix, v: &[Complex64; 4]) -> Hermitian2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in out.iter_mut().enumerate() {
        for (ap, cell) in row.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for y in 0..4 {
                for x in 0..4 {
                    s += v[y].conj() * v[x] * rho.get(4 * a + y, 4 * ap + x);
                }
            }
            *cell = s;
        }
    }
    Hermitian2::new(out[0][0].re, out[1][1].re, out[0][1])
}

/// The four outcomes `(i, j)` of `Π_i^B ⊗ Π_j^C`, ordered `00, 01, 10, 11`.
pub fn measure(rho: &DensityMatrix, pvm: &PvmPair) -> Result<[MeasurementOutcome; 4]> {
    require_state_shape(rho)?;
    let mut out = [MeasurementOutcome {
        p: 0.0,
        conditional: None,
    }; 4];
    for (i, b) in pvm.basis_b.iter().enumerate() {
        for (j, c) in pvm.basis_c.iter().enumerate() {
            let tilde = project_bc(rho, &kron(b, c));
            let p = tilde.trace();
            out[2 * i + j] = MeasurementOutcome {
                p,
                conditional: (p >= ZERO_PROBABILITY).then(|| tilde.scaled(1.0 / p)),
            };
        }
    }
    Ok(out)
}

/// `Σ_ij p_ij S(ρ_A|ij)` for the given product measurement.
pub fn measured_entropy(rho: &DensityMatrix, pvm: &PvmPair) -> Result<f64> {
    let outcomes = measure(rho, pvm)?;
    Ok(outcomes
        .iter()
        .filter_map(|o| o.conditional.map(|h| (o.p, h)))
        .map(|(p, h)| {
            let (lo, hi) = hermitian2_eigenvalues(&h);
            p * qubit_entropy(lo, hi)
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points over `[0, π)` for each θ.
    pub n_theta: usize,
    /// Points over `[0, 2π)` for each φ.
    pub n_phi: usize,
    /// Polish the grid argmin with cyclic golden-section coordinate descent.
    pub refine: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_theta: 48,
            n_phi: 48,
            refine: true,
        }
    }
}

impl GridSpec {
    pub const GRID_TOLERANCE: f64 = 2e-3;
    pub const REFINED_TOLERANCE: f64 = 1e-6;
    pub const REFINE_CYCLES: usize = 3;

    pub fn new(n_theta: usize, n_phi: usize, refine: bool) -> Result<Self> {
        let spec = GridSpec {
            n_theta,
            n_phi,
            refine,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.n_theta < 2 || self.n_phi < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points per axis (got n_theta={}, n_phi={})",
                self.n_theta, self.n_phi
            )));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> f64 {
        if self.refine {
            Self::REFINED_TOLERANCE
        } else {
            Self::GRID_TOLERANCE
        }
    }

    pub fn theta_step(&self) -> f64 {
        PI / self.n_theta as f64
    }

    pub fn phi_step(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMinimum {
    pub value: f64,
    pub argmin: RawAngles,
    /// Best value on the grid itself, before refinement.
    pub grid_value: f64,
    pub grid_argmin: RawAngles,
}

/// Grid position, ordered lexicographically as `(θ1, θ2, φ1, φ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct GridIndex {
    theta1: usize,
    theta2: usize,
    phi1: usize,
    phi2: usize,
}

/// `Σ_{b,b'} conj(β_b) β_b' ρ[(a,b,c),(a',b',c')]` for one B outcome, kept as
/// the three `(a, a')` blocks over `(c, c')` that the conditional state of A needs.
#[derive(Debug, Clone, Copy)]
struct BContracted {
    /// `(a, a') = (0, 0)` and `(1, 1)`: Hermitian, stored as `[m00, m11]` and `m01`.
    diag: [([f64; 2], Complex64); 2],
    /// `(a, a') = (0, 1)`: general 2×2 over `(c, c')`.
    off: [[Complex64; 2]; 2],
}

impl BContracted {
    fn new(rho: &DensityMatrix, beta: &Qubit) -> Self {
        let entry = |a: usize, c: usize, ap: usize, cp: usize| -> Complex64 {
            let mut s = Complex64::new(0.0, 0.0);
            for b in 0..2 {
                for bp in 0..2 {
                    s += beta[b].conj()
                        * beta[bp]
                        * rho.get(4 * a + 2 * b + c, 4 * ap + 2 * bp + cp);
                }
            }
            s
        };
        let herm = |a: usize| {
            (
                [entry(a, 0, a, 0).re, entry(a, 1, a, 1).re],
                entry(a, 0, a, 1),
            )
        };
        BContracted {
            diag: [herm(0), herm(1)],
            off: [
                [entry(0, 0, 1, 0), entry(0, 0, 1, 1)],
                [entry(0, 1, 1, 0), entry(0, 1, 1, 1)],
            ],
        }
    }

    /// Unnormalised conditional state of A for the C projector `proj`.
    #[inline]
    fn project(&self, proj: &CProjector) -> (f64, f64, Complex64) {
        let herm = |(m, m01): ([f64; 2], Complex64)| {
            proj.p00 * m[0] + proj.p11 * m[1] + 2.0 * (proj.p01 * m01).re
        };
        let g = &self.off;
        let off = g[0][0] * proj.p00
            + g[1][1] * proj.p11
            + proj.p01 * g[0][1]
            + proj.p01.conj() * g[1][0];
        (herm(self.diag[0]), herm(self.diag[1]), off)
    }

    /// Same quantity traced over C, i.e. for the identity on C.
    fn traced(&self) -> (f64, f64, Complex64) {
        (
            self.diag[0].0[0] + self.diag[0].0[1],
            self.diag[1].0[0] + self.diag[1].0[1],
            self.off[0][0] + self.off[1][1],
        )
    }
}

/// `|γ⟩⟨γ|` entries `conj(γ_c) γ_c'` of the first vector of a C basis; the
/// second projector is its complement.
#[derive(Debug, Clone, Copy)]
struct CProjector {
    p00: f64,
    p11: f64,
    p01: Complex64,
}

impl CProjector {
    fn new(gamma: &Qubit) -> Self {
        CProjector {
            p00: gamma[0].norm_sqr(),
            p11: gamma[1].norm_sqr(),
            p01: gamma[0].conj() * gamma[1],
        }
    }
}

/// `p ln p − Σ λ ln λ − p ln 2` for an unnormalised qubit block `[[d0, off], [off*, d1]]`.
/// The dropped `p ln 2` terms add up to `ln 2` over a complete measurement.
#[inline]
fn outcome_nats(d0: f64, d1: f64, off: Complex64) -> f64 {
    let p = d0 + d1;
    if p < ZERO_PROBABILITY {
        return 0.0;
    }
    let x = ((d0 - d1).hypot(2.0 * off.norm()) / p).min(1.0);
    if x >= 1.0 {
        return -p * std::f64::consts::LN_2;
    }
    // (1+x)ln(1+x) + (1-x)ln(1-x)
    let eps = x * ((1.0 + x) / (1.0 - x)).ln() + (1.0 - x * x).ln();
    -0.5 * p * eps
}

/// One grid row: both B outcomes contracted at a fixed `(θ1, φ1)`.
struct BRow {
    outcomes: [BContracted; 2],
    traced: [(f64, f64, Complex64); 2],
}

impl BRow {
    fn new(rho: &DensityMatrix, theta: f64, phi: f64) -> Self {
        let beta = qubit_basis(theta, phi);
        let outcomes = [
            BContracted::new(rho, &beta[0]),
            BContracted::new(rho, &beta[1]),
        ];
        BRow {
            traced: [outcomes[0].traced(), outcomes[1].traced()],
            outcomes,
        }
    }

    /// Measured entropy in bits for the C basis whose first projector is `proj`.
    #[inline]
    fn entropy(&self, proj: &CProjector) -> f64 {
        let mut nats = 0.0;
        for (m, t) in self.outcomes.iter().zip(&self.traced) {
            let (d0, d1, off) = m.project(proj);
            nats += outcome_nats(d0, d1, off);
            nats += outcome_nats(t.0 - d0, t.1 - d1, t.2 - off);
        }
        1.0 + nats / std::f64::consts::LN_2
    }
}

/// Exhaustive search of the measured entropy over the raw-angle grid,
/// optionally followed by local refinement.
pub fn grid_minimize(rho: &DensityMatrix, spec: &GridSpec) -> Result<GridMinimum> {
    require_state_shape(rho)?;
    spec.check()?;
    let (nt, np) = (spec.n_theta, spec.n_phi);
    let (ht, hp) = (spec.theta_step(), spec.phi_step());
    // θ and θ + π/2 give the same projective measurement. With an even θ count
    // the upper half of the grid repeats the lower half and never wins the
    // lexicographic tie-break, so it is skipped.
    let nt = if nt % 2 == 0 { nt / 2 } else { nt };

    let c_projectors: Vec<CProjector> = (0..nt * np)
        .map(|k| CProjector::new(&qubit_basis((k / np) as f64 * ht, (k % np) as f64 * hp)[0]))
        .collect();
    let row = |kb: usize| BRow::new(rho, (kb / np) as f64 * ht, (kb % np) as f64 * hp);

    // Pass 1: the minimum value of every B-row; a plain min is order independent.
    let row_minima: Vec<f64> = (0..nt * np)
        .into_par_iter()
        .map(|kb| {
            let r = row(kb);
            c_projectors
                .iter()
                .map(|c| r.entropy(c))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let global = row_minima.iter().copied().fold(f64::INFINITY, f64::min);

    // Pass 2: lexicographically first grid point within TIE_TOL of the minimum.
    let (idx, grid_value) = row_minima
        .par_iter()
        .enumerate()
        .filter(|&(_, &m)| m <= global + TIE_TOL)
        .filter_map(|(kb, _)| {
            let r = row(kb);
            c_projectors
                .iter()
                .enumerate()
                .filter_map(|(kc, c)| {
                    let v = r.entropy(c);
                    (v <= global + TIE_TOL).then_some((
                        GridIndex {
                            theta1: kb / np,
                            theta2: kc / np,
                            phi1: kb % np,
                            phi2: kc % np,
                        },
                        v,
                    ))
                })
                .min_by_key(|&(idx, _)| idx)
        })
        .min_by_key(|&(idx, _)| idx)
        .expect("the global minimum lies on the grid");

    let grid_argmin = RawAngles::new(
        idx.theta1 as f64 * ht,
        idx.phi1 as f64 * hp,
        idx.theta2 as f64 * ht,
        idx.phi2 as f64 * hp,
    );

    let (value, argmin) = if spec.refine {
        refine(rho, grid_argmin, grid_value, ht, hp)?
    } else {
        (grid_value, grid_argmin)
    };
    Ok(GridMinimum {
        value,
        argmin,
        grid_value,
        grid_argmin,
    })
}

/// Cyclic line search along θ1, θ2 and the phase sum and difference; each
/// line is golden-section searched over `[-step, step]` around the current point.
/// Searching the phases jointly follows the narrow valleys that single-phase
/// steps only crawl along.
fn refine(
    rho: &DensityMatrix,
    start: RawAngles,
    start_value: f64,
    ht: f64,
    hp: f64,
) -> Result<(f64, RawAngles)> {
    let eval = |a: RawAngles| measured_entropy(rho, &pvm_pair(a));
    let lines = [
        ([1.0, 0.0, 0.0, 0.0], ht),
        ([0.0, 0.0, 1.0, 0.0], ht),
        ([0.0, 1.0, 0.0, 1.0], hp),
        ([0.0, 1.0, 0.0, -1.0], hp),
    ];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut best, mut best_value) = (start, start_value);

    for _ in 0..GridSpec::REFINE_CYCLES {
        for &(dir, step) in &lines {
            let origin = best;
            let at = |t: f64| eval(origin.shifted(dir, t));
            let (mut lo, mut hi) = (-step, step);
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let mut f1 = at(x1)?;
            let mut f2 = at(x2)?;
            for _ in 0..GOLDEN_ITERS {
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = at(x1)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = at(x2)?;
                }
            }
            let (t, f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
            if f < best_value {
                best = origin.shifted(dir, t);
                best_value = f;
            }
        }
    }
    Ok((best_value, best))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub params: XParams,
    pub analytic: f64,
    pub branch: Branch,
    pub oracle: f64,
    pub oracle_argmin: RawAngles,
    /// `oracle - analytic`.
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Unrefined grid minimum, judged against [`GridSpec::GRID_TOLERANCE`].
    pub grid_oracle: f64,
    pub grid_gap: f64,
    pub grid_pass: bool,
}

/// Compares the closed-form `S(ρ_A|BC)` with the grid-search oracle.
pub fn cross_validate(params: &XParams, spec: &GridSpec) -> Result<CrossValidation> {
    cross_validate_with(params, spec, |p| {
        conditional_entropy(p).map(|r| (r.value, r.branch))
    })
}

/// As [`cross_validate`], with the analytic side supplied by the caller.
pub fn cross_validate_with<F>(
    params: &XParams,
    spec: &GridSpec,
    analytic: F,
) -> Result<CrossValidation>
where
    F: Fn(&XParams) -> Result<(f64, Branch)>,
{
    let (value, branch) = analytic(params)?;
    let rho = build_rho(params)?;
    let min = grid_minimize(&rho, spec)?;
    let gap = min.value - value;
    let grid_gap = min.grid_value - value;
    let tolerance = spec.tolerance();
    let judge = |gap: f64, tol: f64| gap.abs() <= tol && gap >= -ANALYTIC_SLACK;
    Ok(CrossValidation {
        params: *params,
        analytic: value,
        branch,
        oracle: min.value,
        oracle_argmin: min.argmin,
        gap,
        tolerance,
        pass: judge(gap, tolerance),
        grid_oracle: min.grid_value,
        grid_gap,
        grid_pass: judge(grid_gap, GridSpec::GRID_TOLERANCE),
    })
}
