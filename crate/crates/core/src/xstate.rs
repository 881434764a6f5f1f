//! The three-parameter family of three-qubit X-states that are invariant
//! under any permutation of the qubits and under flipping all of them.
//!
//! ```text
//!          | 1-a1   .    .    .    .    .    .   c1  |
//!          |  .    α    .    .    .    .   c2    .  |
//!          |  .    .    α    .    .   c2    .    .  |
//! ρ = 1/8  |  .    .    .    α   c2    .    .    .  |      α = 1 + a1/3
//!          |  .    .    .   c2    α    .    .    .  |
//!          |  .    .   c2    .    .    α    .    .  |
//!          |  .   c2    .    .    .    .    α    .  |
//!          |  c1   .    .    .    .    .    .  1-a1 |
//! ```

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;

/// Slack admitted on the closed constraint boundaries.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Entrywise tolerance when recognising the symmetric X pattern.
pub const PATTERN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XParams {
    pub a1: f64,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    A1,
    C1,
    C2,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::A1 => "a1",
            Constraint::C1 => "c1",
            Constraint::C2 => "c2",
        })
    }
}

/// One violated interval constraint. `margin` is the distance outside the interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub margin: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} out of [{}, {}] (value {}, off by {:.3e})",
            self.constraint, self.lower, self.upper, self.value, self.margin
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport(pub Vec<Violation>);

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl XParams {
    pub const fn new(a1: f64, c1: f64, c2: f64) -> Self {
        XParams { a1, c1, c2 }
    }

    /// Pure GHZ projector.
    pub const GHZ: XParams = XParams::new(-3.0, 4.0, 0.0);
    /// identity / 8.
    pub const MAXIMALLY_MIXED: XParams = XParams::new(0.0, 0.0, 0.0);

    pub fn c1_bounds(a1: f64) -> (f64, f64) {
        (a1 - 1.0, 1.0 - a1)
    }

    pub fn c2_bounds(a1: f64) -> (f64, f64) {
        (-1.0 - a1 / 3.0, 1.0 + a1 / 3.0)
    }

    /// Checks the three closed interval constraints that make ρ positive semidefinite.
    pub fn validate(&self) -> std::result::Result<(), ViolationReport> {
        let mut out = Vec::new();
        let mut check = |constraint, value: f64, (lower, upper): (f64, f64)| {
            let margin = (lower - value).max(value - upper);
            if margin > BOUNDARY_TOL || value.is_nan() {
                out.push(Violation {
                    constraint,
                    value,
                    lower,
                    upper,
                    margin,
                });
            }
        };
        check(Constraint::A1, self.a1, (-3.0, 1.0));
        check(Constraint::C1, self.c1, Self::c1_bounds(self.a1));
        check(Constraint::C2, self.c2, Self::c2_bounds(self.a1));
        if out.is_empty() {
            Ok(())
        } else {
            Err(ViolationReport(out))
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        self.validate().map_err(|r| Error::Domain(r.to_string()))
    }

    /// Draws `a1` uniformly on [-3, 1], then `c1` and `c2` uniformly on their
    /// `a1`-dependent intervals.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> XParams {
        let a1 = rng.gen_range(-3.0..=1.0);
        let (lo1, hi1) = Self::c1_bounds(a1);
        let (lo2, hi2) = Self::c2_bounds(a1);
        let c1 = rng.gen_range(lo1..=hi1);
        let c2 = rng.gen_range(lo2..=hi2);
        XParams { a1, c1, c2 }
    }
}

impl fmt::Display for XParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a1={}, c1={}, c2={})", self.a1, self.c1, self.c2)
    }
}

/// Deterministic generator for the seeded sampling used by the CLI and tests.
pub fn param_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_params(seed: u64) -> XParams {
    XParams::sample(&mut param_rng(seed))
}

/// `n` consecutive draws from one seeded stream.
pub fn sample_many(seed: u64, n: usize) -> Vec<XParams> {
    let mut rng = param_rng(seed);
    (0..n).map(|_| XParams::sample(&mut rng)).collect()
}

pub fn build_rho(params: &XParams) -> Result<DensityMatrix> {
    params.require_valid()?;
    Ok(build_rho_unchecked(params))
}

pub(crate) fn build_rho_unchecked(params: &XParams) -> DensityMatrix {
    let XParams { a1, c1, c2 } = *params;
    let alpha = 1.0 + a1 / 3.0;
    let mut m = DensityMatrix::zeros(8).expect("8 is a supported dimension");
    m.set(0, 0, (1.0 - a1) / 8.0);
    m.set(7, 7, (1.0 - a1) / 8.0);
    m.set(0, 7, c1 / 8.0);
    m.set(7, 0, c1 / 8.0);
    for k in 1..7 {
        m.set(k, k, alpha / 8.0);
        m.set(k, 7 - k, c2 / 8.0);
    }
    m
}

/// Closed-form spectrum of ρ: the two corner-block eigenvalues followed by
/// three copies of each inner-block eigenvalue.
pub fn rho_eigenvalues_closed(params: &XParams) -> Result<[f64; 8]> {
    params.require_valid()?;
    let XParams { a1, c1, c2 } = *params;
    let lo = (3.0 + a1 - 3.0 * c2) / 24.0;
    let hi = (3.0 + a1 + 3.0 * c2) / 24.0;
    Ok([
        (1.0 - a1 - c1) / 8.0,
        (1.0 - a1 + c1) / 8.0,
        lo,
        lo,
        lo,
        hi,
        hi,
        hi,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Labels the projector onto `(|k⟩ ± |k̄⟩)/√2`, with `k̄` the bitwise complement of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzLabel {
    k: u8,
    pub sign: Sign,
}

impl GhzLabel {
    pub fn new(k: u8, sign: Sign) -> Result<Self> {
        if k > 7 {
            return Err(Error::InvalidInput(format!(
                "GHZ index {k} is not a 3-bit number"
            )));
        }
        Ok(GhzLabel { k, sign })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn complement(&self) -> u8 {
        !self.k & 0b111
    }
}

pub fn ghz_component(label: GhzLabel) -> DensityMatrix {
    let k = label.k() as usize;
    let kb = label.complement() as usize;
    let off = match label.sign {
        Sign::Plus => 0.5,
        Sign::Minus => -0.5,
    };
    let mut m = DensityMatrix::zeros(8).expect("8 is a supported dimension");
    m.set(k, k, 0.5);
    m.set(kb, kb, 0.5);
    m.set(k, kb, off);
    m.set(kb, k, off);
    m
}

/// Equal-weight mixture of GHZ-type projectors.
pub fn ghz_mixture(labels: &[GhzLabel]) -> Result<DensityMatrix> {
    if labels.is_empty() {
        return Err(Error::InvalidInput("empty GHZ mixture".into()));
    }
    let w = 1.0 / labels.len() as f64;
    let mut acc = DensityMatrix::zeros(8)?;
    for &l in labels {
        acc = acc.add(&ghz_component(l).scaled(w))?;
    }
    Ok(acc)
}

/// Recovers `(a1, c1, c2)` from a matrix with the symmetric X pattern.
pub fn params_from_matrix(rho: &DensityMatrix) -> Result<XParams> {
    if rho.dim() != 8 {
        return Err(Error::InvalidInput(format!(
            "expected an 8x8 matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    let corner = 0.5 * (rho.get(0, 0) + rho.get(7, 7));
    let corner_off = 0.5 * (rho.get(0, 7) + rho.get(7, 0));
    let inner_off = (1..7).map(|k| rho.get(k, 7 - k)).sum::<f64>() / 6.0;

    let params = XParams {
        a1: 1.0 - 8.0 * corner,
        c1: 8.0 * corner_off,
        c2: 8.0 * inner_off,
    };
    let rebuilt = build_rho_unchecked(&params);
    for i in 0..8 {
        for j in 0..8 {
            let (value, expected) = (rho.get(i, j), rebuilt.get(i, j));
            if (value - expected).abs() > PATTERN_TOL {
                return Err(Error::NotSymmetricX {
                    row: i,
                    col: j,
                    value,
                    expected,
                });
            }
        }
    }
    Ok(params)
}
