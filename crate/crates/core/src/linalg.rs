//! Small dense kernels for the 2-, 4- and 8-dimensional real symmetric
//! matrices used throughout the crate, plus a closed-form eigen solver for
//! 2×2 complex Hermitian matrices.
//!
//! Qubit ordering is fixed crate-wide: the basis index of a three-qubit
//! state is `k = 4·bit_A + 2·bit_B + bit_C`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm below which a Jacobi sweep is considered converged.
pub const JACOBI_THRESHOLD: f64 = 1e-14;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Allowed asymmetry `|m_ij - m_ji|`, relative to the largest entry.
pub const SYMMETRY_TOL: f64 = 1e-14;

/// One of the three qubits of a tripartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
    C,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::A, Subsystem::B, Subsystem::C];

    /// Bit position of this qubit inside a basis index.
    fn shift(self) -> usize {
        match self {
            Subsystem::A => 2,
            Subsystem::B => 1,
            Subsystem::C => 0,
        }
    }
}

/// Dense real square matrix of dimension 2, 4 or 8, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DensityMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        })
    }

    /// `identity / dim`, the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, 1.0 / dim as f64);
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= SYMMETRY_TOL * self.max_abs().max(1.0)
    }

    /// Largest entrywise difference to `other` (infinite if the dimensions differ).
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn scaled(&self, factor: f64) -> DensityMatrix {
        DensityMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dim != other.dim {
            return Err(Error::InvalidInput(format!(
                "cannot add {0}x{0} and {1}x{1} matrices",
                self.dim, other.dim
            )));
        }
        Ok(DensityMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Conjugation `P m P` by the permutation matrix `P` described by `perm`
    /// (basis index `k` is sent to `perm[k]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<DensityMatrix> {
        if perm.len() != self.dim {
            return Err(Error::InvalidInput("permutation length mismatch".into()));
        }
        let mut out = DensityMatrix::zeros(self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        Ok(out)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(Error::InvalidInput(format!(
            "dimension {dim} not supported (expected 2, 4 or 8)"
        ))),
    }
}

fn require_three_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim != 8 {
        return Err(Error::InvalidInput(format!(
            "expected an 8x8 three-qubit matrix, got {0}x{0}",
            rho.dim
        )));
    }
    Ok(())
}

/// Traces out `subsystem`, returning the 4×4 matrix over the other two qubits
/// (kept in their original relative order).
pub fn partial_trace(rho: &DensityMatrix, subsystem: Subsystem) -> Result<DensityMatrix> {
    require_three_qubits(rho)?;
    let s = subsystem.shift();
    let low_mask = (1usize << s) - 1;
    // Re-insert the traced bit at position `s` of a two-qubit index.
    let expand = |r: usize, bit: usize| ((r & !low_mask) << 1) | (bit << s) | (r & low_mask);

    let mut out = DensityMatrix::zeros(4)?;
    for r in 0..4 {
        for c in 0..4 {
            let v = (0..2)
                .map(|bit| rho.get(expand(r, bit), expand(c, bit)))
                .sum();
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Transposes the row/column bits of `subsystem`.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> Result<DensityMatrix> {
    require_three_qubits(rho)?;
    let s = subsystem.shift();
    let mut out = DensityMatrix::zeros(8)?;
    for i in 0..8 {
        for j in 0..8 {
            let bi = (i >> s) & 1;
            let bj = (j >> s) & 1;
            let ii = (i & !(1 << s)) | (bj << s);
            let jj = (j & !(1 << s)) | (bi << s);
            out.set(i, j, rho.get(ii, jj));
        }
    }
    Ok(out)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted in ascending order.
pub fn jacobi_eigenvalues(m: &DensityMatrix) -> Result<Vec<f64>> {
    if !m.is_symmetric() {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (asymmetry {:e})",
            m.asymmetry()
        )));
    }
    let n = m.dim;
    let mut a: Vec<f64> = m.entries.clone();
    let idx = |i: usize, j: usize| i * n + j;
    let threshold = JACOBI_THRESHOLD * m.max_abs().max(1.0);

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[idx(i, j)] * a[idx(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
            }
        }
        sweep += 1;
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// 2×2 complex Hermitian matrix `[[d0, off], [conj(off), d1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian2 {
    pub diagonal: [f64; 2],
    pub off_diagonal: Complex64,
}

impl Hermitian2 {
    pub fn new(d0: f64, d1: f64, off: Complex64) -> Self {
        Hermitian2 {
            diagonal: [d0, d1],
            off_diagonal: off,
        }
    }

    pub fn trace(&self) -> f64 {
        self.diagonal[0] + self.diagonal[1]
    }

    pub fn determinant(&self) -> f64 {
        self.diagonal[0] * self.diagonal[1] - self.off_diagonal.norm_sqr()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Hermitian2 {
            diagonal: [self.diagonal[0] * factor, self.diagonal[1] * factor],
            off_diagonal: self.off_diagonal * factor,
        }
    }
}

/// Closed-form eigenvalues `(lo, hi)` of a 2×2 Hermitian matrix.
pub fn hermitian2_eigenvalues(h: &Hermitian2) -> (f64, f64) {
    let mean = 0.5 * (h.diagonal[0] + h.diagonal[1]);
    let half_gap = 0.5 * (h.diagonal[0] - h.diagonal[1]);
    let r = half_gap.hypot(h.off_diagonal.norm());
    (mean - r, mean + r)
}
