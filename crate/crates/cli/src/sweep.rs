use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use rayon::prelude::*;
use triscord::correlations::{report, CorrelationReport};
use triscord::xstate::XParams;

use crate::{EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

/// Two-parameter slices of the `(a1, c1, c2)` domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Slice {
    /// `c1 = c2 = c`, axes `(a1, c)`.
    C1EqC2,
    /// `a1 = 0`, axes `(c1, c2)`.
    A1Zero,
    /// `c2 = 0`, axes `(a1, c1)`.
    C2Zero,
}

impl Slice {
    pub fn axis_names(&self) -> [&'static str; 2] {
        match self {
            Slice::C1EqC2 => ["a1", "c"],
            Slice::A1Zero => ["c1", "c2"],
            Slice::C2Zero => ["a1", "c1"],
        }
    }

    /// Bounding box of the valid region, `[(x_lo, x_hi), (y_lo, y_hi)]`.
    pub fn bounds(&self) -> [(f64, f64); 2] {
        match self {
            Slice::C1EqC2 => [(-3.0, 1.0), (-1.0, 1.0)],
            Slice::A1Zero => [(-1.0, 1.0), (-1.0, 1.0)],
            Slice::C2Zero => [(-3.0, 1.0), (-4.0, 4.0)],
        }
    }

    pub fn params(&self, x: f64, y: f64) -> XParams {
        match self {
            Slice::C1EqC2 => XParams::new(x, y, y),
            Slice::A1Zero => XParams::new(0.0, x, y),
            Slice::C2Zero => XParams::new(x, y, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    D3,
    N3,
    T3,
    J3,
    SCond,
    Branch,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::D3,
        Quantity::N3,
        Quantity::T3,
        Quantity::J3,
        Quantity::SCond,
        Quantity::Branch,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::D3 => "d3",
            Quantity::N3 => "n3",
            Quantity::T3 => "t3",
            Quantity::J3 => "j3",
            Quantity::SCond => "s_cond",
            Quantity::Branch => "branch",
        }
    }

    fn cell(&self, r: &CorrelationReport) -> String {
        match self {
            Quantity::D3 => format_sig(r.d3),
            Quantity::N3 => format_sig(r.n3),
            Quantity::T3 => format_sig(r.t3),
            Quantity::J3 => format_sig(r.j3),
            Quantity::SCond => format_sig(r.s_cond),
            Quantity::Branch => r.branch.to_string(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub slice: Slice,
    pub n: usize,
    pub output: PathBuf,
    pub quantities: Vec<Quantity>,
}

/// One valid grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub y: f64,
    pub report: CorrelationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Grid point with the largest `d3` (first in row order on ties).
    pub argmax_d3: Option<SweepPoint>,
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Evaluates every valid point of the slice grid, in ascending `(x, y)` order.
pub fn run_sweep(slice: Slice, n: usize) -> triscord::Result<SweepResult> {
    if n < 2 {
        return Err(triscord::Error::InvalidInput(format!(
            "sweep needs n >= 2, got {n}"
        )));
    }
    let [(x0, x1), (y0, y1)] = slice.bounds();
    let (xs, ys) = (axis(x0, x1, n), axis(y0, y1, n));
    let grid: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| slice.params(x, y).is_valid())
        .collect();
    let points = grid
        .par_iter()
        .map(|&(x, y)| report(&slice.params(x, y)).map(|report| SweepPoint { x, y, report }))
        .collect::<triscord::Result<Vec<_>>>()?;
    let argmax_d3 = points.iter().copied().reduce(|best, p| {
        if p.report.d3 > best.report.d3 {
            p
        } else {
            best
        }
    });
    Ok(SweepResult { points, argmax_d3 })
}

/// Plain decimal with nine significant digits; `-0` prints as `0`.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000".to_string();
    }
    // exponent after rounding to nine significant digits
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (8 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .trim_matches(|c| c == '0' || c == '.')
        .is_empty()
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn write_csv(spec: &SweepSpec, result: &SweepResult, w: &mut dyn Write) -> std::io::Result<()> {
    let [xn, yn] = spec.slice.axis_names();
    let mut header = vec![xn.to_string(), yn.to_string()];
    header.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for p in &result.points {
        let mut row = vec![format_sig(p.x), format_sig(p.y)];
        row.extend(spec.quantities.iter().map(|q| q.cell(&p.report)));
        w.write_all(row.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub(crate) fn cmd_sweep(spec: &SweepSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if spec.n < 2 {
        let _ = writeln!(err, "error: --n must be at least 2");
        return EXIT_USAGE;
    }
    let result = match run_sweep(spec.slice, spec.n) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let written = File::create(&spec.output).and_then(|f| {
        let mut w = BufWriter::new(f);
        write_csv(spec, &result, &mut w)?;
        w.flush()
    });
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write {}: {e}", spec.output.display());
        return EXIT_IO;
    }
    let [xn, yn] = spec.slice.axis_names();
    let _ = writeln!(
        out,
        "wrote {} rows to {}",
        result.points.len(),
        spec.output.display()
    );
    if let Some(m) = result.argmax_d3 {
        let _ = writeln!(
            out,
            "max d3 = {} at {xn}={}, {yn}={}",
            format_sig(m.report.d3),
            format_sig(m.x),
            format_sig(m.y)
        );
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_examples() {
        assert_eq!(format_sig(1.0), "1.00000000");
        assert_eq!(format_sig(-3.0), "-3.00000000");
        assert_eq!(format_sig(0.600876), "0.600876000");
        assert_eq!(format_sig(0.0), "0.00000000");
        assert_eq!(format_sig(-0.0), "0.00000000");
        assert_eq!(format_sig(9.9999999996), "10.0000000");
        assert_eq!(format_sig(123456789.4), "123456789");
        assert_eq!(format_sig(1.5e-5), "0.0000150000000");
    }

    #[test]
    fn axis_hits_both_ends() {
        let a = axis(-3.0, 1.0, 201);
        assert_eq!(a.len(), 201);
        assert_eq!(a[0], -3.0);
        assert_eq!(a[200], 1.0);
        assert_eq!(a[150], 0.0);
    }

    #[test]
    fn sweeps_only_emit_valid_points() {
        for slice in [Slice::C1EqC2, Slice::A1Zero, Slice::C2Zero] {
            let r = run_sweep(slice, 21).unwrap();
            assert!(!r.points.is_empty());
            assert!(r.points.iter().all(|p| p.report.params.is_valid()));
            assert!(r
                .points
                .windows(2)
                .all(|w| (w[0].x, w[0].y) < (w[1].x, w[1].y)));
        }
    }

    #[test]
    fn c2_zero_maximum_is_ghz() {
        let m = run_sweep(Slice::C2Zero, 41).unwrap().argmax_d3.unwrap();
        assert!((m.report.d3 - 1.0).abs() < 1e-9);
        assert_eq!(m.x, -3.0);
        assert_eq!(m.y.abs(), 4.0);
    }

    #[test]
    fn rejects_degenerate_grid() {
        assert!(run_sweep(Slice::A1Zero, 1).is_err());
    }
}
