use std::io::Write;

use triscord::correlations::{conditional_entropy, Branch};
use triscord::oracle::{cross_validate_with, CrossValidation, GridSpec};
use triscord::xstate::{sample_many, XParams};

use crate::{EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

/// Fixed triples checked on every run, before the sampled ones.
pub const BENCHMARKS: [XParams; 5] = [
    XParams::GHZ,
    XParams::MAXIMALLY_MIXED,
    XParams::new(0.0, 1.0, -1.0),
    XParams::new(0.0, 1.0, 1.0),
    XParams::new(0.0, 0.5, -0.5),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub samples: usize,
    /// Grid points per θ axis.
    pub grid: usize,
    /// Grid points per φ axis.
    pub phi_grid: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub results: Vec<CrossValidation>,
}

/// Refined and grid-only verdicts must both pass.
pub fn passes(r: &CrossValidation) -> bool {
    r.pass && r.grid_pass
}

impl CheckSummary {
    pub fn failures(&self) -> impl Iterator<Item = &CrossValidation> {
        self.results.iter().filter(|r| !passes(r))
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Result with the largest refined `|gap|`.
    pub fn worst(&self) -> Option<&CrossValidation> {
        self.results
            .iter()
            .reduce(|w, r| if r.gap.abs() > w.gap.abs() { r } else { w })
    }
}

/// Cross-validates the benchmarks and `samples` seeded triples, taking the
/// analytic side from `analytic`.
pub fn run_check<F>(opts: &CheckOptions, analytic: F) -> triscord::Result<CheckSummary>
where
    F: Fn(&XParams) -> triscord::Result<(f64, Branch)>,
{
    let spec = GridSpec::new(opts.grid, opts.phi_grid, true)?;
    let triples = BENCHMARKS
        .iter()
        .copied()
        .chain(sample_many(opts.seed, opts.samples));
    let results = triples
        .map(|p| cross_validate_with(&p, &spec, &analytic))
        .collect::<triscord::Result<Vec<_>>>()?;
    Ok(CheckSummary { results })
}

pub fn closed_form(p: &XParams) -> triscord::Result<(f64, Branch)> {
    conditional_entropy(p).map(|c| (c.value, c.branch))
}

pub(crate) fn cmd_check(opts: &CheckOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if opts.grid < 2 || opts.phi_grid < 2 {
        let _ = writeln!(err, "error: --grid and --phi-grid must be at least 2");
        return EXIT_USAGE;
    }
    let summary = match run_check(opts, closed_form) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    write_summary(opts, &summary, out);
    if summary.all_pass() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}

pub fn write_summary(opts: &CheckOptions, summary: &CheckSummary, out: &mut dyn Write) {
    for r in summary.failures() {
        let _ = writeln!(
            out,
            "FAIL {} analytic={:.9} oracle={:.9} gap={:e} grid_gap={:e} branch={}",
            r.params, r.analytic, r.oracle, r.gap, r.grid_gap, r.branch
        );
    }
    let failed = summary.failures().count();
    let _ = writeln!(
        out,
        "checked {} triples (seed {}, grid {}x{}): {} passed, {failed} failed",
        summary.results.len(),
        opts.seed,
        opts.grid,
        opts.phi_grid,
        summary.results.len() - failed,
    );
    if let Some(w) = summary.worst() {
        let _ = writeln!(out, "worst gap {:e} at {}", w.gap, w.params);
    }
}
