use std::io::Write;

use clarkson_core::catalog::ExponentFamily;
use clarkson_core::search::scan_grid;
use clarkson_core::{Constraint, EntryDistribution, InequalityId, SampleSpec, TolerancePolicy};

use crate::args::{ConstraintArg, SamplingArgs, ScanArgs};
use crate::grid::{parse_grid, parse_real};
use crate::output::{csv_writer, num};
use crate::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

pub const HEADER: [&str; 7] = ["ineq_id", "p", "q", "n_samples", "min_normalized_gap", "violations", "seed"];

/// Default dimension range: scalar ids read one entry, the swap id two.
fn default_dims(id: InequalityId) -> (usize, usize) {
    match id {
        InequalityId::Cor16 => (1, 1),
        InequalityId::Swap28 => (2, 2),
        _ => (1, 16),
    }
}

pub fn parse_distribution(s: &str) -> CliResult<EntryDistribution> {
    match s.split_once(':') {
        None if s == "uniform" => Ok(EntryDistribution::Uniform01),
        None if s == "exponential" => Ok(EntryDistribution::Exponential1),
        Some(("sparse", d)) => Ok(EntryDistribution::Sparse(parse_real(d).map_err(CliError::new)?)),
        _ => Err(CliError::new(format!(
            "unknown distribution '{s}' (expected uniform, exponential or sparse:DENSITY)"
        ))),
    }
}

pub fn sample_spec(id: InequalityId, a: &SamplingArgs) -> CliResult<SampleSpec> {
    let (lo, hi) = default_dims(id);
    let constraint = match a.constraint {
        None => Constraint::for_domain(id.domain()),
        Some(ConstraintArg::Nonnegative) => Constraint::Nonnegative,
        Some(ConstraintArg::Signed) => Constraint::Signed,
        Some(ConstraintArg::Dominated) => Constraint::DominatedPair,
    };
    Ok(SampleSpec::new(
        a.n_min.unwrap_or(lo),
        a.n_max.unwrap_or(hi),
        parse_distribution(&a.dist)?,
        constraint,
        a.weights,
    )?)
}

pub fn run(args: &ScanArgs, policy: &TolerancePolicy, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let id = args.ineq;
    let p_grid = args.p_grid.as_deref().map(parse_grid).transpose()?;
    let q_grid = args.q_grid.as_deref().map(parse_grid).transpose()?;
    let missing = |flag: &str| CliError::new(format!("{id} needs {flag}"));
    let (p_grid, q_grid) = match id.exponent_family() {
        ExponentFamily::Conjugate => (p_grid.ok_or_else(|| missing("--p-grid"))?, Vec::new()),
        ExponentFamily::Scalar { .. } => (Vec::new(), q_grid.or(p_grid).ok_or_else(|| missing("--q-grid"))?),
        ExponentFamily::Main | ExponentFamily::Diagonal => {
            let p_grid = p_grid.ok_or_else(|| missing("--p-grid"))?;
            let q_grid = q_grid.unwrap_or_else(|| p_grid.clone());
            (p_grid, q_grid)
        }
    };
    let spec = sample_spec(id, &args.sampling)?;
    let seed = args.sampling.seed;
    let cells = scan_grid(id, &p_grid, &q_grid, &spec, args.samples, seed, policy)?;

    let mut csv = csv_writer(out);
    csv.write_record(HEADER)?;
    let mut violations = 0;
    for cell in &cells {
        if cell.skipped {
            writeln!(err, "skipped p={}, q={}: outside the regime of {id}", num(cell.p), num(cell.q))?;
            continue;
        }
        violations += cell.violations;
        csv.write_record([
            id.name().to_string(),
            num(cell.p),
            num(cell.q),
            cell.n_samples.to_string(),
            num(cell.min_normalized_gap),
            cell.violations.to_string(),
            seed.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}
