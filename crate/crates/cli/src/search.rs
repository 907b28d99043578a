use std::io::Write;

use clarkson_core::catalog::ExponentFamily;
use clarkson_core::search::{counterexample_search, extremal_search, Orientation};
use clarkson_core::{ExponentPair, InequalityId, SearchOptions, SearchStatus, TolerancePolicy};
use serde::Serialize;

use crate::args::{Mode, SearchArgs};
use crate::input::RawPair;
use crate::output::num;
use crate::scan::sample_spec;
use crate::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

/// The witness file: the input schema plus the exponents and seed.
#[derive(Debug, Serialize)]
struct WitnessFile {
    ineq: &'static str,
    pairs: Vec<RawPair>,
    p: f64,
    q: f64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u64>,
    exploratory: bool,
}

fn exponents(id: InequalityId, p: Option<f64>, q: Option<f64>, explore: bool) -> CliResult<ExponentPair> {
    let (p, q) = match id.exponent_family() {
        ExponentFamily::Scalar { .. } => {
            let q = q.or(p).ok_or_else(|| CliError::new(format!("{id} needs --q")))?;
            (q, q)
        }
        _ => {
            let p = p.ok_or_else(|| CliError::new(format!("{id} needs --p")))?;
            (p, q.unwrap_or(p))
        }
    };
    match id.exponents(p, q) {
        Ok(exps) => Ok(exps),
        Err(_) if explore => Ok(ExponentPair::exploratory(p, q)?),
        Err(e) => Err(CliError::new(format!("{e} (pass --explore to search outside the regime)"))),
    }
}

pub fn run(args: &SearchArgs, policy: &TolerancePolicy, out: &mut dyn Write) -> CliResult<i32> {
    let id = args.ineq;
    let exps = exponents(id, args.p, args.q, args.explore)?;
    let spec = sample_spec(id, &args.sampling)?;
    let options = SearchOptions {
        budget: args.budget,
        seed: args.sampling.seed,
        policy: *policy,
        explore: args.explore,
        orientation: if args.invert_orientation {
            Orientation::Inverted
        } else {
            Orientation::AsStated
        },
    };
    let outcome = match args.mode {
        Mode::Counterexample => counterexample_search(id, &exps, &spec, &options)?,
        Mode::Extremal => extremal_search(id, &exps, &spec, &options)?,
    };

    let mode = match args.mode {
        Mode::Counterexample => "counterexample",
        Mode::Extremal => "extremal",
    };
    writeln!(out, "ineq: {id}")?;
    writeln!(out, "mode: {mode}")?;
    writeln!(out, "p: {}", num(exps.p))?;
    writeln!(out, "q: {}", num(exps.q))?;
    writeln!(out, "status: {}", outcome.status.name())?;
    writeln!(out, "evaluations: {}", outcome.evaluations)?;
    writeln!(out, "rejected: {}", outcome.rejected)?;
    writeln!(out, "violations: {}", outcome.violations)?;
    writeln!(out, "best_normalized_gap: {}", num(outcome.normalized_gap))?;
    if let Some(r) = &outcome.best_report {
        writeln!(out, "best_verdict: {}", r.verdict.name())?;
    }
    writeln!(out, "seed: {}", outcome.seed)?;
    if let Some(index) = outcome.witness.as_ref().and_then(|w| w.index) {
        writeln!(out, "witness_index: {index}")?;
    }
    if let Some(converged) = outcome.converged {
        writeln!(out, "converged: {converged}")?;
    }
    if outcome.exploratory {
        writeln!(out, "exploratory: true")?;
    }

    if let (Some(path), Some(w)) = (&args.out, &outcome.witness) {
        let file = WitnessFile {
            ineq: id.name(),
            pairs: vec![RawPair {
                x: w.x.as_slice().to_vec(),
                y: w.y.as_slice().to_vec(),
                w: w.w.as_ref().map(|w| w.as_slice().to_vec()),
            }],
            p: w.p,
            q: w.q,
            seed: w.seed,
            index: w.index,
            exploratory: outcome.exploratory,
        };
        let mut text = serde_json::to_string_pretty(&file).map_err(|e| CliError::new(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display())))?;
    }

    Ok(match outcome.status {
        SearchStatus::ViolationFound => EXIT_VIOLATION,
        SearchStatus::NoViolation | SearchStatus::BudgetExhausted => EXIT_OK,
    })
}
