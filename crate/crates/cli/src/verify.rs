use std::io::Write;

use clarkson_core::catalog::ExponentFamily;
use clarkson_core::{evaluate, ExponentPair, GapReport, InequalityId, TolerancePolicy, Verdict};

use crate::args::VerifyArgs;
use crate::grid::parse_list;
use crate::input::{inline_pair, load_pairs};
use crate::output::{csv_writer, num};
use crate::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

pub const HEADER: [&str; 10] = [
    "pair_index",
    "ineq_id",
    "p",
    "q",
    "lhs",
    "rhs",
    "gap",
    "scale",
    "normalized_gap",
    "verdict",
];

/// The exponent pairs requested by `--p` and `--q`, validated against the
/// id's regime. Conjugate and diagonal ids read `--p` only, scalar ids read
/// `--q` (falling back to `--p`), main ids take the product with `q = p`
/// when `--q` is absent.
fn requested_exponents(id: InequalityId, p: Option<&str>, q: Option<&str>) -> CliResult<Vec<ExponentPair>> {
    let p_list = p.map(parse_list).transpose()?;
    let q_list = q.map(parse_list).transpose()?;
    let missing = |flag: &str| CliError::new(format!("{id} needs {flag}"));
    let raw: Vec<(f64, f64)> = match id.exponent_family() {
        ExponentFamily::Conjugate | ExponentFamily::Diagonal => {
            p_list.ok_or_else(|| missing("--p"))?.into_iter().map(|p| (p, p)).collect()
        }
        ExponentFamily::Scalar { .. } => q_list
            .or(p_list)
            .ok_or_else(|| missing("--q"))?
            .into_iter()
            .map(|q| (q, q))
            .collect(),
        ExponentFamily::Main => {
            let p_list = p_list.ok_or_else(|| missing("--p"))?;
            match q_list {
                Some(q_list) => p_list
                    .iter()
                    .flat_map(|&p| q_list.iter().map(move |&q| (p, q)))
                    .collect(),
                None => p_list.into_iter().map(|p| (p, p)).collect(),
            }
        }
    };
    raw.into_iter()
        .map(|(p, q)| {
            id.exponents(p, q)
                .map_err(|e| CliError::new(format!("{id} at p={}, q={}: {e}", num(p), num(q))))
        })
        .collect()
}

pub fn run(args: &VerifyArgs, policy: &TolerancePolicy, out: &mut dyn Write) -> CliResult<i32> {
    let id = args.ineq;
    let exponents = requested_exponents(id, args.p.as_deref(), args.q.as_deref())?;
    let pairs = match (&args.input, &args.x, &args.y) {
        (Some(path), _, _) => load_pairs(path)?,
        (None, Some(x), Some(y)) => vec![inline_pair(x, y, args.w.as_deref())?],
        _ => return Err(CliError::new("give --input FILE or inline --x and --y")),
    };

    let mut rows: Vec<(usize, GapReport)> = Vec::with_capacity(pairs.len() * exponents.len());
    for (i, pair) in pairs.iter().enumerate() {
        for exps in &exponents {
            let report = evaluate(id, &pair.x, &pair.y, pair.w.as_ref(), exps, policy)
                .map_err(|e| CliError::new(format!("pair {i}: {e}")))?;
            rows.push((i, report));
        }
    }

    let mut csv = csv_writer(out);
    csv.write_record(HEADER)?;
    for (i, r) in &rows {
        csv.write_record([
            i.to_string(),
            id.name().to_string(),
            num(r.p),
            num(r.q),
            num(r.lhs),
            num(r.rhs),
            num(r.gap),
            num(r.scale),
            num(r.normalized_gap()),
            r.verdict.name().to_string(),
        ])?;
    }
    csv.flush()?;
    let violated = rows.iter().any(|(_, r)| r.verdict == Verdict::Violated);
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}
