use std::io::Write;

use clarkson_core::variational::{chi_sign_scan, ChiContext};
use clarkson_core::Error;

use crate::args::ChiArgs;
use crate::output::{csv_writer, num};
use crate::{CliError, CliResult, EXIT_OK};

pub const HEADER: [&str; 2] = ["s", "chi"];

pub fn run(args: &ChiArgs, out: &mut dyn Write) -> CliResult<i32> {
    let ctx = ChiContext::new(args.p, args.q, args.c)?;
    let scan = chi_sign_scan(&ctx, args.grid_size).map_err(|e| match e {
        Error::GridTooCoarse(n) => CliError::new(format!("grid too coarse: {n} points, minimum 3")),
        e => e.into(),
    })?;

    let mut csv = csv_writer(out);
    csv.write_record(HEADER)?;
    for &(s, value) in &scan.samples {
        csv.write_record([num(s), num(value)])?;
    }
    csv.write_record(["sign_changes", &scan.sign_change_intervals.len().to_string()])?;
    for &(lo, hi) in &scan.sign_change_intervals {
        csv.write_record(["sign_change", &num(lo), &num(hi)])?;
    }
    csv.write_record(["has_positive", &scan.has_positive.to_string()])?;
    csv.write_record(["has_negative", &scan.has_negative.to_string()])?;
    csv.flush()?;
    Ok(EXIT_OK)
}
