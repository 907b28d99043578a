use std::io::Write;

use clarkson_core::variational::{
    breakpoint_distance, monotonicity_scan, phi_prime, PhiContext, BREAKPOINT_RADIUS,
};
use clarkson_core::NonnegVector;

use crate::args::PhiArgs;
use crate::input::{inline_pair, load_pairs};
use crate::output::{csv_writer, num};
use crate::{CliError, CliResult, EXIT_OK};

pub const HEADER: [&str; 4] = ["t", "phi", "phi_prime", "is_breakpoint_adjacent"];

pub fn run(args: &PhiArgs, out: &mut dyn Write) -> CliResult<i32> {
    let pair = match (&args.input, &args.u, &args.v) {
        (Some(path), _, _) => load_pairs(path)?.swap_remove(0),
        (None, Some(u), Some(v)) => inline_pair(u, v, args.w.as_deref())?,
        _ => return Err(CliError::new("give --input FILE or inline --u and --v")),
    };
    let ctx = PhiContext::new(
        NonnegVector::new(pair.x.into_inner())?,
        NonnegVector::new(pair.y.into_inner())?,
        args.p,
        args.q,
        pair.w,
    )?;
    let report = monotonicity_scan(&ctx, args.grid_size)?;

    let mut csv = csv_writer(out);
    csv.write_record(HEADER)?;
    for &(t, value) in &report.samples {
        let adjacent = breakpoint_distance(&ctx, t) <= BREAKPOINT_RADIUS;
        // Blank where the derivative is undefined: endpoints and kinks.
        let derivative = phi_prime(&ctx, t).map(num).unwrap_or_default();
        csv.write_record([num(t), num(value), derivative, adjacent.to_string()])?;
    }
    let argmin_t = report.samples[report.argmin].0;
    csv.write_record(["min_increment", &num(report.min_increment)])?;
    csv.write_record(["argmin_t", &num(argmin_t)])?;
    csv.write_record(["is_nondecreasing", &report.is_nondecreasing.to_string()])?;
    csv.flush()?;
    Ok(EXIT_OK)
}
