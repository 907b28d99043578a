use crate::{CliError, CliResult};

/// Largest number of points a single grid may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

/// Parses a finite real, also accepting a quotient `a/b` such as `4/3`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("invalid number '{s}'"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("invalid number '{s}'"))?;
            num / den
        }
        None => s.parse().map_err(|_| format!("invalid number '{s}'"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not a finite number"))
    }
}

/// Parses a comma-separated list of reals.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    if s.trim().is_empty() {
        return Err(CliError::new("empty list"));
    }
    s.split(',').map(|item| parse_real(item).map_err(CliError::new)).collect()
}

/// Expands `start:stop:step` into `start + k·step` for `k = 0..=n`, where
/// `n` is `(stop − start)/step` rounded to the nearest integer (halves down),
/// so `stop` is reached whenever the grid lands within half a step of it.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::new(format!("bad grid '{s}': {why} (expected start:stop:step)"));
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad("need exactly three fields"));
    };
    let start = parse_real(start).map_err(|e| bad(&e))?;
    let stop = parse_real(stop).map_err(|e| bad(&e))?;
    let step = parse_real(step).map_err(|e| bad(&e))?;
    if !(step > 0.0) {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    let count = ((stop - start) / step - 0.5).ceil().max(0.0);
    if count >= MAX_GRID_POINTS as f64 {
        return Err(bad("too many points"));
    }
    Ok((0..=count as usize).map(|k| start + k as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(parse_grid("2:4:1").unwrap(), vec![2.0, 3.0, 4.0]);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        assert_eq!(parse_grid("0:1:0.4").unwrap().len(), 3);
        // stop within half a step is reached
        assert_eq!(parse_grid("0:0.99:0.5").unwrap().len(), 3);
        assert_eq!(parse_grid("0:0.74:0.5").unwrap().len(), 2);
    }

    #[test]
    fn grid_rejects_bad_syntax() {
        for s in ["", "2:4", "2:4:1:1", "a:4:1", "2:4:0", "2:4:-1", "4:2:1", "0:1e9:1e-9", "2:inf:1"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
    }

    #[test]
    fn reals_and_fractions() {
        assert_eq!(parse_real("4/3").unwrap(), 4.0 / 3.0);
        assert_eq!(parse_real(" 2.5 ").unwrap(), 2.5);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("NaN").is_err());
        assert_eq!(parse_list("1,-2, 3").unwrap(), vec![1.0, -2.0, 3.0]);
        assert!(parse_list("1,,2").is_err());
    }
}
