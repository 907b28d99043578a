//! The monotone gap function `φ` for dominated pairs and the auxiliary
//! `ψ`, `χ` of the scalar conjugate inequality.
//!
//! For `u >= v >= 0` and `2 <= p <= q`,
//!
//! ```text
//! φ(t) = ‖u + tv‖_p^q + ‖u − tv‖_p^q − 2^(q−1) (‖u‖_p^q + ‖tv‖_p^q)
//! ```
//!
//! is nondecreasing on `[0, 1]`; `φ(1) − φ(0)` is exactly the gap of the
//! dominated-pair inequality. `ψ` and `χ` have no such monotonicity, and
//! [`chi_sign_scan`] records where `χ` changes sign.

use crate::error::{Error, Result};
use crate::norms::{check_same_len, compensated_sum, norm_pow, pow, power_sum, ExponentPair, NonnegVector, Weights};

/// Exclusion radius around breakpoints for the analytic derivative.
pub const BREAKPOINT_RADIUS: f64 = 1e-9;

/// Relative tolerance of [`monotonicity_scan`].
pub const MONOTONE_TOL: f64 = 1e-8;

/// Values of `χ` within this band count as zero in [`chi_sign_scan`].
pub const CHI_ZERO_BAND: f64 = 1e-12;

/// Frozen inputs of `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiContext {
    u: NonnegVector,
    v: NonnegVector,
    p: f64,
    q: f64,
    weights: Option<Weights>,
    exploratory: bool,
}

impl PhiContext {
    /// A dominated context with `2 <= p <= q`.
    pub fn new(u: NonnegVector, v: NonnegVector, p: f64, q: f64, weights: Option<Weights>) -> Result<Self> {
        ExponentPair::main(p, q)?;
        check_same_len(u.len(), v.len())?;
        if let Some(w) = &weights {
            w.check_len(u.len())?;
        }
        if let Some(i) = u.iter().zip(v.iter()).position(|(a, b)| a < b) {
            return Err(Error::DominanceViolation(i));
        }
        Ok(Self {
            u,
            v,
            p,
            q,
            weights,
            exploratory: false,
        })
    }

    /// Drops the dominance and regime requirements (only `p, q >= 1`), and
    /// lets [`phi`] accept any real `t`.
    pub fn exploratory(u: NonnegVector, v: NonnegVector, p: f64, q: f64, weights: Option<Weights>) -> Result<Self> {
        for e in [p, q] {
            if !(e >= 1.0 && e.is_finite()) {
                return Err(Error::ExponentOutOfRange(e));
            }
        }
        check_same_len(u.len(), v.len())?;
        if let Some(w) = &weights {
            w.check_len(u.len())?;
        }
        Ok(Self {
            u,
            v,
            p,
            q,
            weights,
            exploratory: true,
        })
    }

    pub fn u(&self) -> &NonnegVector {
        &self.u
    }

    pub fn v(&self) -> &NonnegVector {
        &self.v
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn weights(&self) -> Option<&Weights> {
        self.weights.as_ref()
    }

    pub fn is_exploratory(&self) -> bool {
        self.exploratory
    }

    fn shifted(&self, t: f64, sign: f64) -> Vec<f64> {
        self.u.iter().zip(self.v.iter()).map(|(a, b)| a + sign * t * b).collect()
    }

    /// The three terms of `φ(t)`: plus-norm, minus-norm, subtracted part.
    fn terms(&self, t: f64) -> (f64, f64, f64) {
        let w = self.weights.as_ref();
        let plus = norm_pow(&self.shifted(t, 1.0), w, self.p, self.q);
        let minus = norm_pow(&self.shifted(t, -1.0), w, self.p, self.q);
        let base = norm_pow(&self.u, w, self.p, self.q) + pow(t.abs(), self.q) * norm_pow(&self.v, w, self.p, self.q);
        (plus, minus, pow(2.0, self.q - 1.0) * base)
    }

    /// Magnitude of the largest term of `φ(t)`, floored at 1.
    pub fn scale_at(&self, t: f64) -> f64 {
        let (a, b, c) = self.terms(t);
        (a + b).max(c).max(1.0)
    }
}

fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError { value: t, domain: "[0, 1]" });
    }
    Ok(())
}

/// `φ(t)` for `t ∈ [0, 1]`; exploratory contexts accept any finite `t`.
pub fn phi(ctx: &PhiContext, t: f64) -> Result<f64> {
    if ctx.exploratory {
        if !t.is_finite() {
            return Err(Error::DomainError { value: t, domain: "finite reals" });
        }
    } else {
        check_unit_interval(t)?;
    }
    let (a, b, c) = ctx.terms(t);
    Ok(a + b - c)
}

/// `φ(t)` for any finite `t`, regardless of the context's mode.
pub fn phi_relaxed(ctx: &PhiContext, t: f64) -> f64 {
    let (a, b, c) = ctx.terms(t);
    a + b - c
}

/// `{u_i / v_i : v_i ≠ 0} ∩ (0, 1)`, sorted and deduplicated.
pub fn breakpoints(ctx: &PhiContext) -> Vec<f64> {
    let mut points: Vec<f64> = ctx
        .u
        .iter()
        .zip(ctx.v.iter())
        .filter(|(_, b)| **b != 0.0)
        .map(|(a, b)| a / b)
        .filter(|r| *r > 0.0 && *r < 1.0)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Distance from `t` to the nearest breakpoint, infinite when there is none.
pub fn breakpoint_distance(ctx: &PhiContext, t: f64) -> f64 {
    breakpoints(ctx)
        .into_iter()
        .map(|b| (b - t).abs())
        .fold(f64::INFINITY, f64::min)
}

/// An analytic derivative value with the magnitude of the terms that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub scale: f64,
}

/// `φ'(t)` with its term scale; see [`phi_prime`].
pub fn phi_prime_detailed(ctx: &PhiContext, t: f64) -> Result<Derivative> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::DomainError { value: t, domain: "(0, 1)" });
    }
    if breakpoint_distance(ctx, t) <= BREAKPOINT_RADIUS {
        return Err(Error::AtBreakpoint(t));
    }
    let (p, q) = (ctx.p, ctx.q);
    let w = ctx.weights.as_ref();
    let mass = |i: usize| w.map_or(1.0, |w| w.as_slice()[i]);
    let v = ctx.v.as_slice();

    // Σ w|u ± tv|^p and Σ w v sgn(u ± tv)|u ± tv|^(p-1)
    let branch = |sign: f64| {
        let shifted = ctx.shifted(t, sign);
        let sum = power_sum(&shifted, w, p);
        let slope = compensated_sum(
            shifted
                .iter()
                .enumerate()
                .map(|(i, s)| mass(i) * v[i] * s.signum() * pow(s.abs(), p - 1.0)),
        );
        (sum, slope)
    };
    let (plus_sum, plus_slope) = branch(1.0);
    let (minus_sum, minus_slope) = branch(-1.0);

    let first = pow(plus_sum, q / p - 1.0) * plus_slope;
    let second = pow(minus_sum, q / p - 1.0) * minus_slope;
    let third = pow(2.0, q - 1.0) * norm_pow(v, w, p, q) * pow(t, q - 1.0);
    Ok(Derivative {
        value: q * (first - second - third),
        scale: (q * (first.abs() + second.abs() + third.abs())).max(1.0),
    })
}

/// Closed-form `φ'(t)` on `(0, 1)` away from breakpoints.
///
/// For dominated contexts `u_i − t v_i >= 0`, and this is the textbook
/// derivative; exploratory contexts use `sgn(u_i − t v_i)` for the
/// derivative of the absolute value.
pub fn phi_prime(ctx: &PhiContext, t: f64) -> Result<f64> {
    phi_prime_detailed(ctx, t).map(|d| d.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub min_increment: f64,
    /// Grid index `k` of the smallest increment `φ(t_{k+1}) − φ(t_k)`.
    pub argmin: usize,
    pub is_nondecreasing: bool,
    pub scale: f64,
    /// `(t_k, φ(t_k))` on the uniform grid.
    pub samples: Vec<(f64, f64)>,
}

/// Uniform grid `t_k = k / (n − 1)` on `[0, 1]`.
pub(crate) fn unit_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if k + 1 == n { 1.0 } else { k as f64 / (n - 1) as f64 })
}

/// Evaluates `φ` on a uniform grid and reports the smallest increment.
pub fn monotonicity_scan(ctx: &PhiContext, grid_size: usize) -> Result<MonotonicityReport> {
    if grid_size < 2 {
        return Err(Error::GridTooCoarse(grid_size));
    }
    let mut scale = 1.0f64;
    let samples: Vec<(f64, f64)> = unit_grid(grid_size)
        .map(|t| {
            let (a, b, c) = ctx.terms(t);
            scale = scale.max((a + b).max(c));
            (t, a + b - c)
        })
        .collect();
    let (argmin, min_increment) = samples
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, d)| if d < best.1 { (k, d) } else { best });
    Ok(MonotonicityReport {
        min_increment,
        argmin,
        is_nondecreasing: min_increment >= -MONOTONE_TOL * scale,
        scale,
        samples,
    })
}

/// Inputs of `ψ` and `χ`: independent `p, q > 1` and `c ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiContext {
    p: f64,
    q: f64,
    c: f64,
}

impl ChiContext {
    pub fn new(p: f64, q: f64, c: f64) -> Result<Self> {
        for e in [p, q] {
            if !(e > 1.0 && e.is_finite()) {
                return Err(Error::ExponentOutOfRange(e));
            }
        }
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::DomainError { value: c, domain: "(0, 1]" });
        }
        Ok(Self { p, q, c })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// True when `p(q − 1) = q` within `1e-12`, the case where
    /// `ψ'(t) = χ(ct)`.
    pub fn is_conjugate(&self) -> bool {
        (self.p * (self.q - 1.0) - self.q).abs() <= 1e-12 * self.q
    }
}

/// `ψ(t) = (1+ct)^q + (1−ct)^q − 2(1 + c^p t^p)^(q−1)`.
pub fn psi(ctx: &ChiContext, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    let ChiContext { p, q, c } = *ctx;
    let s = c * t;
    Ok(pow(1.0 + s, q) + pow(1.0 - s, q) - 2.0 * pow(1.0 + pow(c, p) * pow(t, p), q - 1.0))
}

/// `ψ'(t) = qc(1+ct)^(q−1) − qc(1−ct)^(q−1) − 2p(q−1)(1 + c^p t^p)^(q−2) c^p t^(p−1)`,
/// extended to `t = 0` by its limit `0`.
pub fn psi_prime(ctx: &ChiContext, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    let ChiContext { p, q, c } = *ctx;
    let s = c * t;
    let cp = pow(c, p);
    Ok(q * c * pow(1.0 + s, q - 1.0)
        - q * c * pow(1.0 - s, q - 1.0)
        - 2.0 * p * (q - 1.0) * pow(1.0 + cp * pow(t, p), q - 2.0) * cp * pow(t, p - 1.0))
}

/// `χ(s) = qc((1+s)^(q−1) − (1−s)^(q−1) − 2(1 + s^p)^(q−2) s^(p−1))` on `[0, c]`.
pub fn chi(ctx: &ChiContext, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s <= ctx.c) {
        return Err(Error::DomainError { value: s, domain: "[0, c]" });
    }
    let ChiContext { p, q, c } = *ctx;
    Ok(q * c * (pow(1.0 + s, q - 1.0) - pow(1.0 - s, q - 1.0) - 2.0 * pow(1.0 + pow(s, p), q - 2.0) * pow(s, p - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiScan {
    pub has_positive: bool,
    pub has_negative: bool,
    /// `[s_lo, s_hi]` brackets between consecutive grid points of opposite
    /// definite sign (points inside the zero band are skipped).
    pub sign_change_intervals: Vec<(f64, f64)>,
    /// `(s_k, χ(s_k))` on the uniform grid over `[0, c]`.
    pub samples: Vec<(f64, f64)>,
}

/// Scans `χ` on `grid_size >= 3` uniform points of `[0, c]`.
pub fn chi_sign_scan(ctx: &ChiContext, grid_size: usize) -> Result<ChiScan> {
    if grid_size < 3 {
        return Err(Error::GridTooCoarse(grid_size));
    }
    let samples = unit_grid(grid_size)
        .map(|t| {
            let s = ctx.c * t;
            chi(ctx, s).map(|value| (s, value))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut intervals = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    for &(s, value) in &samples {
        if value.abs() <= CHI_ZERO_BAND {
            continue;
        }
        let positive = value > 0.0;
        if let Some((prev_s, prev_positive)) = last {
            if prev_positive != positive {
                intervals.push((prev_s, s));
            }
        }
        last = Some((s, positive));
    }
    Ok(ChiScan {
        has_positive: samples.iter().any(|(_, v)| *v > CHI_ZERO_BAND),
        has_negative: samples.iter().any(|(_, v)| *v < -CHI_ZERO_BAND),
        sign_change_intervals: intervals,
        samples,
    })
}
