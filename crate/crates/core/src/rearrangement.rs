//! Dominance rearrangement and the swap inequalities behind it.
//!
//! Exchanging `x_i` and `y_i` at any index leaves `|x_i + y_i|` and
//! `|x_i - y_i|` untouched, so `‖x ± y‖_p` is invariant, while moving the
//! larger entry of every index into one vector can only increase
//! `(Σ a_i)^r + (Σ b_i)^r` for `r >= 1`.

use std::collections::BTreeSet;

use crate::catalog::{GapReport, InequalityId, TolerancePolicy};
use crate::error::{Error, Result};
use crate::norms::{check_same_len, compensated_sum, norm_pow, pow, ExponentPair, NonnegVector, Weights};

/// Largest length accepted by [`brute_force_swap_oracle`].
pub const ORACLE_MAX_LEN: usize = 16;

/// `(A, a, B, b, r)` with `A >= B`, `a > b`, all nonnegative, `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapInstance {
    big_base: f64,
    big_shift: f64,
    small_base: f64,
    small_shift: f64,
    r: f64,
}

impl SwapInstance {
    /// Arguments in the order `A, a, B, b, r`.
    pub fn new(big_base: f64, big_shift: f64, small_base: f64, small_shift: f64, r: f64) -> Result<Self> {
        for (i, x) in [big_base, big_shift, small_base, small_shift].into_iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEntry(i));
            }
            if x < 0.0 {
                return Err(Error::NegativeEntry(i));
            }
        }
        if !(r >= 1.0 && r.is_finite()) {
            return Err(Error::ExponentOutOfRange(r));
        }
        if big_base < small_base {
            return Err(Error::DominanceViolation(0));
        }
        if big_shift <= small_shift {
            return Err(Error::DominanceViolation(1));
        }
        Ok(Self {
            big_base,
            big_shift,
            small_base,
            small_shift,
            r,
        })
    }

    /// `(A, a, B, b, r)`.
    pub fn parts(&self) -> (f64, f64, f64, f64, f64) {
        (self.big_base, self.big_shift, self.small_base, self.small_shift, self.r)
    }
}

/// A dominated pair obtained by exchanging entries of a source pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedPair {
    pub u: NonnegVector,
    pub v: NonnegVector,
    /// Indices where the source had `x_i < y_i`.
    pub swapped_indices: BTreeSet<usize>,
}

/// `u_i = max(x_i, y_i)`, `v_i = min(x_i, y_i)`; ties stay in place.
pub fn dominance_rearrange(x: &NonnegVector, y: &NonnegVector) -> Result<RearrangedPair> {
    check_same_len(x.len(), y.len())?;
    let (u, v, swapped) = rearrange_slices(x, y);
    Ok(RearrangedPair {
        u: NonnegVector::new(u)?,
        v: NonnegVector::new(v)?,
        swapped_indices: swapped,
    })
}

fn rearrange_slices(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>, BTreeSet<usize>) {
    let mut u = Vec::with_capacity(x.len());
    let mut v = Vec::with_capacity(x.len());
    let mut swapped = BTreeSet::new();
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        if a >= b {
            u.push(a);
            v.push(b);
        } else {
            u.push(b);
            v.push(a);
            swapped.insert(i);
        }
    }
    (u, v, swapped)
}

pub(crate) fn swap_report(
    big_base: f64,
    big_shift: f64,
    small_base: f64,
    small_shift: f64,
    r: f64,
    policy: &TolerancePolicy,
) -> GapReport {
    let lhs = pow((big_base + small_shift).abs(), r) + pow((small_base + big_shift).abs(), r);
    let rhs = pow((big_base + big_shift).abs(), r) + pow((small_base + small_shift).abs(), r);
    GapReport::new(InequalityId::Swap28, r, r, lhs, rhs, policy)
}

/// `(A+b)^r + (B+a)^r <= (A+a)^r + (B+b)^r`.
pub fn check_swap_inequality(inst: &SwapInstance) -> GapReport {
    let (big_base, big_shift, small_base, small_shift, r) = inst.parts();
    swap_report(big_base, big_shift, small_base, small_shift, r, &TolerancePolicy::default())
}

fn weighted_sum(v: &[f64], w: Option<&Weights>) -> f64 {
    match w {
        None => compensated_sum(v.iter().copied()),
        Some(w) => compensated_sum(v.iter().zip(w.as_slice()).map(|(x, m)| x * m)),
    }
}

pub(crate) fn sum_power_report(x: &[f64], y: &[f64], w: Option<&Weights>, r: f64, policy: &TolerancePolicy) -> GapReport {
    let (u, v, _) = rearrange_slices(x, y);
    let lhs = pow(weighted_sum(x, w).abs(), r) + pow(weighted_sum(y, w).abs(), r);
    let rhs = pow(weighted_sum(&u, w).abs(), r) + pow(weighted_sum(&v, w).abs(), r);
    GapReport::new(InequalityId::SumPow212, r, r, lhs, rhs, policy)
}

pub(crate) fn norm_gain_report(
    x: &[f64],
    y: &[f64],
    w: Option<&Weights>,
    p: f64,
    q: f64,
    policy: &TolerancePolicy,
) -> GapReport {
    let (u, v, _) = rearrange_slices(x, y);
    let lhs = norm_pow(x, w, p, q) + norm_pow(y, w, p, q);
    let rhs = norm_pow(&u, w, p, q) + norm_pow(&v, w, p, q);
    GapReport::new(InequalityId::RearrGain217, p, q, lhs, rhs, policy)
}

/// `(Σx)^r + (Σy)^r <= (Σu)^r + (Σv)^r` for the rearranged pair `(u, v)`.
pub fn sum_power_rearrangement_gap(x: &NonnegVector, y: &NonnegVector, r: f64) -> Result<GapReport> {
    check_same_len(x.len(), y.len())?;
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::ExponentOutOfRange(r));
    }
    Ok(sum_power_report(x, y, None, r, &TolerancePolicy::default()))
}

/// `‖x‖_p^q + ‖y‖_p^q <= ‖u‖_p^q + ‖v‖_p^q` for the rearranged pair.
pub fn rearrangement_norm_gain(x: &NonnegVector, y: &NonnegVector, p: f64, q: f64) -> Result<GapReport> {
    ExponentPair::main(p, q)?;
    check_same_len(x.len(), y.len())?;
    Ok(norm_gain_report(x, y, None, p, q, &TolerancePolicy::default()))
}

/// Maximum of `(Σa_i)^r + (Σb_i)^r` over all `2^n` ways of exchanging
/// `x_i` and `y_i`.
pub fn brute_force_swap_oracle(x: &NonnegVector, y: &NonnegVector, r: f64) -> Result<f64> {
    check_same_len(x.len(), y.len())?;
    let n = x.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_LEN,
        });
    }
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::ExponentOutOfRange(r));
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << n) {
        let mut first = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                first.push(y[i]);
                second.push(x[i]);
            } else {
                first.push(x[i]);
                second.push(y[i]);
            }
        }
        let value = pow(compensated_sum(first), r) + pow(compensated_sum(second), r);
        best = best.max(value);
    }
    Ok(best)
}
