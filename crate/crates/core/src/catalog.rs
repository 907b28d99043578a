//! Every inequality as an oriented gap functional.
//!
//! A [`GapReport`] always carries `gap = rhs - lhs`, with the two sides
//! arranged so that `gap >= 0` means the inequality holds in the direction
//! it is stated for the given exponent regime. For `1 < p < 2` the classical
//! inequalities reverse, and the evaluators swap sides accordingly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{
    check_same_len, conjugate_exponent, norm_pow, pow, power_sum, ExponentPair, NonnegVector,
    RealVector, Regime, Weights,
};
use crate::rearrangement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    C11,
    C12,
    C13Left,
    C13Right,
    Main17,
    Prop14,
    Prop15,
    Cor16,
    Swap28,
    SumPow212,
    RearrGain217,
}

/// What an inequality requires of its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Arbitrary real vectors.
    Signed,
    /// Nonnegative vectors.
    Nonnegative,
    /// Nonnegative vectors with `x_i >= y_i`.
    Dominated,
    /// First entries only, with `x >= y >= 0`.
    Scalar,
    /// First two entries as `A = x_0, B = y_0, a = x_1, b = y_1`.
    Swap,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Signed => "signed",
            Domain::Nonnegative => "nonnegative",
            Domain::Dominated => "dominated-pair",
            Domain::Scalar => "scalar dominated-pair",
            Domain::Swap => "swap-instance",
        }
    }
}

/// How an inequality reads its exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentFamily {
    /// `p > 1`, `q = p/(p-1)` derived.
    Conjugate,
    /// `2 <= p <= q`.
    Main,
    /// `2 <= p = q`.
    Diagonal,
    /// One exponent `q` (or `r`), with the given lower bound.
    Scalar { min: f64 },
}

impl InequalityId {
    pub const ALL: [InequalityId; 11] = [
        InequalityId::C11,
        InequalityId::C12,
        InequalityId::C13Left,
        InequalityId::C13Right,
        InequalityId::Main17,
        InequalityId::Prop14,
        InequalityId::Prop15,
        InequalityId::Cor16,
        InequalityId::Swap28,
        InequalityId::SumPow212,
        InequalityId::RearrGain217,
    ];

    /// Command-line spelling, following the equation numbering.
    pub fn name(self) -> &'static str {
        match self {
            InequalityId::C11 => "c-1.1",
            InequalityId::C12 => "c-1.2",
            InequalityId::C13Left => "c-1.3-left",
            InequalityId::C13Right => "c-1.3-right",
            InequalityId::Main17 => "main-1.7",
            InequalityId::Prop14 => "prop-1.4",
            InequalityId::Prop15 => "prop-1.5",
            InequalityId::Cor16 => "cor-1.6",
            InequalityId::Swap28 => "swap-2.8",
            InequalityId::SumPow212 => "sumpow-2.12",
            InequalityId::RearrGain217 => "rearr-2.17",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            InequalityId::C11
            | InequalityId::C12
            | InequalityId::C13Left
            | InequalityId::C13Right => Domain::Signed,
            InequalityId::Main17 | InequalityId::SumPow212 | InequalityId::RearrGain217 => {
                Domain::Nonnegative
            }
            InequalityId::Prop14 | InequalityId::Prop15 => Domain::Dominated,
            InequalityId::Cor16 => Domain::Scalar,
            InequalityId::Swap28 => Domain::Swap,
        }
    }

    pub fn exponent_family(self) -> ExponentFamily {
        match self {
            InequalityId::C11
            | InequalityId::C12
            | InequalityId::C13Left
            | InequalityId::C13Right => ExponentFamily::Conjugate,
            InequalityId::Main17 | InequalityId::Prop14 | InequalityId::RearrGain217 => {
                ExponentFamily::Main
            }
            InequalityId::Prop15 => ExponentFamily::Diagonal,
            InequalityId::Cor16 => ExponentFamily::Scalar { min: 2.0 },
            InequalityId::Swap28 | InequalityId::SumPow212 => ExponentFamily::Scalar { min: 1.0 },
        }
    }

    /// Builds the exponent pair this inequality expects from raw `(p, q)`.
    ///
    /// Conjugate-family ids ignore `q`; scalar-family ids ignore `p`.
    pub fn exponents(self, p: f64, q: f64) -> Result<ExponentPair> {
        match self.exponent_family() {
            ExponentFamily::Conjugate => ExponentPair::clarkson(p),
            ExponentFamily::Main => ExponentPair::main(p, q),
            ExponentFamily::Diagonal => {
                if p != q {
                    return Err(Error::RegimeViolation {
                        p,
                        q,
                        expected: "p = q >= 2",
                    });
                }
                ExponentPair::main(p, q)
            }
            ExponentFamily::Scalar { min } => {
                if !(q >= min) {
                    return Err(Error::RegimeViolation {
                        p,
                        q,
                        expected: if min >= 2.0 { "q >= 2" } else { "r >= 1" },
                    });
                }
                ExponentPair::scalar(q)
            }
        }
    }

    /// Checks that a validated pair belongs to this inequality's regime.
    fn check_regime(self, exps: &ExponentPair) -> Result<()> {
        if exps.regime == Regime::Exploratory {
            return Ok(());
        }
        let expected = match self.exponent_family() {
            ExponentFamily::Conjugate => {
                matches!(exps.regime, Regime::Conjugate | Regime::Reverse) && exps.is_conjugate()
            }
            ExponentFamily::Main => exps.regime == Regime::Main,
            ExponentFamily::Diagonal => {
                matches!(exps.regime, Regime::Main | Regime::Scalar) && exps.p == exps.q && exps.p >= 2.0
            }
            ExponentFamily::Scalar { min } => exps.regime == Regime::Scalar && exps.q >= min,
        };
        if expected {
            Ok(())
        } else {
            Err(Error::RegimeViolation {
                p: exps.p,
                q: exps.q,
                expected: "the regime of this inequality",
            })
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<_> = InequalityId::ALL.iter().map(|id| id.name()).collect();
                format!("unknown inequality '{s}' (expected one of {})", known.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Borderline,
    Violated,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Borderline => "BORDERLINE",
            Verdict::Violated => "VIOLATED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative thresholds for turning a gap into a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    rel_tol: f64,
    borderline_band: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            borderline_band: 1e-7,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_tol: f64, borderline_band: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= borderline_band && borderline_band.is_finite()) {
            return Err(Error::InvalidTolerance {
                rel_tol,
                borderline_band,
            });
        }
        Ok(Self {
            rel_tol,
            borderline_band,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn borderline_band(&self) -> f64 {
        self.borderline_band
    }

    /// `gap >= rel_tol·scale` holds, `gap <= -borderline_band·scale` is a
    /// violation, anything in between is borderline.
    pub fn judge(&self, gap: f64, scale: f64) -> Verdict {
        if gap >= self.rel_tol * scale {
            Verdict::Holds
        } else if gap <= -self.borderline_band * scale {
            Verdict::Violated
        } else {
            Verdict::Borderline
        }
    }
}

/// One evaluation of an inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub id: InequalityId,
    pub p: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub scale: f64,
    pub verdict: Verdict,
}

impl GapReport {
    pub fn new(id: InequalityId, p: f64, q: f64, lhs: f64, rhs: f64, policy: &TolerancePolicy) -> Self {
        let gap = rhs - lhs;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        Self {
            id,
            p,
            q,
            lhs,
            rhs,
            gap,
            scale,
            verdict: policy.judge(gap, scale),
        }
    }

    pub fn normalized_gap(&self) -> f64 {
        self.gap / self.scale
    }

    /// Recomputes the verdict under another policy.
    pub fn rejudge(mut self, policy: &TolerancePolicy) -> Self {
        self.verdict = policy.judge(self.gap, self.scale);
        self
    }

    /// The same evaluation with the two sides exchanged. Only test harnesses
    /// use this, to check that a search notices a wrong orientation.
    pub fn inverted(self, policy: &TolerancePolicy) -> Self {
        Self::new(self.id, self.p, self.q, self.rhs, self.lhs, policy)
    }
}

pub fn verdict(report: &GapReport, policy: &TolerancePolicy) -> Verdict {
    policy.judge(report.gap, report.scale)
}

fn check_pair(x: &[f64], y: &[f64], w: Option<&Weights>) -> Result<()> {
    check_same_len(x.len(), y.len())?;
    if let Some(w) = w {
        w.check_len(x.len())?;
    }
    Ok(())
}

fn check_dominance(u: &[f64], v: &[f64]) -> Result<()> {
    match u.iter().zip(v).position(|(a, b)| a < b) {
        Some(i) => Err(Error::DominanceViolation(i)),
        None => Ok(()),
    }
}

fn check_nonneg(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| *x < 0.0) {
        Some(i) => Err(Error::NegativeEntry(i)),
        None => Ok(()),
    }
}

/// `(‖x+y‖_p^s, ‖x-y‖_p^s)`.
fn sum_and_difference(x: &[f64], y: &[f64], w: Option<&Weights>, p: f64, s: f64) -> (f64, f64) {
    let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    (norm_pow(&sum, w, p, s), norm_pow(&diff, w, p, s))
}

/// Swaps sides in the reverse regime `p < 2`.
fn oriented(id: InequalityId, p: f64, q: f64, lhs: f64, rhs: f64, policy: &TolerancePolicy) -> GapReport {
    if p < 2.0 {
        GapReport::new(id, p, q, rhs, lhs, policy)
    } else {
        GapReport::new(id, p, q, lhs, rhs, policy)
    }
}

pub(crate) fn clarkson_1_1_raw(x: &[f64], y: &[f64], w: Option<&Weights>, p: f64, policy: &TolerancePolicy) -> Result<GapReport> {
    let q = conjugate_exponent(p)?;
    let lhs = 2.0 * pow(power_sum(x, w, p) + power_sum(y, w, p), q - 1.0);
    let (s, d) = sum_and_difference(x, y, w, p, q);
    Ok(oriented(InequalityId::C11, p, q, lhs, s + d, policy))
}

pub(crate) fn clarkson_1_2_raw(x: &[f64], y: &[f64], w: Option<&Weights>, p: f64, policy: &TolerancePolicy) -> Result<GapReport> {
    let q = conjugate_exponent(p)?;
    let (s, d) = sum_and_difference(x, y, w, p, p);
    let rhs = 2.0 * pow(norm_pow(x, w, p, q) + norm_pow(y, w, p, q), p - 1.0);
    Ok(oriented(InequalityId::C12, p, q, s + d, rhs, policy))
}

pub(crate) fn clarkson_1_3_raw(
    x: &[f64],
    y: &[f64],
    w: Option<&Weights>,
    p: f64,
    policy: &TolerancePolicy,
) -> Result<(GapReport, GapReport)> {
    let q = conjugate_exponent(p)?;
    let base = power_sum(x, w, p) + power_sum(y, w, p);
    let (s, d) = sum_and_difference(x, y, w, p, p);
    let middle = s + d;
    let left = oriented(InequalityId::C13Left, p, q, 2.0 * base, middle, policy);
    let right = oriented(InequalityId::C13Right, p, q, middle, pow(2.0, p - 1.0) * base, policy);
    Ok((left, right))
}

pub(crate) fn main_1_7_raw(x: &[f64], y: &[f64], w: Option<&Weights>, p: f64, q: f64, policy: &TolerancePolicy) -> GapReport {
    let lhs = 2.0 * (norm_pow(x, w, p, q) + norm_pow(y, w, p, q));
    let (s, d) = sum_and_difference(x, y, w, p, q);
    GapReport::new(InequalityId::Main17, p, q, lhs, s + d, policy)
}

pub(crate) fn prop_1_4_raw(
    id: InequalityId,
    u: &[f64],
    v: &[f64],
    w: Option<&Weights>,
    p: f64,
    q: f64,
    policy: &TolerancePolicy,
) -> GapReport {
    let lhs = 2.0 * (norm_pow(u, w, p, q) + pow(2.0, q - 2.0) * norm_pow(v, w, p, q));
    let (s, d) = sum_and_difference(u, v, w, p, q);
    GapReport::new(id, p, q, lhs, s + d, policy)
}

pub(crate) fn corollary_1_6_raw(x: f64, y: f64, q: f64, policy: &TolerancePolicy) -> GapReport {
    let lhs = 2.0 * (pow(x.abs(), q) + pow(2.0, q - 2.0) * pow(y.abs(), q));
    let rhs = pow((x + y).abs(), q) + pow((x - y).abs(), q);
    GapReport::new(InequalityId::Cor16, q, q, lhs, rhs, policy)
}

/// Clarkson's first inequality with its conjugate exponent.
pub fn eval_clarkson_1_1(x: &RealVector, y: &RealVector, p: f64, w: Option<&Weights>) -> Result<GapReport> {
    check_pair(x, y, w)?;
    clarkson_1_1_raw(x, y, w, p, &TolerancePolicy::default())
}

pub fn eval_clarkson_1_2(x: &RealVector, y: &RealVector, p: f64, w: Option<&Weights>) -> Result<GapReport> {
    check_pair(x, y, w)?;
    clarkson_1_2_raw(x, y, w, p, &TolerancePolicy::default())
}

/// Both halves of the two-sided estimate, `(left, right)`.
pub fn eval_clarkson_1_3(
    x: &RealVector,
    y: &RealVector,
    p: f64,
    w: Option<&Weights>,
) -> Result<(GapReport, GapReport)> {
    check_pair(x, y, w)?;
    clarkson_1_3_raw(x, y, w, p, &TolerancePolicy::default())
}

/// `2(‖x‖^q + ‖y‖^q) <= ‖x+y‖^q + ‖x-y‖^q` for nonnegative `x, y`.
pub fn eval_main_1_7(x: &NonnegVector, y: &NonnegVector, p: f64, q: f64, w: Option<&Weights>) -> Result<GapReport> {
    ExponentPair::main(p, q)?;
    check_pair(x, y, w)?;
    Ok(main_1_7_raw(x, y, w, p, q, &TolerancePolicy::default()))
}

/// `2(‖u‖^q + 2^(q-2)‖v‖^q) <= ‖u+v‖^q + ‖u-v‖^q` for `u >= v >= 0`.
pub fn eval_prop_1_4(u: &NonnegVector, v: &NonnegVector, p: f64, q: f64, w: Option<&Weights>) -> Result<GapReport> {
    ExponentPair::main(p, q)?;
    check_pair(u, v, w)?;
    check_dominance(u, v)?;
    Ok(prop_1_4_raw(InequalityId::Prop14, u, v, w, p, q, &TolerancePolicy::default()))
}

/// The `q = p` case of [`eval_prop_1_4`].
pub fn eval_prop_1_5(u: &NonnegVector, v: &NonnegVector, p: f64, w: Option<&Weights>) -> Result<GapReport> {
    let mut report = eval_prop_1_4(u, v, p, p, w)?;
    report.id = InequalityId::Prop15;
    Ok(report)
}

pub fn eval_corollary_1_6(x: f64, y: f64, q: f64) -> Result<GapReport> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::NonFiniteEntry(if x.is_finite() { 1 } else { 0 }));
    }
    if y < 0.0 {
        return Err(Error::NegativeEntry(1));
    }
    if x < y {
        return Err(Error::DominanceViolation(0));
    }
    if !(q >= 2.0 && q.is_finite()) {
        return Err(Error::RegimeViolation {
            p: q,
            q,
            expected: "q >= 2",
        });
    }
    Ok(corollary_1_6_raw(x, y, q, &TolerancePolicy::default()))
}

/// `(x + y, x - y)`. Applying it twice yields `(2x, 2y)`.
pub fn halving_substitution(x: &RealVector, y: &RealVector) -> Result<(RealVector, RealVector)> {
    use crate::norms::{combine, Sign};
    Ok((combine(x, y, Sign::Plus)?, combine(x, y, Sign::Minus)?))
}

/// Evaluates any inequality on a pair of vectors.
///
/// Inputs must satisfy the id's [`Domain`] and `exps` must belong to its
/// regime, unless `exps` is [`Regime::Exploratory`], in which case both
/// checks are skipped and the raw formula is evaluated as is. Scalar ids read
/// the first entry of each vector; [`InequalityId::Swap28`] reads the first
/// two.
pub fn evaluate(
    id: InequalityId,
    x: &RealVector,
    y: &RealVector,
    w: Option<&Weights>,
    exps: &ExponentPair,
    policy: &TolerancePolicy,
) -> Result<GapReport> {
    check_pair(x, y, w)?;
    id.check_regime(exps)?;
    let explore = exps.regime == Regime::Exploratory;
    if !explore {
        match id.domain() {
            Domain::Signed => {}
            Domain::Nonnegative => {
                check_nonneg(x)?;
                check_nonneg(y)?;
            }
            Domain::Dominated | Domain::Scalar | Domain::Swap => {
                check_nonneg(x)?;
                check_nonneg(y)?;
                check_dominance(x, y)?;
            }
        }
    }
    let (p, q) = (exps.p, exps.q);
    match id {
        InequalityId::C11 => clarkson_1_1_raw(x, y, w, p, policy),
        InequalityId::C12 => clarkson_1_2_raw(x, y, w, p, policy),
        InequalityId::C13Left => Ok(clarkson_1_3_raw(x, y, w, p, policy)?.0),
        InequalityId::C13Right => Ok(clarkson_1_3_raw(x, y, w, p, policy)?.1),
        InequalityId::Main17 => Ok(main_1_7_raw(x, y, w, p, q, policy)),
        InequalityId::Prop14 => Ok(prop_1_4_raw(id, x, y, w, p, q, policy)),
        InequalityId::Prop15 => Ok(prop_1_4_raw(id, x, y, w, p, p, policy)),
        InequalityId::Cor16 => Ok(corollary_1_6_raw(x[0], y[0], q, policy)),
        InequalityId::Swap28 => {
            if x.len() < 2 {
                return Err(Error::LengthMismatch { left: x.len(), right: 2 });
            }
            if !explore && x[1] == y[1] {
                return Err(Error::DominanceViolation(1));
            }
            Ok(rearrangement::swap_report(x[0], x[1], y[0], y[1], q, policy))
        }
        InequalityId::SumPow212 => Ok(rearrangement::sum_power_report(x, y, w, q, policy)),
        InequalityId::RearrGain217 => Ok(rearrangement::norm_gain_report(x, y, w, p, q, policy)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rv(e: &[f64]) -> RealVector {
        RealVector::new(e.to_vec()).unwrap()
    }

    fn nv(e: &[f64]) -> NonnegVector {
        NonnegVector::new(e.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn verdict_examples() {
        let policy = TolerancePolicy::default();
        assert_eq!(policy.judge(1.0, 1.0), Verdict::Holds);
        assert_eq!(policy.judge(0.0, 1.0), Verdict::Borderline);
        assert_eq!(policy.judge(-1.0, 1.0), Verdict::Violated);
        assert_eq!(policy.judge(-1e-8, 1.0), Verdict::Borderline);
        assert!(TolerancePolicy::new(1e-6, 1e-9).is_err());
        assert!(TolerancePolicy::new(0.0, 1e-9).is_err());
    }

    #[test]
    fn clarkson_1_1_examples() {
        let r = eval_clarkson_1_1(&rv(&[1.0, 0.0]), &rv(&[1.0, 0.0]), 3.0, None).unwrap();
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));
        assert_ne!(r.verdict, Verdict::Violated);

        let r = eval_clarkson_1_1(&rv(&[2.0, 0.0]), &rv(&[1.0, 0.0]), 4.0, None).unwrap();
        assert!(close(r.lhs, 2.0 * 17f64.cbrt(), 1e-12));
        assert!(close(r.lhs, 5.142563, 1e-6));
        assert!(close(r.rhs, 5.326749, 1e-6));
        assert!(close(r.gap, 0.184186, 1e-6));
        assert_eq!(r.verdict, Verdict::Holds);

        // Disjoint supports are an equality case in the reverse regime as well.
        let r = eval_clarkson_1_1(&rv(&[1.0, 0.0]), &rv(&[0.0, 1.0]), 1.5, None).unwrap();
        assert!(close(r.lhs, 8.0, 1e-12) && close(r.rhs, 8.0, 1e-12));
        assert_ne!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn reverse_regime_swaps_sides() {
        let x = rv(&[1.0, 2.0, -0.5]);
        let y = rv(&[0.3, -1.0, 2.0]);
        let r = eval_clarkson_1_1(&x, &y, 1.5, None).unwrap();
        let q = 3.0;
        let lhs_stated = 2.0 * pow(power_sum(&x, None, 1.5) + power_sum(&y, None, 1.5), q - 1.0);
        assert!(close(r.rhs, lhs_stated, 1e-12));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn clarkson_1_2_examples() {
        let x = rv(&[0.4, -1.2, 3.0]);
        let r = eval_clarkson_1_2(&x, &x, 3.0, None).unwrap();
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));
        let r = eval_clarkson_1_2(&rv(&[2.0, 0.0]), &rv(&[1.0, 0.0]), 4.0, None).unwrap();
        assert!(r.gap >= 0.0);
        let r = eval_clarkson_1_2(&rv(&[1.0, 1.0]), &rv(&[1.0, 0.0]), 1.5, None).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        // stated sides: ‖x+y‖^p+‖x−y‖^p = 2^1.5 + 2, 2(‖x‖^q+‖y‖^q)^(p-1) = 2·5^0.5
        assert!(close(r.lhs, 2.0 * 5f64.sqrt(), 1e-12));
        assert!(close(r.rhs, 2f64.powf(1.5) + 2.0, 1e-12));
    }

    #[test]
    fn clarkson_1_3_examples() {
        let (l, r) = eval_clarkson_1_3(&rv(&[0.3, -2.0]), &rv(&[1.7, 0.25]), 2.0, None).unwrap();
        assert!(close(l.gap, 0.0, 1e-12 * l.scale));
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));

        let (l, r) = eval_clarkson_1_3(&rv(&[1.0]), &rv(&[1.0]), 3.0, None).unwrap();
        assert_eq!((l.lhs, l.rhs, l.gap), (4.0, 8.0, 4.0));
        assert_eq!((r.lhs, r.rhs, r.gap), (8.0, 8.0, 0.0));

        let x = rv(&[1.5, -0.5, 2.0]);
        let (l, r) = eval_clarkson_1_3(&x, &RealVector::zeros(3).unwrap(), 3.5, None).unwrap();
        assert!(close(l.gap, 0.0, 1e-12 * l.scale));
        let expected = (2f64.powf(2.5) - 2.0) * power_sum(&x, None, 3.5);
        assert!(close(r.gap, expected, 1e-12 * r.scale));
    }

    #[test]
    fn main_1_7_examples() {
        let x = nv(&[0.7, 2.0, 0.1]);
        let zero = nv(&[0.0, 0.0, 0.0]);
        for (p, q) in [(2.0, 2.0), (2.5, 4.0), (3.0, 7.0)] {
            let r = eval_main_1_7(&x, &zero, p, q, None).unwrap();
            assert!(close(r.gap, 0.0, 1e-12 * r.scale));
            assert_eq!(r.verdict, Verdict::Borderline);
        }
        let r = eval_main_1_7(&x, &nv(&[3.0, 0.2, 1.0]), 2.0, 2.0, None).unwrap();
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));

        let r = eval_main_1_7(&nv(&[1.0, 1.0]), &nv(&[1.0, 0.0]), 2.0, 3.0, None).unwrap();
        assert!(close(r.lhs, 2.0 * (2f64.powf(1.5) + 1.0), 1e-12));
        assert!(close(r.lhs, 7.656854, 1e-6));
        assert!(close(r.rhs, 12.180340, 1e-6));
        assert!(close(r.gap, 4.523486, 1e-6));

        assert!(matches!(
            eval_main_1_7(&x, &x, 3.0, 2.5, None),
            Err(Error::RegimeViolation { .. })
        ));
    }

    #[test]
    fn prop_1_4_examples() {
        let u = nv(&[2.0, 1.0]);
        let r = eval_prop_1_4(&u, &nv(&[0.0, 0.0]), 2.5, 3.0, None).unwrap();
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));
        let r = eval_prop_1_4(&u, &u, 2.0, 2.0, None).unwrap();
        assert!(close(r.gap, 0.0, 1e-12 * r.scale));

        // brute force on both sides for u=(2,1), v=(1,1), p=2, q=3
        let r = eval_prop_1_4(&u, &nv(&[1.0, 1.0]), 2.0, 3.0, None).unwrap();
        let lhs = 2.0 * (5f64.powf(1.5) + 2.0 * 2f64.powf(1.5));
        let rhs = 13f64.powf(1.5) + 1.0;
        assert!(close(r.lhs, lhs, 1e-12 * lhs) && close(r.rhs, rhs, 1e-12 * rhs));
        assert!(r.gap >= 0.0);

        assert_eq!(
            eval_prop_1_4(&nv(&[1.0, 1.0]), &nv(&[0.5, 2.0]), 2.0, 3.0, None),
            Err(Error::DominanceViolation(1))
        );
        let r15 = eval_prop_1_5(&u, &nv(&[1.0, 0.5]), 3.0, None).unwrap();
        let r14 = eval_prop_1_4(&u, &nv(&[1.0, 0.5]), 3.0, 3.0, None).unwrap();
        assert_eq!(r15.id, InequalityId::Prop15);
        assert_eq!(r15.gap, r14.gap);
    }

    #[test]
    fn corollary_examples() {
        let r = eval_corollary_1_6(1.0, 1.0, 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.gap), (4.0, 4.0, 0.0));
        let r = eval_corollary_1_6(3.7, 0.0, 5.5).unwrap();
        assert_eq!(r.gap, 0.0);
        let r = eval_corollary_1_6(2.0, 1.0, 3.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.gap), (20.0, 28.0, 8.0));
        assert_eq!(eval_corollary_1_6(1.0, 2.0, 3.0), Err(Error::DominanceViolation(0)));
        assert!(matches!(eval_corollary_1_6(2.0, 1.0, 1.5), Err(Error::RegimeViolation { .. })));
    }

    #[test]
    fn halving_examples() {
        let (u, v) = halving_substitution(&rv(&[1.0, 0.0]), &rv(&[0.0, 1.0])).unwrap();
        assert_eq!((u, v), (rv(&[1.0, 1.0]), rv(&[1.0, -1.0])));
        let x = rv(&[0.5, 2.0]);
        let (_, v) = halving_substitution(&x, &x).unwrap();
        assert_eq!(v, rv(&[0.0, 0.0]));
        let y = rv(&[-1.25, 3.0]);
        let (u, v) = halving_substitution(&x, &y).unwrap();
        let (u2, v2) = halving_substitution(&u, &v).unwrap();
        assert_eq!((u2, v2), (x.scaled(2.0).unwrap(), y.scaled(2.0).unwrap()));
    }

    #[test]
    fn evaluate_checks_domain_and_regime() {
        let policy = TolerancePolicy::default();
        let x = rv(&[1.0, -1.0]);
        let y = rv(&[0.5, 0.5]);
        let main = ExponentPair::main(2.5, 4.0).unwrap();
        assert_eq!(
            evaluate(InequalityId::Main17, &x, &y, None, &main, &policy),
            Err(Error::NegativeEntry(1))
        );
        let explore = ExponentPair::exploratory(2.5, 4.0).unwrap();
        assert!(evaluate(InequalityId::Main17, &x, &y, None, &explore, &policy).is_ok());
        let conj = ExponentPair::clarkson(3.0).unwrap();
        assert!(matches!(
            evaluate(InequalityId::Main17, &y, &y, None, &conj, &policy),
            Err(Error::RegimeViolation { .. })
        ));
        assert!(evaluate(InequalityId::C11, &x, &y, None, &conj, &policy).is_ok());
        assert_eq!(InequalityId::from_str("main-1.7"), Ok(InequalityId::Main17));
        assert!(InequalityId::from_str("nope").is_err());
    }

    fn nonneg_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..10).prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..5.0, n),
                prop::collection::vec(0.0f64..5.0, n),
            )
        })
    }

    fn signed_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..10).prop_flat_map(|n| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
            )
        })
    }

    fn main_exponents() -> impl Strategy<Value = (f64, f64)> {
        (2.0f64..6.0, 0.0f64..4.0).prop_map(|(p, d)| (p, p + d))
    }

    proptest! {
        #[test]
        fn main_never_violated((x, y) in nonneg_pair(), (p, q) in main_exponents()) {
            let r = eval_main_1_7(&nv(&x), &nv(&y), p, q, None).unwrap();
            prop_assert_ne!(r.verdict, Verdict::Violated);
        }

        #[test]
        fn reduces_to_classical_left_bound((x, y) in nonneg_pair(), p in 2.0f64..6.0) {
            let main = eval_main_1_7(&nv(&x), &nv(&y), p, p, None).unwrap();
            let (left, _) = eval_clarkson_1_3(&rv(&x), &rv(&y), p, None).unwrap();
            prop_assert!((main.gap - left.gap).abs() <= 1e-12 * main.scale.max(left.scale));
        }

        #[test]
        fn improvement_over_main(pairs in prop::collection::vec((0.0f64..5.0, 0.0f64..1.0), 1..10),
                                 (p, q) in main_exponents()) {
            let u: Vec<f64> = pairs.iter().map(|(a, _)| *a).collect();
            let v: Vec<f64> = pairs.iter().map(|(a, t)| a * t).collect();
            let prop = eval_prop_1_4(&nv(&u), &nv(&v), p, q, None).unwrap();
            let main = eval_main_1_7(&nv(&u), &nv(&v), p, q, None).unwrap();
            prop_assert!(prop.lhs >= main.lhs);
            if prop.verdict == Verdict::Holds {
                prop_assert_eq!(main.verdict, Verdict::Holds);
            }
        }

        #[test]
        fn substitution_equivalence((x, y) in signed_pair(), p in 1.1f64..6.0) {
            let policy = TolerancePolicy::default();
            let (x, y) = (rv(&x), rv(&y));
            let (u, v) = halving_substitution(&x, &y).unwrap();
            let c12 = eval_clarkson_1_2(&x, &y, p, None).unwrap();
            let c11 = eval_clarkson_1_1(&u, &v, p, None).unwrap();
            let far = |r: &GapReport| r.gap.abs() > policy.borderline_band() * r.scale;
            if far(&c12) && far(&c11) {
                prop_assert_eq!(c12.verdict, c11.verdict);
            }
        }

        #[test]
        fn scalar_consistency(a in 0.0f64..10.0, t in 0.0f64..1.0, q in 2.0f64..8.0) {
            let (x, y) = (a, a * t);
            let scalar = eval_corollary_1_6(x, y, q).unwrap();
            let vector = eval_prop_1_4(&nv(&[x]), &nv(&[y]), q, q, None).unwrap();
            prop_assert!((scalar.gap - vector.gap).abs() <= 1e-12 * scalar.scale);
        }

        #[test]
        fn verdicts_are_scale_invariant((x, y) in signed_pair(), alpha in 0.01f64..100.0, p in 1.1f64..6.0) {
            let (x, y) = (rv(&x), rv(&y));
            let (xs, ys) = (x.scaled(alpha).unwrap(), y.scaled(alpha).unwrap());
            let a = eval_clarkson_1_1(&x, &y, p, None).unwrap();
            let b = eval_clarkson_1_1(&xs, &ys, p, None).unwrap();
            // gaps scale by alpha^q; strict signs must survive
            if a.gap.abs() > 1e-6 * a.scale {
                prop_assert_eq!(a.gap > 0.0, b.gap > 0.0);
            }
        }
    }
}
