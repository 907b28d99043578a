//! Validated finite sequences, weighted p-norms and exponent bookkeeping.
//!
//! Every sum over entries goes through [`CompensatedSum`]; the gap
//! functionals built on top of these norms subtract nearly equal quantities.

use std::ops::{AddAssign, Deref};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest vector accepted by validation (2^20 entries).
pub const MAX_LEN: usize = 1 << 20;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        let t = self.sum + rhs;
        if self.sum.abs() >= rhs.abs() {
            self.compensation += (self.sum - t) + rhs;
        } else {
            self.compensation += (rhs - t) + self.sum;
        }
        self.sum = t;
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Compensated sum of an iterator of terms.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    terms.into_iter().collect::<CompensatedSum>().value()
}

/// `base^exp` for `base >= 0`, with `0^exp = 0` for every `exp > 0` and
/// exact fast paths for the exponents 1, 2, 3 and 4.
#[inline]
pub fn pow(base: f64, exp: f64) -> f64 {
    if base == 0.0 {
        return if exp > 0.0 { 0.0 } else { 1.0 };
    }
    if exp == 1.0 {
        base
    } else if exp == 2.0 {
        base * base
    } else if exp == 3.0 {
        base * base * base
    } else if exp == 4.0 {
        let sq = base * base;
        sq * sq
    } else {
        base.powf(exp)
    }
}

/// A finite, nonempty sequence of real numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        validate_vector(&entries, false)?;
        Ok(Self(entries))
    }

    /// All-zero vector of length `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Multiplies every entry by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| alpha * x).collect())
    }

    /// Returns the nonnegative refinement, or the first negative index.
    pub fn to_nonneg(&self) -> Result<NonnegVector> {
        NonnegVector::new(self.0.clone())
    }
}

impl Deref for RealVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Self {
        v.0
    }
}

/// A [`RealVector`] whose entries are all `>= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NonnegVector(RealVector);

impl NonnegVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        validate_vector(&entries, true)?;
        Ok(Self(RealVector(entries)))
    }

    pub fn as_real(&self) -> &RealVector {
        &self.0
    }

    pub fn into_real(self) -> RealVector {
        self.0
    }
}

impl Deref for NonnegVector {
    type Target = RealVector;

    fn deref(&self) -> &RealVector {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for NonnegVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<NonnegVector> for Vec<f64> {
    fn from(v: NonnegVector) -> Self {
        v.0 .0
    }
}

/// Positive point masses, the discrete measure behind weighted norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyVector);
        }
        if masses.len() > MAX_LEN {
            return Err(Error::TooLong {
                len: masses.len(),
                max: MAX_LEN,
            });
        }
        if let Some(i) = masses.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::InvalidWeight(i));
        }
        Ok(Self(masses))
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Checks that these weights can be paired with a vector of length `n`.
    pub fn check_len(&self, n: usize) -> Result<()> {
        check_same_len(self.0.len(), n)
    }
}

impl TryFrom<Vec<f64>> for Weights {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Weights> for Vec<f64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

pub(crate) fn check_same_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}

/// Validates raw entries: nonempty, at most [`MAX_LEN`] long, finite, and
/// nonnegative when `require_nonneg` is set.
pub fn validate_vector(raw: &[f64], require_nonneg: bool) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::EmptyVector);
    }
    if raw.len() > MAX_LEN {
        return Err(Error::TooLong {
            len: raw.len(),
            max: MAX_LEN,
        });
    }
    for (i, x) in raw.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFiniteEntry(i));
        }
        if require_nonneg && *x < 0.0 {
            return Err(Error::NegativeEntry(i));
        }
    }
    Ok(())
}

/// `Σ w_i |v_i|^p` with unit weights when `w` is absent.
pub fn power_sum(v: &[f64], w: Option<&Weights>, p: f64) -> f64 {
    match w {
        None => compensated_sum(v.iter().map(|x| pow(x.abs(), p))),
        Some(w) => compensated_sum(
            v.iter()
                .zip(w.as_slice())
                .map(|(x, m)| m * pow(x.abs(), p)),
        ),
    }
}

/// `‖v‖_p^s`, evaluated as `(Σ w_i |v_i|^p)^(s/p)` without forming the norm.
///
/// Raising the power sum directly keeps `‖v‖_p^p` exact up to summation
/// error, which matters when two evaluators must agree at `s = p`.
pub fn norm_pow(v: &[f64], w: Option<&Weights>, p: f64, s: f64) -> f64 {
    pow(power_sum(v, w, p), s / p)
}

fn check_norm_args(v: &[f64], w: Option<&Weights>, p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange(p));
    }
    if let Some(w) = w {
        w.check_len(v.len())?;
    }
    Ok(())
}

/// Weighted p-norm `(Σ w_i |v_i|^p)^(1/p)`.
pub fn p_norm(v: &RealVector, w: Option<&Weights>, p: f64) -> Result<f64> {
    check_norm_args(v, w, p)?;
    Ok(norm_pow(v, w, p, 1.0))
}

/// `q = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange(p));
    }
    Ok(p / (p - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Componentwise `x + y` or `x - y`.
pub fn combine(x: &RealVector, y: &RealVector, sign: Sign) -> Result<RealVector> {
    check_same_len(x.len(), y.len())?;
    let entries = match sign {
        Sign::Plus => x.iter().zip(y.iter()).map(|(a, b)| a + b).collect(),
        Sign::Minus => x.iter().zip(y.iter()).map(|(a, b)| a - b).collect(),
    };
    RealVector::new(entries)
}

/// Which family of statements an exponent pair is valid for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `2 <= p <= q < ∞`.
    Main,
    /// `p >= 2` with `q = p/(p-1)`.
    Conjugate,
    /// `1 < p < 2` with `q = p/(p-1)`; the classical inequalities flip.
    Reverse,
    /// A single exponent `q`; `p` mirrors it.
    Scalar,
    /// Any `p, q > 1`; used only by exploration tooling.
    Exploratory,
}

/// An exponent pair together with the regime it was validated against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
    pub regime: Regime,
}

impl ExponentPair {
    pub fn main(p: f64, q: f64) -> Result<Self> {
        if !(p >= 2.0 && p <= q && q.is_finite()) {
            return Err(Error::RegimeViolation {
                p,
                q,
                expected: "2 <= p <= q < inf",
            });
        }
        Ok(Self {
            p,
            q,
            regime: Regime::Main,
        })
    }

    /// The conjugate pair of the classical inequalities. `p = 2` is
    /// classified as [`Regime::Conjugate`].
    pub fn clarkson(p: f64) -> Result<Self> {
        let q = conjugate_exponent(p)?;
        let regime = if p >= 2.0 {
            Regime::Conjugate
        } else {
            Regime::Reverse
        };
        Ok(Self { p, q, regime })
    }

    pub fn scalar(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::ExponentOutOfRange(q));
        }
        Ok(Self {
            p: q,
            q,
            regime: Regime::Scalar,
        })
    }

    pub fn exploratory(p: f64, q: f64) -> Result<Self> {
        for e in [p, q] {
            if !(e > 1.0 && e.is_finite()) {
                return Err(Error::ExponentOutOfRange(e));
            }
        }
        Ok(Self {
            p,
            q,
            regime: Regime::Exploratory,
        })
    }

    /// True when `1/p + 1/q = 1` within `1e-12`.
    pub fn is_conjugate(&self) -> bool {
        (1.0 / self.p + 1.0 / self.q - 1.0).abs() <= 1e-12
    }
}
