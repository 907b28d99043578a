//! Seeded sampling, counterexample search, extremal search and grid scans.
//!
//! Sample `i` of seed `s` is drawn from its own ChaCha stream (key from `s`,
//! stream number `i`), so every sample is a pure function of `(spec, s, i)`
//! and parallel evaluation order cannot influence any result. Reductions
//! keep the smallest normalized gap, breaking ties by sample index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{evaluate, Domain, ExponentFamily, GapReport, InequalityId, TolerancePolicy, Verdict};
use crate::error::{Error, Result};
use crate::norms::{norm_pow, ExponentPair, RealVector, Regime, Weights};

/// Largest dimension a [`SampleSpec`] may request.
pub const MAX_SAMPLE_DIM: usize = 64;

/// Initial coordinate step of the extremal descent.
pub const INITIAL_STEP: f64 = 0.1;
/// Descent stops once the step drops below this.
pub const MIN_STEP: f64 = 1e-8;
/// Number of best random starts the extremal descent is run from.
pub const DESCENT_STARTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntryDistribution {
    Uniform01,
    Exponential1,
    /// Each entry is nonzero with the given probability, uniform on `(0, 1]`.
    Sparse(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    Nonnegative,
    /// Magnitudes from the distribution with independent random signs.
    Signed,
    /// Nonnegative with `x_i >= y_i`.
    DominatedPair,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Nonnegative => "nonnegative",
            Constraint::Signed => "signed",
            Constraint::DominatedPair => "dominated-pair",
        }
    }

    /// The constraint a domain is naturally sampled with.
    pub fn for_domain(domain: Domain) -> Self {
        match domain {
            Domain::Signed => Constraint::Signed,
            Domain::Nonnegative => Constraint::Nonnegative,
            Domain::Dominated | Domain::Scalar | Domain::Swap => Constraint::DominatedPair,
        }
    }

    fn satisfies(self, domain: Domain) -> bool {
        match domain {
            Domain::Signed => true,
            Domain::Nonnegative => self != Constraint::Signed,
            Domain::Dominated | Domain::Scalar | Domain::Swap => self == Constraint::DominatedPair,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub distribution: EntryDistribution,
    pub constraint: Constraint,
    pub weights: bool,
}

impl SampleSpec {
    pub fn new(
        n_min: usize,
        n_max: usize,
        distribution: EntryDistribution,
        constraint: Constraint,
        weights: bool,
    ) -> Result<Self> {
        if !(1 <= n_min && n_min <= n_max && n_max <= MAX_SAMPLE_DIM) {
            return Err(Error::InvalidSampleSpec(format!(
                "dimension range [{n_min}, {n_max}] must satisfy 1 <= n_min <= n_max <= {MAX_SAMPLE_DIM}"
            )));
        }
        if let EntryDistribution::Sparse(d) = distribution {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::InvalidSampleSpec(format!("sparse density {d} must lie in (0, 1]")));
            }
        }
        Ok(Self {
            n_min,
            n_max,
            distribution,
            constraint,
            weights,
        })
    }
}

/// One sampled input pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePair {
    pub x: RealVector,
    pub y: RealVector,
    pub w: Option<Weights>,
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_entry(rng: &mut ChaCha8Rng, distribution: EntryDistribution) -> f64 {
    match distribution {
        EntryDistribution::Uniform01 => rng.random::<f64>(),
        EntryDistribution::Exponential1 => rng.sample(Exp1),
        EntryDistribution::Sparse(density) => {
            if rng.random::<f64>() < density {
                1.0 - rng.random::<f64>()
            } else {
                0.0
            }
        }
    }
}

/// Deterministic pair number `index` of the stream keyed by `seed`.
pub fn sample_pair(spec: &SampleSpec, seed: u64, index: u64) -> SamplePair {
    let mut rng = stream(seed, index);
    let n = rng.random_range(spec.n_min..=spec.n_max);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n)
            .map(|_| {
                let m = draw_entry(rng, spec.distribution);
                if spec.constraint == Constraint::Signed && rng.random::<bool>() {
                    -m
                } else {
                    m
                }
            })
            .collect()
    };
    let mut x = draw(&mut rng);
    let mut y = draw(&mut rng);
    if spec.constraint == Constraint::DominatedPair {
        for (a, b) in x.iter_mut().zip(y.iter_mut()) {
            if *a < *b {
                std::mem::swap(a, b);
            }
        }
    }
    let w = spec
        .weights
        .then(|| Weights::new((0..n).map(|_| rng.random_range(0.5..2.0)).collect()).expect("weights in [0.5, 2)"));
    SamplePair {
        x: RealVector::new(x).expect("sampled entries are finite"),
        y: RealVector::new(y).expect("sampled entries are finite"),
        w,
    }
}

/// Which way round the gap is read. [`Orientation::Inverted`] exists only so
/// test harnesses can confirm that a search notices a wrong orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    AsStated,
    Inverted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub budget: u64,
    pub seed: u64,
    pub policy: TolerancePolicy,
    /// Permit inputs or exponents outside the inequality's stated domain.
    pub explore: bool,
    pub orientation: Orientation,
}

impl SearchOptions {
    pub fn new(budget: u64, seed: u64) -> Self {
        Self {
            budget,
            seed,
            policy: TolerancePolicy::default(),
            explore: false,
            orientation: Orientation::AsStated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    NoViolation,
    ViolationFound,
    BudgetExhausted,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::NoViolation => "NO_VIOLATION",
            SearchStatus::ViolationFound => "VIOLATION_FOUND",
            SearchStatus::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

/// The configuration behind a search result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: RealVector,
    pub y: RealVector,
    pub w: Option<Weights>,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
    /// Sample index when the witness is a raw sample rather than a
    /// descended point.
    pub index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub id: InequalityId,
    pub best_report: Option<GapReport>,
    pub witness: Option<Witness>,
    /// `gap / scale` of the best report, `+inf` when nothing was evaluated.
    pub normalized_gap: f64,
    pub evaluations: u64,
    /// Evaluations rejected by the inequality's own input checks.
    pub rejected: u64,
    pub violations: u64,
    pub seed: u64,
    pub status: SearchStatus,
    /// Set when the search ran outside the inequality's stated domain.
    pub exploratory: bool,
    /// Extremal search only: whether the descent step fell below
    /// [`MIN_STEP`] before the budget ran out.
    pub converged: Option<bool>,
}

/// Resolves the exponents actually used: the given pair when `spec` fits
/// the id, an exploratory copy when it does not and exploration is allowed.
fn resolve(id: InequalityId, exps: &ExponentPair, spec: &SampleSpec, explore: bool) -> Result<ExponentPair> {
    let domain = id.domain();
    let regime_ok = exps.regime != Regime::Exploratory && id.exponents(exps.p, exps.q).is_ok();
    let constraint_ok = spec.constraint.satisfies(domain);
    let needs_pair = match domain {
        Domain::Swap => 2,
        _ => 1,
    };
    if spec.n_min < needs_pair {
        return Err(Error::InvalidSampleSpec(format!("{id} needs at least {needs_pair} entries per vector")));
    }
    if regime_ok && constraint_ok {
        return id.exponents(exps.p, exps.q);
    }
    if !explore {
        if !constraint_ok {
            return Err(Error::ConstraintMismatch {
                id: id.name(),
                required: domain.name(),
                provided: spec.constraint.name(),
            });
        }
        return Err(Error::RegimeViolation {
            p: exps.p,
            q: exps.q,
            expected: "the regime of this inequality",
        });
    }
    Ok(ExponentPair {
        regime: Regime::Exploratory,
        ..*exps
    })
}

fn judge(
    id: InequalityId,
    pair: &SamplePair,
    exps: &ExponentPair,
    options: &SearchOptions,
) -> Result<GapReport> {
    let report = evaluate(id, &pair.x, &pair.y, pair.w.as_ref(), exps, &options.policy)?;
    Ok(match options.orientation {
        Orientation::AsStated => report,
        Orientation::Inverted => report.inverted(&options.policy),
    })
}

/// Running reduction over evaluated samples.
#[derive(Debug, Clone, Default)]
struct Tally {
    best: Option<(f64, u64, GapReport)>,
    evaluations: u64,
    rejected: u64,
    violations: u64,
}

impl Tally {
    fn single(index: u64, result: Result<GapReport>) -> Self {
        match result {
            Ok(report) => Self {
                best: Some((report.normalized_gap(), index, report)),
                evaluations: 1,
                rejected: 0,
                violations: (report.verdict == Verdict::Violated) as u64,
            },
            Err(_) => Self {
                best: None,
                evaluations: 1,
                rejected: 1,
                violations: 0,
            },
        }
    }

    fn merge(self, other: Self) -> Self {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => {
                if b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).is_lt() {
                    Some(b)
                } else {
                    Some(a)
                }
            }
            (a, b) => a.or(b),
        };
        Self {
            best,
            evaluations: self.evaluations + other.evaluations,
            rejected: self.rejected + other.rejected,
            violations: self.violations + other.violations,
        }
    }
}

fn status(evaluations: u64, violations: u64) -> SearchStatus {
    if violations > 0 {
        SearchStatus::ViolationFound
    } else if evaluations == 0 {
        SearchStatus::BudgetExhausted
    } else {
        SearchStatus::NoViolation
    }
}

/// Evaluates `budget` sampled pairs and keeps the most negative normalized
/// gap. The witness of the best sample is reproducible from `(seed, index)`.
pub fn counterexample_search(
    id: InequalityId,
    exps: &ExponentPair,
    spec: &SampleSpec,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let used = resolve(id, exps, spec, options.explore)?;
    let seed = options.seed;
    let tally = (0..options.budget)
        .into_par_iter()
        .map(|i| Tally::single(i, judge(id, &sample_pair(spec, seed, i), &used, options)))
        .reduce(Tally::default, Tally::merge);
    let witness = tally.best.as_ref().map(|(_, index, _)| {
        let pair = sample_pair(spec, seed, *index);
        Witness {
            x: pair.x,
            y: pair.y,
            w: pair.w,
            p: used.p,
            q: used.q,
            seed,
            index: Some(*index),
        }
    });
    Ok(SearchOutcome {
        id,
        best_report: tally.best.as_ref().map(|b| b.2),
        witness,
        normalized_gap: tally.best.as_ref().map_or(f64::INFINITY, |b| b.0),
        evaluations: tally.evaluations,
        rejected: tally.rejected,
        violations: tally.violations,
        seed,
        status: status(tally.evaluations, tally.violations),
        exploratory: used.regime == Regime::Exploratory,
        converged: None,
    })
}

/// The exponent the normalization `‖x‖_p = 1` uses.
fn normalization_exponent(id: InequalityId, exps: &ExponentPair) -> f64 {
    match id.exponent_family() {
        ExponentFamily::Scalar { .. } => exps.q.max(1.0),
        _ => exps.p,
    }
}

/// Scales `(x, y)` jointly so that `‖x‖_p = 1`; `None` when `x = 0`.
fn normalize(x: &[f64], y: &[f64], w: Option<&Weights>, p: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let norm = norm_pow(x, w, p, 1.0);
    if !(norm > 0.0 && norm.is_finite()) {
        return None;
    }
    Some((x.iter().map(|a| a / norm).collect(), y.iter().map(|b| b / norm).collect()))
}

fn project(x: &mut [f64], y: &mut [f64], constraint: Constraint) {
    match constraint {
        Constraint::Signed => {}
        Constraint::Nonnegative => {
            x.iter_mut().chain(y.iter_mut()).for_each(|e| *e = e.max(0.0));
        }
        Constraint::DominatedPair => {
            for (a, b) in x.iter_mut().zip(y.iter_mut()) {
                *a = a.max(0.0);
                *b = b.max(0.0).min(*a);
            }
        }
    }
}

struct Candidate {
    x: Vec<f64>,
    y: Vec<f64>,
    report: GapReport,
}

/// Minimizes the normalized gap over pairs with `‖x‖_p = 1`.
///
/// A quarter of the budget (at least one evaluation) goes to random starts;
/// the rest runs a coordinate-perturbation descent from the best starts,
/// halving the step after every sweep without improvement.
pub fn extremal_search(
    id: InequalityId,
    exps: &ExponentPair,
    spec: &SampleSpec,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let used = resolve(id, exps, spec, options.explore)?;
    let seed = options.seed;
    let norm_p = normalization_exponent(id, &used);
    let budget = options.budget;

    let eval = |x: &[f64], y: &[f64], w: Option<&Weights>| -> Option<GapReport> {
        let pair = SamplePair {
            x: RealVector::new(x.to_vec()).ok()?,
            y: RealVector::new(y.to_vec()).ok()?,
            w: w.cloned(),
        };
        judge(id, &pair, &used, options).ok()
    };

    let n_starts = if budget == 0 { 0 } else { (budget / 4).max(1) };
    let mut starts: Vec<(u64, Option<Candidate>, Option<Weights>)> = (0..n_starts)
        .into_par_iter()
        .map(|i| {
            let pair = sample_pair(spec, seed, i);
            let w = pair.w.clone();
            let (x, y) = normalize(&pair.x, &pair.y, w.as_ref(), norm_p)
                .unwrap_or_else(|| (pair.x.to_vec(), pair.y.to_vec()));
            let candidate = eval(&x, &y, w.as_ref()).map(|report| Candidate { x, y, report });
            (i, candidate, w)
        })
        .collect();

    let mut evaluations = n_starts;
    let mut rejected = starts.iter().filter(|s| s.1.is_none()).count() as u64;
    let mut violations = starts
        .iter()
        .filter(|s| matches!(&s.1, Some(c) if c.report.verdict == Verdict::Violated))
        .count() as u64;

    starts.retain(|s| s.1.is_some());
    starts.sort_by(|a, b| {
        let (ga, gb) = (a.1.as_ref().unwrap().report.normalized_gap(), b.1.as_ref().unwrap().report.normalized_gap());
        ga.total_cmp(&gb).then(a.0.cmp(&b.0))
    });

    let mut best: Option<(Candidate, Option<Weights>, Option<u64>)> = None;
    let mut converged = false;
    let constraint = spec.constraint;
    let better = |a: &GapReport, b: &GapReport| a.normalized_gap() < b.normalized_gap();

    for (index, candidate, w) in starts.into_iter().take(DESCENT_STARTS) {
        let mut current = candidate.expect("retained");
        if best.as_ref().is_none_or(|(b, _, _)| better(&current.report, &b.report)) {
            best = Some((
                Candidate {
                    x: current.x.clone(),
                    y: current.y.clone(),
                    report: current.report,
                },
                w.clone(),
                Some(index),
            ));
        }
        let n = current.x.len();
        let mut step = INITIAL_STEP;
        let mut improved_from_start = false;
        while evaluations < budget {
            let mut improved = false;
            'coords: for coord in 0..2 * n {
                for delta in [step, -step] {
                    if evaluations >= budget {
                        break 'coords;
                    }
                    let (mut x, mut y) = (current.x.clone(), current.y.clone());
                    if coord < n {
                        x[coord] += delta;
                    } else {
                        y[coord - n] += delta;
                    }
                    project(&mut x, &mut y, constraint);
                    evaluations += 1;
                    let Some((x, y)) = normalize(&x, &y, w.as_ref(), norm_p) else {
                        rejected += 1;
                        continue;
                    };
                    let Some(report) = eval(&x, &y, w.as_ref()) else {
                        rejected += 1;
                        continue;
                    };
                    if report.verdict == Verdict::Violated {
                        violations += 1;
                    }
                    if better(&report, &current.report) {
                        current = Candidate { x, y, report };
                        improved = true;
                        improved_from_start = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < MIN_STEP {
                    converged = true;
                    break;
                }
            }
        }
        if improved_from_start && best.as_ref().is_none_or(|(b, _, _)| better(&current.report, &b.report)) {
            best = Some((current, w, None));
        }
        if evaluations >= budget {
            break;
        }
    }

    let (best_report, witness) = match best {
        Some((c, w, index)) => (
            Some(c.report),
            Some(Witness {
                x: RealVector::new(c.x).expect("finite"),
                y: RealVector::new(c.y).expect("finite"),
                w,
                p: used.p,
                q: used.q,
                seed,
                index,
            }),
        ),
        None => (None, None),
    };
    Ok(SearchOutcome {
        id,
        normalized_gap: best_report.map_or(f64::INFINITY, |r| r.normalized_gap()),
        best_report,
        witness,
        evaluations,
        rejected,
        violations,
        seed,
        status: status(evaluations, violations),
        exploratory: used.regime == Regime::Exploratory,
        converged: Some(converged),
    })
}

/// One `(p, q)` cell of a grid scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub p: f64,
    pub q: f64,
    /// The cell lies outside the inequality's regime and was not sampled.
    pub skipped: bool,
    pub n_samples: u64,
    pub min_normalized_gap: f64,
    pub violations: u64,
}

/// Runs a counterexample search in every cell of `p_grid × q_grid`.
///
/// Conjugate-family ids read only `p_grid` (one cell per `p`, `q` derived)
/// and scalar-family ids read only `q_grid` (one cell per `q`, `p = q`).
/// Every cell uses the same seed, so cells are compared on identical pairs.
pub fn scan_grid(
    id: InequalityId,
    p_grid: &[f64],
    q_grid: &[f64],
    spec: &SampleSpec,
    samples_per_cell: u64,
    seed: u64,
    policy: &TolerancePolicy,
) -> Result<Vec<CellSummary>> {
    let cells: Vec<(f64, f64)> = match id.exponent_family() {
        ExponentFamily::Conjugate => p_grid.iter().map(|&p| (p, p / (p - 1.0))).collect(),
        ExponentFamily::Scalar { .. } => q_grid.iter().map(|&q| (q, q)).collect(),
        ExponentFamily::Main | ExponentFamily::Diagonal => p_grid
            .iter()
            .flat_map(|&p| q_grid.iter().map(move |&q| (p, q)))
            .collect(),
    };
    if cells.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !spec.constraint.satisfies(id.domain()) {
        return Err(Error::ConstraintMismatch {
            id: id.name(),
            required: id.domain().name(),
            provided: spec.constraint.name(),
        });
    }
    let options = SearchOptions {
        budget: samples_per_cell,
        seed,
        policy: *policy,
        explore: false,
        orientation: Orientation::AsStated,
    };
    cells
        .into_iter()
        .map(|(p, q)| match id.exponents(p, q) {
            Err(_) => Ok(CellSummary {
                p,
                q,
                skipped: true,
                n_samples: 0,
                min_normalized_gap: f64::NAN,
                violations: 0,
            }),
            Ok(exps) => {
                let outcome = counterexample_search(id, &exps, spec, &options)?;
                Ok(CellSummary {
                    p: exps.p,
                    q: exps.q,
                    skipped: false,
                    n_samples: outcome.evaluations,
                    min_normalized_gap: outcome.normalized_gap,
                    violations: outcome.violations,
                })
            }
        })
        .collect()
}
