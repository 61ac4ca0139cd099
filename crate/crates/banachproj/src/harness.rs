//! Seeded randomized suites: instance generation, parallel trial execution,
//! and aggregated reporting for every inequality exposed by `bounds`.

use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundOutcome};
use crate::error::{Error, Result};
use crate::projection::{self, ProjectionResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::sets::{self, ConvexSetDescriptor, SetPair};
use crate::space::{dual_pairing, figiel_check, FigielConstant, Point, SpaceSpec};

/// Default perturbation scale for ||x - y|| and translate shifts.
pub const DEFAULT_PERTURBATION_SCALE: f64 = 1e-3;
/// Margin below -MARGIN_TOL on an informative trial counts as a violation.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-7;
/// Maximum admissible solver-failure rate for a passing report.
pub const MAX_SOLVER_FAILURE_RATE: f64 = 0.01;

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma1,
    Lemma2,
    Figiel,
    Theorem1,
    Theorem2,
    Remark5,
    HilbertF9,
    ThirdProblem,
    SolverOracle,
    DualityIdentities,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Figiel,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Remark5,
        Suite::HilbertF9,
        Suite::ThirdProblem,
        Suite::SolverOracle,
        Suite::DualityIdentities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Figiel => "figiel",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Remark5 => "remark5",
            Suite::HilbertF9 => "hilbert_f9",
            Suite::ThirdProblem => "third_problem",
            Suite::SolverOracle => "solver_oracle",
            Suite::DualityIdentities => "duality_identities",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite '{s}'")))
    }
}

/// Configuration of one suite run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: Vec<f64>,
    pub dim: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub perturbation_scale: f64,
    pub margin_tol: f64,
    pub projection_tol: f64,
    pub max_iter: usize,
    pub figiel_l: f64,
    pub record_trials: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            p: vec![2.0],
            dim: vec![2],
            trials: 100,
            seed: 0,
            perturbation_scale: DEFAULT_PERTURBATION_SCALE,
            margin_tol: DEFAULT_MARGIN_TOL,
            projection_tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            figiel_l: FigielConstant::default().value(),
            record_trials: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.p.is_empty() || self.dim.is_empty() {
            return Err(Error::InvalidConfig(
                "p and dim lists must be nonempty".into(),
            ));
        }
        for &p in &self.p {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::InvalidExponent(p));
            }
            if self.suite == Suite::HilbertF9 && p != 2.0 {
                return Err(Error::InvalidConfig(
                    "hilbert_f9 requires p = 2".into(),
                ));
            }
        }
        for &d in &self.dim {
            if d == 0 {
                return Err(Error::InvalidConfig("dim must be at least 1".into()));
            }
            if self.suite == Suite::SolverOracle && d > 3 {
                return Err(Error::InvalidConfig(
                    "solver_oracle requires dim <= 3".into(),
                ));
            }
        }
        if !(self.perturbation_scale > 0.0) {
            return Err(Error::InvalidConfig(
                "perturbation_scale must be positive".into(),
            ));
        }
        if !(self.margin_tol >= 0.0) || !(self.projection_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        FigielConstant::new(self.figiel_l)?;
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// How a single trial resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Pass,
    Vacuous,
    Violation,
    SolverFailure,
}

/// One executed trial; same (seed, p, dim, trial) regenerates it exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub p: f64,
    pub dim: usize,
    pub status: TrialStatus,
    pub outcome: Option<BoundOutcome>,
    pub summary: String,
    pub wall_time_ms: f64,
}

/// Aggregated result of a suite run; violations = 0 and a solver-failure
/// rate below 1% is the pass condition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub trials_run: usize,
    pub violations: usize,
    pub worst_margin: Option<f64>,
    pub informative: usize,
    pub informative_fraction: f64,
    pub min_margin: Option<f64>,
    pub median_margin: Option<f64>,
    pub solver_failures: usize,
    pub runtime_ms: f64,
    pub records: Option<Vec<TrialRecord>>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
            && (self.solver_failures as f64) < MAX_SOLVER_FAILURE_RATE * self.trials_run as f64
    }

    /// Copy with all timing fields zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> BoundReport {
        let mut out = self.clone();
        out.runtime_ms = 0.0;
        if let Some(recs) = &mut out.records {
            for r in recs.iter_mut() {
                r.wall_time_ms = 0.0;
            }
        }
        out
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Independent random stream for one trial of one (p, dim) cell.
pub fn trial_rng(seed: u64, p: f64, dim: usize, trial: usize) -> ChaCha8Rng {
    let key = mix(seed)
        ^ mix(p.to_bits())
        ^ mix((dim as u64).wrapping_mul(0x9e3779b97f4a7c15))
        ^ mix((trial as u64).wrapping_add(0x1234_5678));
    ChaCha8Rng::seed_from_u64(key)
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, half_width: f64) -> Point {
    Point::new(
        (0..dim)
            .map(|_| rng.gen_range(-half_width..half_width))
            .collect(),
    )
}

/// Point with coordinates in [-5, 5] rescaled so the p-norm stays <= 5.
fn bounded_point(rng: &mut ChaCha8Rng, space: &SpaceSpec) -> Point {
    let x = random_point(rng, space.dim(), 5.0);
    let n = space.norm(&x).expect("dims match");
    if n > 5.0 {
        x.scale(5.0 / n)
    } else {
        x
    }
}

fn random_shift(rng: &mut ChaCha8Rng, space: &SpaceSpec, scale: f64) -> Point {
    let dir = crate::space::random_unit(rng, space);
    dir.scale(rng.gen_range(0.5..1.5) * scale)
}

/// A bounded random set within the ball of radius 10: box, ball, or
/// V-polytope with at most dim + 10 vertices and coordinates in [-5, 5].
pub fn random_set(rng: &mut ChaCha8Rng, space: &SpaceSpec) -> ConvexSetDescriptor {
    let dim = space.dim();
    let center = random_point(rng, dim, 2.0);
    match rng.gen_range(0_u8..3) {
        0 => {
            let half: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.3..1.2)).collect();
            ConvexSetDescriptor::Box {
                lower: Point::new(
                    center
                        .as_slice()
                        .iter()
                        .zip(&half)
                        .map(|(c, h)| c - h)
                        .collect(),
                ),
                upper: Point::new(
                    center
                        .as_slice()
                        .iter()
                        .zip(&half)
                        .map(|(c, h)| c + h)
                        .collect(),
                ),
            }
        }
        1 => ConvexSetDescriptor::Ball {
            center,
            radius: rng.gen_range(0.3..1.2),
        },
        _ => {
            let m = rng.gen_range(dim + 2..=dim + 10);
            let vertices = (0..m)
                .map(|_| center.add(&random_point(rng, dim, 1.0)))
                .collect();
            ConvexSetDescriptor::VPolytope { vertices }
        }
    }
}

/// A random point of the set itself (not necessarily uniform).
fn interior_point(rng: &mut ChaCha8Rng, space: &SpaceSpec, set: &ConvexSetDescriptor) -> Point {
    match set.canonical() {
        ConvexSetDescriptor::Box { lower, upper } => Point::new(
            lower
                .as_slice()
                .iter()
                .zip(upper.as_slice())
                .map(|(l, u)| rng.gen_range(*l..=*u))
                .collect(),
        ),
        ConvexSetDescriptor::Ball { center, radius } => {
            let dir = crate::space::random_unit(rng, space);
            center.add(&dir.scale(rng.gen_range(0.0..radius)))
        }
        ConvexSetDescriptor::VPolytope { vertices } => {
            let mut weights: Vec<f64> = (0..vertices.len()).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            let mut out = Point::zeros(space.dim());
            for (w, v) in weights.iter().zip(&vertices) {
                out = out.add(&v.scale(*w));
            }
            out
        }
        ConvexSetDescriptor::Translate { .. } => unreachable!("canonical removes translates"),
    }
}

/// Point at distance at most `max_offset` from the set.
fn point_near_set(
    rng: &mut ChaCha8Rng,
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    max_offset: f64,
) -> Point {
    let base = interior_point(rng, space, set);
    let dir = crate::space::random_unit(rng, space);
    base.add(&dir.scale(rng.gen_range(0.0..max_offset)))
}

fn project_with_retry(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<Option<ProjectionResult>> {
    let first = projection::project(space, set, x, tol, max_iter)?;
    if first.converged {
        return Ok(Some(first));
    }
    let retry = projection::project(space, set, x, tol, max_iter.saturating_mul(4))?;
    if retry.converged {
        Ok(Some(retry))
    } else {
        Ok(None)
    }
}

fn outcome_constants(keys: &[(&str, f64)]) -> std::collections::BTreeMap<String, f64> {
    keys.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Run one trial; returns the outcome or None on solver failure.
fn run_trial(config: &SuiteConfig, p: f64, dim: usize, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let mut rng = trial_rng(config.seed, p, dim, trial);
    let space = SpaceSpec::new(dim, p)?;
    let l = FigielConstant::new(config.figiel_l)?;
    let scale = config.perturbation_scale;
    let tol = config.projection_tol;
    let max_iter = config.max_iter;

    let mut summary;
    let outcome: Option<BoundOutcome> = match config.suite {
        Suite::DualityIdentities => {
            let x = random_point(&mut rng, dim, 5.0);
            let jx = space.duality_map(&x)?;
            let n = space.norm(&x)?;
            let e1 = (dual_pairing(&jx, &x)? - n * n).abs() / (1.0 + n * n);
            let e2 = (space.dual_norm(&jx)? - n).abs() / (1.0 + n);
            let mut e = e1.max(e2);
            if p == 2.0 {
                let exact = x
                    .as_slice()
                    .iter()
                    .zip(jx.as_slice())
                    .all(|(a, b)| a == b);
                if !exact {
                    e = f64::INFINITY;
                }
            }
            summary = format!("||x|| = {n:.6}");
            // framed as an inequality: identity error <= 1e-10 (relative)
            Some(BoundOutcome {
                lhs: e,
                rhs: Some(1e-10),
                constants: outcome_constants(&[("norm", n)]),
                margin: Some(1e-10 - e),
                informative: true,
            })
        }
        Suite::Figiel => {
            let eta = rng.gen_range(f64::MIN_POSITIVE..2.0_f64);
            let eps = rng.gen_range(0.0..eta).max(1e-12);
            let mp = figiel_check(p, eps, eta, &l)?;
            let mq = figiel_check(space.q(), eps, eta, &l)?;
            let m = mp.min(mq);
            summary = format!("eps = {eps:.4}, eta = {eta:.4}");
            Some(BoundOutcome {
                lhs: -m,
                rhs: Some(0.0),
                constants: outcome_constants(&[("eps", eps), ("eta", eta), ("L", l.value())]),
                margin: Some(m),
                informative: true,
            })
        }
        Suite::Lemma1 | Suite::Lemma2 => {
            let x = bounded_point(&mut rng, &space);
            let y = x.add(&random_shift(&mut rng, &space, scale));
            summary = format!("||x - y|| = {:.3e}", space.norm(&x.sub(&y))?);
            if config.suite == Suite::Lemma1 {
                Some(bounds::lemma1_outcome(&space, &x, &y, &l)?)
            } else {
                Some(bounds::lemma2_outcome(&space, &x, &y, &l)?)
            }
        }
        Suite::Theorem1 => {
            let set = random_set(&mut rng, &space);
            let x = point_near_set(&mut rng, &space, &set, 0.8);
            let y = x.add(&random_shift(&mut rng, &space, scale));
            summary = format!("set kind near x, ||x - y|| = {:.3e}", space.norm(&x.sub(&y))?);
            let xbar = project_with_retry(&space, &set, &x, tol, max_iter)?;
            let ybar = project_with_retry(&space, &set, &y, tol, max_iter)?;
            match (xbar, ybar) {
                (Some(a), Some(b)) => {
                    Some(bounds::theorem1_outcome(&space, &set, &x, &y, &a, &b, &l)?)
                }
                _ => None,
            }
        }
        Suite::Theorem2 | Suite::Remark5 | Suite::HilbertF9 => {
            let pair = random_pair(&mut rng, &space, scale, tol)?;
            let x = point_near_set(&mut rng, &space, &pair.omega1, 0.8);
            summary = format!("sigma = {:.3e}", pair.sigma);
            let p1 = project_with_retry(&space, &pair.omega1, &x, tol, max_iter)?;
            let p2 = project_with_retry(&space, &pair.omega2, &x, tol, max_iter)?;
            match (p1, p2) {
                (Some(a), Some(b)) => Some(match config.suite {
                    Suite::Theorem2 => {
                        bounds::theorem2_outcome(&space, &pair, &x, &a, &b, &l)?
                    }
                    Suite::Remark5 => bounds::remark5_outcome(&space, &pair, &x, &a, &b, &l)?,
                    _ => hilbert_f9_outcome(&space, &pair, &x, &a, &b)?,
                }),
                _ => None,
            }
        }
        Suite::ThirdProblem => {
            let pair = random_pair(&mut rng, &space, scale, tol)?;
            let x = point_near_set(&mut rng, &space, &pair.omega1, 0.8);
            let y = x.add(&random_shift(&mut rng, &space, scale));
            summary = format!("sigma = {:.3e}", pair.sigma);
            let px1 = project_with_retry(&space, &pair.omega1, &x, tol, max_iter)?;
            let py1 = project_with_retry(&space, &pair.omega1, &y, tol, max_iter)?;
            let py2 = project_with_retry(&space, &pair.omega2, &y, tol, max_iter)?;
            match (px1, py1, py2) {
                (Some(a), Some(b), Some(c)) => Some(bounds::third_problem_outcome(
                    &space, &pair, &x, &y, &a, &b, &c, &l,
                )?),
                _ => None,
            }
        }
        Suite::SolverOracle => {
            let set = loop {
                let s = random_set(&mut rng, &space);
                if !matches!(s, ConvexSetDescriptor::Ball { .. }) {
                    break s;
                }
            };
            let x = point_near_set(&mut rng, &space, &set, 1.5);
            summary = "oracle comparison".to_string();
            match project_with_retry(&space, &set, &x, tol, max_iter)? {
                Some(res) => {
                    let oracle = projection::brute_force_project(&space, &set, &x, 40)?;
                    let diff = space.norm(&res.point.sub(&oracle.point))?;
                    let again =
                        projection::project(&space, &set, &res.point, tol, max_iter)?;
                    let idem = space.norm(&again.point.sub(&res.point))?;
                    let lhs = (diff / (2.0 * oracle.resolution))
                        .max(res.vi_residual / 1e-8)
                        .max(idem / 1e-9);
                    Some(BoundOutcome {
                        lhs,
                        rhs: Some(1.0),
                        constants: outcome_constants(&[
                            ("oracle_gap", diff),
                            ("resolution", oracle.resolution),
                            ("vi_residual", res.vi_residual),
                            ("idempotence_gap", idem),
                        ]),
                        margin: Some(1.0 - lhs),
                        informative: true,
                    })
                }
                None => None,
            }
        }
    };

    let status = match &outcome {
        None => TrialStatus::SolverFailure,
        Some(o) if !o.informative => TrialStatus::Vacuous,
        Some(o) => {
            if o.margin.unwrap_or(f64::NEG_INFINITY) >= -config.margin_tol {
                TrialStatus::Pass
            } else {
                TrialStatus::Violation
            }
        }
    };
    if status == TrialStatus::SolverFailure {
        summary = format!("{summary} [solver failure after retry]");
    }
    Ok(TrialRecord {
        trial,
        p,
        dim,
        status,
        outcome,
        summary,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Set pair for the perturbation suites: a translate pair with exact sigma,
/// or an independent polytope pair with a certified Hausdorff upper bound.
fn random_pair(
    rng: &mut ChaCha8Rng,
    space: &SpaceSpec,
    scale: f64,
    tol: f64,
) -> Result<SetPair> {
    if rng.gen_bool(0.5) {
        let set = random_set(rng, space);
        let t = random_shift(rng, space, scale);
        SetPair::translate_pair(space, &set, &t)
    } else {
        let dim = space.dim();
        let center = random_point(rng, dim, 2.0);
        let m = rng.gen_range(dim + 2..=dim + 6);
        let v1: Vec<Point> = (0..m)
            .map(|_| center.add(&random_point(rng, dim, 1.0)))
            .collect();
        let v2: Vec<Point> = v1
            .iter()
            .map(|v| v.add(&random_shift(rng, space, scale)))
            .collect();
        SetPair::from_sets(
            space,
            ConvexSetDescriptor::VPolytope { vertices: v1 },
            ConvexSetDescriptor::VPolytope { vertices: v2 },
            tol,
            1e-9,
        )
    }
}

/// Instance-level Hilbert-space set-perturbation bound with 1e-6 slack.
fn hilbert_f9_outcome(
    space: &SpaceSpec,
    pair: &SetPair,
    x: &Point,
    p1: &ProjectionResult,
    p2: &ProjectionResult,
) -> Result<BoundOutcome> {
    let lhs = space.norm(&p1.point.sub(&p2.point))?;
    let r = space.norm(x)?;
    let d1 = sets::dist_to_origin(space, &pair.omega1, 1e-10)?;
    let d2 = sets::dist_to_origin(space, &pair.omega2, 1e-10)?;
    let d = d1.max(d2);
    let (ours, comparison) = bounds::hilbert_set_bounds(pair.sigma, r, d)?;
    let rhs = ours + 1e-6;
    Ok(BoundOutcome {
        lhs,
        rhs: Some(rhs),
        constants: outcome_constants(&[
            ("sigma", pair.sigma),
            ("r", r),
            ("d", d),
            ("comparison_rhs", comparison),
        ]),
        margin: Some(rhs - lhs),
        informative: true,
    })
}

/// Run all trials of a suite, in parallel, and aggregate.
pub fn run_suite(config: &SuiteConfig) -> Result<BoundReport> {
    config.validate()?;
    let start = Instant::now();

    let mut cells = Vec::new();
    for &p in &config.p {
        for &dim in &config.dim {
            for trial in 0..config.trials {
                cells.push((p, dim, trial));
            }
        }
    }

    let records: Vec<TrialRecord> = cells
        .par_iter()
        .map(|&(p, dim, trial)| run_trial(config, p, dim, trial))
        .collect::<Result<Vec<_>>>()?;

    Ok(aggregate(config, records, start.elapsed().as_secs_f64() * 1e3))
}

fn aggregate(config: &SuiteConfig, records: Vec<TrialRecord>, runtime_ms: f64) -> BoundReport {
    let trials_run = records.len();
    let mut violations = 0;
    let mut solver_failures = 0;
    let mut margins: Vec<f64> = Vec::new();
    for r in &records {
        match r.status {
            TrialStatus::Violation => violations += 1,
            TrialStatus::SolverFailure => solver_failures += 1,
            _ => {}
        }
        if let Some(o) = &r.outcome {
            if o.informative {
                margins.push(o.margin.expect("informative outcomes carry a margin"));
            }
        }
    }
    margins.sort_by(|a, b| a.partial_cmp(b).expect("margins are finite"));
    let informative = margins.len();
    let evaluated = trials_run - solver_failures;
    let informative_fraction = if evaluated == 0 {
        0.0
    } else {
        informative as f64 / evaluated as f64
    };
    let min_margin = margins.first().copied();
    let median_margin = if margins.is_empty() {
        None
    } else {
        Some(margins[margins.len() / 2])
    };
    BoundReport {
        suite: config.suite.name().to_string(),
        config: config.clone(),
        trials_run,
        violations,
        worst_margin: min_margin,
        informative,
        informative_fraction,
        min_margin,
        median_margin,
        solver_failures,
        runtime_ms,
        records: if config.record_trials {
            Some(records)
        } else {
            None
        },
    }
}

/// Per-trial CSV rows; requires the report to carry records.
pub fn to_csv(report: &BoundReport) -> Result<String> {
    let records = report.records.as_ref().ok_or_else(|| {
        Error::InvalidConfig("report has no per-trial records (set record_trials)".into())
    })?;
    let mut out = String::from("trial,p,dim,status,lhs,rhs,margin,informative\n");
    for r in records {
        let (lhs, rhs, margin, informative) = match &r.outcome {
            Some(o) => (
                o.lhs.to_string(),
                o.rhs.map(|v| v.to_string()).unwrap_or_default(),
                o.margin.map(|v| v.to_string()).unwrap_or_default(),
                o.informative.to_string(),
            ),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{:?},{},{},{},{}\n",
            r.trial, r.p, r.dim, r.status, lhs, rhs, margin, informative
        ));
    }
    Ok(out)
}
