//! Invariant suites shared by the acceptance run, the `verify` command and
//! the benches. Each suite returns named checks with the measured value
//! and its limit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::bloch::{make_state, sample_states, Axis, BlochState, Coord, SamplerConfig};
use crate::channel::{
    decompose_covariant, extremal_covariant, extremal_grid, fit_extremal_mixture, is_covariant, is_cptp,
    sample_covariant_cptp,
};
use crate::error::{Error, Result};
use crate::monotones::{
    a_monotone, b_monotone, monotone_profile, refbit_cost, refbit_yield, trace_distance_asymmetry, MonotoneKind,
    MonotoneName, MonotoneProfile, RefbitChain,
};
use crate::oracle::{closure_boundary_probe, oracle_agreement, search_channel, OracleConfig};
use crate::order::{count_incomparable, nonweakness_witness, verify_witness, ANTICHAIN_LEN};
use crate::parallel::{self, Execution};
use crate::relations::{
    a_inequality_margins, b_inequality_margins, cross_section, detect_pairwise_relation, equality_residuals,
    fixed_purity_residual_a, fixed_purity_residual_b, pure_b_tuple, sample_section_states, state_from_a_triple,
    CrossSectionSpec, PairwiseRelation, PureBTag, Signs,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Equalities,
    Inequalities,
    Realizability,
    Pure,
    Purity,
    Operational,
    CrossSections,
    Channels,
    Witness,
    Oracle,
    Closure,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Equalities,
        Suite::Inequalities,
        Suite::Realizability,
        Suite::Pure,
        Suite::Purity,
        Suite::Operational,
        Suite::CrossSections,
        Suite::Channels,
        Suite::Witness,
        Suite::Oracle,
        Suite::Closure,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Equalities => "equalities",
            Suite::Inequalities => "inequalities",
            Suite::Realizability => "realizability",
            Suite::Pure => "pure",
            Suite::Purity => "purity",
            Suite::Operational => "operational",
            Suite::CrossSections => "cross-sections",
            Suite::Channels => "channels",
            Suite::Witness => "witness",
            Suite::Oracle => "oracle",
            Suite::Closure => "closure",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

/// Sizes are derived from `n`: `n` ball states for the constraint suites,
/// `n/10` for realizability and the operational identity, `n/100` for the
/// sphere, purity and refbit samples. `pairs` is per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteParams {
    pub n: usize,
    pub seed: u64,
    pub pairs: usize,
    pub margin: f64,
    pub oracle: OracleConfig,
    pub exec: Execution,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            n: 100_000,
            seed: 1,
            pairs: 1000,
            margin: 0.02,
            oracle: OracleConfig::default(),
            exec: Execution::default(),
        }
    }
}

impl SuiteParams {
    fn tenth(&self) -> usize {
        (self.n / 10).max(1)
    }

    fn hundredth(&self) -> usize {
        (self.n / 100).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="`, `">="` or `"=="`.
    pub relation: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, relation: "<=", limit, pass: value <= limit }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, relation: ">=", limit, pass: value >= limit }
    }

    pub fn count(name: impl Into<String>, value: usize, want: usize) -> Self {
        Check { name: name.into(), value: value as f64, relation: "==", limit: want as f64, pass: value == want }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::count(name, ok as usize, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    /// Number of sampled items the suite looked at.
    pub checked: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, checked: usize, checks: Vec<Check>) -> Self {
        SuiteReport { suite, pass: checks.iter().all(|c| c.pass), checked, checks }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport> {
    match suite {
        Suite::Equalities => equalities(params),
        Suite::Inequalities => inequalities(params),
        Suite::Realizability => realizability(params),
        Suite::Pure => pure(params),
        Suite::Purity => purity(params),
        Suite::Operational => operational(params),
        Suite::CrossSections => cross_sections(params),
        Suite::Channels => channels(params),
        Suite::Witness => witness(params),
        Suite::Oracle => oracle(params),
        Suite::Closure => closure(params),
    }
}

pub fn run_all(params: &SuiteParams) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|s| run_suite(*s, params)).collect()
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// `n` ball states followed by `n/100` sphere states.
fn constraint_states(p: &SuiteParams) -> Result<Vec<BlochState>> {
    let mut states = sample_states(&SamplerConfig::uniform_ball(p.seed), p.n, p.exec)?;
    states.extend(sample_states(&SamplerConfig::uniform_sphere(p.seed.wrapping_add(1)), p.hundredth(), p.exec)?);
    Ok(states)
}

fn profiles(states: &[BlochState], exec: Execution) -> Vec<MonotoneProfile> {
    parallel::map_indexed(states.len(), exec, |i| monotone_profile(&states[i]))
}

fn equalities(p: &SuiteParams) -> Result<SuiteReport> {
    let states = constraint_states(p)?;
    let worst = max_abs(profiles(&states, p.exec).iter().flat_map(equality_residuals));
    Ok(SuiteReport::new(
        Suite::Equalities,
        states.len(),
        vec![Check::at_most("max |equality residual|", worst, tol::CONSTRAINT)],
    ))
}

/// The `(A_n, B_n, A_m)` margins for every ordered pair of distinct axes,
/// without range preconditions.
fn axbxay_all(p: &MonotoneProfile) -> impl Iterator<Item = f64> + '_ {
    Coord::ALL.into_iter().flat_map(|n| Coord::ALL.into_iter().filter(move |m| *m != n).map(move |m| (n, m))).flat_map(
        move |(n, m)| {
            let (a, b, y) = (p.pair(n).a.powi(2), p.pair(n).b.powi(2), p.pair(m).a.powi(2));
            [b - a + a * b - y * b, -b + a + y * b]
        },
    )
}

fn inequalities(p: &SuiteParams) -> Result<SuiteReport> {
    let states = constraint_states(p)?;
    let profs = profiles(&states, p.exec);
    let a_min = min_of(profs.iter().flat_map(|q| a_inequality_margins(q.a_x, q.a_y, q.a_z)));
    let impure: Vec<[f64; 3]> = profs.iter().filter_map(|q| b_inequality_margins(q.b_x, q.b_y, q.b_z).ok()).collect();
    let b_min = min_of(impure.iter().flatten().copied());
    let axbxay_min = min_of(profs.iter().flat_map(axbxay_all));
    Ok(SuiteReport::new(
        Suite::Inequalities,
        states.len(),
        vec![
            Check::at_least("min A-triple margin", a_min, -tol::CONSTRAINT),
            Check::at_least("min B-triple margin (impure)", b_min, -tol::CONSTRAINT),
            Check::at_least("impure samples", impure.len() as f64, 1.0),
            Check::at_least("min (A_n, B_n, A_m) margin", axbxay_min, -tol::CONSTRAINT),
        ],
    ))
}

enum TripleOutcome {
    Realized { round_trip: f64 },
    Rejected { min_margin: f64, constructor_refused: bool },
    Failed,
}

fn realizability(p: &SuiteParams) -> Result<SuiteReport> {
    let n = p.tenth();
    let outcomes = parallel::map_indexed(n, p.exec, |i| {
        let mut rng = parallel::rng_for(p.seed, i as u64);
        let t: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let signs = Signs([rng.random(), rng.random(), rng.random()]);
        let m = a_inequality_margins(t[0], t[1], t[2]);
        let min_margin = min_of(m);
        if min_margin >= 0.0 {
            match state_from_a_triple(t[0], t[1], t[2], signs) {
                Ok(s) => {
                    let back = monotone_profile(&s).a_triple();
                    TripleOutcome::Realized { round_trip: max_abs((0..3).map(|k| back[k] - t[k])) }
                }
                Err(_) => TripleOutcome::Failed,
            }
        } else {
            let refused = min_margin >= -1e-12 || state_from_a_triple(t[0], t[1], t[2], signs).is_err();
            TripleOutcome::Rejected { min_margin, constructor_refused: refused }
        }
    });
    let (mut realized, mut failed, mut rejected, mut accepted_bad) = (0, 0, 0, 0);
    let (mut worst_trip, mut worst_rejected) = (0.0f64, f64::NEG_INFINITY);
    for o in &outcomes {
        match *o {
            TripleOutcome::Realized { round_trip } => {
                realized += 1;
                worst_trip = worst_trip.max(round_trip);
            }
            TripleOutcome::Rejected { min_margin, constructor_refused } => {
                rejected += 1;
                worst_rejected = worst_rejected.max(min_margin);
                accepted_bad += !constructor_refused as usize;
            }
            TripleOutcome::Failed => failed += 1,
        }
    }
    let mut checks = vec![
        Check::count("admissible triples that failed to realize", failed, 0),
        Check::at_most("max round-trip error", worst_trip, tol::CONSTRAINT),
        Check::count("inadmissible triples realized anyway", accepted_bad, 0),
        Check::at_least("admissible triples", realized as f64, 1.0),
    ];
    if rejected > 0 {
        checks.push(Check::at_most("largest margin among rejected (must be < 0)", worst_rejected, -f64::MIN_POSITIVE));
    }
    Ok(SuiteReport::new(Suite::Realizability, n, checks))
}

fn pole_states() -> Vec<(BlochState, PureBTag)> {
    let mut out = Vec::new();
    for (c, tag) in [(Coord::X, PureBTag::PoleX), (Coord::Y, PureBTag::PoleY), (Coord::Z, PureBTag::PoleZ)] {
        for sign in [1.0, -1.0] {
            for tilt in [0.0f64, 5e-13] {
                let mut v = [tilt; 3];
                v[c.index()] = sign * (1.0 - 2.0 * tilt * tilt).sqrt();
                let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                out.push((make_state(v[0] / norm, v[1] / norm, v[2] / norm).expect("unit vector"), tag));
            }
        }
    }
    out
}

fn pure(p: &SuiteParams) -> Result<SuiteReport> {
    let sphere = sample_states(&SamplerConfig::uniform_sphere(p.seed), p.hundredth(), p.exec)?;
    let mut bad_tag = 0;
    let mut worst_value = 0.0f64;
    let mut seen = std::collections::BTreeSet::new();
    for s in &sphere {
        match pure_b_tuple(s) {
            Ok(tag) => {
                seen.insert(tag.label());
                let b = monotone_profile(s).b_triple();
                worst_value = worst_value.max(max_abs((0..3).map(|k| b[k] - tag.values()[k])));
            }
            Err(_) => bad_tag += 1,
        }
    }
    let poles = pole_states();
    let wrong_pole = poles.iter().filter(|(s, want)| pure_b_tuple(s).ok() != Some(*want)).count();
    let allowed = ["{0,1,1}", "{1,0,1}", "{1,1,0}", "{1,1,1}"];
    Ok(SuiteReport::new(
        Suite::Pure,
        sphere.len() + poles.len(),
        vec![
            Check::count("sphere states without a tag", bad_tag, 0),
            Check::holds("tags within the four pure tuples", seen.iter().all(|t| allowed.contains(t))),
            Check::at_most("max |B − tag|", worst_value, tol::BALL),
            Check::count("pole states with the wrong tag", wrong_pole, 0),
        ],
    ))
}

pub const PURITY_RADII: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.99];

fn purity(p: &SuiteParams) -> Result<SuiteReport> {
    let n = p.hundredth();
    let mut checks = Vec::new();
    for (k, r) in PURITY_RADII.into_iter().enumerate() {
        let states = sample_states(&SamplerConfig::fixed_radius(r, p.seed.wrapping_add(k as u64)), n, p.exec)?;
        let profs = profiles(&states, p.exec);
        let wa = max_abs(profs.iter().map(|q| fixed_purity_residual_a(q, r)));
        let wb = profs.iter().map(|q| fixed_purity_residual_b(q, r)).collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("r = {r}: max |A-sum residual|"), wa, tol::CONSTRAINT));
        checks.push(Check::at_most(format!("r = {r}: max |B-sum residual|"), max_abs(wb), tol::CONSTRAINT));
    }
    let pure = sample_states(&SamplerConfig::uniform_sphere(p.seed), n, p.exec)?;
    let wp = max_abs(profiles(&pure, p.exec).iter().map(|q| fixed_purity_residual_a(q, 1.0)));
    checks.push(Check::at_most("r = 1: max |Σ A² − 2|", wp, tol::ORDER));
    Ok(SuiteReport::new(Suite::Purity, n * (PURITY_RADII.len() + 1), checks))
}

pub const REFBIT_STEP: f64 = 1e-3;

fn operational(p: &SuiteParams) -> Result<SuiteReport> {
    let states = sample_states(&SamplerConfig::uniform_ball(p.seed), p.tenth(), p.exec)?;
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let td = parallel::map_indexed(states.len(), p.exec, |i| {
        max_abs(axes.iter().map(|ax| trace_distance_asymmetry(&states[i], ax) - a_monotone(&states[i], ax)))
    });
    let mut checks = vec![Check::at_most("max |trace-distance asymmetry − A|", max_abs(td), tol::ORDER)];

    let m = p.hundredth();
    for ax in axes {
        let chain = RefbitChain::uniform(ax, REFBIT_STEP)?;
        let rows = parallel::map_indexed(m, p.exec, |i| -> Result<(f64, f64, f64)> {
            let s = &states[i];
            let cost = refbit_cost(s, &chain)?;
            let yld = refbit_yield(s, &chain);
            Ok((cost - b_monotone(s, &ax), yld - a_monotone(s, &ax), yld - cost))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let name = ax.coord().map_or("n", |c| c.label());
        checks.push(Check::at_most(
            format!("{name}: max |cost − B|"),
            max_abs(rows.iter().map(|r| r.0)),
            2.0 * REFBIT_STEP,
        ));
        checks.push(Check::at_most(
            format!("{name}: max |yield − A|"),
            max_abs(rows.iter().map(|r| r.1)),
            2.0 * REFBIT_STEP,
        ));
        checks.push(Check::at_most(
            format!("{name}: max (yield − cost)"),
            rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max),
            0.0,
        ));
    }
    Ok(SuiteReport::new(Suite::Operational, states.len() * 3 + m * 3, checks))
}

pub const SECTION_GRID: usize = 201;

fn relation_on_slice(value: f64, seed: u64) -> Result<PairwiseRelation> {
    let ax = MonotoneName::new(MonotoneKind::A, Coord::X);
    let states = sample_section_states(ax, value, 400, seed)?;
    let pairs: Vec<(f64, f64)> = states
        .iter()
        .map(|s| {
            let q = monotone_profile(s);
            (q.a_y, q.a_z)
        })
        .collect();
    detect_pairwise_relation(&pairs)
}

fn cross_sections(p: &SuiteParams) -> Result<SuiteReport> {
    let n = SECTION_GRID;
    let h = 1.0 / (n - 1) as f64;
    let ax = MonotoneName::new(MonotoneKind::A, Coord::X);
    let zero = cross_section(&CrossSectionSpec { fixed_monotone: ax, fixed_value: 0.0, grid_n: n })?;
    let one = cross_section(&CrossSectionSpec { fixed_monotone: ax, fixed_value: 1.0, grid_n: n })?;
    let dev0 = max_abs(zero.members().map(|q| q.c0 - q.c1));
    let dev1 = max_abs(one.members().map(|q| q.c0.hypot(q.c1) - 1.0));

    // states on a B-slice must land on member cells
    let bx = MonotoneName::new(MonotoneKind::B, Coord::X);
    let half = cross_section(&CrossSectionSpec { fixed_monotone: bx, fixed_value: 0.5, grid_n: n })?;
    let on_slice = sample_section_states(bx, 0.5, 1000, p.seed)?;
    let missed = on_slice
        .iter()
        .filter(|s| {
            let q = monotone_profile(s);
            let i = (q.b_y * (n - 1) as f64).round() as usize;
            let j = (q.b_z * (n - 1) as f64).round() as usize;
            !half.points[i * n + j].member
        })
        .count();

    let rel = [0.0, 1.0, 0.5].map(|v| relation_on_slice(v, p.seed));
    let want = [PairwiseRelation::Synergy, PairwiseRelation::Tradeoff, PairwiseRelation::Neither];
    let mut checks = vec![
        Check::at_least("A_x = 0 members", zero.members().count() as f64, n as f64),
        Check::at_most("A_x = 0: max |A_y − A_z| over members", dev0, h + 1e-12),
        Check::at_least("A_x = 1 members", one.members().count() as f64, 1.0),
        Check::at_most("A_x = 1: max |√(A_y² + A_z²) − 1| over members", dev1, h + 1e-12),
        Check::count("B_x = 0.5 slice states off the member set", missed, 0),
    ];
    for ((v, got), want) in [0.0, 1.0, 0.5].iter().zip(rel).zip(want) {
        let ok = got.as_ref().ok() == Some(&want);
        checks.push(Check::holds(format!("A_x = {v}: (A_y, A_z) relation is {want:?}"), ok));
    }
    Ok(SuiteReport::new(Suite::CrossSections, 3 * n * n + on_slice.len(), checks))
}

pub const CHANNEL_GRID: usize = 64;
pub const CHANNEL_SAMPLES: usize = 200;

fn channels(p: &SuiteParams) -> Result<SuiteReport> {
    let grid = extremal_grid(CHANNEL_GRID);
    let bad_extremal = parallel::map_indexed(grid.len(), p.exec, |i| {
        let m = extremal_covariant(&grid[i]);
        !(is_cptp(&m, tol::CHANNEL) && is_covariant(&m, tol::CHANNEL))
    })
    .into_iter()
    .filter(|b| *b)
    .count();

    let fits = parallel::map_indexed(CHANNEL_SAMPLES, p.exec, |i| -> Result<(f64, bool, f64)> {
        let map = sample_covariant_cptp(&mut parallel::rng_for(p.seed, i as u64));
        let dec = decompose_covariant(&map, tol::CHANNEL)?;
        let err = dec.reconstruct().max_abs_diff(&map);
        let fit = fit_extremal_mixture(&dec.d, CHANNEL_GRID, 12, 1e-9)?;
        Ok((err, is_cptp(&dec.d, tol::CHANNEL), fit.residual))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(
        Suite::Channels,
        grid.len() + fits.len(),
        vec![
            Check::count("extremal maps failing CPTP or covariance", bad_extremal, 0),
            Check::at_most("max reconstruction error", max_abs(fits.iter().map(|f| f.0)), tol::CHANNEL),
            Check::count("non-CPTP diagonal factors", fits.iter().filter(|f| !f.1).count(), 0),
            Check::at_most("max hull-fit residual", max_abs(fits.iter().map(|f| f.2)), 1e-6),
        ],
    ))
}

fn witness(_: &SuiteParams) -> Result<SuiteReport> {
    let w = nonweakness_witness(0.1, 0.2, 0.5, 0.6)?;
    let verified = verify_witness(&w, &Axis::X);
    let pairs = ANTICHAIN_LEN * (ANTICHAIN_LEN - 1) / 2;
    Ok(SuiteReport::new(
        Suite::Witness,
        w.antichain.len() + 3,
        vec![
            Check::holds("witness verifies", verified.is_ok()),
            Check::count("antichain length", w.antichain.len(), ANTICHAIN_LEN),
            Check::count("incomparable antichain pairs", count_incomparable(&w.antichain, &Axis::X), pairs),
        ],
    ))
}

fn oracle(p: &SuiteParams) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut checked = 0;
    let config = OracleConfig { seed: p.seed, ..p.oracle };
    for ax in [Axis::X, Axis::Y, Axis::Z] {
        let name = ax.coord().map_or("n", |c| c.label());
        let rep = oracle_agreement(p.pairs, &config, p.margin, &ax, &SamplerConfig::uniform_ball(p.seed), p.exec)?;
        checked += rep.checked();
        checks.push(Check::count(format!("{name}: disagreements"), rep.disagreements.len(), 0));
        checks.push(Check::count(format!("{name}: invalid channels"), rep.invalid_channels, 0));
        checks.push(Check::count(format!("{name}: image monotone overshoots"), rep.monotone_overshoots, 0));
    }
    let slice = OracleConfig { seed: p.seed.wrapping_add(1), ..p.oracle };
    let rep = oracle_agreement(
        (p.pairs / 10).max(1),
        &slice,
        p.margin,
        &Axis::X,
        &SamplerConfig::fixed_radius(0.7, 0),
        p.exec,
    )?;
    checked += rep.checked();
    checks.push(Check::count("r = 0.7: disagreements", rep.disagreements.len(), 0));
    checks.push(Check::count("r = 0.7: incomparable pairs", rep.incomparable, 0));
    Ok(SuiteReport::new(Suite::Oracle, checked, checks))
}

pub const PROBE_POINTS: usize = 16;
pub const PROBE_MARGIN: f64 = 0.01;

fn closure(p: &SuiteParams) -> Result<SuiteReport> {
    let config = OracleConfig { seed: p.seed, ..p.oracle };
    let generic = Axis::normalized(1.0, 2.0, -2.0)?;
    let sources = [
        (make_state(0.0, 0.5, 0.0)?, Axis::X),
        (make_state(0.6, 0.4, 0.0)?, Axis::X),
        (make_state(0.6, 0.4, 0.0)?, Axis::Z),
        (make_state(-0.3, 0.2, 0.7)?, generic),
    ];
    let mut checks = Vec::new();
    let mut checked = 0;
    for (k, (s, ax)) in sources.iter().enumerate() {
        let rep = closure_boundary_probe(s, ax, PROBE_POINTS, PROBE_MARGIN, &config, p.exec)?;
        checked += rep.probes.len();
        checks.push(Check::count(format!("source {k}: unreached boundary points"), rep.unreached, 0));
        checks.push(Check::count(format!("source {k}: reached inflated points"), rep.reached_outside, 0));
    }
    let src = make_state(0.0, 0.5, 0.0)?;
    let on = search_channel(&src, &src, &Axis::X, &config)?;
    let off = search_channel(&src, &make_state(0.0, 0.52, 0.0)?, &Axis::X, &config)?;
    checks.push(Check::holds("(0, 0.5, 0) reachable from itself", on.feasible));
    checks.push(Check::holds("(0, 0.52, 0) unreachable from (0, 0.5, 0)", !off.feasible));
    let free = closure_boundary_probe(&make_state(0.5, 0.0, 0.0)?, &Axis::X, 4, PROBE_MARGIN, &config, p.exec);
    checks.push(Check::holds("free source rejected", matches!(free, Err(Error::Precondition(_)))));
    Ok(SuiteReport::new(Suite::Closure, checked + 2, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteParams {
        SuiteParams { n: 2000, pairs: 40, ..SuiteParams::default() }
    }

    #[test]
    fn labels_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.label().parse::<Suite>().unwrap(), s);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for s in Suite::ALL {
            if s == Suite::Channels {
                continue;
            }
            let rep = run_suite(s, &small()).unwrap();
            assert!(rep.pass, "{s}: {:?}", rep.failed().collect::<Vec<_>>());
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let seq = SuiteParams { exec: Execution::Sequential, ..small() };
        for s in [Suite::Equalities, Suite::Realizability, Suite::Oracle] {
            assert_eq!(run_suite(s, &seq).unwrap(), run_suite(s, &small()).unwrap());
        }
    }

    #[test]
    fn check_relations() {
        assert!(Check::at_most("x", 1.0, 1.0).pass);
        assert!(!Check::at_least("x", 0.5, 1.0).pass);
        assert!(Check::count("x", 3, 3).pass);
        assert!(!Check::holds("x", false).pass);
    }
}
