//! Dependence relations among the six triad monotones: equalities,
//! inequalities, inversion back to Bloch data, cross-sections and pairwise
//! synergy / trade-off detection.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{make_state, sample_states, BlochState, Coord, SamplerConfig};
use crate::error::{Error, Result};
use crate::monotones::{monotone_profile, MonotoneKind, MonotoneName, MonotoneProfile};
use crate::parallel::{self, Execution};
use crate::section::{self, BoundaryCurve, BoundaryId, Constraint, CrossSection, RearrangedBounds, SectionPoint};
use crate::tol;

fn sq(v: f64) -> f64 {
    v * v
}

/// The three equality constraints, cyclic in `(x, y, z)`:
/// `2(B_x² − A_x²) − B_x²(−A_x² + A_y² + A_z²)` and partners.
pub fn equality_residuals(p: &MonotoneProfile) -> [f64; 3] {
    let (ax, ay, az) = (sq(p.a_x), sq(p.a_y), sq(p.a_z));
    let (bx, by, bz) = (sq(p.b_x), sq(p.b_y), sq(p.b_z));
    [
        2.0 * (bx - ax) - bx * (-ax + ay + az),
        2.0 * (by - ay) - by * (ax - ay + az),
        2.0 * (bz - az) - bz * (ax + ay - az),
    ]
}

/// The three triangle-type slacks and `2 − Σ A_n²`; all are `≥ 0` exactly
/// on the realizable triples.
pub fn a_inequality_margins(a_x: f64, a_y: f64, a_z: f64) -> [f64; 4] {
    let (x, y, z) = (sq(a_x), sq(a_y), sq(a_z));
    [-x + y + z, x - y + z, x + y - z, 2.0 - x - y - z]
}

fn b_margins_raw(b_x: f64, b_y: f64, b_z: f64) -> [f64; 3] {
    let (x, y, z) = (sq(b_x), sq(b_y), sq(b_z));
    let xyz = x * y * z;
    [-x + y + z - 2.0 * y * z + xyz, x - y + z - 2.0 * z * x + xyz, x + y - z - 2.0 * x * y + xyz]
}

fn check_impure_b(b: [f64; 3]) -> Result<()> {
    if b.iter().any(|v| *v >= 1.0 - tol::POLE) {
        return Err(Error::PureInput);
    }
    Ok(())
}

/// Polynomial slacks of the `B`-triple inequalities (impure states only).
pub fn b_inequality_margins(b_x: f64, b_y: f64, b_z: f64) -> Result<[f64; 3]> {
    check_impure_b([b_x, b_y, b_z])?;
    Ok(b_margins_raw(b_x, b_y, b_z))
}

fn axbxay_raw(a_x: f64, b_x: f64, a_y: f64) -> [f64; 2] {
    let (a, b, y) = (sq(a_x), sq(b_x), sq(a_y));
    [b - a + a * b - y * b, -b + a + y * b]
}

/// Slacks of the two `(A_x, B_x, A_y)` inequalities
/// `B² − A² + A²B² − A_y²B² ≥ 0` and `−B² + A² + A_y²B² ≥ 0`.
pub fn axbxay_margins(a_x: f64, b_x: f64, a_y: f64) -> Result<[f64; 2]> {
    let unit = |v: f64| (0.0..=1.0).contains(&v);
    if !(unit(a_x) && unit(b_x) && unit(a_y)) || a_x > b_x + tol::ORDER || b_x <= 0.0 {
        return Err(Error::RangeViolation(format!(
            "need 0 ≤ A_x ≤ B_x ≤ 1, 0 < B_x and A_y in [0, 1], got ({a_x}, {b_x}, {a_y})"
        )));
    }
    Ok(axbxay_raw(a_x, b_x, a_y))
}

/// `(r_x², r_y², r_z²)` from the `A`-triple; may be negative for
/// unrealizable input.
pub fn radii_from_a(a_x: f64, a_y: f64, a_z: f64) -> [f64; 3] {
    let (x, y, z) = (sq(a_x), sq(a_y), sq(a_z));
    [0.5 * (-x + y + z), 0.5 * (x - y + z), 0.5 * (x + y - z)]
}

/// `(r_x², r_y², r_z²)` from the `B`-triple of an impure state.
pub fn radii_from_b(b_x: f64, b_y: f64, b_z: f64) -> Result<[f64; 3]> {
    check_impure_b([b_x, b_y, b_z])?;
    // with p_n = 1 − B_n² = (1 − r²)/(1 − r_n²), summing 1 − r_n² = q/p_n
    // over n gives q = 1 − r² = 2/(Σ 1/p_n − 1); this form stays accurate
    // near the sphere where the polynomial ratio cancels
    let p = [b_x, b_y, b_z].map(|b| (1.0 - b) * (1.0 + b));
    let inv: f64 = p.iter().map(|v| 1.0 / v).sum();
    let q = 2.0 / (inv - 1.0);
    Ok(p.map(|pn| 1.0 - q / pn))
}

/// Sign choice for each Bloch component; `true` means negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Signs(pub [bool; 3]);

impl Signs {
    pub const PLUS: Signs = Signs([false; 3]);

    /// The eight sign patterns, from bit `i` of `0..8`.
    pub fn all() -> impl Iterator<Item = Signs> {
        (0u8..8).map(|b| Signs([b & 1 != 0, b & 2 != 0, b & 4 != 0]))
    }
}

/// A state with the given `A`-triple; the signs pick one of up to eight
/// solutions.
pub fn state_from_a_triple(a_x: f64, a_y: f64, a_z: f64, signs: Signs) -> Result<BlochState> {
    let m = a_inequality_margins(a_x, a_y, a_z);
    if m.iter().any(|v| *v < -tol::ORDER) || [a_x, a_y, a_z].iter().any(|v| *v < 0.0) {
        return Err(Error::NotRealizable(format!("A-triple ({a_x}, {a_y}, {a_z}) has margins {m:?}")));
    }
    let r2 = radii_from_a(a_x, a_y, a_z);
    let c = |i: usize| {
        let v = r2[i].max(0.0).sqrt();
        if signs.0[i] {
            -v
        } else {
            v
        }
    };
    make_state(c(0), c(1), c(2)).map_err(|e| Error::NotRealizable(e.to_string()))
}

/// The `B`-triple of a pure state is one of four tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PureBTag {
    /// `{0,1,1}`: on the `x̂` axis.
    PoleX,
    /// `{1,0,1}`.
    PoleY,
    /// `{1,1,0}`.
    PoleZ,
    /// `{1,1,1}`: off every coordinate axis.
    Generic,
}

impl PureBTag {
    pub fn label(self) -> &'static str {
        match self {
            PureBTag::PoleX => "{0,1,1}",
            PureBTag::PoleY => "{1,0,1}",
            PureBTag::PoleZ => "{1,1,0}",
            PureBTag::Generic => "{1,1,1}",
        }
    }

    pub fn values(self) -> [f64; 3] {
        match self {
            PureBTag::PoleX => [0.0, 1.0, 1.0],
            PureBTag::PoleY => [1.0, 0.0, 1.0],
            PureBTag::PoleZ => [1.0, 1.0, 0.0],
            PureBTag::Generic => [1.0, 1.0, 1.0],
        }
    }
}

impl fmt::Display for PureBTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies a pure state by which `B`-monotone (if any) is at its pole
/// branch, using the same threshold as [`crate::monotones::b_monotone`].
pub fn pure_b_tuple(state: &BlochState) -> Result<PureBTag> {
    let radius = state.radius();
    if (radius - 1.0).abs() > tol::BALL {
        return Err(Error::NotPure { radius });
    }
    let at_pole = |c: Coord| 1.0 - sq(state.component(c)) <= tol::POLE;
    Ok(if at_pole(Coord::X) {
        PureBTag::PoleX
    } else if at_pole(Coord::Y) {
        PureBTag::PoleY
    } else if at_pole(Coord::Z) {
        PureBTag::PoleZ
    } else {
        PureBTag::Generic
    })
}

/// `Σ A_n² − 2r²`.
pub fn fixed_purity_residual_a(p: &MonotoneProfile, r: f64) -> f64 {
    sq(p.a_x) + sq(p.a_y) + sq(p.a_z) - 2.0 * r * r
}

/// `Σ 1/(1 − B_n²) − (3 − r²)/(1 − r²)`, for `r < 1`.
pub fn fixed_purity_residual_b(p: &MonotoneProfile, r: f64) -> Result<f64> {
    if r >= 1.0 - tol::POLE {
        return Err(Error::PureInput);
    }
    check_impure_b(p.b_triple())?;
    let lhs: f64 = p.b_triple().iter().map(|b| 1.0 / (1.0 - b * b)).sum();
    Ok(lhs - (3.0 - r * r) / (1.0 - r * r))
}

/// `A_z²` determined by `(A_x, B_x, A_y)`; `A_y²` when `B_x = 0`.
pub fn az_squared_given(a_x: f64, b_x: f64, a_y: f64) -> Result<f64> {
    if b_x == 0.0 {
        if a_x != 0.0 {
            return Err(Error::NotRealizable(format!("B_x = 0 forces A_x = 0, got {a_x}")));
        }
        return Ok(a_y * a_y);
    }
    let m = axbxay_margins(a_x, b_x, a_y).map_err(|e| Error::NotRealizable(e.to_string()))?;
    if m.iter().any(|v| *v < -tol::CONSTRAINT) {
        return Err(Error::NotRealizable(format!("(A_x, B_x, A_y) = ({a_x}, {b_x}, {a_y}) has margins {m:?}")));
    }
    let (a, b) = (a_x * a_x, b_x * b_x);
    Ok((2.0 - 2.0 * a / b + a - a_y * a_y).max(0.0))
}

/// `A_y² + A_z² = 2 + α² − 2α²/β²` with `A_x = α`, `B_x = β`, both in
/// `(0, 1]`.
pub fn ay_az_sum_given(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= beta + tol::ORDER && beta <= 1.0) {
        return Err(Error::RangeViolation(format!("need 0 < α ≤ β ≤ 1, got ({alpha}, {beta})")));
    }
    Ok(2.0 + alpha * alpha - 2.0 * alpha * alpha / (beta * beta))
}

/// Range `[lo, hi]` of realizable `A_y²` for fixed `A_x = α`, `B_x = β > 0`.
pub fn ay_squared_bounds(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    axbxay_margins(alpha, beta, 0.0)?;
    let q = alpha * alpha / (beta * beta);
    Ok(((1.0 - q).max(0.0), (1.0 - q + alpha * alpha).min(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub equality_residuals: [f64; 3],
    pub a_margins: [f64; 4],
    /// Absent for pure (or pole-adjacent) profiles.
    pub b_margins: Option<[f64; 3]>,
    /// Evaluated without the range preconditions of [`axbxay_margins`].
    pub axbxay_margins: [f64; 2],
}

impl ConstraintReport {
    pub fn of(p: &MonotoneProfile) -> Self {
        ConstraintReport {
            equality_residuals: equality_residuals(p),
            a_margins: a_inequality_margins(p.a_x, p.a_y, p.a_z),
            b_margins: b_inequality_margins(p.b_x, p.b_y, p.b_z).ok(),
            axbxay_margins: axbxay_raw(p.a_x, p.b_x, p.a_y),
        }
    }

    pub fn max_equality_residual(&self) -> f64 {
        self.equality_residuals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Most negative margin over every inequality family (0 if none is
    /// negative).
    pub fn min_margin(&self) -> f64 {
        let b = self.b_margins.unwrap_or([0.0; 3]);
        self.a_margins.iter().chain(&b).chain(&self.axbxay_margins).fold(0.0, |m, v| m.min(*v))
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_equality_residual() <= tolerance && self.min_margin() >= -tolerance
    }
}

pub fn constraint_report(state: &BlochState) -> ConstraintReport {
    ConstraintReport::of(&monotone_profile(state))
}

/// A fixed-monotone slice of a realizability region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSpec {
    pub fixed_monotone: MonotoneName,
    pub fixed_value: f64,
    pub grid_n: usize,
}

impl CrossSectionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fixed_value) {
            return Err(Error::InvalidConfig(format!("fixed value {} not in [0, 1]", self.fixed_value)));
        }
        if self.grid_n < 2 {
            return Err(Error::InvalidConfig(format!("grid_n = {} < 2", self.grid_n)));
        }
        Ok(())
    }

    /// The two free monotones, in cyclic order after the fixed one.
    pub fn free_monotones(&self) -> [MonotoneName; 2] {
        let (p, q) = self.fixed_monotone.coord.others();
        let k = self.fixed_monotone.kind;
        [MonotoneName::new(k, p), MonotoneName::new(k, q)]
    }
}

/// Grid membership and boundary curves for the slice `A_n = α` (in the
/// `A`-plane of the other two axes) or `B_n = β` (in their `B`-plane).
pub fn cross_section(spec: &CrossSectionSpec) -> Result<CrossSection> {
    spec.validate()?;
    let v = spec.fixed_value;
    let n = spec.grid_n;
    let cell = 1.0 / (n - 1) as f64;
    let grid = section::linspace(0.0, 1.0, n);
    let curve_ts = section::linspace(0.0, 1.0, 4 * n);
    let [f0, f1] = spec.free_monotones();
    let labels = [f0.label(), f1.label()];
    let fixed = Some((spec.fixed_monotone.label(), v));

    match spec.fixed_monotone.kind {
        MonotoneKind::A => {
            let a2 = v * v;
            let bl = move |y: f64, z: f64| -a2 + y * y + z * z;
            let br = move |y: f64, z: f64| a2 - y * y + z * z;
            let tl = move |y: f64, z: f64| a2 + y * y - z * z;
            let tr = move |y: f64, z: f64| 2.0 - a2 - y * y - z * z;
            let cs = [
                Constraint { id: BoundaryId::BottomLeft, g: &bl },
                Constraint { id: BoundaryId::BottomRight, g: &br },
                Constraint { id: BoundaryId::TopLeft, g: &tl },
                Constraint { id: BoundaryId::TopRight, g: &tr },
            ];
            let points = grid_points(&grid, &cs, cell, |_, _| None);
            let solve: [(BoundaryId, &dyn Fn(f64) -> f64); 4] = [
                (BoundaryId::BottomLeft, &|y| (a2 - y * y).sqrt()),
                (BoundaryId::BottomRight, &|y| (y * y - a2).sqrt()),
                (BoundaryId::TopLeft, &|y| (y * y + a2).sqrt()),
                (BoundaryId::TopRight, &|y| (2.0 - a2 - y * y).sqrt()),
            ];
            let boundaries = solve
                .iter()
                .map(|(id, f)| section::clip_curve(*id, curve_ts.iter().map(|&y| [y, f(y)]), &cs))
                .filter(|c| !c.points.is_empty())
                .collect();
            let rearranged = Some(RearrangedBounds { diff_max: a2, sum_min: a2, sum_max: 2.0 - a2 });
            Ok(CrossSection { labels, fixed, points, boundaries, rearranged })
        }
        MonotoneKind::B => {
            let b2 = v * v;
            let pure = pure_points(spec.fixed_monotone.coord, v);
            let impure = v < 1.0 - tol::POLE;
            let bl = move |y: f64, z: f64| {
                let (y, z) = (y * y, z * z);
                -b2 + y + z - 2.0 * y * z + b2 * y * z
            };
            let br = move |y: f64, z: f64| {
                let (y, z) = (y * y, z * z);
                b2 - y + z - 2.0 * z * b2 + b2 * y * z
            };
            let tl = move |y: f64, z: f64| {
                let (y, z) = (y * y, z * z);
                b2 + y - z - 2.0 * b2 * y + b2 * y * z
            };
            let cs = [
                Constraint { id: BoundaryId::BottomLeft, g: &bl },
                Constraint { id: BoundaryId::BottomRight, g: &br },
                Constraint { id: BoundaryId::TopLeft, g: &tl },
            ];
            let pure_at = |y: f64, z: f64| pure.iter().any(|p| p[0] == y && p[1] == z).then_some(BoundaryId::Pure);
            let points = if impure {
                grid_points(&grid, &cs, cell, pure_at)
            } else {
                let mut pts = Vec::with_capacity(n * n);
                for &y in &grid {
                    for &z in &grid {
                        let hit = pure_at(y, z);
                        pts.push(SectionPoint { c0: y, c1: z, member: hit.is_some(), boundary: hit });
                    }
                }
                pts
            };
            let mut boundaries: Vec<BoundaryCurve> = Vec::new();
            if impure {
                // each boundary is linear in Z = B_z² for fixed Y = B_y²
                let solve: [(BoundaryId, &dyn Fn(f64) -> f64); 3] = [
                    (BoundaryId::BottomLeft, &|yy| (b2 - yy) / (1.0 - 2.0 * yy + b2 * yy)),
                    (BoundaryId::BottomRight, &|yy| (yy - b2) / (1.0 - 2.0 * b2 + b2 * yy)),
                    (BoundaryId::TopLeft, &|yy| (b2 + yy - 2.0 * b2 * yy) / (1.0 - b2 * yy)),
                ];
                for (id, f) in solve {
                    let pts = curve_ts.iter().map(|&y| {
                        let z2 = f(y * y);
                        [y, if z2 >= 0.0 { z2.sqrt() } else { f64::NAN }]
                    });
                    let curve = section::clip_curve(id, pts, &cs);
                    if !curve.points.is_empty() {
                        boundaries.push(curve);
                    }
                }
            }
            if !pure.is_empty() {
                boundaries.push(BoundaryCurve { id: BoundaryId::Pure, points: pure });
            }
            Ok(CrossSection { labels, fixed, points, boundaries, rearranged: None })
        }
    }
}

/// `(B_p, B_q)` values reached by pure states with `B_c = β`.
fn pure_points(c: Coord, beta: f64) -> Vec<[f64; 2]> {
    let (p, q) = c.others();
    [PureBTag::PoleX, PureBTag::PoleY, PureBTag::PoleZ, PureBTag::Generic]
        .into_iter()
        .map(PureBTag::values)
        .filter(|v| v[c.index()] == beta)
        .map(|v| [v[p.index()], v[q.index()]])
        .collect()
}

/// `pure` marks grid points reached only by pure states; the rest use the
/// analytic constraints.
fn grid_points(
    grid: &[f64],
    cs: &[Constraint<'_>],
    cell: f64,
    pure: impl Fn(f64, f64) -> Option<BoundaryId>,
) -> Vec<SectionPoint> {
    let mut out = Vec::with_capacity(grid.len() * grid.len());
    for &y in grid {
        for &z in grid {
            let (member, boundary) = match pure(y, z) {
                Some(id) => (true, Some(id)),
                None => section::classify(y, z, cs, cell),
            };
            out.push(SectionPoint { c0: y, c1: z, member, boundary });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub state: BlochState,
    pub values: Vec<f64>,
    pub report: ConstraintReport,
    pub pass: bool,
}

/// Sampled points of `JointRealize(subset)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSample {
    pub subset: Vec<MonotoneName>,
    pub rows: Vec<RegionRow>,
}

impl RegionSample {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Per coordinate, the largest gap between sorted sample values
    /// (including the gaps to 0 and 1).
    pub fn coverage_gaps(&self) -> Vec<f64> {
        (0..self.subset.len())
            .map(|k| {
                let mut v: Vec<f64> = self.rows.iter().map(|r| r.values[k]).collect();
                v.push(0.0);
                v.push(1.0);
                v.sort_by(f64::total_cmp);
                v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
            })
            .collect()
    }
}

pub fn sample_joint_region(
    subset: &[MonotoneName],
    n: usize,
    config: &SamplerConfig,
    exec: Execution,
) -> Result<RegionSample> {
    if subset.is_empty() {
        return Err(Error::InvalidConfig("empty monotone subset".into()));
    }
    let states = sample_states(config, n, exec)?;
    let subset_v = subset.to_vec();
    let rows = parallel::map_indexed(states.len(), exec, |i| {
        let state = states[i];
        let profile = monotone_profile(&state);
        let report = ConstraintReport::of(&profile);
        let values = subset_v.iter().map(|m| profile.get(*m)).collect();
        RegionRow { state, values, report, pass: report.passes(tol::CONSTRAINT) }
    });
    Ok(RegionSample { subset: subset.to_vec(), rows })
}

/// States lying exactly on the slice `fixed = value`: for `A_n = α` the
/// perpendicular radius is `α`; for `B_n = β` it is `β√(1 − r_n²)`.
pub fn sample_section_states(fixed: MonotoneName, value: f64, n: usize, seed: u64) -> Result<Vec<BlochState>> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidConfig(format!("fixed value {value} not in [0, 1]")));
    }
    let c = fixed.coord;
    let (p, q) = c.others();
    (0..n)
        .map(|i| {
            let mut rng = parallel::rng_for(seed, i as u64);
            let phi = rng.random_range(0.0..2.0 * PI);
            let (r_n, perp) = match fixed.kind {
                MonotoneKind::A => {
                    let h = (1.0 - value * value).max(0.0).sqrt();
                    (rng.random_range(-h..=h), value)
                }
                MonotoneKind::B => {
                    let r_n: f64 = rng.random_range(-0.999..0.999);
                    (r_n, value * (1.0 - r_n * r_n).sqrt())
                }
            };
            let mut v = [0.0; 3];
            v[c.index()] = r_n;
            v[p.index()] = perp * phi.cos();
            v[q.index()] = perp * phi.sin();
            make_state(v[0], v[1], v[2])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairwiseRelation {
    Synergy,
    Tradeoff,
    Neither,
}

/// Exhaustive check of every ordered pair of samples: synergy if
/// `A(r) ≥ A(s) ⇔ B(r) ≥ B(s)` always holds, trade-off if
/// `A(r) ≥ A(s) ⇔ B(r) ≤ B(s)` always holds (comparisons within
/// `tol::ORDER`).
pub fn detect_pairwise_relation(pairs: &[(f64, f64)]) -> Result<PairwiseRelation> {
    if pairs.len() < 2 {
        return Err(Error::DegenerateSample(format!("{} samples, need at least 2", pairs.len())));
    }
    let spread = |f: fn(&(f64, f64)) -> f64| {
        let lo = pairs.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    if spread(|p| p.0) <= tol::ORDER || spread(|p| p.1) <= tol::ORDER {
        return Err(Error::DegenerateSample("a coordinate is constant".into()));
    }
    let ge = |a: f64, b: f64| a >= b - tol::ORDER;
    let (mut synergy, mut tradeoff) = (true, true);
    for r in pairs {
        for s in pairs {
            let a_ge = ge(r.0, s.0);
            synergy &= a_ge == ge(r.1, s.1);
            tradeoff &= a_ge == ge(s.1, r.1);
        }
        if !synergy && !tradeoff {
            return Ok(PairwiseRelation::Neither);
        }
    }
    Ok(if synergy {
        PairwiseRelation::Synergy
    } else if tradeoff {
        PairwiseRelation::Tradeoff
    } else {
        PairwiseRelation::Neither
    })
}
