//! Brute-force channel search used to check the monotone criterion
//! independently.
//!
//! A covariant channel is `R_x(θ₁) ∘ Σ wᵢ Ext(uᵢ, vᵢ) ∘ R_x(θ₂)`. The
//! rotations only move states around their equivalence circles, so the
//! search aligns source and target with the `x`–`z` half-plane in closed
//! form and then fits the target by the nearest point of the convex hull of
//! extremal images on a `(u, v)` grid.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::bloch::{sample_with, to_x_frame, Axis, BlochState, SamplerConfig};
use crate::channel::{
    build_covariant, extremal_grid, is_covariant, is_cptp, stencil, AffineQubitMap, CovariantChannelSpec,
    ExtremalCovariantParams, MixtureComponent,
};
use crate::convex_fit;
use crate::error::{Error, Result};
use crate::monotones::monotone_pair;
use crate::order::{can_convert, compare, ComparabilityResult, ConversionVerdict};
use crate::parallel::{self, Execution};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Azimuthal resolution for probes around the axis. The search itself
    /// solves for both rotation angles exactly.
    pub theta_grid_n: usize,
    /// The extremal lattice is `uv_grid_n × uv_grid_n` over `[0, 2π) × [0, π)`.
    pub uv_grid_n: usize,
    /// Rounds of halving-stencil refinement around the active atoms.
    pub refine_steps: usize,
    /// Bloch distance counted as a hit.
    pub hit_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { theta_grid_n: 64, uv_grid_n: 64, refine_steps: 3, hit_tol: 1e-3, seed: 0 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_grid_n < 4 || self.uv_grid_n < 4 {
            return Err(Error::InvalidConfig(format!(
                "grid sizes must be at least 4, got theta {} and uv {}",
                self.theta_grid_n, self.uv_grid_n
            )));
        }
        if !(self.hit_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("hit_tol {} must be positive", self.hit_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub best_distance: f64,
    /// Channel in the frame where the axis is `x̂`.
    pub best_channel: CovariantChannelSpec,
    pub feasible: bool,
    pub axis: Axis,
    /// Image of the source under the channel.
    pub image: [f64; 3],
}

impl OracleResult {
    /// The channel in the original coordinates.
    pub fn map(&self) -> AffineQubitMap {
        build_covariant(&self.best_channel).expect("oracle builds valid specs").from_x_frame(&self.axis)
    }
}

/// Representative `(r_n, A)` of the equivalence circle and the angle that
/// rotates the state onto it.
fn half_plane(v: &Vector3<f64>) -> (f64, f64, f64) {
    let a = v.y.hypot(v.z);
    (v.x, a, (-v.y).atan2(v.z))
}

/// Searches the covariant family for a channel taking `source` to
/// `target`; always returns the best channel found.
pub fn search_channel(
    source: &BlochState,
    target: &BlochState,
    axis: &Axis,
    config: &OracleConfig,
) -> Result<OracleResult> {
    config.validate()?;
    let s = to_x_frame(source, axis).as_vector();
    let t = to_x_frame(target, axis).as_vector();
    let (s_x, s_a, theta2) = half_plane(&s);
    let t_a = t.y.hypot(t.z);
    // R_x(θ₁) takes (t_x, 0, A_t) to t
    let theta1 = t.y.atan2(t.z);
    let goal = Vector2::new(t.x, t_a);

    let image_of = |p: &ExtremalCovariantParams| {
        let (su, cu) = p.u.sin_cos();
        let (sv, cv) = p.v.sin_cos();
        Vector2::new(su * sv + s_x * cu * cv, s_a * cv)
    };

    let n = config.uv_grid_n;
    let mut atoms = extremal_grid(n);
    let (mut du, mut dv) = (2.0 * PI / n as f64, PI / n as f64);
    let mut fit;
    let mut round = 0;
    loop {
        let points: Vec<Vector2<f64>> = atoms.iter().map(image_of).collect();
        fit = convex_fit::nearest_in_hull(&points, &goal);
        if round == config.refine_steps || (fit.point(&points) - goal).norm() <= 1e-15 {
            break;
        }
        du *= 0.5;
        dv *= 0.5;
        let active: Vec<_> = fit.weights.iter().map(|&(i, _)| atoms[i]).collect();
        for p in &active {
            atoms.extend(stencil(p, du, dv));
        }
        round += 1;
    }

    let mixture = normalized_mixture(fit.weights.iter().map(|&(i, w)| (atoms[i], w)));
    let spec = CovariantChannelSpec { theta1, mixture, theta2 };
    let map = build_covariant(&spec)?.from_x_frame(axis);
    let image = map.apply_vector(&source.as_vector());
    let best_distance = (image - target.as_vector()).norm();
    Ok(OracleResult {
        best_distance,
        best_channel: spec,
        feasible: best_distance <= config.hit_tol,
        axis: *axis,
        image: [image.x, image.y, image.z],
    })
}

fn normalized_mixture(parts: impl Iterator<Item = (ExtremalCovariantParams, f64)>) -> Vec<MixtureComponent> {
    let mut mix: Vec<MixtureComponent> =
        parts.filter(|(_, w)| *w > 0.0).map(|(params, weight)| MixtureComponent { params, weight }).collect();
    let total: f64 = mix.iter().map(|c| c.weight).sum();
    for c in &mut mix {
        c.weight /= total;
    }
    mix
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub index: usize,
    pub source: BlochState,
    pub target: BlochState,
    pub verdict: ConversionVerdict,
    pub best_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub n_pairs: usize,
    /// Pairs with `|min(ΔA, ΔB)| < margin`, not checked.
    pub discarded: usize,
    pub convertible: usize,
    pub not_convertible: usize,
    pub disagreements: Vec<Disagreement>,
    /// Largest best distance over convertible pairs.
    pub worst_feasible_distance: f64,
    /// Smallest best distance over non-convertible pairs.
    pub closest_infeasible_distance: f64,
    /// Pairs reported incomparable by the order.
    pub incomparable: usize,
    /// Returned channels failing the CPTP or covariance test.
    pub invalid_channels: usize,
    /// Convertible pairs whose image monotones exceed the target's by more
    /// than `hit_tol`.
    pub monotone_overshoots: usize,
}

impl AgreementReport {
    pub fn pass(&self) -> bool {
        self.disagreements.is_empty() && self.invalid_channels == 0 && self.monotone_overshoots == 0
    }

    pub fn checked(&self) -> usize {
        self.convertible + self.not_convertible
    }
}

enum PairOutcome {
    Discarded,
    Checked {
        verdict: ConversionVerdict,
        result: OracleResult,
        source: BlochState,
        target: BlochState,
        incomparable: bool,
        valid_channel: bool,
        overshoot: bool,
    },
}

/// Samples `n_pairs` (source, target) pairs with the given sampler mode
/// (seeded from `config.seed`) and checks `search_channel` feasibility
/// against the monotone criterion outside the boundary band.
pub fn oracle_agreement(
    n_pairs: usize,
    config: &OracleConfig,
    margin: f64,
    axis: &Axis,
    sampler: &SamplerConfig,
    exec: Execution,
) -> Result<AgreementReport> {
    config.validate()?;
    sampler.validate()?;
    if !(margin > config.hit_tol) {
        return Err(Error::Precondition(format!("margin {margin} must exceed hit_tol {}", config.hit_tol)));
    }
    let outcomes = parallel::map_indexed(n_pairs, exec, |i| -> Result<PairOutcome> {
        let mut rng = parallel::rng_for(config.seed, i as u64);
        let source = sample_with(&mut rng, sampler.mode, sampler.radius);
        let target = sample_with(&mut rng, sampler.mode, sampler.radius);
        let verdict = can_convert(&source, &target, axis);
        let incomparable = compare(&source, &target, axis) == ComparabilityResult::Incomparable;
        if verdict.min_margin().abs() < margin {
            return Ok(PairOutcome::Discarded);
        }
        let result = search_channel(&source, &target, axis, config)?;
        let map = result.map();
        let valid_channel = is_cptp(&map, tol::CHANNEL) && is_covariant(&map.to_x_frame(axis), tol::CHANNEL);
        let overshoot = verdict.convertible() && {
            let img = BlochState::from_vector(&Vector3::from(result.image));
            match img {
                Ok(img) => {
                    let p = monotone_pair(&img, axis);
                    let q = monotone_pair(&target, axis);
                    p.a > q.a + config.hit_tol || p.b > q.b + config.hit_tol
                }
                Err(_) => true,
            }
        };
        Ok(PairOutcome::Checked { verdict, result, source, target, incomparable, valid_channel, overshoot })
    });

    let mut report = AgreementReport {
        n_pairs,
        discarded: 0,
        convertible: 0,
        not_convertible: 0,
        disagreements: Vec::new(),
        worst_feasible_distance: 0.0,
        closest_infeasible_distance: f64::INFINITY,
        incomparable: 0,
        invalid_channels: 0,
        monotone_overshoots: 0,
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            PairOutcome::Discarded => report.discarded += 1,
            PairOutcome::Checked { verdict, result, source, target, incomparable, valid_channel, overshoot } => {
                report.incomparable += incomparable as usize;
                report.invalid_channels += !valid_channel as usize;
                report.monotone_overshoots += overshoot as usize;
                if verdict.convertible() {
                    report.convertible += 1;
                    report.worst_feasible_distance = report.worst_feasible_distance.max(result.best_distance);
                } else {
                    report.not_convertible += 1;
                    report.closest_infeasible_distance = report.closest_infeasible_distance.min(result.best_distance);
                }
                if verdict.convertible() != result.feasible {
                    report.disagreements.push(Disagreement {
                        index,
                        source,
                        target,
                        verdict,
                        best_distance: result.best_distance,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbePoint {
    pub on_cylinder: bool,
    pub point: [f64; 3],
    pub inflated: Option<[f64; 3]>,
    pub boundary_distance: f64,
    pub inflated_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub a: f64,
    pub b: f64,
    pub probes: Vec<ProbePoint>,
    /// Boundary points farther than `hit_tol` from the best image.
    pub unreached: usize,
    /// Inflated points within `hit_tol` of some image.
    pub reached_outside: usize,
    /// Inflated points that left the Bloch ball (not probed).
    pub skipped: usize,
    pub worst_boundary_distance: f64,
    pub closest_inflated_distance: f64,
}

impl ProbeReport {
    pub fn pass(&self) -> bool {
        self.unreached == 0 && self.reached_outside == 0
    }
}

/// Probes the analytic closure boundary of `source`: `n_boundary` points on
/// the cylinder cap `|s_⟂| = A` and as many on the spheroid with minor
/// radius `B`, each spun to an azimuth from the `theta_grid_n` grid. Every
/// boundary point must be reachable and every point pushed outward by
/// `2·margin` must not be.
pub fn closure_boundary_probe(
    source: &BlochState,
    axis: &Axis,
    n_boundary: usize,
    margin: f64,
    config: &OracleConfig,
    exec: Execution,
) -> Result<ProbeReport> {
    config.validate()?;
    let pair = monotone_pair(source, axis);
    if pair.b <= tol::ORDER {
        return Err(Error::Precondition("closure of a free state is the axis segment".into()));
    }
    if !(margin > 0.5 * config.hit_tol) {
        return Err(Error::Precondition(format!("2·margin must exceed hit_tol {}", config.hit_tol)));
    }
    let (a, b) = (pair.a, pair.b);
    let cap_half = (1.0 - (a * a) / (b * b)).max(0.0).sqrt();
    // spheroid arc where |s_⟂| ≤ A: |sin t| ≤ A/B
    let t_max = (a / b).min(1.0).asin();

    let mut specs: Vec<(bool, f64, f64, f64, f64)> = Vec::with_capacity(2 * n_boundary);
    let frac = |i: usize| if n_boundary <= 1 { 0.5 } else { i as f64 / (n_boundary - 1) as f64 };
    for i in 0..n_boundary {
        let x = -cap_half + 2.0 * cap_half * frac(i);
        specs.push((true, x, a, 0.0, 1.0));
    }
    for i in 0..n_boundary {
        // alternate between the two arcs around ±x̂
        let t = -t_max + 2.0 * t_max * frac(i);
        let (st, ct) = t.sin_cos();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let (x, z) = (sign * ct, b * st);
        let normal = Vector2::new(sign * ct, st / b).normalize();
        specs.push((false, x, z, normal.x, normal.y));
    }

    let f = axis.frame_to_x().transpose();
    let n_theta = config.theta_grid_n;
    let to_state = |x: f64, z: f64, k: usize| -> Option<BlochState> {
        let phi = 2.0 * PI * (k % n_theta) as f64 / n_theta as f64;
        let v = Vector3::new(x, z * phi.sin(), z * phi.cos());
        BlochState::from_vector(&(f * v)).ok()
    };

    let probes = parallel::map_indexed(specs.len(), exec, |k| -> Result<(ProbePoint, bool)> {
        let (on_cylinder, x, z, nx, nz) = specs[k];
        let point = to_state(x, z, k).ok_or_else(|| Error::Precondition("boundary point outside the ball".into()))?;
        let hit = search_channel(source, &point, axis, config)?;
        let (ix, iz) = if on_cylinder { (x, z + 2.0 * margin) } else { (x + 2.0 * margin * nx, z + 2.0 * margin * nz) };
        let inflated = to_state(ix, iz, k);
        let inflated_distance = match inflated {
            Some(p) => Some(search_channel(source, &p, axis, config)?.best_distance),
            None => None,
        };
        Ok((
            ProbePoint {
                on_cylinder,
                point: point.as_array(),
                inflated: inflated.map(|p| p.as_array()),
                boundary_distance: hit.best_distance,
                inflated_distance,
            },
            inflated.is_none(),
        ))
    });

    let mut report = ProbeReport {
        a,
        b,
        probes: Vec::with_capacity(specs.len()),
        unreached: 0,
        reached_outside: 0,
        skipped: 0,
        worst_boundary_distance: 0.0,
        closest_inflated_distance: f64::INFINITY,
    };
    for p in probes {
        let (probe, skipped) = p?;
        report.skipped += skipped as usize;
        report.unreached += (probe.boundary_distance > config.hit_tol) as usize;
        report.worst_boundary_distance = report.worst_boundary_distance.max(probe.boundary_distance);
        if let Some(d) = probe.inflated_distance {
            report.reached_outside += (d <= config.hit_tol) as usize;
            report.closest_inflated_distance = report.closest_inflated_distance.min(d);
        }
        report.probes.push(probe);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{make_state, SampleMode};

    fn s(rx: f64, ry: f64, rz: f64) -> BlochState {
        make_state(rx, ry, rz).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn identity_search() {
        for st in [s(0.3, 0.2, 0.1), s(0.0, 0.0, 0.0), s(-0.5, 0.0, 0.7), s(0.0, 1.0, 0.0)] {
            let r = search_channel(&st, &st, &Axis::X, &cfg()).unwrap();
            assert!(r.feasible && r.best_distance <= 1e-12, "{st} {}", r.best_distance);
        }
    }

    #[test]
    fn example_searches() {
        let r = search_channel(&s(0.0, 0.8, 0.0), &s(0.3, 0.5, 0.0), &Axis::X, &cfg()).unwrap();
        assert!(r.feasible, "{}", r.best_distance);
        let r = search_channel(&s(0.9, 0.1, 0.0), &s(0.0, 0.2, 0.0), &Axis::X, &cfg()).unwrap();
        assert!(!r.feasible && r.best_distance >= 0.05, "{}", r.best_distance);
    }

    #[test]
    fn returned_channels_are_valid() {
        let axis = Axis::normalized(0.3, -1.0, 0.4).unwrap();
        let r = search_channel(&s(0.1, 0.5, -0.3), &s(0.2, 0.1, 0.1), &axis, &cfg()).unwrap();
        let m = r.map();
        assert!(is_cptp(&m, 1e-9));
        assert!(is_covariant(&m.to_x_frame(&axis), 1e-9));
        let sum: f64 = r.best_channel.mixture.iter().map(|c| c.weight).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.uv_grid_n = 3;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.hit_tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn finer_grid_never_worse() {
        let mut rng = parallel::rng_for(17, 0);
        for _ in 0..40 {
            let a = sample_with(&mut rng, SampleMode::UniformBall, 1.0);
            let b = sample_with(&mut rng, SampleMode::UniformBall, 1.0);
            let coarse = OracleConfig { uv_grid_n: 16, refine_steps: 0, ..cfg() };
            let fine = OracleConfig { uv_grid_n: 32, refine_steps: 0, ..cfg() };
            let refined = OracleConfig { uv_grid_n: 16, refine_steps: 3, ..cfg() };
            let dc = search_channel(&a, &b, &Axis::X, &coarse).unwrap().best_distance;
            let df = search_channel(&a, &b, &Axis::X, &fine).unwrap().best_distance;
            let dr = search_channel(&a, &b, &Axis::X, &refined).unwrap().best_distance;
            assert!(df <= dc + 1e-12, "{df} > {dc}");
            assert!(dr <= dc + 1e-12, "{dr} > {dc}");
        }
    }

    #[test]
    fn agreement_small_run() {
        let c = OracleConfig { seed: 3, ..cfg() };
        let rep =
            oracle_agreement(60, &c, 0.02, &Axis::Y, &SamplerConfig::uniform_ball(0), Execution::Parallel).unwrap();
        assert!(rep.pass(), "{:?}", rep.disagreements);
        assert_eq!(rep.n_pairs, rep.discarded + rep.checked());
        let empty =
            oracle_agreement(0, &c, 0.02, &Axis::X, &SamplerConfig::uniform_ball(0), Execution::Parallel).unwrap();
        assert_eq!(empty.checked(), 0);
        assert!(oracle_agreement(5, &c, 1e-4, &Axis::X, &SamplerConfig::uniform_ball(0), Execution::Parallel).is_err());
    }

    #[test]
    fn agreement_fixed_radius_is_total() {
        let c = OracleConfig { seed: 4, ..cfg() };
        let rep = oracle_agreement(60, &c, 0.02, &Axis::X, &SamplerConfig::fixed_radius(0.7, 0), Execution::Parallel)
            .unwrap();
        assert!(rep.pass());
        assert_eq!(rep.incomparable, 0);
    }

    #[test]
    fn probe_examples() {
        let src = s(0.0, 0.5, 0.0);
        let c = cfg();
        let hit = search_channel(&src, &s(0.0, 0.5, 0.0), &Axis::X, &c).unwrap();
        assert!(hit.feasible);
        let miss = search_channel(&src, &s(0.0, 0.52, 0.0), &Axis::X, &c).unwrap();
        assert!(!miss.feasible);

        let rep = closure_boundary_probe(&src, &Axis::X, 12, 0.01, &c, Execution::Parallel).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let rep = closure_boundary_probe(&s(0.6, 0.4, 0.0), &Axis::Z, 12, 0.01, &c, Execution::Parallel).unwrap();
        assert!(rep.pass(), "{rep:?}");
        // the pole is free, hence reachable
        assert!(search_channel(&s(0.6, 0.4, 0.0), &s(1.0, 0.0, 0.0), &Axis::X, &c).unwrap().feasible);
        assert!(closure_boundary_probe(&s(0.5, 0.0, 0.0), &Axis::X, 4, 0.01, &c, Execution::Parallel).is_err());
    }
}
