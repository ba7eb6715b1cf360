//! Convertibility, comparability and downward closures under covariant
//! operations for one axis.

use serde::{Deserialize, Serialize};

use crate::bloch::{self, Axis, BlochState};
use crate::error::{Error, Result};
use crate::monotones::{a_monotone, b_monotone, monotone_pair, MonotonePair};
use crate::section::{self, BoundaryCurve, BoundaryId, Constraint, CrossSection, SectionPoint};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Convertible,
    NotConvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    TargetFree,
    BothMonotonesWeaklyDecrease,
    #[serde(rename = "A-violated")]
    AViolated,
    #[serde(rename = "B-violated")]
    BViolated,
}

impl Reason {
    pub fn label(self) -> &'static str {
        match self {
            Reason::TargetFree => "target-free",
            Reason::BothMonotonesWeaklyDecrease => "both-monotones-weakly-decrease",
            Reason::AViolated => "A-violated",
            Reason::BViolated => "B-violated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionVerdict {
    pub decision: Decision,
    pub reason: Reason,
    /// `A(source) − A(target)`.
    pub delta_a: f64,
    /// `B(source) − B(target)`.
    pub delta_b: f64,
}

impl ConversionVerdict {
    pub fn convertible(&self) -> bool {
        self.decision == Decision::Convertible
    }

    /// The smaller of the two margins; its sign decides the verdict.
    pub fn min_margin(&self) -> f64 {
        self.delta_a.min(self.delta_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparabilityResult {
    Above,
    Below,
    Equivalent,
    Incomparable,
}

pub fn verdict_from_pairs(source: MonotonePair, target: MonotonePair) -> ConversionVerdict {
    let delta_a = source.a - target.a;
    let delta_b = source.b - target.b;
    let ok_a = delta_a >= -tol::ORDER;
    let ok_b = delta_b >= -tol::ORDER;
    let decision = if ok_a && ok_b { Decision::Convertible } else { Decision::NotConvertible };
    let reason = if target.a <= tol::ORDER && target.b <= tol::ORDER {
        Reason::TargetFree
    } else if ok_a && ok_b {
        Reason::BothMonotonesWeaklyDecrease
    } else if !ok_a {
        Reason::AViolated
    } else {
        Reason::BViolated
    };
    ConversionVerdict { decision, reason, delta_a, delta_b }
}

/// The monotone criterion: convertible iff neither `A` nor `B` increases.
pub fn can_convert(source: &BlochState, target: &BlochState, axis: &Axis) -> ConversionVerdict {
    verdict_from_pairs(monotone_pair(source, axis), monotone_pair(target, axis))
}

pub fn is_equivalent(s1: &BlochState, s2: &BlochState, axis: &Axis) -> bool {
    let p = monotone_pair(s1, axis);
    let q = monotone_pair(s2, axis);
    (p.a - q.a).abs() <= tol::ORDER && (p.b - q.b).abs() <= tol::ORDER
}

pub fn compare(s1: &BlochState, s2: &BlochState, axis: &Axis) -> ComparabilityResult {
    let down = can_convert(s1, s2, axis).convertible();
    let up = can_convert(s2, s1, axis).convertible();
    match (down, up) {
        (true, true) => ComparabilityResult::Equivalent,
        (true, false) => ComparabilityResult::Above,
        (false, true) => ComparabilityResult::Below,
        (false, false) => ComparabilityResult::Incomparable,
    }
}

/// Membership of `target` in the set reachable from `source`: the
/// intersection of the cylinder `A(target) ≤ A(source)` with the prolate
/// spheroid `t_n² + (1 − s_n²)·A(target)²/A(source)² ≤ 1`. A free source
/// reaches only the axis segment.
pub fn in_downward_closure(target: &BlochState, source: &BlochState, axis: &Axis) -> bool {
    let a_s = a_monotone(source, axis);
    let a_t = a_monotone(target, axis);
    if b_monotone(source, axis) <= tol::ORDER {
        return a_t <= tol::ORDER;
    }
    let s_n = source.as_vector().dot(&axis.as_vector());
    let t_n2 = target.as_vector().dot(&axis.as_vector()).powi(2).min(1.0);
    let cylinder = a_t <= a_s + tol::ORDER;
    let spheroid = t_n2 + (1.0 - s_n * s_n) * a_t * a_t / (a_s * a_s) <= 1.0 + tol::ORDER;
    cylinder && spheroid
}

/// The closure of `source` cut by a plane containing the axis, on a
/// `grid_n × grid_n` grid of `[-1, 1]²` (along-axis, perpendicular).
///
/// Membership is exact (it agrees with [`in_downward_closure`]); boundary
/// ids mark member points within half a cell of the cylinder or spheroid.
pub fn downward_closure_section(source: &BlochState, axis: &Axis, grid_n: usize) -> Result<CrossSection> {
    if grid_n < 2 {
        return Err(Error::InvalidConfig(format!("grid_n = {grid_n} < 2")));
    }
    let pair = monotone_pair(source, axis);
    let (a, b) = (pair.a, pair.b);
    let free = b <= tol::ORDER;
    let perp = axis.perpendicular();
    let along = axis.as_vector();
    let cell = 2.0 / (grid_n - 1) as f64;

    let cyl = move |_x: f64, z: f64| a * a - z * z;
    let sph = move |x: f64, z: f64| 1.0 - x * x - z * z / (b * b);
    let seg = |_x: f64, z: f64| -z.abs();
    let constraints: Vec<Constraint<'_>> = if free {
        vec![Constraint { id: BoundaryId::Segment, g: &seg }]
    } else {
        vec![Constraint { id: BoundaryId::Cylinder, g: &cyl }, Constraint { id: BoundaryId::Spheroid, g: &sph }]
    };

    let axis_vals = section::linspace(-1.0, 1.0, grid_n);
    let mut points = Vec::with_capacity(grid_n * grid_n);
    for &x in &axis_vals {
        for &z in &axis_vals {
            let v = along * x + perp * z;
            let member = match BlochState::from_vector(&v) {
                Ok(t) => in_downward_closure(&t, source, axis),
                Err(_) => false,
            };
            let boundary = if member { section::classify(x, z, &constraints, cell).1 } else { None };
            points.push(SectionPoint { c0: x, c1: z, member, boundary });
        }
    }

    let mut boundaries = Vec::new();
    if free {
        boundaries
            .push(BoundaryCurve { id: BoundaryId::Segment, points: axis_vals.iter().map(|&x| [x, 0.0]).collect() });
    } else {
        let half = (1.0 - (a * a) / (b * b)).max(0.0).sqrt();
        let mut cap = Vec::new();
        for sign in [1.0, -1.0] {
            cap.extend(section::linspace(-half, half, grid_n).into_iter().map(|x| [x, sign * a]));
        }
        boundaries.push(BoundaryCurve { id: BoundaryId::Cylinder, points: cap });
        let ring = section::linspace(0.0, 2.0 * std::f64::consts::PI, 4 * grid_n)
            .into_iter()
            .map(|t| [t.cos(), b * t.sin()])
            .filter(|p| p[1].abs() <= a + 1e-12)
            .collect();
        boundaries.push(BoundaryCurve { id: BoundaryId::Spheroid, points: ring });
    }

    let labels = perp_labels(axis).unwrap_or_else(|| ["s_par".to_string(), "s_perp".to_string()]);
    Ok(CrossSection { labels, fixed: None, points, boundaries, rearranged: None })
}

fn perp_labels(axis: &Axis) -> Option<[String; 2]> {
    let c = axis.coord()?;
    let p = axis.perpendicular();
    let q = bloch::Coord::ALL.into_iter().find(|k| (p[k.index()].abs() - 1.0).abs() <= 1e-12)?;
    Some([format!("s_{}", c.label()), format!("s_{}", q.label())])
}

/// The Bloch state with monotones `(a, b)` on `axis`, placed in the plane
/// of the axis and its perpendicular (`r_n ≥ 0`).
pub fn state_with_pair(a: f64, b: f64, axis: &Axis) -> Result<BlochState> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b + tol::ORDER {
        return Err(Error::NotRealizable(format!("(A, B) = ({a}, {b}) violates 0 ≤ A ≤ B ≤ 1")));
    }
    if b == 0.0 {
        return Ok(BlochState::MAXIMALLY_MIXED);
    }
    if a == 0.0 {
        return Err(Error::NotRealizable(format!("A = 0 forces B = 0, got B = {b}")));
    }
    let r_n = (1.0 - (a * a) / (b * b)).max(0.0).sqrt();
    let v = axis.as_vector() * r_n + axis.perpendicular() * a;
    BlochState::from_vector(&v).map_err(|e| Error::NotRealizable(e.to_string()))
}

/// Witnesses for the geometry of the order: a triple `r, s, t` with
/// `r ∥ s`, `s ∥ t` and `r > t` (so incomparability is not transitive),
/// and an antichain of [`ANTICHAIN_LEN`] states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderWitness {
    pub antichain: Vec<BlochState>,
    pub triple: [BlochState; 3],
}

pub const ANTICHAIN_LEN: usize = 16;

/// Builds the witness from the rectangle `[a_lo, a_hi] × [b_lo, b_hi]` of
/// `(A_x, B_x)` values: `r = (a_hi, b_lo)`, `s = (a_lo, b_hi)`,
/// `t = ((a_lo + a_hi)/2, b_lo)`, and an antichain on the anti-diagonal.
pub fn nonweakness_witness(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> Result<OrderWitness> {
    let ordered = 0.0 <= a_lo && a_lo < a_hi && a_hi <= b_lo && b_lo < b_hi && b_hi <= 1.0;
    if !ordered {
        return Err(Error::NotRealizable(format!(
            "need 0 ≤ a_lo < a_hi ≤ b_lo < b_hi ≤ 1, got ({a_lo}, {a_hi}, {b_lo}, {b_hi})"
        )));
    }
    let axis = Axis::X;
    let r = state_with_pair(a_hi, b_lo, &axis)?;
    let s = state_with_pair(a_lo, b_hi, &axis)?;
    let t = state_with_pair(0.5 * (a_lo + a_hi), b_lo, &axis)?;

    let last = (ANTICHAIN_LEN - 1) as f64;
    let antichain = (0..ANTICHAIN_LEN)
        .map(|i| {
            let f = i as f64 / last;
            state_with_pair(a_hi - (a_hi - a_lo) * f, b_lo + (b_hi - b_lo) * f, &axis)
        })
        .collect::<Result<Vec<_>>>()?;

    let witness = OrderWitness { antichain, triple: [r, s, t] };
    verify_witness(&witness, &axis)?;
    Ok(witness)
}

/// Checks the [`OrderWitness`] invariants.
pub fn verify_witness(w: &OrderWitness, axis: &Axis) -> Result<()> {
    let fail = |m: &str| Err(Error::NotRealizable(format!("witness check failed: {m}")));
    let [r, s, t] = &w.triple;
    if compare(r, s, axis) != ComparabilityResult::Incomparable {
        return fail("(r, s) comparable");
    }
    if compare(s, t, axis) != ComparabilityResult::Incomparable {
        return fail("(s, t) comparable");
    }
    if compare(r, t, axis) != ComparabilityResult::Above {
        return fail("r not strictly above t");
    }
    for (i, p) in w.antichain.iter().enumerate() {
        for q in &w.antichain[i + 1..] {
            if compare(p, q, axis) != ComparabilityResult::Incomparable {
                return fail("antichain pair comparable");
            }
        }
    }
    Ok(())
}

/// The order restricted to a sphere of fixed radius is total; returns the
/// number of incomparable pairs among `states` (all assumed to share a
/// radius).
pub fn count_incomparable(states: &[BlochState], axis: &Axis) -> usize {
    let mut n = 0;
    for (i, p) in states.iter().enumerate() {
        for q in &states[i + 1..] {
            if compare(p, q, axis) == ComparabilityResult::Incomparable {
                n += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{make_state, rotate_about_axis, sample_with, SampleMode};
    use crate::parallel::rng_for;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn s(rx: f64, ry: f64, rz: f64) -> BlochState {
        make_state(rx, ry, rz).unwrap()
    }

    #[test]
    fn can_convert_examples() {
        let v = can_convert(&s(0.0, 0.8, 0.0), &s(0.3, 0.5, 0.0), &Axis::X);
        assert!(v.convertible());
        assert_eq!(v.reason, Reason::BothMonotonesWeaklyDecrease);
        assert_abs_diff_eq!(v.delta_a, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(v.delta_b, 0.8 - 0.5 / 0.91f64.sqrt(), epsilon = 1e-15);

        let v = can_convert(&s(0.9, 0.1, 0.0), &s(0.0, 0.2, 0.0), &Axis::X);
        assert!(!v.convertible());
        assert_eq!(v.reason, Reason::AViolated);

        for src in [s(0.0, 0.0, 0.0), s(0.3, -0.2, 0.5), s(0.0, 1.0, 0.0)] {
            let v = can_convert(&src, &s(1.0, 0.0, 0.0), &Axis::X);
            assert!(v.convertible());
            assert_eq!(v.reason, Reason::TargetFree);
        }
    }

    #[test]
    fn b_violation_reason() {
        // same A, higher B in the target
        let v = can_convert(&s(0.0, 0.4, 0.0), &s(0.6, 0.4, 0.0), &Axis::X);
        assert!(!v.convertible());
        assert_eq!(v.reason, Reason::BViolated);
    }

    #[test]
    fn equivalence_examples() {
        assert!(is_equivalent(&s(0.6, 0.4, 0.0), &s(-0.6, 0.0, 0.4), &Axis::X));
        assert!(!is_equivalent(&s(0.6, 0.4, 0.0), &s(0.6, 0.3, 0.0), &Axis::X));
        let st = s(0.2, 0.5, -0.4);
        assert!(is_equivalent(&st, &rotate_about_axis(&st, &Axis::X, 1.3), &Axis::X));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&s(0.0, 0.8, 0.0), &s(0.3, 0.5, 0.0), &Axis::X), ComparabilityResult::Above);
        assert_eq!(compare(&s(0.6, 0.4, 0.0), &s(0.0, 0.3, 0.0), &Axis::X), ComparabilityResult::Above);
        assert_eq!(compare(&s(0.0, 0.3, 0.0), &s(0.6, 0.4, 0.0), &Axis::X), ComparabilityResult::Below);
        let hi_b = s(0.98, 0.1, 0.0);
        assert!(b_monotone(&hi_b, &Axis::X) > 0.5);
        assert_eq!(compare(&hi_b, &s(0.0, 0.3, 0.0), &Axis::X), ComparabilityResult::Incomparable);
    }

    #[test]
    fn closure_examples() {
        let src = s(0.0, 0.5, 0.0);
        assert!(in_downward_closure(&src, &src, &Axis::X));
        assert!(in_downward_closure(&s(0.99, 0.0, 0.0), &src, &Axis::X));
        assert!(!in_downward_closure(&s(0.0, 0.6, 0.0), &src, &Axis::X));
        // free source reaches only the segment
        let free = s(0.4, 0.0, 0.0);
        assert!(in_downward_closure(&s(-0.9, 0.0, 0.0), &free, &Axis::X));
        assert!(!in_downward_closure(&s(0.0, 0.01, 0.0), &free, &Axis::X));
    }

    #[test]
    fn closure_section_examples() {
        let free = downward_closure_section(&s(0.5, 0.0, 0.0), &Axis::X, 21).unwrap();
        for p in free.members() {
            assert!(p.c1.abs() <= 1e-12 && p.c0.abs() <= 1.0);
        }
        assert_eq!(free.members().count(), 21);

        let disk = downward_closure_section(&s(0.0, 0.0, 1.0), &Axis::X, 41).unwrap();
        for p in &disk.points {
            assert_eq!(p.member, p.c0 * p.c0 + p.c1 * p.c1 <= 1.0 + 1e-9, "{p:?}");
        }

        let sec = downward_closure_section(&s(0.6, 0.4, 0.0), &Axis::X, 101).unwrap();
        for p in &sec.points {
            let inside = p.c1.abs() <= 0.4 + 1e-12 && p.c0 * p.c0 + p.c1 * p.c1 / 0.25 <= 1.0 + 1e-12;
            assert_eq!(p.member, inside, "{p:?}");
        }
        let cyl = sec.boundary(BoundaryId::Cylinder).unwrap();
        assert!(cyl.points.iter().all(|p| (p[1].abs() - 0.4).abs() <= 1e-15));
        let sph = sec.boundary(BoundaryId::Spheroid).unwrap();
        assert!(sph.points.iter().all(|p| (p[0] * p[0] + p[1] * p[1] / 0.25 - 1.0).abs() <= 1e-12));
        assert_eq!(sec.labels, ["s_x".to_string(), "s_y".to_string()]);
        assert!(downward_closure_section(&s(0.6, 0.4, 0.0), &Axis::X, 1).is_err());
    }

    #[test]
    fn witness_example() {
        let w = nonweakness_witness(0.1, 0.2, 0.5, 0.6).unwrap();
        let [r, s_, t] = w.triple;
        let pr = monotone_pair(&r, &Axis::X);
        let ps = monotone_pair(&s_, &Axis::X);
        let pt = monotone_pair(&t, &Axis::X);
        assert_abs_diff_eq!(pr.a, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(pr.b, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ps.a, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(ps.b, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.a, 0.15, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.b, 0.5, epsilon = 1e-12);
        assert_eq!(w.antichain.len(), ANTICHAIN_LEN);
        assert!(verify_witness(&w, &Axis::X).is_ok());
    }

    #[test]
    fn witness_rejects_bad_rectangles() {
        assert!(matches!(nonweakness_witness(0.2, 0.2, 0.5, 0.6), Err(Error::NotRealizable(_))));
        assert!(nonweakness_witness(0.1, 0.6, 0.5, 0.7).is_err());
        // A = 0 with B > 0 has no state
        assert!(matches!(nonweakness_witness(0.0, 0.3, 0.3, 1.0), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn state_with_pair_round_trips() {
        for axis in [Axis::X, Axis::Y, Axis::Z, Axis::normalized(1.0, -1.0, 2.0).unwrap()] {
            let st = state_with_pair(0.3, 0.7, &axis).unwrap();
            let p = monotone_pair(&st, &axis);
            assert_abs_diff_eq!(p.a, 0.3, epsilon = 1e-12);
            assert_abs_diff_eq!(p.b, 0.7, epsilon = 1e-12);
        }
        assert_eq!(state_with_pair(0.0, 0.0, &Axis::X).unwrap(), BlochState::MAXIMALLY_MIXED);
        assert!(state_with_pair(0.5, 0.4, &Axis::X).is_err());
    }

    #[test]
    fn fixed_radius_is_total() {
        let mut rng = rng_for(9, 0);
        let states: Vec<_> = (0..200).map(|_| sample_with(&mut rng, SampleMode::FixedRadius, 0.7)).collect();
        assert_eq!(count_incomparable(&states, &Axis::X), 0);
    }

    fn any_state() -> impl Strategy<Value = BlochState> {
        any::<u64>().prop_map(|seed| sample_with(&mut rng_for(seed, 0), SampleMode::UniformBall, 1.0))
    }

    proptest! {
        #[test]
        fn closure_agrees_with_criterion(src in any_state(), tgt in any_state()) {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                prop_assert_eq!(in_downward_closure(&tgt, &src, &axis), can_convert(&src, &tgt, &axis).convertible());
            }
        }

        #[test]
        fn preorder_laws(a in any_state(), b in any_state(), c in any_state()) {
            let x = Axis::X;
            prop_assert!(can_convert(&a, &a, &x).convertible());
            if can_convert(&a, &b, &x).convertible() && can_convert(&b, &c, &x).convertible() {
                prop_assert!(can_convert(&a, &c, &x).convertible());
            }
        }

        #[test]
        fn unique_top(a in any_state(), phi in 0.0f64..6.3) {
            let top = s(0.0, phi.cos(), phi.sin());
            prop_assert!(can_convert(&top, &a, &Axis::X).convertible());
        }
    }
}
