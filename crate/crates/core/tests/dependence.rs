//! Relations among the six monotones checked against direct evaluation from
//! Bloch components.

use proptest::prelude::*;
use z2asym::bloch::{sample_with, Coord, SampleMode};
use z2asym::monotones::{monotone_profile, MonotoneKind, MonotoneName};
use z2asym::parallel::rng_for;
use z2asym::relations::{
    ay_squared_bounds, az_squared_given, constraint_report, cross_section, radii_from_a, sample_section_states,
    state_from_a_triple, CrossSectionSpec, Signs,
};

/// `A_n`, `B_n` written out from the components.
fn direct(v: [f64; 3], n: usize) -> (f64, f64) {
    let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let perp = r2 - v[n] * v[n];
    let b = if 1.0 - v[n] * v[n] <= 1e-12 { 0.0 } else { (perp / (1.0 - v[n] * v[n])).sqrt() };
    (perp.max(0.0).sqrt(), b)
}

proptest! {
    #[test]
    fn profile_matches_direct_formulas(seed in any::<u64>()) {
        let s = sample_with(&mut rng_for(seed, 0), SampleMode::UniformBall, 1.0);
        let p = monotone_profile(&s);
        for c in Coord::ALL {
            let (a, b) = direct(s.as_array(), c.index());
            prop_assert!((p.pair(c).a - a).abs() <= 1e-12);
            prop_assert!((p.pair(c).b - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn every_sign_pattern_round_trips(seed in any::<u64>()) {
        let s = sample_with(&mut rng_for(seed, 0), SampleMode::UniformBall, 1.0);
        let p = monotone_profile(&s);
        for signs in Signs::all() {
            let t = state_from_a_triple(p.a_x, p.a_y, p.a_z, signs).unwrap();
            let q = monotone_profile(&t);
            prop_assert!((q.a_x - p.a_x).abs() <= 1e-10);
            prop_assert!((q.a_y - p.a_y).abs() <= 1e-10);
            prop_assert!((q.a_z - p.a_z).abs() <= 1e-10);
            // the B-triple is fixed by the A-triple as well
            prop_assert!((q.b_x - p.b_x).abs() <= 1e-8);
        }
    }

    #[test]
    fn radii_from_a_are_squared_components(seed in any::<u64>()) {
        let s = sample_with(&mut rng_for(seed, 0), SampleMode::UniformBall, 1.0);
        let p = monotone_profile(&s);
        let r = radii_from_a(p.a_x, p.a_y, p.a_z);
        for (k, v) in s.as_array().iter().enumerate() {
            prop_assert!((r[k] - v * v).abs() <= 1e-12);
        }
    }

    #[test]
    fn three_values_determine_the_fourth(seed in any::<u64>()) {
        let s = sample_with(&mut rng_for(seed, 0), SampleMode::UniformBall, 1.0);
        let p = monotone_profile(&s);
        prop_assume!(p.b_x > 1e-6);
        let az2 = az_squared_given(p.a_x, p.b_x, p.a_y).unwrap();
        prop_assert!((az2 - p.a_z * p.a_z).abs() <= 1e-9);
        let (lo, hi) = ay_squared_bounds(p.a_x, p.b_x).unwrap();
        prop_assert!(p.a_y * p.a_y >= lo - 1e-9 && p.a_y * p.a_y <= hi + 1e-9);
    }

    #[test]
    fn sampled_states_pass_every_constraint(seed in any::<u64>(), sphere in any::<bool>()) {
        let mode = if sphere { SampleMode::UniformSphere } else { SampleMode::UniformBall };
        let s = sample_with(&mut rng_for(seed, 0), mode, 1.0);
        prop_assert!(constraint_report(&s).passes(1e-10));
    }
}

#[test]
fn a_section_contains_every_state_on_the_slice() {
    let n = 81;
    for value in [0.2, 0.5, 0.8] {
        let ax = MonotoneName::new(MonotoneKind::A, Coord::X);
        let sec = cross_section(&CrossSectionSpec { fixed_monotone: ax, fixed_value: value, grid_n: n }).unwrap();
        for s in sample_section_states(ax, value, 400, 11).unwrap() {
            let p = monotone_profile(&s);
            assert!((p.a_x - value).abs() <= 1e-12);
            let i = (p.a_y * (n - 1) as f64).round() as usize;
            let j = (p.a_z * (n - 1) as f64).round() as usize;
            assert!(sec.points[i * n + j].member, "{value}: {p:?}");
        }
    }
}

#[test]
fn a_section_members_are_near_realizable_values() {
    // a member grid point must be within one cell of a realizable pair
    let n = 41;
    let h = 1.0 / (n - 1) as f64;
    let ay = MonotoneName::new(MonotoneKind::A, Coord::Y);
    let sec = cross_section(&CrossSectionSpec { fixed_monotone: ay, fixed_value: 0.6, grid_n: n }).unwrap();
    let reach: Vec<(f64, f64)> = sample_section_states(ay, 0.6, 20_000, 3)
        .unwrap()
        .iter()
        .map(|s| {
            let p = monotone_profile(s);
            (p.a_z, p.a_x)
        })
        .collect();
    for m in sec.members() {
        let d = reach.iter().map(|(a, b)| (a - m.c0).abs().max((b - m.c1).abs())).fold(f64::INFINITY, f64::min);
        assert!(d <= h, "{m:?} at {d}");
    }
}
