//! Two-dimensional sections of realizability regions and closures: grid
//! membership flags plus sampled boundary curves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryId {
    BottomLeft,
    BottomRight,
    TopLeft,
    TopRight,
    /// `|s_⟂| = A` in a downward closure.
    Cylinder,
    /// The prolate spheroid with minor radius `B`.
    Spheroid,
    /// Isolated values reached only by pure states.
    Pure,
    /// The symmetric axis segment, closure of a free state.
    Segment,
}

impl BoundaryId {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryId::BottomLeft => "bottom-left",
            BoundaryId::BottomRight => "bottom-right",
            BoundaryId::TopLeft => "top-left",
            BoundaryId::TopRight => "top-right",
            BoundaryId::Cylinder => "cylinder",
            BoundaryId::Spheroid => "spheroid",
            BoundaryId::Pure => "pure",
            BoundaryId::Segment => "segment",
        }
    }
}

impl fmt::Display for BoundaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundaryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [
            BoundaryId::BottomLeft,
            BoundaryId::BottomRight,
            BoundaryId::TopLeft,
            BoundaryId::TopRight,
            BoundaryId::Cylinder,
            BoundaryId::Spheroid,
            BoundaryId::Pure,
            BoundaryId::Segment,
        ]
        .into_iter()
        .find(|b| b.label() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown boundary id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub c0: f64,
    pub c1: f64,
    pub member: bool,
    /// The boundary passing within half a grid cell, for member points.
    pub boundary: Option<BoundaryId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub id: BoundaryId,
    pub points: Vec<[f64; 2]>,
}

/// `|c0² − c1²| ≤ diff_max` and `sum_min ≤ c0² + c1² ≤ sum_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RearrangedBounds {
    pub diff_max: f64,
    pub sum_min: f64,
    pub sum_max: f64,
}

impl RearrangedBounds {
    pub fn contains(&self, c0: f64, c1: f64, slack: f64) -> bool {
        let (a, b) = (c0 * c0, c1 * c1);
        (a - b).abs() <= self.diff_max + slack && a + b >= self.sum_min - slack && a + b <= self.sum_max + slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    /// Names of the two free coordinates.
    pub labels: [String; 2],
    /// The fixed coordinate and its value, when the section is a slice.
    pub fixed: Option<(String, f64)>,
    pub points: Vec<SectionPoint>,
    pub boundaries: Vec<BoundaryCurve>,
    pub rearranged: Option<RearrangedBounds>,
}

impl CrossSection {
    pub fn members(&self) -> impl Iterator<Item = &SectionPoint> {
        self.points.iter().filter(|p| p.member)
    }

    pub fn boundary(&self, id: BoundaryId) -> Option<&BoundaryCurve> {
        self.boundaries.iter().find(|b| b.id == id)
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// A region constraint `g(c0, c1) ≥ 0`.
pub(crate) struct Constraint<'a> {
    pub id: BoundaryId,
    pub g: &'a dyn Fn(f64, f64) -> f64,
}

/// `|∂₀g| + |∂₁g|`, the dual of the max-norm used for grid cells.
fn gradient_norm(g: &dyn Fn(f64, f64) -> f64, c0: f64, c1: f64) -> f64 {
    let h = 1e-6;
    let d0 = (g(c0 + h, c1) - g(c0 - h, c1)) / (2.0 * h);
    let d1 = (g(c0, c1 + h) - g(c0, c1 - h)) / (2.0 * h);
    d0.abs() + d1.abs()
}

/// Membership with a first-order half-cell slack: a grid point counts when
/// every constraint satisfies `g ≥ −(cell/2)·|∇g|₁`, i.e. the true boundary
/// passes through the square cell centred on the point. The reported boundary is the one
/// with the smallest first-order distance, if that is within the slack.
pub(crate) fn classify(c0: f64, c1: f64, constraints: &[Constraint<'_>], cell: f64) -> (bool, Option<BoundaryId>) {
    let mut member = true;
    let mut nearest: Option<(f64, BoundaryId)> = None;
    for c in constraints {
        let value = (c.g)(c0, c1);
        let grad = gradient_norm(c.g, c0, c1);
        let slack = 0.5 * cell * grad;
        if value < -slack - 1e-14 {
            member = false;
        }
        let dist = if grad > 0.0 {
            value.abs() / grad
        } else if value == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if dist <= 0.5 * cell + 1e-14 && nearest.is_none_or(|(d, _)| dist < d) {
            nearest = Some((dist, c.id));
        }
    }
    (member, if member { nearest.map(|n| n.1) } else { None })
}

/// Keeps the curve points that satisfy every other constraint.
pub(crate) fn clip_curve(
    id: BoundaryId,
    candidates: impl IntoIterator<Item = [f64; 2]>,
    constraints: &[Constraint<'_>],
) -> BoundaryCurve {
    let points = candidates
        .into_iter()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .filter(|p| (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1]))
        .filter(|p| constraints.iter().filter(|c| c.id != id).all(|c| (c.g)(p[0], p[1]) >= -1e-9))
        .collect();
    BoundaryCurve { id, points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(-1.0, 1.0, 1), vec![-1.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn labels_round_trip() {
        for id in [BoundaryId::BottomLeft, BoundaryId::TopRight, BoundaryId::Spheroid, BoundaryId::Segment] {
            assert_eq!(id.label().parse::<BoundaryId>().unwrap(), id);
        }
        assert!("left".parse::<BoundaryId>().is_err());
    }

    #[test]
    fn classify_disk() {
        let g = |a: f64, b: f64| 1.0 - a * a - b * b;
        let cs = [Constraint { id: BoundaryId::Spheroid, g: &g }];
        assert_eq!(classify(0.0, 0.0, &cs, 0.1), (true, None));
        assert_eq!(classify(1.0, 0.0, &cs, 0.1), (true, Some(BoundaryId::Spheroid)));
        assert_eq!(classify(1.04, 0.0, &cs, 0.1), (true, Some(BoundaryId::Spheroid)));
        assert_eq!(classify(1.06, 0.0, &cs, 0.1), (false, None));
    }
}
