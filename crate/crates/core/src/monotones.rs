//! The complete monotone pair `(A_n, B_n)` and its operational readings.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{Axis, BlochState, Coord};
use crate::error::{Error, Result};
use crate::order;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonePair {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneProfile {
    pub a_x: f64,
    pub b_x: f64,
    pub a_y: f64,
    pub b_y: f64,
    pub a_z: f64,
    pub b_z: f64,
}

impl MonotoneProfile {
    pub fn pair(&self, c: Coord) -> MonotonePair {
        match c {
            Coord::X => MonotonePair { a: self.a_x, b: self.b_x },
            Coord::Y => MonotonePair { a: self.a_y, b: self.b_y },
            Coord::Z => MonotonePair { a: self.a_z, b: self.b_z },
        }
    }

    pub fn get(&self, name: MonotoneName) -> f64 {
        let p = self.pair(name.coord);
        match name.kind {
            MonotoneKind::A => p.a,
            MonotoneKind::B => p.b,
        }
    }

    /// `(A_x, A_y, A_z)`.
    pub fn a_triple(&self) -> [f64; 3] {
        [self.a_x, self.a_y, self.a_z]
    }

    /// `(B_x, B_y, B_z)`.
    pub fn b_triple(&self) -> [f64; 3] {
        [self.b_x, self.b_y, self.b_z]
    }

    /// In column order `Ax, Bx, Ay, By, Az, Bz`.
    pub fn as_array(&self) -> [f64; 6] {
        [self.a_x, self.b_x, self.a_y, self.b_y, self.a_z, self.b_z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonotoneKind {
    A,
    B,
}

/// One of the six triad monotones, e.g. `Ax` or `B_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonotoneName {
    pub kind: MonotoneKind,
    pub coord: Coord,
}

impl MonotoneName {
    pub const ALL: [MonotoneName; 6] = [
        MonotoneName { kind: MonotoneKind::A, coord: Coord::X },
        MonotoneName { kind: MonotoneKind::B, coord: Coord::X },
        MonotoneName { kind: MonotoneKind::A, coord: Coord::Y },
        MonotoneName { kind: MonotoneKind::B, coord: Coord::Y },
        MonotoneName { kind: MonotoneKind::A, coord: Coord::Z },
        MonotoneName { kind: MonotoneKind::B, coord: Coord::Z },
    ];

    pub fn new(kind: MonotoneKind, coord: Coord) -> Self {
        MonotoneName { kind, coord }
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            MonotoneKind::A => "A",
            MonotoneKind::B => "B",
        };
        format!("{k}{}", self.coord.label())
    }

    pub fn evaluate(&self, state: &BlochState) -> f64 {
        let axis = self.coord.axis();
        match self.kind {
            MonotoneKind::A => a_monotone(state, &axis),
            MonotoneKind::B => b_monotone(state, &axis),
        }
    }
}

impl fmt::Display for MonotoneName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for MonotoneName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.trim().chars().filter(|c| *c != '_').collect::<String>().to_ascii_lowercase();
        let bad = || Error::InvalidConfig(format!("unknown monotone {s:?}"));
        let mut chars = t.chars();
        let kind = match chars.next() {
            Some('a') => MonotoneKind::A,
            Some('b') => MonotoneKind::B,
            _ => return Err(bad()),
        };
        let coord = match (chars.next(), chars.next()) {
            (Some('x'), None) => Coord::X,
            (Some('y'), None) => Coord::Y,
            (Some('z'), None) => Coord::Z,
            _ => return Err(bad()),
        };
        Ok(MonotoneName { kind, coord })
    }
}

/// `(r², r_n²)` for the axis, exact for coordinate axes.
fn radial_parts(state: &BlochState, axis: &Axis) -> (f64, f64) {
    match axis.coord() {
        Some(c) => {
            let (p, q) = c.others();
            let rn = state.component(c);
            let perp = state.component(p).powi(2) + state.component(q).powi(2);
            (perp, rn * rn)
        }
        None => {
            let r = state.as_vector();
            let rn = r.dot(&axis.as_vector());
            let perp = (r - axis.as_vector() * rn).norm_squared();
            (perp, rn * rn)
        }
    }
}

/// Cylindrical radius `√(r² − r_n²)` about the axis, clamped to `[0, 1]`.
pub fn a_monotone(state: &BlochState, axis: &Axis) -> f64 {
    let (perp, _) = radial_parts(state, axis);
    perp.sqrt().clamp(0.0, 1.0)
}

/// Spheroidal minor radius `√((r² − r_n²)/(1 − r_n²))`, and `0` once
/// `1 − r_n² ≤ tol::POLE`.
pub fn b_monotone(state: &BlochState, axis: &Axis) -> f64 {
    let (perp, rn2) = radial_parts(state, axis);
    let denom = 1.0 - rn2;
    if denom <= tol::POLE {
        return 0.0;
    }
    (perp / denom).sqrt().clamp(0.0, 1.0)
}

pub fn monotone_pair(state: &BlochState, axis: &Axis) -> MonotonePair {
    MonotonePair { a: a_monotone(state, axis), b: b_monotone(state, axis) }
}

pub fn monotone_profile(state: &BlochState) -> MonotoneProfile {
    let x = monotone_pair(state, &Axis::X);
    let y = monotone_pair(state, &Axis::Y);
    let z = monotone_pair(state, &Axis::Z);
    MonotoneProfile { a_x: x.a, b_x: x.b, a_y: y.a, b_y: y.b, a_z: z.a, b_z: z.b }
}

fn density_matrix(r: &Vector3<f64>) -> Matrix2<Complex64> {
    let h = 0.5;
    Matrix2::new(
        Complex64::new(h * (1.0 + r.z), 0.0),
        Complex64::new(h * r.x, -h * r.y),
        Complex64::new(h * r.x, h * r.y),
        Complex64::new(h * (1.0 - r.z), 0.0),
    )
}

/// `½‖ρ − σ_n ρ σ_n‖₁`, computed from the 2×2 operators.
pub fn trace_distance_asymmetry(state: &BlochState, axis: &Axis) -> f64 {
    let n = axis.as_vector();
    let sigma_n = Matrix2::new(
        Complex64::new(n.z, 0.0),
        Complex64::new(n.x, -n.y),
        Complex64::new(n.x, n.y),
        Complex64::new(-n.z, 0.0),
    );
    let rho = density_matrix(&state.as_vector());
    let flipped = sigma_n * rho * sigma_n;
    let diff = rho - flipped;
    let ev = SymmetricEigen::new(diff).eigenvalues;
    0.5 * ev.iter().map(|e| e.abs()).sum::<f64>()
}

/// The noisy refbit chain for an axis: states `g · m̂` with `m̂ ⟂ n̂`,
/// ordered by `g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefbitChain {
    axis: Axis,
    grid: Vec<f64>,
}

impl RefbitChain {
    /// Requires a strictly increasing grid inside `[0, 1]`.
    pub fn new(axis: Axis, grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidConfig("refbit grid is empty".into()));
        }
        if grid.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidConfig("refbit grid leaves [0, 1]".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("refbit grid not strictly increasing".into()));
        }
        Ok(RefbitChain { axis, grid })
    }

    /// `0, step, 2·step, …, 1`, with the step rounded so that 1 is hit.
    pub fn uniform(axis: Axis, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidConfig(format!("refbit step {step} not in (0, 1]")));
        }
        let n = (1.0 / step).round().max(1.0) as usize;
        Self::new(axis, (0..=n).map(|i| i as f64 / n as f64).collect())
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Largest gap between consecutive grid values.
    pub fn max_step(&self) -> f64 {
        self.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn state(&self, g: f64) -> BlochState {
        let m = self.axis.perpendicular() * g;
        BlochState::from_vector(&m).expect("chain states lie in the ball")
    }
}

/// First index where `pred` turns true, assuming it is monotone.
fn partition_point(grid: &[f64], pred: impl Fn(f64) -> bool) -> usize {
    grid.partition_point(|g| !pred(*g))
}

/// Smallest chain value that converts to `state`.
pub fn refbit_cost(state: &BlochState, chain: &RefbitChain) -> Result<f64> {
    let axis = chain.axis;
    let i = partition_point(&chain.grid, |g| order::can_convert(&chain.state(g), state, &axis).convertible());
    chain.grid.get(i).copied().ok_or(Error::Unreachable)
}

/// Largest chain value obtainable from `state`. The value 0 is the free
/// state, which is always obtainable, so a grid starting above `A` still
/// yields 0.
pub fn refbit_yield(state: &BlochState, chain: &RefbitChain) -> f64 {
    let axis = chain.axis;
    let i = partition_point(&chain.grid, |g| !order::can_convert(state, &chain.state(g), &axis).convertible());
    if i == 0 {
        0.0
    } else {
        chain.grid[i - 1]
    }
}
