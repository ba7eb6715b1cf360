//! Qubit states as Bloch vectors, axes, sampling and rotations.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::tol;

/// A qubit density operator `ρ = (I + r·σ)/2`, stored as its Bloch vector.
///
/// Only constructible through [`make_state`] (or the checked
/// [`BlochState::new`] alias), so `|r|² ≤ 1 + tol::BALL` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState {
    rx: f64,
    ry: f64,
    rz: f64,
}

/// Validates and wraps a Bloch vector. Components are stored unchanged.
pub fn make_state(rx: f64, ry: f64, rz: f64) -> Result<BlochState> {
    let norm_sq = rx * rx + ry * ry + rz * rz;
    // negated form also rejects NaN
    if !(norm_sq <= 1.0 + tol::BALL) {
        return Err(Error::OutsideBall { norm_sq });
    }
    Ok(BlochState { rx, ry, rz })
}

/// Euclidean norm of the Bloch vector.
pub fn purity_radius(state: &BlochState) -> f64 {
    state.as_vector().norm()
}

impl BlochState {
    pub const MAXIMALLY_MIXED: BlochState = BlochState { rx: 0.0, ry: 0.0, rz: 0.0 };

    pub fn new(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        make_state(rx, ry, rz)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Result<Self> {
        make_state(v.x, v.y, v.z)
    }

    pub fn rx(&self) -> f64 {
        self.rx
    }

    pub fn ry(&self) -> f64 {
        self.ry
    }

    pub fn rz(&self) -> f64 {
        self.rz
    }

    pub fn component(&self, c: Coord) -> f64 {
        match c {
            Coord::X => self.rx,
            Coord::Y => self.ry,
            Coord::Z => self.rz,
        }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.rx, self.ry, self.rz)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rx, self.ry, self.rz]
    }

    pub fn radius(&self) -> f64 {
        purity_radius(self)
    }

    pub fn distance(&self, other: &BlochState) -> f64 {
        (self.as_vector() - other.as_vector()).norm()
    }
}

impl fmt::Display for BlochState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.rx, self.ry, self.rz)
    }
}

/// Coordinate axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        match self {
            Coord::X => 0,
            Coord::Y => 1,
            Coord::Z => 2,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Coord::X => Axis::X,
            Coord::Y => Axis::Y,
            Coord::Z => Axis::Z,
        }
    }

    /// The other two coordinates in cyclic order (`X -> (Y, Z)`).
    pub fn others(self) -> (Coord, Coord) {
        match self {
            Coord::X => (Coord::Y, Coord::Z),
            Coord::Y => (Coord::Z, Coord::X),
            Coord::Z => (Coord::X, Coord::Y),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        }
    }
}

/// Unit vector naming an about-face symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    n: [f64; 3],
}

impl Axis {
    pub const X: Axis = Axis { n: [1.0, 0.0, 0.0] };
    pub const Y: Axis = Axis { n: [0.0, 1.0, 0.0] };
    pub const Z: Axis = Axis { n: [0.0, 0.0, 1.0] };

    /// Accepts a vector whose norm is 1 within `tol::AXIS`.
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Axis> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !((norm - 1.0).abs() <= tol::AXIS) {
            return Err(Error::NotUnitAxis { norm });
        }
        Ok(Axis { n: [nx, ny, nz] })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(nx: f64, ny: f64, nz: f64) -> Result<Axis> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotUnitAxis { norm });
        }
        Ok(Axis { n: [nx / norm, ny / norm, nz / norm] })
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.n[0], self.n[1], self.n[2])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.n
    }

    /// The coordinate axis this is, if exactly one.
    pub fn coord(&self) -> Option<Coord> {
        Coord::ALL.into_iter().find(|c| *self == c.axis())
    }

    /// Minimal-angle rotation `F` with `F n = x̂`.
    ///
    /// For `n = -x̂` the rotation is the π turn about `ẑ`.
    pub fn frame_to_x(&self) -> Matrix3<f64> {
        let n = self.as_vector();
        let x = Vector3::x();
        let cross = n.cross(&x);
        let sin = cross.norm();
        let cos = n.dot(&x);
        if sin < 1e-15 {
            return if cos > 0.0 {
                Matrix3::identity()
            } else {
                Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0))
            };
        }
        let k = cross / sin;
        let kx = k.cross_matrix();
        Matrix3::identity() + kx * sin + kx * kx * (1.0 - cos)
    }

    /// A unit vector perpendicular to the axis: the image of `ŷ` under the
    /// inverse frame rotation.
    pub fn perpendicular(&self) -> Vector3<f64> {
        self.frame_to_x().transpose() * Vector3::y()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coord() {
            Some(c) => write!(f, "{}", c.label()),
            None => write!(f, "{},{},{}", self.n[0], self.n[1], self.n[2]),
        }
    }
}

/// Rotation matrix about `axis` by `angle`.
///
/// The sense matches the x̂ matrix with `sin θ` in the (y, z) entry, i.e.
/// `R_x(θ) = [[1,0,0],[0,cos θ,sin θ],[0,-sin θ,cos θ]]`.
pub fn rotation_matrix(axis: &Axis, angle: f64) -> Matrix3<f64> {
    let k = axis.as_vector().cross_matrix();
    let (s, c) = angle.sin_cos();
    Matrix3::identity() - k * s + k * k * (1.0 - c)
}

/// Rotates the Bloch vector about `axis` by `angle` (see [`rotation_matrix`]).
pub fn rotate_about_axis(state: &BlochState, axis: &Axis, angle: f64) -> BlochState {
    let v = rotation_matrix(axis, angle) * state.as_vector();
    // rotations preserve the norm up to rounding
    BlochState { rx: v.x, ry: v.y, rz: v.z }
}

/// Applies the frame rotation taking `axis` to `x̂`.
pub fn to_x_frame(state: &BlochState, axis: &Axis) -> BlochState {
    if *axis == Axis::X {
        return *state;
    }
    let v = axis.frame_to_x() * state.as_vector();
    BlochState { rx: v.x, ry: v.y, rz: v.z }
}

/// Inverse of [`to_x_frame`].
pub fn from_x_frame(state: &BlochState, axis: &Axis) -> BlochState {
    if *axis == Axis::X {
        return *state;
    }
    let v = axis.frame_to_x().transpose() * state.as_vector();
    BlochState { rx: v.x, ry: v.y, rz: v.z }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleMode {
    UniformBall,
    UniformSphere,
    FixedRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub mode: SampleMode,
    /// Used only by [`SampleMode::FixedRadius`].
    pub radius: f64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn uniform_ball(seed: u64) -> Self {
        SamplerConfig { mode: SampleMode::UniformBall, radius: 1.0, seed }
    }

    pub fn uniform_sphere(seed: u64) -> Self {
        SamplerConfig { mode: SampleMode::UniformSphere, radius: 1.0, seed }
    }

    pub fn fixed_radius(radius: f64, seed: u64) -> Self {
        SamplerConfig { mode: SampleMode::FixedRadius, radius, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.radius) {
            return Err(Error::InvalidConfig(format!("radius {} not in [0, 1]", self.radius)));
        }
        Ok(())
    }
}

fn unit_direction<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Draws one state from `rng` according to `mode`.
pub fn sample_with<R: Rng + ?Sized>(rng: &mut R, mode: SampleMode, radius: f64) -> BlochState {
    let dir = unit_direction(rng);
    let r = match mode {
        SampleMode::UniformBall => rng.random::<f64>().cbrt(),
        SampleMode::UniformSphere => 1.0,
        SampleMode::FixedRadius => radius,
    };
    let v = dir * r;
    BlochState { rx: v.x, ry: v.y, rz: v.z }
}

/// Samples one state; deterministic in `config.seed`.
pub fn sample_state(config: &SamplerConfig) -> Result<BlochState> {
    config.validate()?;
    let mut rng = parallel::rng_for(config.seed, 0);
    Ok(sample_with(&mut rng, config.mode, config.radius))
}

/// Samples `n` states; state `i` uses its own stream so the result is
/// independent of the execution mode.
pub fn sample_states(config: &SamplerConfig, n: usize, exec: Execution) -> Result<Vec<BlochState>> {
    config.validate()?;
    let cfg = *config;
    Ok(parallel::map_indexed(n, exec, move |i| {
        let mut rng = parallel::rng_for(cfg.seed, i as u64);
        sample_with(&mut rng, cfg.mode, cfg.radius)
    }))
}

/// Uniform angle in `[0, 2π)`.
pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * 2.0 * PI
}
