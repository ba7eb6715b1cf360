//! Trace-preserving qubit maps in Bloch-affine form `r ↦ M r + t`.
//!
//! Complete positivity is decided from the eigenvalues of the
//! (unnormalized, trace 2) Choi matrix. Covariance refers to the about-face
//! group of `x̂`; other axes are handled by conjugating with
//! [`Axis::frame_to_x`].

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{Axis, BlochState};
use crate::convex_fit;
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineQubitMap {
    pub t: Vector3<f64>,
    pub m: Matrix3<f64>,
}

impl AffineQubitMap {
    pub fn new(t: Vector3<f64>, m: Matrix3<f64>) -> Self {
        AffineQubitMap { t, m }
    }

    pub fn identity() -> Self {
        AffineQubitMap { t: Vector3::zeros(), m: Matrix3::identity() }
    }

    pub fn translation(t: Vector3<f64>) -> Self {
        AffineQubitMap { t, m: Matrix3::identity() }
    }

    /// Translation along the diagonal scaling `diag(lx, ly, lz)`.
    pub fn translation_scaling(t: Vector3<f64>, diag: Vector3<f64>) -> Self {
        AffineQubitMap { t, m: Matrix3::from_diagonal(&diag) }
    }

    /// Rotation about `x̂`, `[[1,0,0],[0,cos θ,sin θ],[0,-sin θ,cos θ]]`.
    pub fn rotation_x(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        #[rustfmt::skip]
        let m = Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, c, s,
            0.0, -s, c,
        );
        AffineQubitMap { t: Vector3::zeros(), m }
    }

    pub fn rotation(axis: &Axis, angle: f64) -> Self {
        AffineQubitMap { t: Vector3::zeros(), m: crate::bloch::rotation_matrix(axis, angle) }
    }

    /// The 4×4 matrix `[[1, 0], [t, M]]` acting on `(1, r)`.
    pub fn augmented(&self) -> Matrix4<f64> {
        let mut a = Matrix4::zeros();
        a[(0, 0)] = 1.0;
        for i in 0..3 {
            a[(i + 1, 0)] = self.t[i];
            for j in 0..3 {
                a[(i + 1, j + 1)] = self.m[(i, j)];
            }
        }
        a
    }

    /// Image of a Bloch vector without validating the result.
    pub fn apply_vector(&self, r: &Vector3<f64>) -> Vector3<f64> {
        self.m * r + self.t
    }

    /// `self` conjugated into the frame of `axis`: `F⁻¹ ∘ self ∘ F` where
    /// `F` takes `axis` to `x̂`.
    pub fn from_x_frame(&self, axis: &Axis) -> Self {
        let f = axis.frame_to_x();
        let ft = f.transpose();
        AffineQubitMap { t: ft * self.t, m: ft * self.m * f }
    }

    /// Inverse of [`AffineQubitMap::from_x_frame`].
    pub fn to_x_frame(&self, axis: &Axis) -> Self {
        let f = axis.frame_to_x();
        let ft = f.transpose();
        AffineQubitMap { t: f * self.t, m: f * self.m * ft }
    }

    pub fn max_abs_diff(&self, other: &AffineQubitMap) -> f64 {
        (self.augmented() - other.augmented()).amax()
    }

    /// Entrywise convex combination of maps.
    pub fn mix(parts: &[(f64, AffineQubitMap)]) -> Self {
        let mut t = Vector3::zeros();
        let mut m = Matrix3::zeros();
        for (w, map) in parts {
            t += map.t * *w;
            m += map.m * *w;
        }
        AffineQubitMap { t, m }
    }
}

/// `M r + t`, validated as a state.
pub fn apply(map: &AffineQubitMap, state: &BlochState) -> Result<BlochState> {
    BlochState::from_vector(&map.apply_vector(&state.as_vector()))
}

/// `outer ∘ inner`.
pub fn compose(outer: &AffineQubitMap, inner: &AffineQubitMap) -> AffineQubitMap {
    AffineQubitMap { t: outer.m * inner.t + outer.t, m: outer.m * inner.m }
}

/// Unnormalized Choi matrix `Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix(pub Matrix4<Complex64>);

impl ChoiMatrix {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [Matrix2::new(z, o, o, z), Matrix2::new(z, -i, i, z), Matrix2::new(o, z, z, -o)]
}

/// Operator form of the map applied to `I` and to each Pauli matrix.
fn operator_images(map: &AffineQubitMap) -> (Matrix2<Complex64>, [Matrix2<Complex64>; 3]) {
    let s = pauli();
    let id = Matrix2::<Complex64>::identity();
    let mut img_id = id;
    for (sk, tk) in s.iter().zip(map.t.iter()) {
        img_id += sk * Complex64::from(*tk);
    }
    let img = [0, 1, 2].map(|j| {
        let mut acc = Matrix2::<Complex64>::zeros();
        for (k, sk) in s.iter().enumerate() {
            acc += sk * Complex64::from(map.m[(k, j)]);
        }
        acc
    });
    (img_id, img)
}

pub fn choi_of(map: &AffineQubitMap) -> ChoiMatrix {
    let (e_id, e_s) = operator_images(map);
    let half = Complex64::from(0.5);
    let i = Complex64::new(0.0, 1.0);
    // |0⟩⟨0| = (I + σz)/2, |1⟩⟨1| = (I − σz)/2, |0⟩⟨1| = (σx + iσy)/2
    let e00 = (e_id + e_s[2]) * half;
    let e11 = (e_id - e_s[2]) * half;
    let e01 = (e_s[0] + e_s[1] * i) * half;
    let e10 = (e_s[0] - e_s[1] * i) * half;
    let blocks = [[e00, e01], [e10, e11]];
    let mut c = Matrix4::<Complex64>::zeros();
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, e) in row.iter().enumerate() {
            // E(|i⟩⟨j|) ⊗ |i⟩⟨j|: output index a, input index i
            for a in 0..2 {
                for b in 0..2 {
                    c[(2 * a + bi, 2 * b + bj)] = e[(a, b)];
                }
            }
        }
    }
    ChoiMatrix(c)
}

pub fn is_cptp(map: &AffineQubitMap, tol: f64) -> bool {
    choi_of(map).min_eigenvalue() >= -tol
}

fn about_face_x() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0))
}

/// Max entry of the commutator with the π rotation about `x̂`.
pub fn covariance_defect(map: &AffineQubitMap) -> f64 {
    let a = map.augmented();
    let p = about_face_x();
    (a * p - p * a).amax()
}

pub fn is_covariant(map: &AffineQubitMap, tol: f64) -> bool {
    covariance_defect(map) <= tol
}

/// Covariance under the about-face group of an arbitrary axis.
pub fn is_covariant_about(map: &AffineQubitMap, axis: &Axis, tol: f64) -> bool {
    is_covariant(&map.to_x_frame(axis), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCovariantParams {
    pub u: f64,
    pub v: f64,
}

impl ExtremalCovariantParams {
    /// Reduces `u` into `[0, 2π)`; `v` must already lie in `[0, π)`.
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(0.0..PI).contains(&v) {
            return Err(Error::RangeViolation(format!("v = {v} not in [0, π)")));
        }
        Ok(ExtremalCovariantParams { u: u.rem_euclid(2.0 * PI), v })
    }

    /// `(t_x, λ_x, λ_y, λ_z)` of the extremal map.
    pub fn coordinates(&self) -> Vector4<f64> {
        let (su, cu) = self.u.sin_cos();
        let (sv, cv) = self.v.sin_cos();
        Vector4::new(su * sv, cu * cv, cu, cv)
    }
}

/// `t = (sin u sin v, 0, 0)`, `M = diag(cos u cos v, cos u, cos v)`.
pub fn extremal_covariant(params: &ExtremalCovariantParams) -> AffineQubitMap {
    translation_scaling_from(&params.coordinates())
}

fn translation_scaling_from(c: &Vector4<f64>) -> AffineQubitMap {
    AffineQubitMap::translation_scaling(Vector3::new(c[0], 0.0, 0.0), Vector3::new(c[1], c[2], c[3]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub params: ExtremalCovariantParams,
    pub weight: f64,
}

/// `R_x(θ₁) ∘ (Σ wᵢ Ext(uᵢ, vᵢ)) ∘ R_x(θ₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariantChannelSpec {
    pub theta1: f64,
    pub mixture: Vec<MixtureComponent>,
    pub theta2: f64,
}

impl CovariantChannelSpec {
    pub fn identity() -> Self {
        CovariantChannelSpec {
            theta1: 0.0,
            mixture: vec![MixtureComponent { params: ExtremalCovariantParams { u: 0.0, v: 0.0 }, weight: 1.0 }],
            theta2: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.mixture.iter().map(|c| c.weight).sum();
        let nonneg = self.mixture.iter().all(|c| c.weight >= 0.0);
        if self.mixture.is_empty() || !nonneg || !((sum - 1.0).abs() <= 1e-12) {
            return Err(Error::BadWeights { sum });
        }
        Ok(())
    }
}

pub fn build_covariant(spec: &CovariantChannelSpec) -> Result<AffineQubitMap> {
    spec.validate()?;
    let parts: Vec<_> = spec.mixture.iter().map(|c| (c.weight, extremal_covariant(&c.params))).collect();
    let middle = AffineQubitMap::mix(&parts);
    Ok(compose(&AffineQubitMap::rotation_x(spec.theta1), &compose(&middle, &AffineQubitMap::rotation_x(spec.theta2))))
}

/// Result of [`decompose_covariant`]: `map = R_x(θ₁) ∘ d ∘ R_x(θ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariantDecomposition {
    pub theta1: f64,
    pub d: AffineQubitMap,
    pub theta2: f64,
}

impl CovariantDecomposition {
    pub fn reconstruct(&self) -> AffineQubitMap {
        compose(&AffineQubitMap::rotation_x(self.theta1), &compose(&self.d, &AffineQubitMap::rotation_x(self.theta2)))
    }
}

fn wrap(theta: f64) -> f64 {
    let w = theta.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// `rot2(θ) = [[c, s], [-s, c]]` is the (y, z) block of `R_x(θ)`.
/// Factors the (y, z) block as `rot2(θ₁) diag(σ₁, σ₂) rot2(θ₂)` with
/// θ₁ in `[0, π/2)` and θ₂ in `[0, 2π)`. Improper parts land in the signs
/// of the σ's.
fn factor_block(b: &Matrix2<f64>) -> (f64, f64, f64, f64) {
    let (a, bb, c, d) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (c + bb);
    let h = 0.5 * (c - bb);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let (mut s1, mut s2) = (q + r, q - r);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    // B = Rot(φ) diag Rot(ψ) with Rot(α) = rot2(-α)
    let psi = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    let (mut t1, mut t2) = (-phi, -psi);

    if r <= 1e-15 {
        // σ₁ = σ₂: the diagonal commutes with rotations
        t2 += t1;
        t1 = 0.0;
    } else if q <= 1e-15 {
        // σ₂ = -σ₁: rot2(θ) J = J rot2(-θ) for J = diag(1, -1)
        t2 -= t1;
        t1 = 0.0;
    }

    t1 = t1.rem_euclid(2.0 * PI);
    while t1 >= PI / 2.0 {
        // rot2(θ) diag(a, b) = rot2(θ - π/2) diag(b, a) rot2(π/2)
        t1 -= PI / 2.0;
        t2 += PI / 2.0;
        std::mem::swap(&mut s1, &mut s2);
    }
    (t1, s1, s2, wrap(t2))
}

/// Splits a covariant CPTP map into two `x̂` rotations around a
/// translation-scaling map.
pub fn decompose_covariant(map: &AffineQubitMap, tol: f64) -> Result<CovariantDecomposition> {
    let deviation = covariance_defect(map);
    if deviation > tol {
        return Err(Error::NotCovariant { deviation });
    }
    let min_eigenvalue = choi_of(map).min_eigenvalue();
    if min_eigenvalue < -tol {
        return Err(Error::NotCptp { min_eigenvalue });
    }
    let block = map.m.fixed_view::<2, 2>(1, 1).into_owned();
    let (theta1, s1, s2, theta2) = factor_block(&block);
    let d = AffineQubitMap::translation_scaling(Vector3::new(map.t.x, 0.0, 0.0), Vector3::new(map.m[(0, 0)], s1, s2));
    Ok(CovariantDecomposition { theta1, d, theta2 })
}

/// Draws the six free entries of a covariant map uniformly in `[-1, 1]`
/// and rejects until the map is CPTP.
pub fn sample_covariant_cptp<R: Rng + ?Sized>(rng: &mut R) -> AffineQubitMap {
    loop {
        let mut draw = || rng.random_range(-1.0..=1.0);
        let t = Vector3::new(draw(), 0.0, 0.0);
        #[rustfmt::skip]
        let m = Matrix3::new(
            draw(), 0.0, 0.0,
            0.0, draw(), draw(),
            0.0, draw(), draw(),
        );
        let map = AffineQubitMap { t, m };
        if is_cptp(&map, 0.0) {
            return map;
        }
    }
}

/// A convex combination of extremal maps fitted to a translation-scaling
/// map.
#[derive(Debug, Clone, PartialEq)]
pub struct HullFit {
    pub mixture: Vec<MixtureComponent>,
    /// Max entrywise distance between the mixture and the fitted map.
    pub residual: f64,
}

impl HullFit {
    pub fn map(&self) -> AffineQubitMap {
        let parts: Vec<_> = self.mixture.iter().map(|c| (c.weight, extremal_covariant(&c.params))).collect();
        AffineQubitMap::mix(&parts)
    }
}

/// Extremal parameters on a `grid_n × grid_n` lattice of `[0, 2π) × [0, π)`.
pub fn extremal_grid(grid_n: usize) -> Vec<ExtremalCovariantParams> {
    let mut out = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        for j in 0..grid_n {
            out.push(ExtremalCovariantParams {
                u: 2.0 * PI * i as f64 / grid_n as f64,
                v: PI * j as f64 / grid_n as f64,
            });
        }
    }
    out
}

/// Neighbours of `p` at spacing `(du, dv)`, with `v` kept in `[0, π)`.
pub(crate) fn stencil(p: &ExtremalCovariantParams, du: f64, dv: f64) -> Vec<ExtremalCovariantParams> {
    let mut out = Vec::with_capacity(8);
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            if a == 0 && b == 0 {
                continue;
            }
            let v = p.v + b as f64 * dv;
            if (0.0..PI).contains(&v) {
                out.push(ExtremalCovariantParams { u: (p.u + a as f64 * du).rem_euclid(2.0 * PI), v });
            }
        }
    }
    out
}

/// Fits a translation-scaling map `d` (translation along `x̂`, diagonal
/// `M`) by a convex combination of extremal maps.
///
/// Starts from the `grid_n × grid_n` lattice, then repeatedly adds a
/// halving stencil around the active atoms, up to `refine_rounds` times or
/// until the residual drops below `target`.
pub fn fit_extremal_mixture(d: &AffineQubitMap, grid_n: usize, refine_rounds: usize, target: f64) -> Result<HullFit> {
    let off_pattern = d.t.y.abs().max(d.t.z.abs()).max(
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d.m[(i, j)].abs())
            .fold(0.0, f64::max),
    );
    if off_pattern > tol::CHANNEL {
        return Err(Error::Precondition("map is not a translation-scaling along x̂".into()));
    }
    let goal = Vector4::new(d.t.x, d.m[(0, 0)], d.m[(1, 1)], d.m[(2, 2)]);
    let mut atoms = extremal_grid(grid_n);
    let (mut du, mut dv) = (2.0 * PI / grid_n as f64, PI / grid_n as f64);
    let mut round = 0;
    loop {
        let points: Vec<Vector4<f64>> = atoms.iter().map(|p| p.coordinates()).collect();
        let fit = convex_fit::nearest_in_hull(&points, &goal);
        let approx = fit.point(&points);
        let residual = (approx - goal).amax();
        if residual <= target || round == refine_rounds {
            let mixture = fit.weights.iter().map(|&(i, w)| MixtureComponent { params: atoms[i], weight: w }).collect();
            return Ok(HullFit { mixture, residual });
        }
        du *= 0.5;
        dv *= 0.5;
        let active: Vec<ExtremalCovariantParams> = fit.weights.iter().map(|&(i, _)| atoms[i]).collect();
        for p in &active {
            atoms.extend(stencil(p, du, dv));
        }
        round += 1;
    }
}
