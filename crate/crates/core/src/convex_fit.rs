//! Nearest point of a finite convex hull (Wolfe's minimum-norm-point
//! algorithm), used to fit convex combinations of extremal channels.

use nalgebra::{DMatrix, DVector, SVector};

#[derive(Debug, Clone, PartialEq)]
pub struct HullPoint {
    /// `(index into the atom list, weight)`; weights are positive and sum
    /// to one.
    pub weights: Vec<(usize, f64)>,
}

impl HullPoint {
    pub fn point<const D: usize>(&self, atoms: &[SVector<f64, D>]) -> SVector<f64, D> {
        self.weights.iter().fold(SVector::zeros(), |acc, &(i, w)| acc + atoms[i] * w)
    }
}

const MAX_OUTER: usize = 10_000;

/// Minimizes `|Σ wᵢ atomsᵢ − goal|` over the probability simplex.
pub fn nearest_in_hull<const D: usize>(atoms: &[SVector<f64, D>], goal: &SVector<f64, D>) -> HullPoint {
    assert!(!atoms.is_empty(), "empty atom set");
    let p: Vec<SVector<f64, D>> = atoms.iter().map(|a| a - goal).collect();
    let scale = p.iter().map(|v| v.norm_squared()).fold(0.0, f64::max).max(1e-300);

    let first = (0..p.len()).min_by(|&a, &b| p[a].norm_squared().total_cmp(&p[b].norm_squared())).unwrap();
    let mut set = vec![first];
    let mut lambda = vec![1.0];
    let mut x = p[first];

    for _ in 0..MAX_OUTER {
        let xx = x.norm_squared();
        if xx <= 1e-32 * scale {
            break;
        }
        let (j, best) = p.iter().enumerate().map(|(i, v)| (i, x.dot(v))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        if xx - best <= 1e-15 * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lambda.push(0.0);

        // minor cycles
        loop {
            let mu = affine_min_norm(&p, &set);
            if mu.iter().all(|&m| m > 1e-15) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= 1e-15 {
                    let d = l - m;
                    if d > 0.0 {
                        theta = theta.min(l / d);
                    }
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let mut k = 0;
            while k < set.len() {
                if lambda[k] <= 1e-15 {
                    set.swap_remove(k);
                    lambda.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            if set.len() <= 1 {
                lambda = vec![1.0; set.len()];
                break;
            }
        }
        let total: f64 = lambda.iter().sum();
        for l in &mut lambda {
            *l /= total;
        }
        x = set.iter().zip(&lambda).fold(SVector::zeros(), |acc, (&i, &l)| acc + p[i] * l);
    }

    HullPoint { weights: set.into_iter().zip(lambda).collect() }
}

/// Affine combination of `p[set]` with minimum norm.
fn affine_min_norm<const D: usize>(p: &[SVector<f64, D>], set: &[usize]) -> Vec<f64> {
    let k = set.len();
    let mut a = DMatrix::zeros(k + 1, k + 1);
    let mut b = DVector::zeros(k + 1);
    for (r, &i) in set.iter().enumerate() {
        for (c, &j) in set.iter().enumerate() {
            a[(r, c)] = p[i].dot(&p[j]);
        }
        a[(r, k)] = 1.0;
        a[(k, r)] = 1.0;
    }
    b[k] = 1.0;
    let sol = a
        .clone()
        .lu()
        .solve(&b)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| a.svd(true, true).solve(&b, 1e-14).expect("svd solve"));
    sol.iter().take(k).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Vector2, Vector4};
    use proptest::prelude::*;

    fn square() -> Vec<Vector2<f64>> {
        vec![Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0), Vector2::new(1.0, 1.0)]
    }

    #[test]
    fn interior_goal_is_hit() {
        let atoms = square();
        let goal = Vector2::new(0.3, 0.7);
        let fit = nearest_in_hull(&atoms, &goal);
        assert!((fit.point(&atoms) - goal).norm() <= 1e-14);
    }

    #[test]
    fn exterior_goal_projects_onto_edge() {
        let atoms = square();
        let fit = nearest_in_hull(&atoms, &Vector2::new(2.0, 0.4));
        assert!((fit.point(&atoms) - Vector2::new(1.0, 0.4)).norm() <= 1e-14);
        let fit = nearest_in_hull(&atoms, &Vector2::new(2.0, 3.0));
        assert!((fit.point(&atoms) - Vector2::new(1.0, 1.0)).norm() <= 1e-14);
    }

    #[test]
    fn four_dimensional_simplex() {
        let atoms: Vec<Vector4<f64>> = (0..4)
            .map(|i| Vector4::from_fn(|r, _| if r == i { 1.0 } else { 0.0 }))
            .chain(std::iter::once(Vector4::zeros()))
            .collect();
        let goal = Vector4::new(0.1, 0.2, 0.3, 0.15);
        let fit = nearest_in_hull(&atoms, &goal);
        assert!((fit.point(&atoms) - goal).norm() <= 1e-14);
        let sum: f64 = fit.weights.iter().map(|w| w.1).sum();
        assert!((sum - 1.0).abs() <= 1e-14);
    }

    proptest! {
        #[test]
        fn beats_every_atom_and_is_a_distribution(
            pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30),
            gx in -2.0f64..2.0, gy in -2.0f64..2.0,
        ) {
            let atoms: Vec<Vector2<f64>> = pts.iter().map(|&(a, b)| Vector2::new(a, b)).collect();
            let goal = Vector2::new(gx, gy);
            let fit = nearest_in_hull(&atoms, &goal);
            let x = fit.point(&atoms) - goal;
            let sum: f64 = fit.weights.iter().map(|w| w.1).sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(fit.weights.iter().all(|w| w.1 >= 0.0));
            // optimality: no atom lies strictly on the far side of the supporting plane
            for a in &atoms {
                prop_assert!(x.dot(&(a - goal)) >= x.norm_squared() - 1e-10);
            }
        }
    }
}
