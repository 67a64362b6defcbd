//! Discrete gradients of test functions on dual volumes.
//!
//! For an interior face `σ = K|L` the discrete gradient is
//! `(|σ| / |D_σ|) (φ_L - φ_K) n_{K,σ}` with `φ_K = φ(x_K)`, and zero on
//! boundary faces. It is piecewise constant on the dual cells `D_σ` and
//! converges to `∇φ` only weakly-★.

mod study;
mod test_function;

pub use study::{gradient_weakstar_study, GradientStudy, GradientStudyRow};
pub use test_function::{
    bump_slope_sup, spacetime_corpus, spatial_corpus, vector_corpus, PolyBump, Support,
    TestFunction, TimeFactor, VectorBump,
};

use crate::mesh::{Mesh, MeshError, MeshQuality};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("unsupported quadrature order {0} (use 1, 2 or 4)")]
    UnsupportedQuadrature(usize),
    #[error("quadrature on dual cells is implemented for d <= 2, mesh has d = {0}")]
    UnsupportedDimension(usize),
    #[error("gradient bound violated on face {face}: |grad_E phi| / (theta_grad |grad phi|) = {ratio}")]
    SupBound { face: usize, ratio: f64 },
    #[error("a-priori bound violated at level {level}: gap {gap:e} > bound {bound:e}")]
    AprioriBound { level: usize, gap: f64, bound: f64 },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Strictly increasing time nodes `0 = t_0 < … < t_N = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self, OperatorError> {
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(OperatorError::Mismatch(
                "a time grid needs at least two nodes starting at 0".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || !nodes.iter().all(|t| t.is_finite()) {
            return Err(OperatorError::Mismatch("time nodes must increase strictly".into()));
        }
        Ok(Self { nodes })
    }

    /// `N` equal steps; the last node is exactly `final_time`.
    pub fn uniform(final_time: f64, steps: usize) -> Result<Self, OperatorError> {
        if steps == 0 || !(final_time > 0.0) {
            return Err(OperatorError::Mismatch(format!(
                "uniform grid needs T > 0 and N >= 1, got T = {final_time}, N = {steps}"
            )));
        }
        let dt = final_time / steps as f64;
        let mut nodes: Vec<f64> = (0..steps).map(|n| n as f64 * dt).collect();
        nodes.push(final_time);
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `N`
    pub fn n_steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    /// `δt_n = t_{n+1} - t_n`
    pub fn dt(&self, n: usize) -> f64 {
        self.nodes[n + 1] - self.nodes[n]
    }

    pub fn dt_max(&self) -> f64 {
        (0..self.n_steps()).map(|n| self.dt(n)).fold(0.0, f64::max)
    }

    pub fn final_time(&self) -> f64 {
        *self.nodes.last().expect("non-empty")
    }
}

/// One vector per face, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceVectorField {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl FaceVectorField {
    pub fn zeros(dim: usize, n_faces: usize) -> Self {
        Self {
            dim,
            values: vec![0.0; dim * n_faces],
        }
    }

    pub fn n_faces(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn get(&self, face: usize) -> &[f64] {
        &self.values[face * self.dim..(face + 1) * self.dim]
    }

    pub fn norm(&self, face: usize) -> f64 {
        self.get(face).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.n_faces()).map(|s| self.norm(s)).fold(0.0, f64::max)
    }
}

/// `φ_K = φ(x_K, t)` for every cell.
pub fn nodal_values(mesh: &Mesh, phi: &dyn TestFunction, t: f64) -> Vec<f64> {
    mesh.cells.iter().map(|c| phi.value(&c.anchor, t)).collect()
}

/// Discrete gradient of cell values: `(|σ|/|D_σ|)(φ_L - φ_K) n_{K,σ}` on
/// interior faces, zero on boundary faces.
pub fn gradient_of_values(mesh: &Mesh, values: &[f64]) -> FaceVectorField {
    let mut field = FaceVectorField::zeros(mesh.dim, mesh.n_faces());
    for f in mesh.interior_faces() {
        let l = f.outer.expect("interior");
        let scale = f.area / f.dual_volume * (values[l] - values[f.inner]);
        for (v, n) in field.values[f.id * mesh.dim..(f.id + 1) * mesh.dim]
            .iter_mut()
            .zip(&f.normal)
        {
            *v = scale * n;
        }
    }
    field
}

pub fn discrete_gradient(mesh: &Mesh, phi: &dyn TestFunction, t: f64) -> FaceVectorField {
    gradient_of_values(mesh, &nodal_values(mesh, phi, t))
}

/// `max_σ |(∇_E φ)_σ| / (θ^∇ |∇φ|_∞)`; fails if it exceeds `1 + 1e-12`.
pub fn sup_bound_check(
    field: &FaceVectorField,
    quality: &MeshQuality,
    grad_sup: f64,
) -> Result<f64, OperatorError> {
    let limit = quality.theta_grad * grad_sup;
    let mut worst = 0.0;
    let mut worst_face = 0;
    for s in 0..field.n_faces() {
        let v = field.norm(s);
        let ratio = if v == 0.0 { 0.0 } else { v / limit };
        if ratio > worst {
            worst = ratio;
            worst_face = s;
        }
    }
    if worst > 1.0 + 1e-12 {
        return Err(OperatorError::SupBound {
            face: worst_face,
            ratio: worst,
        });
    }
    Ok(worst)
}

fn cone_degree(order: usize) -> Result<usize, OperatorError> {
    match order {
        1 | 2 | 4 => Ok(order),
        other => Err(OperatorError::UnsupportedQuadrature(other)),
    }
}

/// Mean of `f` over `D_σ`: the cone means weighted by the stored split
/// `|D_{K,σ}|`, `|D_{L,σ}|`. A positive-weight rule keeps the result a convex
/// combination of point values inside `D_σ`.
pub fn dual_mean(
    mesh: &Mesh,
    face: usize,
    degree: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> Result<f64, OperatorError> {
    let fc = &mesh.faces[face];
    let mut acc = 0.0;
    for (cell, part) in [(Some(fc.inner), fc.dual_inner), (fc.outer, fc.dual_outer)] {
        let Some(cell) = cell else { continue };
        let vol = mesh.cone_volume(cell, face)?;
        acc += part * mesh.integrate_cone(cell, face, degree, 0, &mut f) / vol;
    }
    Ok(acc / fc.dual_volume)
}

/// `Σ_σ |D_σ| (∇_E φ)_σ · ψ̄_σ` with `ψ̄_σ` the quadrature mean of `ψ` over `D_σ`.
pub fn weak_pairing(
    mesh: &Mesh,
    field: &FaceVectorField,
    psi: &VectorBump,
    order: usize,
) -> Result<f64, OperatorError> {
    let degree = cone_degree(order)?;
    if mesh.dim > 2 {
        return Err(OperatorError::UnsupportedDimension(mesh.dim));
    }
    if field.n_faces() != mesh.n_faces() || field.dim != mesh.dim {
        return Err(OperatorError::Mismatch("face field does not match mesh".into()));
    }
    let support = psi.support();
    let mut total = 0.0;
    for f in &mesh.faces {
        let v = field.get(f.id);
        let dot: f64 = v.iter().zip(&psi.direction).map(|(a, b)| a * b).sum();
        if dot == 0.0 {
            continue;
        }
        let reach = f
            .outer
            .map_or(0.0, |l| mesh.cells[l].diameter)
            .max(mesh.cells[f.inner].diameter);
        if !support.near(&f.centroid, reach) {
            continue;
        }
        let mean = dual_mean(mesh, f.id, degree, |x| psi.magnitude(x))?;
        total += f.dual_volume * dot * mean;
    }
    Ok(total)
}

/// `‖∇_E φ - ∇φ‖_{L¹(Ω)}` with `∇_E φ` constant on each `D_σ`, integrated on
/// the cones of each face with the given degree.
pub fn gradient_l1_distance(
    mesh: &Mesh,
    field: &FaceVectorField,
    phi: &dyn TestFunction,
    t: f64,
    degree: usize,
) -> Result<f64, OperatorError> {
    if mesh.dim > 2 {
        return Err(OperatorError::UnsupportedDimension(mesh.dim));
    }
    let d = mesh.dim;
    let support = phi.support();
    let mut total = 0.0;
    let mut g = vec![0.0; d];
    for f in &mesh.faces {
        let v = field.get(f.id).to_vec();
        let zero = v.iter().all(|x| *x == 0.0);
        for (cell, part) in [(Some(f.inner), f.dual_inner), (f.outer, f.dual_outer)] {
            let Some(cell) = cell else { continue };
            if zero && !support.near(&mesh.cells[cell].anchor, mesh.cells[cell].diameter) {
                continue;
            }
            let vol = mesh.cone_volume(cell, f.id)?;
            let integral = mesh.integrate_cone(cell, f.id, degree, 0, |x| {
                phi.grad(x, t, &mut g);
                g.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
            });
            total += part / vol * integral;
        }
    }
    Ok(total)
}

/// Slab `n` carries the discrete gradient of `φ(·, t_n)`, `0 ≤ n < N`.
pub fn spacetime_gradient(
    mesh: &Mesh,
    grid: &TimeGrid,
    phi: &dyn TestFunction,
) -> Vec<FaceVectorField> {
    (0..grid.n_steps())
        .map(|n| discrete_gradient(mesh, phi, grid.t(n)))
        .collect()
}

/// `(φ_K^{n+1} - φ_K^n) / δt_n` indexed `[n][K]`, `0 ≤ n < N`.
pub fn discrete_time_derivative(
    grid: &TimeGrid,
    mesh: &Mesh,
    phi: &dyn TestFunction,
) -> Vec<Vec<f64>> {
    let nodal: Vec<Vec<f64>> = (0..=grid.n_steps())
        .map(|n| nodal_values(mesh, phi, grid.t(n)))
        .collect();
    (0..grid.n_steps())
        .map(|n| {
            let dt = grid.dt(n);
            nodal[n + 1]
                .iter()
                .zip(&nodal[n])
                .map(|(a, b)| (a - b) / dt)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cartesian_2d, build_uniform_1d, compute_quality, BoxDomain};

    #[test]
    fn linear_data_has_unit_gradient_in_1d() {
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        let x: Vec<f64> = mesh.cells.iter().map(|c| c.anchor[0]).collect();
        let g = gradient_of_values(&mesh, &x);
        for f in &mesh.faces {
            let expected = if f.is_interior() { 1.0 } else { 0.0 };
            assert!((g.get(f.id)[0] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn cartesian_gradient_of_x_with_cone_duals() {
        // |σ| Δφ / |D_σ| = h * h / (h² / 2) = 2 on vertical faces
        let mesh = build_cartesian_2d(4, 4, &BoxDomain::unit(2)).unwrap();
        let x: Vec<f64> = mesh.cells.iter().map(|c| c.anchor[0]).collect();
        let g = gradient_of_values(&mesh, &x);
        for f in mesh.interior_faces() {
            let v = g.get(f.id);
            if f.normal[0].abs() > 0.5 {
                assert!((v[0] - 2.0).abs() < 1e-13 && v[1].abs() < 1e-13);
            } else {
                assert!(v[0].abs() < 1e-13 && v[1].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_function_has_zero_gradient_and_pairing() {
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        let g = gradient_of_values(&mesh, &vec![3.0; 10]);
        assert_eq!(g.sup_norm(), 0.0);
        let psi = VectorBump::new(vec![0.5], vec![0.3], 3, vec![1.0]);
        assert_eq!(weak_pairing(&mesh, &g, &psi, 2).unwrap(), 0.0);
        let q = compute_quality(&mesh);
        assert_eq!(sup_bound_check(&g, &q, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn unsupported_order_is_rejected() {
        let mesh = build_uniform_1d(4, (0.0, 1.0)).unwrap();
        let g = FaceVectorField::zeros(1, mesh.n_faces());
        let psi = VectorBump::new(vec![0.5], vec![0.3], 3, vec![1.0]);
        assert!(matches!(
            weak_pairing(&mesh, &g, &psi, 3),
            Err(OperatorError::UnsupportedQuadrature(3))
        ));
    }

    #[test]
    fn pairing_in_1d_approaches_reference() {
        // reference -∫ φ ψ' = ∫ φ' ψ by a fine Gauss rule
        let phi = PolyBump::new(vec![0.5], vec![0.3], 3);
        let psi = VectorBump::new(vec![0.45], vec![0.25], 3, vec![1.0]);
        let reference = crate::quadrature::integrate_box(&[0.0], &[1.0], 400, 4, |x| {
            -phi.value(x, 0.0) * psi.divergence(x)
        });
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        let g = discrete_gradient(&mesh, &phi, 0.0);
        let gap = (weak_pairing(&mesh, &g, &psi, 4).unwrap() - reference).abs();
        let bound = 2.0 * phi.grad_sup() * psi.grad_sup() * 0.1;
        assert!(gap <= bound, "gap {gap} bound {bound}");
    }

    #[test]
    fn slab_gradients_scale_with_time_factor() {
        let mesh = build_uniform_1d(16, (0.0, 1.0)).unwrap();
        let w = PolyBump::new(vec![0.5], vec![0.3], 3);
        let phi = w.clone().with_time(TimeFactor::Cutoff { tau: 1.0, exponent: 2 });
        let grid = TimeGrid::uniform(1.0, 8).unwrap();
        let slabs = spacetime_gradient(&mesh, &grid, &phi);
        let base = discrete_gradient(&mesh, &w, 0.0);
        for (n, slab) in slabs.iter().enumerate() {
            let g = phi.time.eval(grid.t(n)).0;
            for (a, b) in slab.values.iter().zip(&base.values) {
                assert!((a - g * b).abs() < 1e-14);
            }
        }
    }

    #[derive(Debug)]
    struct LinearInTime(PolyBump);

    impl TestFunction for LinearInTime {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, x: &[f64], t: f64) -> f64 {
            t * self.0.spatial(x)
        }
        fn grad(&self, x: &[f64], t: f64, out: &mut [f64]) {
            self.0.grad(x, 0.0, out);
            out[0] *= t;
        }
        fn dt(&self, x: &[f64], _: f64) -> f64 {
            self.0.spatial(x)
        }
        fn support(&self) -> Support {
            self.0.support()
        }
        fn grad_sup(&self) -> f64 {
            self.0.grad_sup()
        }
        fn dt_sup(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn time_derivative_of_linear_in_time_is_exact() {
        let mesh = build_uniform_1d(8, (0.0, 1.0)).unwrap();
        let phi = LinearInTime(PolyBump::new(vec![0.5], vec![0.3], 3));
        let grid = TimeGrid::uniform(1.0, 4).unwrap();
        for slab in discrete_time_derivative(&grid, &mesh, &phi) {
            for (k, c) in mesh.cells.iter().enumerate() {
                assert!((slab[k] - phi.0.spatial(&c.anchor)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn time_derivative_error_is_first_order() {
        let mesh = build_uniform_1d(8, (0.0, 1.0)).unwrap();
        let phi = PolyBump::new(vec![0.5], vec![0.3], 3)
            .with_time(TimeFactor::Cutoff { tau: 2.0, exponent: 2 });
        let worst = |steps: usize| {
            let grid = TimeGrid::uniform(1.0, steps).unwrap();
            let d = discrete_time_derivative(&grid, &mesh, &phi);
            let mut w: f64 = 0.0;
            for (n, slab) in d.iter().enumerate() {
                for (k, c) in mesh.cells.iter().enumerate() {
                    w = w.max((slab[k] - phi.dt(&c.anchor, grid.t(n))).abs());
                }
            }
            w
        };
        let (a, b) = (worst(50), worst(100));
        assert!(b < a && (a / b - 2.0).abs() < 0.1, "{a} {b}");
    }

    #[test]
    fn time_grid_validation() {
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::uniform(0.0, 4).is_err());
        let g = TimeGrid::uniform(0.3, 3).unwrap();
        assert_eq!(g.final_time(), 0.3);
        assert_eq!(g.n_steps(), 3);
    }
}
