use super::Mesh;

/// Regularity parameters of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshQuality {
    /// `max_{σ=K|L} |σ| |x_L - x_K| / |D_σ|` over interior faces.
    pub theta_grad: f64,
    /// Face attaining `theta_grad`.
    pub theta_grad_face: usize,
    /// `max_K max_{σ ∈ E_K} |D_σ| / |K|`
    pub theta: f64,
    /// `max_{K, σ ∈ E_K} |K| / |D_{K,σ}|`
    pub tau: f64,
    /// `max_K N_K`
    pub n_faces_max: usize,
    pub h_max: f64,
}

pub fn compute_quality(mesh: &Mesh) -> MeshQuality {
    let mut theta_grad = 0.0;
    let mut theta_grad_face = 0;
    for f in mesh.interior_faces() {
        let (k, l) = (f.inner, f.outer.expect("interior"));
        let dist = distance(&mesh.cells[k].anchor, &mesh.cells[l].anchor);
        let ratio = f.area * dist / f.dual_volume;
        if ratio > theta_grad {
            theta_grad = ratio;
            theta_grad_face = f.id;
        }
    }
    let mut theta: f64 = 0.0;
    let mut tau: f64 = 0.0;
    for c in &mesh.cells {
        for &s in &c.faces {
            let f = &mesh.faces[s];
            theta = theta.max(f.dual_volume / c.volume);
            tau = tau.max(c.volume / f.dual_part(c.id));
        }
    }
    MeshQuality {
        theta_grad,
        theta_grad_face,
        theta,
        tau,
        n_faces_max: mesh.cells.iter().map(|c| c.n_faces()).max().unwrap_or(0),
        h_max: mesh.h_max,
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{
        build_cartesian_2d, build_nonuniform_1d, build_perturbed_triangular_2d, build_uniform_1d,
        BoxDomain,
    };

    #[test]
    fn uniform_1d_has_unit_theta_grad() {
        let q = compute_quality(&build_uniform_1d(10, (0.0, 1.0)).unwrap());
        assert!((q.theta_grad - 1.0).abs() < 1e-13);
        assert_eq!(q.n_faces_max, 2);
        assert!((q.h_max - 0.1).abs() < 1e-15);
    }

    #[test]
    fn nonuniform_1d_has_unit_theta_grad() {
        let q = compute_quality(&build_nonuniform_1d(10, (0.0, 1.0), 2.0).unwrap());
        assert!((q.theta_grad - 1.0).abs() < 1e-13);
        // |D_σ| / |K| = (h/2 + 2h/2) / h on the short cells
        assert!((q.theta - 1.5).abs() < 1e-13);
    }

    #[test]
    fn cartesian_cone_duals_give_theta_grad_equal_to_dimension() {
        // |σ| |x_L - x_K| / |D_σ| = h * h / (2 * h * (h/2) / 2) = 2
        let q = compute_quality(&build_cartesian_2d(4, 4, &BoxDomain::unit(2)).unwrap());
        assert!((q.theta_grad - 2.0).abs() < 1e-13);
        assert_eq!(q.n_faces_max, 4);
        // |D_σ| = h^2 / 2 for interior faces
        assert!((q.theta - 0.5).abs() < 1e-13);
        assert!((q.tau - 4.0).abs() < 1e-13);
    }

    #[test]
    fn all_metrics_positive_on_triangles() {
        let q = compute_quality(
            &build_perturbed_triangular_2d(8, &BoxDomain::unit(2), 0.3, 42).unwrap(),
        );
        assert!(q.theta_grad > 0.0 && q.theta_grad.is_finite());
        assert!(q.theta > 0.0 && q.tau > 0.0 && q.h_max > 0.0);
        assert_eq!(q.n_faces_max, 3);
        assert!((q.tau - 3.0).abs() < 1e-9);
    }

    #[test]
    fn triangular_theta_grad_regression() {
        let q = compute_quality(
            &build_perturbed_triangular_2d(8, &BoxDomain::unit(2), 0.3, 42).unwrap(),
        );
        assert!((q.theta_grad - 3.726_884_031_407_938_6).abs() < 1e-12);
        assert!((q.theta - 1.605_613_541_911_715).abs() < 1e-12);
    }
}
