use super::{
    discrete_gradient, gradient_l1_distance, weak_pairing, OperatorError, TestFunction,
    VectorBump,
};
use crate::mesh::{compute_quality, refine, MeshFamily};
use crate::quadrature::integrate_box;
use crate::study::{fit_slope, fmt_real, CsvRow};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientStudyRow {
    pub level: usize,
    pub h: f64,
    pub theta_grad: f64,
    pub pairing: f64,
    pub reference: f64,
    pub gap: f64,
    /// `(1 + θ^∇) |∇φ|_∞ |∇ψ|_∞ |Ω| h`
    pub apriori_bound: f64,
    pub l1_distance: f64,
}

impl CsvRow for GradientStudyRow {
    const HEADER: &'static str = "level,h,theta_grad,pairing,reference,gap,apriori_bound,l1_distance";

    fn fields(&self) -> Vec<String> {
        let mut v = vec![self.level.to_string()];
        v.extend(
            [
                self.h,
                self.theta_grad,
                self.pairing,
                self.reference,
                self.gap,
                self.apriori_bound,
                self.l1_distance,
            ]
            .map(fmt_real),
        );
        v
    }
}

/// Refinement table for one `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientStudy {
    pub psi_index: usize,
    pub rows: Vec<GradientStudyRow>,
    /// Least-squares decay rate of `gap` in `h`.
    pub slope: Option<f64>,
}

impl GradientStudy {
    /// Whether `gap ≤ apriori_bound` at every level.
    pub fn within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.gap <= r.apriori_bound)
    }
}

/// Pairs `∇_E φ` with each `ψ` on `levels` refinements of `family` and compares
/// against `∫ ∇φ·ψ`, evaluated by tensor Gauss quadrature on the intersection
/// of the two supports (4 points per interval, 4× the finest resolution).
pub fn gradient_weakstar_study(
    family: &MeshFamily,
    phi: &dyn TestFunction,
    psis: &[VectorBump],
    levels: usize,
) -> Result<Vec<GradientStudy>, OperatorError> {
    if levels < 3 {
        return Err(OperatorError::Mismatch(format!(
            "a weak-star study needs at least 3 levels, got {levels}"
        )));
    }
    let meshes = refine(family, levels)?;
    let omega = family.domain().measure();
    let subdivisions = 4 * family.resolution(levels - 1);
    let d = family.dim();
    let references: Vec<f64> = psis
        .iter()
        .map(|psi| match phi.support().intersect(&psi.support()) {
            None => 0.0,
            Some((lo, hi)) => {
                let mut g = vec![0.0; d];
                integrate_box(&lo, &hi, subdivisions, 4, |x| {
                    phi.grad(x, 0.0, &mut g);
                    let dot: f64 = g.iter().zip(&psi.direction).map(|(a, b)| a * b).sum();
                    dot * psi.magnitude(x)
                })
            }
        })
        .collect();

    let per_level: Vec<Vec<GradientStudyRow>> = meshes
        .par_iter()
        .enumerate()
        .map(|(level, mesh)| {
            let q = compute_quality(mesh);
            let field = discrete_gradient(mesh, phi, 0.0);
            let l1 = gradient_l1_distance(mesh, &field, phi, 0.0, 4)?;
            psis.iter()
                .zip(&references)
                .map(|(psi, &reference)| {
                    let pairing = weak_pairing(mesh, &field, psi, 4)?;
                    Ok(GradientStudyRow {
                        level,
                        h: mesh.h_max,
                        theta_grad: q.theta_grad,
                        pairing,
                        reference,
                        gap: (pairing - reference).abs(),
                        apriori_bound: (1.0 + q.theta_grad)
                            * phi.grad_sup()
                            * psi.grad_sup()
                            * omega
                            * mesh.h_max,
                        l1_distance: l1,
                    })
                })
                .collect()
        })
        .collect::<Result<_, OperatorError>>()?;

    Ok((0..psis.len())
        .map(|i| {
            let rows: Vec<GradientStudyRow> = per_level.iter().map(|r| r[i].clone()).collect();
            let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
            let gaps: Vec<f64> = rows.iter().map(|r| r.gap).collect();
            GradientStudy {
                psi_index: i,
                slope: fit_slope(&h, &gaps),
                rows,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::PolyBump;

    #[test]
    fn constant_test_function_gives_zero_gaps() {
        let fam = MeshFamily::uniform_1d(8, (0.0, 1.0));
        let phi = PolyBump::new(vec![0.5], vec![0.3], 3).with_amplitude(0.0);
        let psi = VectorBump::new(vec![0.5], vec![0.3], 3, vec![1.0]);
        let s = gradient_weakstar_study(&fam, &phi, &[psi], 3).unwrap();
        assert!(s[0].rows.iter().all(|r| r.gap == 0.0));
    }

    #[test]
    fn uniform_1d_gap_decays_at_least_linearly() {
        let fam = MeshFamily::uniform_1d(16, (0.0, 1.0));
        let phi = PolyBump::new(vec![0.5], vec![0.3], 3);
        let psi = VectorBump::new(vec![0.45], vec![0.25], 3, vec![1.0]);
        let s = gradient_weakstar_study(&fam, &phi, &[psi], 4).unwrap();
        assert!(s[0].within_bound());
        assert!(s[0].slope.unwrap() >= 0.9, "{:?}", s[0]);
    }

    #[test]
    fn too_few_levels_rejected() {
        let fam = MeshFamily::uniform_1d(8, (0.0, 1.0));
        let phi = PolyBump::new(vec![0.5], vec![0.3], 3);
        assert!(gradient_weakstar_study(&fam, &phi, &[], 2).is_err());
    }
}
