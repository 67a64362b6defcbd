use super::{
    build::perturbed_triangles, build_cartesian_2d, build_nonuniform_1d, compute_quality,
    validate, BoxDomain, DualPolicy, Mesh, MeshError,
};

/// Factor by which `theta_grad` may exceed its value on the first two levels
/// of a refinement sequence.
pub const REGULARITY_GUARD: f64 = 1.05;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    Uniform1d { n: usize, interval: (f64, f64) },
    Nonuniform1d { n: usize, interval: (f64, f64), ratio: f64 },
    Cartesian2d { nx: usize, ny: usize, rect: BoxDomain },
    Triangles2d { n: usize, rect: BoxDomain, jitter: f64, seed: u64 },
}

/// A generator of dyadically refined meshes.
///
/// Structured families are regenerated with twice the cell count per axis; the
/// perturbed triangular family perturbs the coarsest level once and then
/// refines by midpoint subdivision, so every level shares the same seed and
/// jitter and the boundary polygon never moves.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFamily {
    pub kind: FamilyKind,
    pub dual: DualPolicy,
}

impl MeshFamily {
    pub fn uniform_1d(n: usize, interval: (f64, f64)) -> Self {
        FamilyKind::Uniform1d { n, interval }.into()
    }

    pub fn nonuniform_1d(n: usize, interval: (f64, f64), ratio: f64) -> Self {
        FamilyKind::Nonuniform1d { n, interval, ratio }.into()
    }

    pub fn cartesian_2d(nx: usize, ny: usize, rect: BoxDomain) -> Self {
        FamilyKind::Cartesian2d { nx, ny, rect }.into()
    }

    pub fn triangles_2d(n: usize, rect: BoxDomain, jitter: f64, seed: u64) -> Self {
        FamilyKind::Triangles2d {
            n,
            rect,
            jitter,
            seed,
        }
        .into()
    }

    pub fn with_dual(mut self, dual: DualPolicy) -> Self {
        self.dual = dual;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            FamilyKind::Uniform1d { .. } | FamilyKind::Nonuniform1d { .. } => 1,
            FamilyKind::Cartesian2d { .. } | FamilyKind::Triangles2d { .. } => 2,
        }
    }

    pub fn domain(&self) -> BoxDomain {
        match &self.kind {
            FamilyKind::Uniform1d { interval, .. } | FamilyKind::Nonuniform1d { interval, .. } => {
                BoxDomain {
                    lo: vec![interval.0],
                    hi: vec![interval.1],
                }
            }
            FamilyKind::Cartesian2d { rect, .. } | FamilyKind::Triangles2d { rect, .. } => {
                rect.clone()
            }
        }
    }

    /// Cells per axis at refinement level `level` (structured families) or
    /// squares per axis of the coarsest triangulation times `2^level`.
    pub fn resolution(&self, level: usize) -> usize {
        let base = match &self.kind {
            FamilyKind::Uniform1d { n, .. }
            | FamilyKind::Nonuniform1d { n, .. }
            | FamilyKind::Triangles2d { n, .. } => *n,
            FamilyKind::Cartesian2d { nx, .. } => *nx,
        };
        base << level
    }

    /// The mesh at refinement level `level` (level 0 is the coarsest).
    pub fn level(&self, level: usize) -> Result<Mesh, MeshError> {
        let mesh = match &self.kind {
            FamilyKind::Uniform1d { n, interval } => build_nonuniform_1d(n << level, *interval, 1.0)?,
            FamilyKind::Nonuniform1d { n, interval, ratio } => {
                build_nonuniform_1d(n << level, *interval, *ratio)?
            }
            FamilyKind::Cartesian2d { nx, ny, rect } => {
                build_cartesian_2d(nx << level, ny << level, rect)?
            }
            FamilyKind::Triangles2d {
                n,
                rect,
                jitter,
                seed,
            } => {
                let mut poly = perturbed_triangles(*n, rect, *jitter, *seed)?;
                for _ in 0..level {
                    poly = poly.subdivide_triangles()?;
                }
                poly.to_mesh(rect.clone())?
            }
        };
        if self.dual == DualPolicy::Cones {
            Ok(mesh)
        } else {
            mesh.with_dual_policy(self.dual)
        }
    }
}

impl From<FamilyKind> for MeshFamily {
    fn from(kind: FamilyKind) -> Self {
        Self {
            kind,
            dual: DualPolicy::Cones,
        }
    }
}

/// Builds `levels` dyadic refinements, validating each mesh and enforcing the
/// uniform bound on `theta_grad` (at most [`REGULARITY_GUARD`] times the
/// largest value on the first two levels).
pub fn refine(family: &MeshFamily, levels: usize) -> Result<Vec<Mesh>, MeshError> {
    if levels < 2 {
        return Err(MeshError::InvalidParameter(format!(
            "refinement needs at least 2 levels, got {levels}"
        )));
    }
    let meshes = (0..levels)
        .map(|m| family.level(m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut limit = 0.0_f64;
    for (m, mesh) in meshes.iter().enumerate() {
        let report = validate(mesh);
        if let Some(fail) = report.failures().next() {
            return Err(MeshError::Geometry(format!(
                "level {m} fails `{}` (worst {:e})",
                fail.name, fail.worst
            )));
        }
        let q = compute_quality(mesh);
        if m < 2 {
            limit = limit.max(q.theta_grad);
        }
        if m == 1 {
            limit *= REGULARITY_GUARD;
        }
        if m >= 2 && q.theta_grad > limit {
            return Err(MeshError::Regularity {
                level: m,
                face: q.theta_grad_face,
                theta: q.theta_grad,
                limit,
            });
        }
    }
    Ok(meshes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_size_halves_per_level() {
        let families = [
            MeshFamily::uniform_1d(8, (0.0, 1.0)),
            MeshFamily::nonuniform_1d(8, (0.0, 1.0), 2.0),
            MeshFamily::cartesian_2d(4, 4, BoxDomain::unit(2)),
            MeshFamily::triangles_2d(4, BoxDomain::unit(2), 0.3, 42),
        ];
        for fam in &families {
            let meshes = refine(fam, 4).unwrap();
            for pair in meshes.windows(2) {
                let r = pair[0].h_max / pair[1].h_max;
                assert!((r - 2.0).abs() < 1e-9, "{fam:?}: ratio {r}");
            }
        }
    }

    #[test]
    fn regularity_parameters_stay_in_guard_band() {
        let fam = MeshFamily::triangles_2d(8, BoxDomain::unit(2), 0.3, 42);
        let meshes = refine(&fam, 4).unwrap();
        let q: Vec<_> = meshes.iter().map(compute_quality).collect();
        let band = REGULARITY_GUARD * q[0].theta_grad.max(q[1].theta_grad);
        for qi in &q {
            assert!(qi.theta_grad <= band);
            assert_eq!(qi.n_faces_max, 3);
            assert!((qi.tau - 3.0).abs() < 1e-9);
            assert!(qi.theta <= REGULARITY_GUARD * q[0].theta.max(q[1].theta));
        }
    }

    #[test]
    fn refine_needs_two_levels() {
        assert!(refine(&MeshFamily::uniform_1d(4, (0.0, 1.0)), 1).is_err());
    }

    #[test]
    fn equal_share_family_keeps_partition() {
        let fam = MeshFamily::nonuniform_1d(6, (0.0, 1.0), 3.0).with_dual(DualPolicy::EqualShare);
        for mesh in refine(&fam, 3).unwrap() {
            assert!(validate(&mesh).is_ok());
        }
    }
}
