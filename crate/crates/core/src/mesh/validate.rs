use super::Mesh;
use std::fmt;

/// Relative tolerance of the partition identities.
pub const PARTITION_TOL: f64 = 1e-12;

/// Outcome of one invariant check, with the worst residual observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<16} {:<4} worst={:.3e} tol={:.1e}",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                c.worst,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

/// Checks the structural and geometric invariants of a mesh.
pub fn validate(mesh: &Mesh) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name, worst: f64, tolerance: f64| {
        checks.push(Check {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
        })
    };
    let omega = mesh.domain_measure;

    push(
        "partition",
        (mesh.total_volume() - omega).abs() / omega,
        PARTITION_TOL,
    );
    push(
        "dual_partition",
        (mesh.total_dual_volume() - omega).abs() / omega,
        PARTITION_TOL,
    );

    let split = mesh
        .faces
        .iter()
        .map(|f| (f.dual_volume - (f.dual_inner + f.dual_outer)).abs())
        .fold(0.0, f64::max);
    push("dual_split", split, 0.0);

    let n = mesh.n_cells();
    let mut bad_adjacency = 0usize;
    for (i, f) in mesh.faces.iter().enumerate() {
        let ok = f.id == i
            && f.inner < n
            && match f.outer {
                Some(l) => l < n && l != f.inner && f.dual_outer > 0.0,
                None => f.dual_outer == 0.0,
            }
            && mesh.cells[f.inner.min(n.saturating_sub(1))].faces.contains(&i);
        if !ok {
            bad_adjacency += 1;
        }
    }
    for (k, c) in mesh.cells.iter().enumerate() {
        if c.id != k
            || c.faces.iter().any(|&s| {
                s >= mesh.n_faces() || (mesh.faces[s].inner != k && mesh.faces[s].outer != Some(k))
            })
        {
            bad_adjacency += 1;
        }
    }
    push("adjacency", bad_adjacency as f64, 0.0);

    let mut closure: f64 = 0.0;
    for c in &mesh.cells {
        let mut sum = vec![0.0; mesh.dim];
        let mut scale = 0.0;
        for &s in &c.faces {
            let f = &mesh.faces[s];
            let o = f.orientation(c.id);
            for (acc, ni) in sum.iter_mut().zip(&f.normal) {
                *acc += f.area * o * ni;
            }
            scale += f.area;
        }
        let norm = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
        closure = closure.max(norm / scale);
    }
    push("closure", closure, 1e-12);

    let mut nonpositive = 0usize;
    for c in &mesh.cells {
        if !(c.volume > 0.0 && c.diameter > 0.0) {
            nonpositive += 1;
        }
    }
    for f in &mesh.faces {
        if !(f.area > 0.0 && f.dual_inner > 0.0 && f.dual_volume > 0.0) {
            nonpositive += 1;
        }
    }
    push("positivity", nonpositive as f64, 0.0);

    let normals = mesh
        .faces
        .iter()
        .map(|f| (f.normal.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    push("unit_normals", normals, 1e-12);

    // x_K lies strictly on the inner side of every face plane of K
    let mut outside = 0usize;
    for c in &mesh.cells {
        for &s in &c.faces {
            let f = &mesh.faces[s];
            let d: f64 = (0..mesh.dim)
                .map(|i| (f.centroid[i] - c.anchor[i]) * f.normal[i])
                .sum::<f64>()
                * f.orientation(c.id);
            if !(d > 0.0) {
                outside += 1;
            }
        }
    }
    push("anchor_inside", outside as f64, 0.0);

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cartesian_2d, build_perturbed_triangular_2d, build_uniform_1d, BoxDomain};

    #[test]
    fn generated_meshes_pass_every_check() {
        let meshes = [
            build_uniform_1d(10, (0.0, 1.0)).unwrap(),
            build_cartesian_2d(4, 4, &BoxDomain::unit(2)).unwrap(),
            build_perturbed_triangular_2d(8, &BoxDomain::unit(2), 0.3, 42).unwrap(),
        ];
        for m in &meshes {
            let report = validate(m);
            assert!(report.is_ok(), "{report}");
        }
    }

    #[test]
    fn zeroed_dual_part_breaks_dual_partition() {
        let mut mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        mesh.faces[3].dual_inner = 0.0;
        let report = validate(&mesh);
        assert!(!report.check("dual_partition").unwrap().passed);
        assert!(!report.check("dual_split").unwrap().passed);
        assert!(report.check("partition").unwrap().passed);
    }

    #[test]
    fn cartesian_cells_close() {
        let mesh = build_cartesian_2d(4, 4, &BoxDomain::unit(2)).unwrap();
        let c = validate(&mesh);
        assert!(c.check("closure").unwrap().worst < 1e-15);
    }

    #[test]
    fn broken_adjacency_is_reported() {
        let mut mesh = build_uniform_1d(4, (0.0, 1.0)).unwrap();
        mesh.faces[1].outer = Some(mesh.faces[1].inner);
        assert!(!validate(&mesh).check("adjacency").unwrap().passed);
    }
}
