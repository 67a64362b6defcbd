//! Polyhedral meshes with face connectivity and dual volumes.
//!
//! A [`Mesh`] is a partition of an axis-aligned box into cells. Every face carries
//! its measure, the unit normal oriented from its `inner` cell to its `outer`
//! cell, and a dual volume `D_σ` split into the part lying in each neighbour.
//! Only the measures of the dual volumes are stored; when a geometric
//! realization is needed (quadrature of cell or dual means) the cone with base
//! the face and apex the cell anchor is used.

mod build;
mod family;
mod io;
mod quality;
mod validate;

pub use build::{
    build_cartesian_2d, build_nonuniform_1d, build_perturbed_triangular_2d, build_uniform_1d,
    PolygonMesh,
};
pub use family::{refine, FamilyKind, MeshFamily, REGULARITY_GUARD};
pub use io::{read_mesh, write_mesh, MESH_HEADER};
pub(crate) use io::real;
pub use quality::{compute_quality, MeshQuality};
pub use validate::{validate, Check, ValidationReport};

use crate::quadrature;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid mesh parameter: {0}")]
    InvalidParameter(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error(
        "regularity guard violated at level {level}: face {face} has theta_grad {theta:.6} > limit {limit:.6}"
    )]
    Regularity {
        level: usize,
        face: usize,
        theta: f64,
        limit: f64,
    },
    #[error("mesh file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Axis-aligned box `Ω = Π [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, MeshError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(MeshError::InvalidParameter(
                "box corners must have the same nonzero dimension".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(MeshError::InvalidParameter(format!(
                "degenerate box {lo:?} x {hi:?}"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self, MeshError> {
        Self::new(vec![a], vec![b])
    }

    pub fn rectangle(x: (f64, f64), y: (f64, f64)) -> Result<Self, MeshError> {
        Self::new(vec![x.0, y.0], vec![x.1, y.1])
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn measure(&self) -> f64 {
        (0..self.dim()).map(|i| self.extent(i)).product()
    }

    /// Distance from `x` (assumed inside) to the boundary.
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        (0..self.dim())
            .map(|i| (x[i] - self.lo[i]).min(self.hi[i] - x[i]))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    /// `|K|`
    pub volume: f64,
    /// Diameter `h_K`.
    pub diameter: f64,
    /// The point `x_K` at which test functions are sampled.
    pub anchor: Vec<f64>,
    /// Face ids, ascending.
    pub faces: Vec<usize>,
}

impl Cell {
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    /// `(d-1)`-measure `|σ|`; equal to one in 1d.
    pub area: f64,
    /// Unit normal pointing from `inner` to `outer` (outward for boundary faces).
    pub normal: Vec<f64>,
    pub inner: usize,
    pub outer: Option<usize>,
    /// `|D_σ|`
    pub dual_volume: f64,
    /// `|D_{K,σ}|` with `K = inner`.
    pub dual_inner: f64,
    /// `|D_{L,σ}|` with `L = outer`; zero on boundary faces.
    pub dual_outer: f64,
    pub centroid: Vec<f64>,
}

impl Face {
    pub fn is_interior(&self) -> bool {
        self.outer.is_some()
    }

    /// `+1` if `normal` is outward for `cell`, `-1` if inward.
    pub fn orientation(&self, cell: usize) -> f64 {
        if cell == self.inner {
            1.0
        } else {
            -1.0
        }
    }

    /// The neighbour across this face, seen from `cell`.
    pub fn other(&self, cell: usize) -> Option<usize> {
        if cell == self.inner {
            self.outer
        } else {
            Some(self.inner)
        }
    }

    /// `|D_{cell,σ}|`
    pub fn dual_part(&self, cell: usize) -> f64 {
        if cell == self.inner {
            self.dual_inner
        } else {
            self.dual_outer
        }
    }
}

/// How the dual volume of a face is split between its two cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DualPolicy {
    /// `D_{K,σ}` is the cone with base `σ` and apex `x_K`.
    #[default]
    Cones,
    /// `|D_{K,σ}| = |K| / N_K`; no geometry is attached.
    EqualShare,
}

impl std::str::FromStr for DualPolicy {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cones" => Ok(Self::Cones),
            "equal-share" | "equal" => Ok(Self::EqualShare),
            other => Err(MeshError::InvalidParameter(format!(
                "unknown dual policy `{other}` (cones | equal-share)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub dim: usize,
    pub domain: BoxDomain,
    pub cells: Vec<Cell>,
    pub faces: Vec<Face>,
    pub domain_measure: f64,
    pub h_max: f64,
}

impl Mesh {
    /// Assembles a mesh from cells and faces; fills in the cell face lists.
    pub fn from_parts(domain: BoxDomain, mut cells: Vec<Cell>, faces: Vec<Face>) -> Self {
        for cell in &mut cells {
            cell.faces.clear();
        }
        for face in &faces {
            cells[face.inner].faces.push(face.id);
            if let Some(outer) = face.outer {
                cells[outer].faces.push(face.id);
            }
        }
        for cell in &mut cells {
            cell.faces.sort_unstable();
        }
        let h_max = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
        Self {
            dim: domain.dim(),
            domain_measure: domain.measure(),
            domain,
            cells,
            faces,
            h_max,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(|f| f.is_interior())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(|f| !f.is_interior())
    }

    /// Re-splits the dual volumes according to `policy`.
    pub fn with_dual_policy(mut self, policy: DualPolicy) -> Result<Self, MeshError> {
        for i in 0..self.faces.len() {
            let (inner, outer) = (self.faces[i].inner, self.faces[i].outer);
            let share = |mesh: &Mesh, cell: usize| -> Result<f64, MeshError> {
                match policy {
                    DualPolicy::EqualShare => {
                        let k = &mesh.cells[cell];
                        Ok(k.volume / k.n_faces() as f64)
                    }
                    DualPolicy::Cones => mesh.cone_volume(cell, i),
                }
            };
            let dk = share(&self, inner)?;
            let dl = match outer {
                Some(l) => share(&self, l)?,
                None => 0.0,
            };
            let face = &mut self.faces[i];
            face.dual_inner = dk;
            face.dual_outer = dl;
            face.dual_volume = dk + dl;
        }
        Ok(self)
    }

    /// Measure of the cone with base `face` and apex `x_K`: `|σ| dist(x_K, σ) / d`.
    pub fn cone_volume(&self, cell: usize, face: usize) -> Result<f64, MeshError> {
        let f = &self.faces[face];
        let k = &self.cells[cell];
        let dist: f64 = (0..self.dim)
            .map(|i| (f.centroid[i] - k.anchor[i]) * f.normal[i])
            .sum::<f64>()
            * f.orientation(cell);
        if !(dist > 0.0) {
            return Err(MeshError::Geometry(format!(
                "anchor of cell {cell} is not strictly inside face {face} (distance {dist:e})"
            )));
        }
        Ok(f.area * dist / self.dim as f64)
    }

    /// End points of a face segment in 2d, ordered counter-clockwise for `inner`.
    pub fn face_segment(&self, face: usize) -> [[f64; 2]; 2] {
        let f = &self.faces[face];
        assert_eq!(self.dim, 2, "face_segment is only defined in 2d");
        // tangent = normal rotated by +90 degrees
        let t = [-f.normal[1], f.normal[0]];
        let h = 0.5 * f.area;
        [
            [f.centroid[0] - h * t[0], f.centroid[1] - h * t[1]],
            [f.centroid[0] + h * t[0], f.centroid[1] + h * t[1]],
        ]
    }

    /// Integrates `f` over the cone with base `face` and apex `x_cell`.
    ///
    /// `degree` selects a Gauss rule exact for polynomials of that degree;
    /// `subdivide > 0` switches to a midpoint rule on `subdivide^2` pieces
    /// (for discontinuous integrands). 1d and 2d only.
    pub fn integrate_cone(
        &self,
        cell: usize,
        face: usize,
        degree: usize,
        subdivide: usize,
        mut f: impl FnMut(&[f64]) -> f64,
    ) -> f64 {
        let apex = &self.cells[cell].anchor;
        match self.dim {
            1 => {
                let (a, b) = (apex[0], self.faces[face].centroid[0]);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                if subdivide > 0 {
                    let h = (b - a) / subdivide as f64;
                    (0..subdivide)
                        .map(|i| {
                            let lo = a + i as f64 * h;
                            quadrature::integrate_interval(lo, lo + h, 1, |x| f(&[x]))
                        })
                        .sum()
                } else {
                    let points = (degree / 2 + 1).clamp(1, 5);
                    quadrature::integrate_interval(a, b, points, |x| f(&[x]))
                }
            }
            2 => {
                let [a, b] = self.face_segment(face);
                let tri = [[apex[0], apex[1]], a, b];
                if subdivide > 0 {
                    quadrature::integrate_triangle_subdivided(tri, subdivide, f)
                } else {
                    quadrature::integrate_triangle(tri, degree.min(4), f)
                }
            }
            d => panic!("cone quadrature is implemented for d <= 2, mesh has d = {d}"),
        }
    }

    /// Integrates `f` over a cell as the sum over its face cones (cells are
    /// star-shaped with respect to their anchor).
    pub fn integrate_cell(
        &self,
        cell: usize,
        degree: usize,
        subdivide: usize,
        mut f: impl FnMut(&[f64]) -> f64,
    ) -> f64 {
        self.cells[cell]
            .faces
            .iter()
            .map(|&s| self.integrate_cone(cell, s, degree, subdivide, &mut f))
            .sum()
    }

    /// Sum of cell volumes.
    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    /// Sum of `|D_{K,σ}| + |D_{L,σ}|` over all faces.
    pub fn total_dual_volume(&self) -> f64 {
        self.faces.iter().map(|f| f.dual_inner + f.dual_outer).sum()
    }

    /// Index of the cell containing `x` (1d meshes only).
    pub fn locate_1d(&self, x: f64) -> Option<usize> {
        if self.dim != 1 {
            return None;
        }
        (0..self.n_cells()).find(|&k| {
            let (lo, hi) = self.cell_bounds_1d(k);
            x >= lo && x <= hi
        })
    }

    /// `[lo, hi]` of a 1d cell, read off its two faces.
    pub fn cell_bounds_1d(&self, cell: usize) -> (f64, f64) {
        let c = &self.cells[cell];
        let xs: Vec<f64> = c.faces.iter().map(|&f| self.faces[f].centroid[0]).collect();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_domain_rejects_degenerate_extents() {
        assert!(BoxDomain::interval(1.0, 1.0).is_err());
        assert!(BoxDomain::rectangle((0.0, 1.0), (2.0, -1.0)).is_err());
        let b = BoxDomain::rectangle((0.0, 2.0), (0.0, 1.0)).unwrap();
        assert_eq!(b.measure(), 2.0);
        assert_eq!(b.distance_to_boundary(&[0.5, 0.25]), 0.25);
    }

    #[test]
    fn cell_quadrature_recovers_volume_and_moments() {
        let mesh = build_perturbed_triangular_2d(4, &BoxDomain::unit(2), 0.3, 7).unwrap();
        for k in 0..mesh.n_cells() {
            let vol = mesh.integrate_cell(k, 1, 0, |_| 1.0);
            assert!((vol - mesh.cells[k].volume).abs() < 1e-14);
            // first moment about the centroid vanishes
            let c = mesh.cells[k].anchor.clone();
            let m = mesh.integrate_cell(k, 2, 0, |x| x[0] - c[0]);
            assert!(m.abs() < 1e-14);
        }
    }

    #[test]
    fn equal_share_policy_splits_cell_volume_evenly() {
        let mesh = build_nonuniform_1d(6, (0.0, 1.0), 3.0)
            .unwrap()
            .with_dual_policy(DualPolicy::EqualShare)
            .unwrap();
        for f in &mesh.faces {
            let k = &mesh.cells[f.inner];
            assert_eq!(f.dual_inner, k.volume / 2.0);
        }
        assert!((mesh.total_dual_volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn locate_1d_finds_containing_cell() {
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        assert_eq!(mesh.locate_1d(0.05), Some(0));
        assert_eq!(mesh.locate_1d(0.95), Some(9));
        assert_eq!(mesh.locate_1d(1.5), None);
    }
}
