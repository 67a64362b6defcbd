use super::{BoxDomain, Cell, DualPolicy, Face, Mesh, MeshError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Uniform partition of `interval` into `n_cells` segments.
pub fn build_uniform_1d(n_cells: usize, interval: (f64, f64)) -> Result<Mesh, MeshError> {
    build_nonuniform_1d(n_cells, interval, 1.0)
}

/// Segments alternating in length `h, ratio*h, h, ...`, scaled to fill `interval`.
pub fn build_nonuniform_1d(
    n_cells: usize,
    interval: (f64, f64),
    ratio: f64,
) -> Result<Mesh, MeshError> {
    if n_cells < 2 {
        return Err(MeshError::InvalidParameter(format!(
            "need at least 2 cells for an interior face, got {n_cells}"
        )));
    }
    if !(1.0..=10.0).contains(&ratio) {
        return Err(MeshError::InvalidParameter(format!(
            "size ratio {ratio} outside [1, 10]"
        )));
    }
    let domain = BoxDomain::interval(interval.0, interval.1)?;
    let (a, b) = interval;
    let n_short = n_cells.div_ceil(2) as f64;
    let n_long = (n_cells / 2) as f64;
    let h = (b - a) / (n_short + ratio * n_long);
    let mut points = Vec::with_capacity(n_cells + 1);
    points.push(a);
    let mut x = a;
    for i in 0..n_cells {
        x += if i % 2 == 0 { h } else { ratio * h };
        points.push(x);
    }
    points[n_cells] = b;
    mesh_from_breakpoints(&points, domain)
}

fn mesh_from_breakpoints(points: &[f64], domain: BoxDomain) -> Result<Mesh, MeshError> {
    let n = points.len() - 1;
    let cells = (0..n)
        .map(|i| {
            let (lo, hi) = (points[i], points[i + 1]);
            Cell {
                id: i,
                volume: hi - lo,
                diameter: hi - lo,
                anchor: vec![0.5 * (lo + hi)],
                faces: Vec::new(),
            }
        })
        .collect::<Vec<_>>();
    if let Some(c) = cells.iter().find(|c| !(c.volume > 0.0)) {
        return Err(MeshError::Geometry(format!("cell {} has length {}", c.id, c.volume)));
    }
    let faces = (0..=n)
        .map(|i| {
            let (inner, outer, normal) = if i == 0 {
                (0, None, -1.0)
            } else if i == n {
                (n - 1, None, 1.0)
            } else {
                (i - 1, Some(i), 1.0)
            };
            Face {
                id: i,
                area: 1.0,
                normal: vec![normal],
                inner,
                outer,
                dual_volume: 0.0,
                dual_inner: 0.0,
                dual_outer: 0.0,
                centroid: vec![points[i]],
            }
        })
        .collect();
    Mesh::from_parts(domain, cells, faces).with_dual_policy(DualPolicy::Cones)
}

/// Axis-aligned `nx x ny` rectangles with centroid anchors and cone duals.
pub fn build_cartesian_2d(nx: usize, ny: usize, rect: &BoxDomain) -> Result<Mesh, MeshError> {
    if nx < 2 || ny < 2 {
        return Err(MeshError::InvalidParameter(format!(
            "cartesian grid needs nx, ny >= 2, got {nx} x {ny}"
        )));
    }
    let rect = BoxDomain::new(rect.lo.clone(), rect.hi.clone())?;
    if rect.dim() != 2 {
        return Err(MeshError::InvalidParameter("cartesian_2d needs a 2d box".into()));
    }
    let grid = PolygonMesh::grid(nx, ny, &rect, |_, _, p| p);
    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let v = |a: usize, b: usize| b * (nx + 1) + a;
            cells.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    PolygonMesh {
        vertices: grid,
        cells,
    }
    .to_mesh(rect)
}

/// Structured triangulation of `n x n` squares (each split along its rising
/// diagonal) with interior vertices displaced by up to `jitter` times the local
/// spacing in each coordinate. Boundary vertices are left in place.
pub fn build_perturbed_triangular_2d(
    n: usize,
    rect: &BoxDomain,
    jitter: f64,
    seed: u64,
) -> Result<Mesh, MeshError> {
    perturbed_triangles(n, rect, jitter, seed)?.to_mesh(rect.clone())
}

pub(crate) fn perturbed_triangles(
    n: usize,
    rect: &BoxDomain,
    jitter: f64,
    seed: u64,
) -> Result<PolygonMesh, MeshError> {
    if n < 2 {
        return Err(MeshError::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(MeshError::Geometry(format!(
            "jitter {jitter} outside [0, 0.5) can invert triangles"
        )));
    }
    let rect = BoxDomain::new(rect.lo.clone(), rect.hi.clone())?;
    if rect.dim() != 2 {
        return Err(MeshError::InvalidParameter("triangular mesh needs a 2d box".into()));
    }
    let hx = rect.extent(0) / n as f64;
    let hy = rect.extent(1) / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = PolygonMesh::grid(n, n, &rect, |i, j, p| {
        if i == 0 || j == 0 || i == n || j == n || jitter == 0.0 {
            return p;
        }
        let dx: f64 = rng.gen_range(-1.0..1.0);
        let dy: f64 = rng.gen_range(-1.0..1.0);
        [p[0] + jitter * hx * dx, p[1] + jitter * hy * dy]
    });
    let mut cells = Vec::with_capacity(2 * n * n);
    let v = |a: usize, b: usize| b * (n + 1) + a;
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            cells.push(vec![v(i, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    Ok(PolygonMesh { vertices, cells })
}

/// Planar polygonal cell complex: vertex coordinates plus counter-clockwise
/// vertex loops per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonMesh {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
}

impl PolygonMesh {
    /// `(nx+1) x (ny+1)` lattice, row-major, passed through `place(i, j, point)`.
    fn grid(
        nx: usize,
        ny: usize,
        rect: &BoxDomain,
        mut place: impl FnMut(usize, usize, [f64; 2]) -> [f64; 2],
    ) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                let x = if i == nx {
                    rect.hi[0]
                } else {
                    rect.lo[0] + rect.extent(0) * i as f64 / nx as f64
                };
                let y = if j == ny {
                    rect.hi[1]
                } else {
                    rect.lo[1] + rect.extent(1) * j as f64 / ny as f64
                };
                out.push(place(i, j, [x, y]));
            }
        }
        out
    }

    /// Splits every triangle into four by joining edge midpoints. Children are
    /// similar to their parent, so the set of neighbour configurations (and
    /// hence the regularity parameters) is stable under repetition.
    pub fn subdivide_triangles(&self) -> Result<PolygonMesh, MeshError> {
        let mut vertices = self.vertices.clone();
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                vertices.len() - 1
            })
        };
        let mut cells = Vec::with_capacity(4 * self.cells.len());
        for (id, tri) in self.cells.iter().enumerate() {
            let &[a, b, c] = tri.as_slice() else {
                return Err(MeshError::InvalidParameter(format!(
                    "cell {id} is not a triangle ({} vertices)",
                    tri.len()
                )));
            };
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            cells.push(vec![a, ab, ca]);
            cells.push(vec![ab, b, bc]);
            cells.push(vec![ca, bc, c]);
            cells.push(vec![ab, bc, ca]);
        }
        Ok(PolygonMesh { vertices, cells })
    }

    /// Builds faces, centroid anchors and cone duals.
    pub fn to_mesh(&self, domain: BoxDomain) -> Result<Mesh, MeshError> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (id, poly) in self.cells.iter().enumerate() {
            let pts: Vec<[f64; 2]> = poly.iter().map(|&v| self.vertices[v]).collect();
            let (area, centroid) = polygon_area_centroid(&pts);
            if !(area > 0.0) {
                return Err(MeshError::Geometry(format!(
                    "cell {id} is inverted or degenerate (signed area {area:e})"
                )));
            }
            let mut diameter: f64 = 0.0;
            for (i, p) in pts.iter().enumerate() {
                for q in &pts[i + 1..] {
                    diameter = diameter.max((p[0] - q[0]).hypot(p[1] - q[1]));
                }
            }
            cells.push(Cell {
                id,
                volume: area,
                diameter,
                anchor: centroid.to_vec(),
                faces: Vec::new(),
            });
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        let mut faces: Vec<Face> = Vec::new();
        for (cid, poly) in self.cells.iter().enumerate() {
            for i in 0..poly.len() {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                let key = (a.min(b), a.max(b));
                if let Some(&fid) = edges.get(&key) {
                    let face = &mut faces[fid];
                    if face.outer.is_some() || face.inner == cid {
                        return Err(MeshError::Geometry(format!(
                            "edge {a}-{b} is shared by more than two cells"
                        )));
                    }
                    face.outer = Some(cid);
                } else {
                    let (p, q) = (self.vertices[a], self.vertices[b]);
                    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                    let len = dx.hypot(dy);
                    if !(len > 0.0) {
                        return Err(MeshError::Geometry(format!("edge {a}-{b} has zero length")));
                    }
                    edges.insert(key, faces.len());
                    faces.push(Face {
                        id: faces.len(),
                        area: len,
                        normal: vec![dy / len, -dx / len],
                        inner: cid,
                        outer: None,
                        dual_volume: 0.0,
                        dual_inner: 0.0,
                        dual_outer: 0.0,
                        centroid: vec![0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])],
                    });
                }
            }
        }
        Mesh::from_parts(domain, cells, faces).with_dual_policy(DualPolicy::Cones)
    }
}

fn polygon_area_centroid(pts: &[[f64; 2]]) -> (f64, [f64; 2]) {
    // shoelace about the first vertex to limit cancellation
    let o = pts[0];
    let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 1..pts.len() - 1 {
        let p = [pts[i][0] - o[0], pts[i][1] - o[1]];
        let q = [pts[i + 1][0] - o[0], pts[i + 1][1] - o[1]];
        let cross = p[0] * q[1] - q[0] * p[1];
        a2 += cross;
        cx += cross * (p[0] + q[0]);
        cy += cross * (p[1] + q[1]);
    }
    let area = 0.5 * a2;
    (area, [o[0] + cx / (3.0 * a2), o[1] + cy / (3.0 * a2)])
}
