//! Explicit finite volume solver for `∂t u + div F(u) = 0`:
//! `u_K^{n+1} = u_K^n - (δt_n / |K|) Σ_σ |σ| F_{K,σ}^n`.
//!
//! A step is a face pass followed by a cell pass. Both run in parallel, and
//! each cell sums its face contributions in ascending face order, so results
//! do not depend on the thread count.

use crate::data::Datum;
use crate::flux::{NumericalFlux, Stencil};
use crate::mesh::{Mesh, MeshError};
use crate::operators::{OperatorError, TimeGrid};
use crate::translations::project_l1;
use rayon::prelude::*;
use std::io::{BufRead, Write};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("periodic pairing failed: {0}")]
    Topology(String),
    #[error("solution blew up at step {step} (t = {time:e}): |u| = {value:e}")]
    BlowUp { step: usize, time: f64, value: f64 },
    #[error("history parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// Opposite sides of the box are identified.
    Periodic,
    /// Zero-gradient ghost cells: `u_ghost = u_K`.
    Outflow,
}

impl std::str::FromStr for BoundaryPolicy {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "periodic" => Ok(Self::Periodic),
            "outflow" => Ok(Self::Outflow),
            other => Err(SolverError::InvalidParameter(format!(
                "unknown boundary `{other}` (periodic | outflow)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeStepping {
    /// `N = ⌈T / δt_0⌉` equal steps, `δt_0` from the initial data.
    Uniform,
    /// `δt_n` from the current state; the last step is clipped to land on `T`.
    Adaptive,
}

/// Steps used when every wave speed vanishes.
pub const MIN_STEPS: usize = 16;

/// Growth of `sup |u|` over its initial value that counts as a blow-up.
pub const BLOWUP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct Problem {
    pub flux: Arc<dyn NumericalFlux>,
    pub initial: Arc<dyn Datum>,
    pub final_time: f64,
    pub cfl: f64,
    pub boundary: BoundaryPolicy,
    pub stepping: TimeStepping,
}

impl Problem {
    pub fn new(
        flux: Arc<dyn NumericalFlux>,
        initial: Arc<dyn Datum>,
        final_time: f64,
        cfl: f64,
    ) -> Self {
        Self {
            flux,
            initial,
            final_time,
            cfl,
            boundary: BoundaryPolicy::Periodic,
            stepping: TimeStepping::Uniform,
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_stepping(mut self, stepping: TimeStepping) -> Self {
        self.stepping = stepping;
        self
    }

    fn validate(&self, mesh: &Mesh) -> Result<(), SolverError> {
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            return Err(SolverError::InvalidParameter(format!(
                "final time must be positive, got {}",
                self.final_time
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if self.flux.physical().dim() != mesh.dim {
            return Err(SolverError::InvalidParameter(format!(
                "flux dimension {} does not match mesh dimension {}",
                self.flux.physical().dim(),
                mesh.dim
            )));
        }
        Ok(())
    }
}

/// A face on which a flux is evaluated, with the stencil it reads.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxFace {
    pub face: usize,
    pub k: usize,
    /// `None` on an outflow boundary.
    pub l: Option<usize>,
    /// Periodic image of `face`, which receives the negated flux.
    pub partner: Option<usize>,
    pub behind_k: Option<usize>,
    pub behind_l: Option<usize>,
}

/// Face connectivity under a boundary policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub flux_faces: Vec<FluxFace>,
    /// Periodic image of each boundary face.
    pub partner: Vec<Option<usize>>,
}

const PAIRING_TOL: f64 = 1e-9;

impl Topology {
    pub fn new(mesh: &Mesh, boundary: BoundaryPolicy) -> Result<Self, SolverError> {
        let partner = match boundary {
            BoundaryPolicy::Outflow => vec![None; mesh.n_faces()],
            BoundaryPolicy::Periodic => pair_periodic(mesh)?,
        };
        let across = |cell: usize, face: usize| -> Option<usize> {
            let f = &mesh.faces[face];
            f.other(cell)
                .or_else(|| partner[face].map(|p| mesh.faces[p].inner))
        };
        // the neighbour of `cell` across its face whose outward normal is
        // exactly opposite to that of `face`
        let behind = |cell: usize, face: usize| -> Option<usize> {
            let f = &mesh.faces[face];
            let o = f.orientation(cell);
            mesh.cells[cell]
                .faces
                .iter()
                .copied()
                .filter(|&g| g != face)
                .find(|&g| {
                    let h = &mesh.faces[g];
                    let oh = h.orientation(cell);
                    h.normal
                        .iter()
                        .zip(&f.normal)
                        .all(|(a, b)| (oh * a + o * b).abs() < 1e-12)
                })
                .and_then(|g| across(cell, g))
        };
        let flux_faces = mesh
            .faces
            .iter()
            .filter(|f| match partner[f.id] {
                Some(p) => f.id < p,
                None => true,
            })
            .map(|f| {
                let (l, l_face) = match (f.outer, partner[f.id]) {
                    (Some(l), _) => (Some(l), Some(f.id)),
                    (None, Some(p)) => (Some(mesh.faces[p].inner), Some(p)),
                    (None, None) => (None, None),
                };
                FluxFace {
                    face: f.id,
                    k: f.inner,
                    l,
                    partner: partner[f.id],
                    behind_k: behind(f.inner, f.id),
                    behind_l: l.zip(l_face).and_then(|(l, g)| behind(l, g)),
                }
            })
            .collect();
        Ok(Self {
            flux_faces,
            partner,
        })
    }
}

/// Pairs each boundary face with the face on the opposite side of the box
/// whose centroid differs only along the axis normal to both.
fn pair_periodic(mesh: &Mesh) -> Result<Vec<Option<usize>>, SolverError> {
    let d = mesh.dim;
    let lo = &mesh.domain.lo;
    let hi = &mesh.domain.hi;
    let scale = (0..d).map(|i| mesh.domain.extent(i)).fold(0.0, f64::max);
    let tol = PAIRING_TOL * scale;
    let side = |f: &crate::mesh::Face| -> Option<(usize, bool)> {
        (0..d).find_map(|i| {
            if (f.centroid[i] - lo[i]).abs() < tol {
                Some((i, false))
            } else if (f.centroid[i] - hi[i]).abs() < tol {
                Some((i, true))
            } else {
                None
            }
        })
    };
    let mut partner = vec![None; mesh.n_faces()];
    // boundary faces sorted by (axis, transverse centroid) on each side
    let mut buckets: Vec<[Vec<(Vec<f64>, usize)>; 2]> = vec![[Vec::new(), Vec::new()]; d];
    for f in mesh.boundary_faces() {
        let (axis, upper) = side(f).ok_or_else(|| {
            SolverError::Topology(format!("boundary face {} is not on a box side", f.id))
        })?;
        let key: Vec<f64> = (0..d).filter(|&i| i != axis).map(|i| f.centroid[i]).collect();
        buckets[axis][upper as usize].push((key, f.id));
    }
    for (axis, [low, high]) in buckets.iter_mut().enumerate() {
        if low.len() != high.len() {
            return Err(SolverError::Topology(format!(
                "axis {axis}: {} faces on the lower side, {} on the upper",
                low.len(),
                high.len()
            )));
        }
        let order = |a: &(Vec<f64>, usize), b: &(Vec<f64>, usize)| {
            a.0.partial_cmp(&b.0).expect("finite centroids")
        };
        low.sort_by(order);
        high.sort_by(order);
        for ((ka, a), (kb, b)) in low.iter().zip(high.iter()) {
            if ka.iter().zip(kb).any(|(x, y)| (x - y).abs() > tol) {
                return Err(SolverError::Topology(format!(
                    "faces {a} and {b} on axis {axis} are not periodic images"
                )));
            }
            if (mesh.faces[*a].area - mesh.faces[*b].area).abs() > tol {
                return Err(SolverError::Topology(format!(
                    "faces {a} and {b} on axis {axis} differ in size"
                )));
            }
            partner[*a] = Some(*b);
            partner[*b] = Some(*a);
        }
    }
    Ok(partner)
}

/// Cell values at every time node, `history[n][K] = u_K^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: TimeGrid,
    pub history: Vec<Vec<f64>>,
}

impl SpaceTimeField {
    pub fn initial(&self) -> &[f64] {
        &self.history[0]
    }

    pub fn last(&self) -> &[f64] {
        self.history.last().expect("at least one level")
    }

    pub fn n_cells(&self) -> usize {
        self.history[0].len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub field: SpaceTimeField,
    pub steps: usize,
    pub mass_initial: f64,
    pub mass_final: f64,
    /// `|mass_final - mass_initial| / max(|mass_initial|, ‖u^0‖_{L¹})`.
    pub mass_drift: f64,
    /// `[min, max]` of the solution over all levels.
    pub range: (f64, f64),
}

/// `λ_K = Σ_σ |σ| λ_σ` on `range`, for every cell.
fn cell_wave_sums(mesh: &Mesh, flux: &dyn NumericalFlux, range: (f64, f64)) -> Vec<f64> {
    mesh.cells
        .iter()
        .map(|c| {
            c.faces
                .iter()
                .map(|&f| {
                    let face = &mesh.faces[f];
                    face.area * flux.wave_speed(range.0, range.1, &face.normal)
                })
                .sum()
        })
        .collect()
}

/// `δt = cfl · min_K 2|K| / Σ_σ |σ| λ_σ`, `None` when all speeds vanish.
pub fn stable_dt(
    mesh: &Mesh,
    flux: &dyn NumericalFlux,
    range: (f64, f64),
    cfl: f64,
) -> Option<f64> {
    let dt = mesh
        .cells
        .iter()
        .zip(cell_wave_sums(mesh, flux, range))
        .filter(|(_, s)| *s > 0.0)
        .map(|(c, s)| 2.0 * c.volume / s)
        .fold(f64::INFINITY, f64::min);
    dt.is_finite().then_some(cfl * dt)
}

/// The uniform grid of a problem on `mesh` with initial values `u0`.
pub fn select_grid(mesh: &Mesh, problem: &Problem, u0: &[f64]) -> Result<TimeGrid, SolverError> {
    let range = value_range(u0);
    let steps = match stable_dt(mesh, problem.flux.as_ref(), range, problem.cfl) {
        // a ratio within rounding of an integer does not earn an extra step
        Some(dt) => ((problem.final_time / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize,
        None => MIN_STEPS,
    };
    Ok(TimeGrid::uniform(problem.final_time, steps)?)
}

fn value_range(u: &[f64]) -> (f64, f64) {
    u.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
}

/// The face pass: `|σ| F_σ` for every face, oriented along its normal.
pub fn face_fluxes(mesh: &Mesh, topo: &Topology, flux: &dyn NumericalFlux, u: &[f64]) -> Vec<f64> {
    let computed: Vec<(usize, Option<usize>, f64)> = topo
        .flux_faces
        .par_iter()
        .map(|ff| {
            let face = &mesh.faces[ff.face];
            let uk = u[ff.k];
            let s = Stencil {
                uk,
                ul: ff.l.map_or(uk, |l| u[l]),
                behind_k: ff.behind_k.map(|c| u[c]),
                behind_l: ff.behind_l.map(|c| u[c]),
            };
            (ff.face, ff.partner, face.area * flux.normal_flux(s, &face.normal))
        })
        .collect();
    let mut out = vec![0.0; mesh.n_faces()];
    for (f, p, v) in computed {
        out[f] = v;
        if let Some(p) = p {
            out[p] = -v;
        }
    }
    out
}

/// One explicit Euler step of length `dt`.
pub fn step(
    mesh: &Mesh,
    topo: &Topology,
    flux: &dyn NumericalFlux,
    u: &[f64],
    dt: f64,
) -> Vec<f64> {
    let fluxes = face_fluxes(mesh, topo, flux, u);
    mesh.cells
        .par_iter()
        .map(|c| {
            let out: f64 = c
                .faces
                .iter()
                .map(|&f| mesh.faces[f].orientation(c.id) * fluxes[f])
                .sum();
            u[c.id] - dt / c.volume * out
        })
        .collect()
}

fn mass(mesh: &Mesh, u: &[f64]) -> f64 {
    mesh.cells.iter().zip(u).map(|(c, v)| c.volume * v).sum()
}

fn l1(mesh: &Mesh, u: &[f64]) -> f64 {
    mesh.cells.iter().zip(u).map(|(c, v)| c.volume * v.abs()).sum()
}

/// Runs `problem` from the cell means of its initial datum.
pub fn solve(mesh: &Mesh, problem: &Problem) -> Result<SolveReport, SolverError> {
    let u0 = project_l1(mesh, problem.initial.as_ref()).values;
    solve_from(mesh, problem, u0)
}

/// Runs `problem` from given initial cell values.
pub fn solve_from(mesh: &Mesh, problem: &Problem, u0: Vec<f64>) -> Result<SolveReport, SolverError> {
    problem.validate(mesh)?;
    if u0.len() != mesh.n_cells() {
        return Err(SolverError::InvalidParameter(format!(
            "{} initial values for {} cells",
            u0.len(),
            mesh.n_cells()
        )));
    }
    let topo = Topology::new(mesh, problem.boundary)?;
    let flux = problem.flux.as_ref();
    let sup0 = u0.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let limit = BLOWUP_FACTOR * sup0.max(f64::MIN_POSITIVE);
    let mass0 = mass(mesh, &u0);
    let scale = mass0.abs().max(l1(mesh, &u0));
    let t_end = problem.final_time;

    let mut history = vec![u0];
    let mut nodes = vec![0.0];
    let uniform = match problem.stepping {
        TimeStepping::Uniform => Some(select_grid(mesh, problem, &history[0])?),
        TimeStepping::Adaptive => None,
    };
    let mut n = 0;
    loop {
        let t = *nodes.last().expect("nonempty");
        let dt = match &uniform {
            Some(grid) if n < grid.n_steps() => grid.dt(n),
            Some(_) => break,
            None => {
                if t >= t_end {
                    break;
                }
                let range = value_range(history.last().expect("nonempty"));
                let dt = stable_dt(mesh, flux, range, problem.cfl)
                    .unwrap_or(t_end / MIN_STEPS as f64);
                // avoid a sliver step at the end
                if t + dt * (1.0 + 1e-12) >= t_end {
                    t_end - t
                } else {
                    dt
                }
            }
        };
        let next = step(mesh, &topo, flux, history.last().expect("nonempty"), dt);
        let worst = next.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if !worst.is_finite() || worst > limit {
            return Err(SolverError::BlowUp {
                step: n,
                time: t + dt,
                value: worst,
            });
        }
        history.push(next);
        n += 1;
        nodes.push(match &uniform {
            Some(grid) => grid.t(n),
            None if t + dt >= t_end => t_end,
            None => t + dt,
        });
    }
    let grid = match uniform {
        Some(g) => g,
        None => TimeGrid::new(nodes)?,
    };
    let mass_final = mass(mesh, history.last().expect("nonempty"));
    let range = history
        .iter()
        .map(|u| value_range(u))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Ok(SolveReport {
        steps: n,
        mass_initial: mass0,
        mass_final,
        mass_drift: if scale > 0.0 {
            (mass_final - mass0).abs() / scale
        } else {
            (mass_final - mass0).abs()
        },
        range,
        field: SpaceTimeField { grid, history },
    })
}

/// `cell_id,t,u` rows for the levels in `levels`.
pub fn snapshot_csv(field: &SpaceTimeField, levels: &[usize], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("cell_id,t,u\n");
    for &n in levels {
        let t = field.grid.t(n);
        for (k, v) in field.history[n].iter().enumerate() {
            out.push_str(&format!("{k},{},{}\n", crate::mesh::real(t), crate::mesh::real(*v)));
        }
    }
    out
}

pub const HISTORY_HEADER: &str = "lwfv-history v1";

/// Writes every level as `level <n> <t> <u_0> … <u_{K-1}>`.
pub fn write_history(field: &SpaceTimeField, mut w: impl Write) -> std::io::Result<()> {
    writeln!(
        w,
        "{HISTORY_HEADER} cells={} levels={}",
        field.n_cells(),
        field.history.len()
    )?;
    for (n, u) in field.history.iter().enumerate() {
        write!(w, "level {n} {}", crate::mesh::real(field.grid.t(n)))?;
        for v in u {
            write!(w, " {}", crate::mesh::real(*v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_history(r: impl BufRead) -> Result<SpaceTimeField, SolverError> {
    let parse_err = |line: usize, message: String| SolverError::Parse { line, message };
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input".into()))?;
    let header = header?;
    let rest = header
        .strip_prefix(HISTORY_HEADER)
        .ok_or_else(|| parse_err(1, format!("expected `{HISTORY_HEADER}`")))?;
    let mut cells = None;
    let mut levels = None;
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some(("cells", v)) => cells = v.parse::<usize>().ok(),
            Some(("levels", v)) => levels = v.parse::<usize>().ok(),
            _ => return Err(parse_err(1, format!("unexpected `{tok}`"))),
        }
    }
    let (cells, levels) = cells
        .zip(levels)
        .ok_or_else(|| parse_err(1, "header needs cells=<n> levels=<n>".into()))?;
    let mut nodes = Vec::with_capacity(levels);
    let mut history = Vec::with_capacity(levels);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("level") {
            return Err(parse_err(lineno, "expected `level`".into()));
        }
        let n: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "bad level index".into()))?;
        if n != history.len() {
            return Err(parse_err(lineno, format!("level {n} out of sequence")));
        }
        let nums: Vec<f64> = toks
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        if nums.len() != cells + 1 {
            return Err(parse_err(
                lineno,
                format!("expected {} values, found {}", cells + 1, nums.len()),
            ));
        }
        nodes.push(nums[0]);
        history.push(nums[1..].to_vec());
    }
    if history.len() != levels {
        return Err(parse_err(0, format!("declared {levels} levels, found {}", history.len())));
    }
    Ok(SpaceTimeField {
        grid: TimeGrid::new(nodes)?,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Constant, Sine, Step};
    use crate::flux::{FluxFunction, Muscl, Rusanov, Upwind};
    use crate::mesh::{
        build_cartesian_2d, build_perturbed_triangular_2d, build_uniform_1d, BoxDomain,
    };

    fn upwind_problem(u0: impl Datum + 'static, t: f64) -> Problem {
        Problem::new(
            Arc::new(Upwind::new(vec![1.0]).unwrap()),
            Arc::new(u0),
            t,
            0.5,
        )
    }

    #[test]
    fn cfl_step_is_half_a_cell_at_half_cfl() {
        let mesh = build_uniform_1d(20, (0.0, 1.0)).unwrap();
        let f = Upwind::new(vec![1.0]).unwrap();
        let dt = stable_dt(&mesh, &f, (0.0, 1.0), 0.5).unwrap();
        assert!((dt - 0.5 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn unit_cfl_upwind_is_an_exact_shift() {
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        let p = upwind_problem(Step::new(0, 0.5), 0.3).with_boundary(BoundaryPolicy::Periodic);
        let p = Problem { cfl: 1.0, ..p };
        let r = solve(&mesh, &p).unwrap();
        assert_eq!(r.steps, 3);
        let expected: Vec<f64> = (0..10)
            .map(|k| if (3..8).contains(&k) { 1.0 } else { 0.0 })
            .collect();
        for (a, b) in r.field.last().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn periodic_pairing_on_every_family() {
        let unit = BoxDomain::unit(2);
        let meshes = [
            build_uniform_1d(7, (0.0, 1.0)).unwrap(),
            build_cartesian_2d(5, 3, &unit).unwrap(),
            build_perturbed_triangular_2d(4, &unit, 0.3, 42).unwrap(),
        ];
        for m in &meshes {
            let topo = Topology::new(m, BoundaryPolicy::Periodic).unwrap();
            let bdry = m.boundary_faces().count();
            assert_eq!(topo.partner.iter().filter(|p| p.is_some()).count(), bdry);
            assert_eq!(topo.flux_faces.len(), m.n_faces() - bdry / 2);
            assert!(topo.flux_faces.iter().all(|f| f.l.is_some()));
        }
    }

    #[test]
    fn behind_cells_exist_only_on_aligned_meshes() {
        let m = build_uniform_1d(6, (0.0, 1.0)).unwrap();
        let topo = Topology::new(&m, BoundaryPolicy::Periodic).unwrap();
        assert!(topo
            .flux_faces
            .iter()
            .all(|f| f.behind_k.is_some() && f.behind_l.is_some()));
        let topo = Topology::new(&m, BoundaryPolicy::Outflow).unwrap();
        assert_eq!(topo.flux_faces.iter().filter(|f| f.behind_k.is_none()).count(), 1);
        let tri = build_perturbed_triangular_2d(3, &BoxDomain::unit(2), 0.2, 1).unwrap();
        let topo = Topology::new(&tri, BoundaryPolicy::Periodic).unwrap();
        assert!(topo.flux_faces.iter().all(|f| f.behind_k.is_none()));
    }

    #[test]
    fn periodic_mass_is_conserved() {
        let unit = BoxDomain::unit(2);
        let mesh = build_perturbed_triangular_2d(6, &unit, 0.3, 7).unwrap();
        let p = Problem::new(
            Arc::new(Rusanov::new(FluxFunction::Burgers {
                direction: vec![1.0, 1.0],
            })),
            Arc::new(Sine::diagonal(2, 0.5, 0.25)),
            0.1,
            0.4,
        );
        let r = solve(&mesh, &p).unwrap();
        assert!(r.mass_drift < 1e-13, "{}", r.mass_drift);
        assert!(r.range.0 >= 0.25 - 1e-12 && r.range.1 <= 0.75 + 1e-12);
    }

    #[test]
    fn constants_are_preserved() {
        let mesh = build_cartesian_2d(6, 6, &BoxDomain::unit(2)).unwrap();
        for boundary in [BoundaryPolicy::Periodic, BoundaryPolicy::Outflow] {
            let p = Problem::new(
                Arc::new(Muscl::new(vec![0.7, -0.3]).unwrap()),
                Arc::new(Constant(2.5)),
                0.2,
                0.5,
            )
            .with_boundary(boundary);
            let r = solve(&mesh, &p).unwrap();
            assert!(r.field.last().iter().all(|v| (v - 2.5).abs() < 1e-13));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mesh = build_perturbed_triangular_2d(5, &BoxDomain::unit(2), 0.3, 3).unwrap();
        let p = Problem::new(
            Arc::new(Rusanov::new(FluxFunction::Burgers {
                direction: vec![1.0, 1.0],
            })),
            Arc::new(Sine::diagonal(2, 0.5, 0.25)),
            0.05,
            0.4,
        );
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| solve(&mesh, &p).unwrap().field)
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn adaptive_stepping_lands_on_final_time() {
        let mesh = build_uniform_1d(30, (0.0, 1.0)).unwrap();
        let p = upwind_problem(Sine::diagonal(1, 0.0, 1.0), 0.37)
            .with_stepping(TimeStepping::Adaptive);
        let r = solve(&mesh, &p).unwrap();
        assert_eq!(r.field.grid.final_time(), 0.37);
    }

    #[test]
    fn zero_speed_uses_minimum_steps() {
        let mesh = build_uniform_1d(10, (0.0, 1.0)).unwrap();
        let p = Problem::new(
            Arc::new(Rusanov::new(FluxFunction::Burgers {
                direction: vec![1.0],
            })),
            Arc::new(Constant(0.0)),
            1.0,
            0.5,
        );
        assert_eq!(solve(&mesh, &p).unwrap().steps, MIN_STEPS);
    }

    #[test]
    fn unstable_cfl_is_caught() {
        let mesh = build_uniform_1d(50, (0.0, 1.0)).unwrap();
        let p = upwind_problem(Sine::diagonal(1, 0.0, 1.0), 1.0);
        // bypass validation through a grid far beyond the stable step
        let mut bad = p.clone();
        bad.cfl = 1.0;
        let topo = Topology::new(&mesh, BoundaryPolicy::Periodic).unwrap();
        let mut u = project_l1(&mesh, p.initial.as_ref()).values;
        for _ in 0..200 {
            u = step(&mesh, &topo, bad.flux.as_ref(), &u, 3.0 / 50.0);
        }
        assert!(u.iter().any(|v| v.abs() > 1e6));
        assert!(solve(&mesh, &Problem { cfl: 1.5, ..p }).is_err());
    }

    #[test]
    fn history_round_trip_is_exact() {
        let mesh = build_uniform_1d(8, (0.0, 1.0)).unwrap();
        let r = solve(&mesh, &upwind_problem(Sine::diagonal(1, 0.1, 0.7), 0.2)).unwrap();
        let mut buf = Vec::new();
        write_history(&r.field, &mut buf).unwrap();
        let back = read_history(buf.as_slice()).unwrap();
        assert_eq!(back, r.field);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&format!("lwfv-history v1 cells=8 levels={}", r.steps + 1)));
        let broken = text.replacen("level 1 ", "level 2 ", 1);
        assert!(matches!(
            read_history(broken.as_bytes()),
            Err(SolverError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn snapshot_csv_layout() {
        let mesh = build_uniform_1d(4, (0.0, 1.0)).unwrap();
        let r = solve(&mesh, &upwind_problem(Constant(1.0), 0.1)).unwrap();
        let csv = snapshot_csv(&r.field, &[0, r.steps], &["hash abc".into()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# hash abc");
        assert_eq!(lines[1], "cell_id,t,u");
        assert_eq!(lines.len(), 2 + 8);
    }
}
