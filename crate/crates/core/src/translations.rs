//! Discrete translation seminorms.
//!
//! `T_M u = Σ_{σ=K|L} |D_σ| |u_K - u_L|` plays the role of the `L¹` norm of
//! translates on unstructured meshes; it vanishes under refinement for any
//! fixed `u ∈ L¹`, uniformly over `L¹`-convergent sequences.

use crate::data::Datum;
use crate::mesh::{compute_quality, refine, Mesh, MeshError, MeshFamily};
use crate::operators::TimeGrid;
use crate::quadrature::integrate_interval;
use crate::study::{fit_slope, fmt_real, CsvRow};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TranslationError {
    #[error("field has {got} values, mesh has {expected} cells")]
    CellMismatch { expected: usize, got: usize },
    #[error("history has {got} time levels, grid needs {expected}")]
    TimeMismatch { expected: usize, got: usize },
    #[error("a decay study needs at least 3 levels, got {0}")]
    TooFewLevels(usize),
    #[error("seminorm bound violated at level {level}, p = {p}: {value:e} > {bound:e}")]
    Bound {
        level: usize,
        p: usize,
        value: f64,
        bound: f64,
    },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Cell values `u_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub values: Vec<f64>,
}

impl CellField {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        Self::new(vec![c; mesh.n_cells()])
    }

    /// `Σ_K |K| |u_K|`
    pub fn l1_norm(&self, mesh: &Mesh) -> f64 {
        mesh.cells.iter().zip(&self.values).map(|(c, u)| c.volume * u.abs()).sum()
    }

    /// `Σ_K |K| u_K`
    pub fn mass(&self, mesh: &Mesh) -> f64 {
        mesh.cells.iter().zip(&self.values).map(|(c, u)| c.volume * u).sum()
    }

    pub fn check(&self, mesh: &Mesh) -> Result<(), TranslationError> {
        if self.values.len() == mesh.n_cells() {
            Ok(())
        } else {
            Err(TranslationError::CellMismatch {
                expected: mesh.n_cells(),
                got: self.values.len(),
            })
        }
    }
}

/// Subsamples per cell for discontinuous data in 2d.
pub const SUBSAMPLES_PER_CELL: usize = 64;

/// `∫_K u w dx`. Smooth data use the degree-4 cone rule; jumps are handled
/// by exact splitting at breakpoints in 1d and by about
/// [`SUBSAMPLES_PER_CELL`] midpoint subsamples in 2d.
pub fn integrate_on_cell(
    mesh: &Mesh,
    cell: usize,
    u: &dyn Datum,
    mut weight: impl FnMut(&[f64]) -> f64,
) -> f64 {
    if mesh.dim == 1 {
        let (lo, hi) = mesh.cell_bounds_1d(cell);
        let mut cuts = vec![lo];
        cuts.extend(u.breakpoints_1d().into_iter().filter(|&b| b > lo && b < hi));
        cuts.push(hi);
        return cuts
            .windows(2)
            .map(|w| integrate_interval(w[0], w[1], 3, |x| u.value(&[x]) * weight(&[x])))
            .sum();
    }
    if u.is_smooth() {
        mesh.integrate_cell(cell, 4, 0, |x| u.value(x) * weight(x))
    } else {
        let nk = mesh.cells[cell].n_faces().max(1);
        let m = ((SUBSAMPLES_PER_CELL as f64 / nk as f64).sqrt().ceil() as usize).max(1);
        mesh.integrate_cell(cell, 0, m, |x| u.value(x) * weight(x))
    }
}

/// Cell means `u_K = (1/|K|) ∫_K u`.
pub fn project_l1(mesh: &Mesh, u: &dyn Datum) -> CellField {
    CellField::new(
        (0..mesh.n_cells())
            .into_par_iter()
            .map(|k| integrate_on_cell(mesh, k, u, |_| 1.0) / mesh.cells[k].volume)
            .collect(),
    )
}

/// `T_M u = Σ_{σ ∈ E_int} |D_σ| |u_K - u_L|`
pub fn translation_seminorm(mesh: &Mesh, f: &CellField) -> Result<f64, TranslationError> {
    f.check(mesh)?;
    Ok(jump_sum(mesh, &f.values))
}

fn jump_sum(mesh: &Mesh, u: &[f64]) -> f64 {
    mesh.interior_faces()
        .map(|s| s.dual_volume * (u[s.inner] - u[s.outer.expect("interior")]).abs())
        .sum()
}

fn time_jump(mesh: &Mesh, a: &[f64], b: &[f64]) -> f64 {
    mesh.cells
        .iter()
        .zip(a.iter().zip(b))
        .map(|(c, (x, y))| c.volume * (x - y).abs())
        .sum()
}

fn check_history(
    mesh: &Mesh,
    grid: &TimeGrid,
    history: &[Vec<f64>],
) -> Result<(), TranslationError> {
    if history.len() != grid.n_steps() + 1 {
        return Err(TranslationError::TimeMismatch {
            expected: grid.n_steps() + 1,
            got: history.len(),
        });
    }
    for level in history {
        if level.len() != mesh.n_cells() {
            return Err(TranslationError::CellMismatch {
                expected: mesh.n_cells(),
                got: level.len(),
            });
        }
    }
    Ok(())
}

/// `T_{M,T} u` for a history indexed `0..=N`, returned as
/// `(space, time)`:
/// `space = Σ_{n=0}^{N-1} δt_n Σ_σ |D_σ| [u^{n+1}]_σ`,
/// `time = Σ_{n=1}^{N-1} δt_n Σ_K |K| |u_K^{n+1} - u_K^n|`.
pub fn spacetime_translation_seminorm(
    mesh: &Mesh,
    grid: &TimeGrid,
    history: &[Vec<f64>],
) -> Result<(f64, f64), TranslationError> {
    check_history(mesh, grid, history)?;
    let n = grid.n_steps();
    let space = (0..n).map(|i| grid.dt(i) * jump_sum(mesh, &history[i + 1])).sum();
    let time = (1..n)
        .map(|i| grid.dt(i) * time_jump(mesh, &history[i + 1], &history[i]))
        .sum();
    Ok((space, time))
}

/// Jump sums in the indexing of the scheme, which control the consistency
/// residuals: `space = Σ_{n=0}^{N-1} δt_n Σ_σ |D_σ| [u^n]_σ` and
/// `time = Σ_{n=0}^{N-1} δt_n Σ_K |K| |u_K^{n+1} - u_K^n|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSums {
    pub space: f64,
    pub time: f64,
}

pub fn scheme_jump_sums(
    mesh: &Mesh,
    grid: &TimeGrid,
    history: &[Vec<f64>],
) -> Result<JumpSums, TranslationError> {
    check_history(mesh, grid, history)?;
    let n = grid.n_steps();
    Ok(JumpSums {
        space: (0..n).map(|i| grid.dt(i) * jump_sum(mesh, &history[i])).sum(),
        time: (0..n)
            .map(|i| grid.dt(i) * time_jump(mesh, &history[i + 1], &history[i]))
            .sum(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub level: usize,
    pub h: f64,
    pub t_value: f64,
    /// `2 M_u h |Ω|`, `NaN` when no Lipschitz constant is known.
    pub bound_lipschitz: f64,
    /// `N_E θ_M Σ_K |K| |u_K|`
    pub bound_l1: f64,
}

impl CsvRow for DecayRow {
    const HEADER: &'static str = "level,h,T_value,bound_lipschitz,bound_l1";

    fn fields(&self) -> Vec<String> {
        let mut v = vec![self.level.to_string()];
        v.extend([self.h, self.t_value, self.bound_lipschitz, self.bound_l1].map(fmt_real));
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayStudy {
    pub rows: Vec<DecayRow>,
    pub slope: Option<f64>,
}

impl DecayStudy {
    /// Whether every level respects both bounds (Lipschitz bound only when known).
    pub fn within_bounds(&self) -> bool {
        self.rows.iter().all(|r| {
            r.t_value <= r.bound_l1 * (1.0 + 1e-12)
                && (r.bound_lipschitz.is_nan() || r.t_value <= r.bound_lipschitz)
        })
    }

    /// Last level over first level.
    pub fn reduction(&self) -> f64 {
        let first = self.rows.first().map_or(0.0, |r| r.t_value);
        let last = self.rows.last().map_or(0.0, |r| r.t_value);
        if first == 0.0 {
            0.0
        } else {
            last / first
        }
    }
}

/// `T_{M^(m)} u` on `levels` refinements of `family`.
pub fn translation_decay_study(
    family: &MeshFamily,
    u: &dyn Datum,
    levels: usize,
) -> Result<DecayStudy, TranslationError> {
    if levels < 3 {
        return Err(TranslationError::TooFewLevels(levels));
    }
    let meshes = refine(family, levels)?;
    let omega = family.domain().measure();
    let rows: Vec<DecayRow> = meshes
        .par_iter()
        .enumerate()
        .map(|(level, mesh)| {
            let q = compute_quality(mesh);
            let f = project_l1(mesh, u);
            DecayRow {
                level,
                h: mesh.h_max,
                t_value: jump_sum(mesh, &f.values),
                bound_lipschitz: u
                    .lipschitz()
                    .map_or(f64::NAN, |m| 2.0 * m * mesh.h_max * omega),
                bound_l1: q.n_faces_max as f64 * q.theta * f.l1_norm(mesh),
            }
        })
        .collect();
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let t: Vec<f64> = rows.iter().map(|r| r.t_value).collect();
    Ok(DecayStudy {
        slope: fit_slope(&h, &t),
        rows,
    })
}

/// `T[m][p]` for a sequence `u_p → u` with the limit as the last column.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformDecayStudy {
    pub h: Vec<f64>,
    /// `values[m][p]`, the last column being the limit `u`.
    pub values: Vec<Vec<f64>>,
    /// `bounds[m][p] = N_E θ_M ‖u_p - u‖_{L¹,M} + T[m][limit]`
    pub bounds: Vec<Vec<f64>>,
}

impl UniformDecayStudy {
    /// `sup_p T[m][p]` over the sequence (limit column excluded).
    pub fn row_sup(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| row[..row.len() - 1].iter().copied().fold(0.0, f64::max))
            .collect()
    }

    /// First failing `(m, p)` of `T[m][p] ≤ bounds[m][p] (1 + rel)`.
    pub fn first_breach(&self, rel: f64) -> Option<(usize, usize)> {
        for (m, (vals, bounds)) in self.values.iter().zip(&self.bounds).enumerate() {
            for (p, (v, b)) in vals.iter().zip(bounds).enumerate() {
                if *v > b * (1.0 + rel) {
                    return Some((m, p));
                }
            }
        }
        None
    }

    /// CSV: `level,h,` then `T_p1..T_pP,T_limit,sup_p`.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let p = self.values.first().map_or(0, |r| r.len() - 1);
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str("# sup_p is taken over all computed p (finite truncation of the sequence)\n");
        out.push_str("level,h");
        for i in 1..=p {
            out.push_str(&format!(",T_p{i}"));
        }
        out.push_str(",T_limit,sup_p\n");
        let sups = self.row_sup();
        for (m, row) in self.values.iter().enumerate() {
            out.push_str(&format!("{m},{}", fmt_real(self.h[m])));
            for v in row {
                out.push(',');
                out.push_str(&fmt_real(*v));
            }
            out.push(',');
            out.push_str(&fmt_real(sups[m]));
            out.push('\n');
        }
        out
    }
}

/// Translation seminorms of each member of `sequence` and of `limit` on every
/// refinement level.
pub fn uniform_decay_study(
    family: &MeshFamily,
    limit: &dyn Datum,
    sequence: &[&dyn Datum],
    levels: usize,
) -> Result<UniformDecayStudy, TranslationError> {
    if levels < 3 {
        return Err(TranslationError::TooFewLevels(levels));
    }
    let meshes = refine(family, levels)?;
    let per_level: Vec<(f64, Vec<f64>, Vec<f64>)> = meshes
        .par_iter()
        .map(|mesh| {
            let q = compute_quality(mesh);
            let c = q.n_faces_max as f64 * q.theta;
            let lim = project_l1(mesh, limit);
            let t_lim = jump_sum(mesh, &lim.values);
            let mut values = Vec::with_capacity(sequence.len() + 1);
            let mut bounds = Vec::with_capacity(sequence.len() + 1);
            for u in sequence {
                let f = project_l1(mesh, *u);
                let dist: f64 = mesh
                    .cells
                    .iter()
                    .zip(f.values.iter().zip(&lim.values))
                    .map(|(k, (a, b))| k.volume * (a - b).abs())
                    .sum();
                values.push(jump_sum(mesh, &f.values));
                bounds.push(c * dist + t_lim);
            }
            values.push(t_lim);
            bounds.push(t_lim);
            (mesh.h_max, values, bounds)
        })
        .collect();
    let mut study = UniformDecayStudy {
        h: Vec::new(),
        values: Vec::new(),
        bounds: Vec::new(),
    };
    for (h, v, b) in per_level {
        study.h.push(h);
        study.values.push(v);
        study.bounds.push(b);
    }
    Ok(study)
}
