//! Numerical fluxes and empirical checkers for their consistency hypotheses.
//!
//! Fluxes return the scalar normal component `F_σ · n`. Conservativity is then
//! the sign identity `F(K, L, n) = -F(L, K, -n)`, which every flux here
//! satisfies bit for bit because each formula is odd in `n` under the swap.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FluxError {
    #[error("invalid flux: {0}")]
    Invalid(String),
    #[error(
        "hypothesis (iii) violated by {flux}: ratio {ratio:e} > C_F = {c_f:e} at (a, b) = ({a:e}, {b:e}), n = {normal:?}"
    )]
    Hypothesis {
        flux: String,
        ratio: f64,
        c_f: f64,
        a: f64,
        b: f64,
        normal: Vec<f64>,
    },
    #[error("{flux} is not conservative at (a, b) = ({a:e}, {b:e})")]
    Conservativity { flux: String, a: f64, b: f64 },
    #[error("{flux} is not consistent at u = {u:e}: error {error:e}")]
    Consistency { flux: String, u: f64, error: f64 },
}

/// Physical flux `F: R → R^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum FluxFunction {
    /// `F(u) = b u`
    Linear { velocity: Vec<f64> },
    /// `F(u) = d u² / 2`
    Burgers { direction: Vec<f64> },
}

impl FluxFunction {
    pub fn dim(&self) -> usize {
        match self {
            Self::Linear { velocity } => velocity.len(),
            Self::Burgers { direction } => direction.len(),
        }
    }

    fn axis(&self) -> &[f64] {
        match self {
            Self::Linear { velocity } => velocity,
            Self::Burgers { direction } => direction,
        }
    }

    fn axis_dot(&self, n: &[f64]) -> f64 {
        self.axis().iter().zip(n).map(|(a, b)| a * b).sum()
    }

    fn axis_norm(&self) -> f64 {
        self.axis().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `F(u)` written into `out`.
    pub fn eval(&self, u: f64, out: &mut [f64]) {
        let s = match self {
            Self::Linear { .. } => u,
            Self::Burgers { .. } => 0.5 * u * u,
        };
        for (o, a) in out.iter_mut().zip(self.axis()) {
            *o = a * s;
        }
    }

    /// `F(u) · n`
    pub fn normal(&self, u: f64, n: &[f64]) -> f64 {
        let s = match self {
            Self::Linear { .. } => u,
            Self::Burgers { .. } => 0.5 * u * u,
        };
        s * self.axis_dot(n)
    }

    /// `F'(u) · n`
    pub fn normal_derivative(&self, u: f64, n: &[f64]) -> f64 {
        match self {
            Self::Linear { .. } => self.axis_dot(n),
            Self::Burgers { .. } => u * self.axis_dot(n),
        }
    }

    /// `sup |F'(u)|` for `u` in `range`.
    pub fn derivative_bound(&self, range: (f64, f64)) -> f64 {
        match self {
            Self::Linear { .. } => self.axis_norm(),
            Self::Burgers { .. } => range.0.abs().max(range.1.abs()) * self.axis_norm(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Burgers { .. } => "burgers",
        }
    }
}

/// Cell values seen by a face, `K` being the cell the normal points away from.
///
/// `behind_k` is the neighbour of `K` opposite to `L`, `behind_l` the
/// neighbour of `L` opposite to `K`; either may be missing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub uk: f64,
    pub ul: f64,
    pub behind_k: Option<f64>,
    pub behind_l: Option<f64>,
}

impl Stencil {
    pub fn two_point(uk: f64, ul: f64) -> Self {
        Self {
            uk,
            ul,
            behind_k: None,
            behind_l: None,
        }
    }

    /// The same face seen from `L`.
    pub fn swapped(self) -> Self {
        Self {
            uk: self.ul,
            ul: self.uk,
            behind_k: self.behind_l,
            behind_l: self.behind_k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxClass {
    /// Lipschitz in both arguments and consistent.
    Lipschitz,
    /// Only the deviation from the diagonal is controlled.
    LipDiag,
}

/// A numerical flux `F_σ · n_{K,σ}`.
pub trait NumericalFlux: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn physical(&self) -> &FluxFunction;
    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64;
    /// Local wave-speed bound `λ_σ ≥ max(|F'(u_K)·n|, |F'(u_L)·n|)`.
    fn wave_speed(&self, uk: f64, ul: f64, n: &[f64]) -> f64;
    /// Declared constant of hypothesis (iii) on `range`.
    fn c_f(&self, range: (f64, f64)) -> f64;
    fn class(&self) -> FluxClass;

    fn stencil_width(&self) -> usize {
        2
    }
}

fn local_speed(f: &FluxFunction, uk: f64, ul: f64, n: &[f64]) -> f64 {
    f.normal_derivative(uk, n)
        .abs()
        .max(f.normal_derivative(ul, n).abs())
}

/// Upwind flux for `F(u) = b u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Upwind {
    flux: FluxFunction,
}

impl Upwind {
    pub fn new(velocity: Vec<f64>) -> Result<Self, FluxError> {
        if !(velocity.iter().map(|v| v * v).sum::<f64>() > 0.0) {
            return Err(FluxError::Invalid("upwind needs |b| > 0".into()));
        }
        Ok(Self {
            flux: FluxFunction::Linear { velocity },
        })
    }
}

impl NumericalFlux for Upwind {
    fn name(&self) -> String {
        "upwind".into()
    }

    fn physical(&self) -> &FluxFunction {
        &self.flux
    }

    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64 {
        let bn = self.flux.axis_dot(n);
        if bn >= 0.0 {
            bn * s.uk
        } else {
            bn * s.ul
        }
    }

    fn wave_speed(&self, _: f64, _: f64, n: &[f64]) -> f64 {
        self.flux.axis_dot(n).abs()
    }

    fn c_f(&self, _: (f64, f64)) -> f64 {
        self.flux.axis_norm()
    }

    fn class(&self) -> FluxClass {
        FluxClass::Lipschitz
    }
}

/// Local Lax–Friedrichs flux
/// `½ (F(u_K) + F(u_L))·n - ½ λ (u_L - u_K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rusanov {
    flux: FluxFunction,
}

impl Rusanov {
    pub fn new(flux: FluxFunction) -> Self {
        Self { flux }
    }
}

impl NumericalFlux for Rusanov {
    fn name(&self) -> String {
        format!("rusanov({})", self.flux.name())
    }

    fn physical(&self) -> &FluxFunction {
        &self.flux
    }

    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64 {
        let lambda = local_speed(&self.flux, s.uk, s.ul, n);
        0.5 * (self.flux.normal(s.uk, n) + self.flux.normal(s.ul, n)) - 0.5 * lambda * (s.ul - s.uk)
    }

    fn wave_speed(&self, uk: f64, ul: f64, n: &[f64]) -> f64 {
        local_speed(&self.flux, uk, ul, n)
    }

    /// `sup|F'| + ½ λ_max`, both taken over `range`.
    fn c_f(&self, range: (f64, f64)) -> f64 {
        1.5 * self.flux.derivative_bound(range)
    }

    fn class(&self) -> FluxClass {
        FluxClass::Lipschitz
    }
}

/// `minmod(a, b)`: the smaller argument in magnitude when signs agree, else 0.
pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Three-point MUSCL flux for `F(u) = b u` with a minmod limiter.
///
/// The face value `u_σ = u_up + ½ minmod(u_up - u_behind, u_down - u_up)` stays
/// between `u_K` and `u_L`. Without a cell behind the upwind cell the scheme
/// falls back to first-order upwinding.
#[derive(Debug, Clone, PartialEq)]
pub struct Muscl {
    flux: FluxFunction,
}

impl Muscl {
    pub fn new(velocity: Vec<f64>) -> Result<Self, FluxError> {
        Upwind::new(velocity).map(|u| Self { flux: u.flux })
    }

    /// `u_σ` together with the upwind-side flag.
    pub fn face_value(&self, s: Stencil, n: &[f64]) -> f64 {
        let bn = self.flux.axis_dot(n);
        let (up, down, behind) = if bn >= 0.0 {
            (s.uk, s.ul, s.behind_k)
        } else {
            (s.ul, s.uk, s.behind_l)
        };
        match behind {
            Some(b) => up + 0.5 * minmod(up - b, down - up),
            None => up,
        }
    }
}

impl NumericalFlux for Muscl {
    fn name(&self) -> String {
        "muscl".into()
    }

    fn physical(&self) -> &FluxFunction {
        &self.flux
    }

    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64 {
        self.flux.axis_dot(n) * self.face_value(s, n)
    }

    fn wave_speed(&self, _: f64, _: f64, n: &[f64]) -> f64 {
        self.flux.axis_dot(n).abs()
    }

    fn c_f(&self, _: (f64, f64)) -> f64 {
        self.flux.axis_norm()
    }

    fn class(&self) -> FluxClass {
        FluxClass::LipDiag
    }

    fn stencil_width(&self) -> usize {
        3
    }
}

/// Van der Corput radical inverse of `i` in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    inv = r;
    inv
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Point `i` of the Halton sequence in `[0,1)^dims`, `dims ≤ 6`.
pub fn halton(i: u64, dims: usize) -> Vec<f64> {
    HALTON_BASES[..dims].iter().map(|&b| radical_inverse(i + 1, b)).collect()
}

/// Sampled normals: `±1` in 1d, angles from the Halton coordinate in 2d.
fn sample_normal(dim: usize, coordinate: f64) -> Vec<f64> {
    match dim {
        1 => vec![if coordinate < 0.5 { 1.0 } else { -1.0 }],
        _ => {
            let a = 2.0 * std::f64::consts::PI * coordinate;
            let mut n = vec![0.0; dim];
            n[0] = a.cos();
            n[1] = a.sin();
            n
        }
    }
}

/// Outcome of a sampling check.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub flux: String,
    pub samples: usize,
    pub declared_c_f: f64,
    pub max_ratio: f64,
    /// `(a, b)` attaining `max_ratio`.
    pub witness: (f64, f64),
    pub witness_normal: Vec<f64>,
}

impl HypothesisReport {
    pub fn to_csv(&self) -> String {
        format!(
            "flux,samples,declared_c_f,max_ratio,witness_a,witness_b,witness_normal\n{},{},{:e},{:e},{:e},{:e},{}\n",
            self.flux,
            self.samples,
            self.declared_c_f,
            self.max_ratio,
            self.witness.0,
            self.witness.1,
            self.witness_normal
                .iter()
                .map(|v| format!("{v:e}"))
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
}

/// Halton samples of states and a normal: `(stencil, n)`. Three-point fluxes
/// also get sampled neighbour values.
fn samples(
    flux: &dyn NumericalFlux,
    range: (f64, f64),
    count: usize,
) -> impl Iterator<Item = (Stencil, Vec<f64>)> + '_ {
    let dim = flux.physical().dim();
    let width = range.1 - range.0;
    (0..count as u64).map(move |i| {
        let p = halton(i, 5);
        let at = |c: f64| range.0 + width * c;
        let stencil = Stencil {
            uk: at(p[0]),
            ul: at(p[1]),
            behind_k: (flux.stencil_width() > 2).then(|| at(p[3])),
            behind_l: (flux.stencil_width() > 2).then(|| at(p[4])),
        };
        (stencil, sample_normal(dim, p[2]))
    })
}

/// Largest `max(|F_σ - F(a)·n|, |F_σ - F(b)·n|) / |a - b|` over `samples`
/// Halton points in `range²`; a violation of the declared `C_F (1 + 1e-9)`
/// is returned with its witness.
pub fn check_hypothesis_iii(
    flux: &dyn NumericalFlux,
    range: (f64, f64),
    samples_count: usize,
) -> Result<HypothesisReport, FluxError> {
    if samples_count < 1000 {
        return Err(FluxError::Invalid(format!(
            "hypothesis sampling needs at least 1000 pairs, got {samples_count}"
        )));
    }
    let c_f = flux.c_f(range);
    let f = flux.physical();
    let mut report = HypothesisReport {
        flux: flux.name(),
        samples: samples_count,
        declared_c_f: c_f,
        max_ratio: 0.0,
        witness: (0.0, 0.0),
        witness_normal: Vec::new(),
    };
    for (s, n) in samples(flux, range, samples_count) {
        let jump = (s.uk - s.ul).abs();
        if jump == 0.0 {
            continue;
        }
        let fs = flux.normal_flux(s, &n);
        let dev = (fs - f.normal(s.uk, &n)).abs().max((fs - f.normal(s.ul, &n)).abs());
        let ratio = dev / jump;
        if ratio > report.max_ratio || report.witness_normal.is_empty() {
            report.max_ratio = ratio;
            report.witness = (s.uk, s.ul);
            report.witness_normal = n;
        }
    }
    if report.max_ratio > c_f * (1.0 + 1e-9) {
        return Err(FluxError::Hypothesis {
            flux: report.flux,
            ratio: report.max_ratio,
            c_f,
            a: report.witness.0,
            b: report.witness.1,
            normal: report.witness_normal,
        });
    }
    Ok(report)
}

/// Bit-exact `F(K, L, n) = -F(L, K, -n)` on `samples` Halton states.
pub fn check_conservativity(
    flux: &dyn NumericalFlux,
    range: (f64, f64),
    samples_count: usize,
) -> Result<usize, FluxError> {
    for (s, n) in samples(flux, range, samples_count) {
        let minus: Vec<f64> = n.iter().map(|v| -v).collect();
        let a = flux.normal_flux(s, &n);
        let b = flux.normal_flux(s.swapped(), &minus);
        if a != -b {
            return Err(FluxError::Conservativity {
                flux: flux.name(),
                a: s.uk,
                b: s.ul,
            });
        }
    }
    Ok(samples_count)
}

/// `max |F_σ(u, u) - F(u)·n|` over sampled states; fails above `tol`.
pub fn check_consistency(
    flux: &dyn NumericalFlux,
    range: (f64, f64),
    samples_count: usize,
    tol: f64,
) -> Result<f64, FluxError> {
    let mut worst: f64 = 0.0;
    for (s, n) in samples(flux, range, samples_count) {
        let u = s.uk;
        let diag = Stencil {
            uk: u,
            ul: u,
            behind_k: s.behind_k.map(|_| u),
            behind_l: s.behind_l.map(|_| u),
        };
        let err = (flux.normal_flux(diag, &n) - flux.physical().normal(u, &n)).abs();
        if err > tol {
            return Err(FluxError::Consistency {
                flux: flux.name(),
                u,
                error: err,
            });
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Per-face accounting of the multi-point bound
/// `|F_σ - F(u_K)·n| ≤ C_F (|u_K - u_L| + |u_K - u_M|)` on a 1d mesh, with
/// `M` the third stencil cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipointReport {
    pub faces: usize,
    /// `max lhs / (C_F (|u_K-u_L| + |u_K-u_M|))` over faces with a nonzero
    /// right-hand side.
    pub max_ratio: f64,
    /// Faces whose deviation is nonzero while the jump sum vanishes.
    pub unbounded_faces: usize,
    /// `Σ_σ C_F (|u_K-u_L| + |u_K-u_M|)`
    pub generalized_total: f64,
    /// The same after `|u_K-u_M| ≤ |u_K-u_L| + |u_L-u_M|`, expressed as face
    /// jumps: `Σ_σ C_F (2|u_K-u_L| + |u_L-u_M|)`.
    pub split_total: f64,
    /// Face jump weights after the split, per face id.
    pub jump_weights: Vec<f64>,
}

impl MultipointReport {
    pub fn holds(&self) -> bool {
        self.unbounded_faces == 0 && self.max_ratio <= 1.0 + 1e-9
    }
}

/// Evaluates the multi-point bound of a three-point flux on `data` over the
/// interior faces of a 1d mesh whose stencil is complete.
pub fn multipoint_jump_bound_check(
    flux: &dyn NumericalFlux,
    data: &[f64],
    mesh: &crate::mesh::Mesh,
) -> Result<MultipointReport, FluxError> {
    if mesh.dim != 1 {
        return Err(FluxError::Invalid("the multi-point check needs a 1d mesh".into()));
    }
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c_f = flux.c_f((lo, hi));
    let f = flux.physical();
    // in 1d cells are ordered along the axis
    let n_cells = mesh.n_cells();
    let mut report = MultipointReport {
        faces: 0,
        max_ratio: 0.0,
        unbounded_faces: 0,
        generalized_total: 0.0,
        split_total: 0.0,
        jump_weights: vec![0.0; mesh.n_faces()],
    };
    // interior face between cells i and i+1 has id i+1
    for face in mesh.interior_faces() {
        let (k, l) = (face.inner, face.outer.expect("interior"));
        let n = &face.normal;
        let behind = |c: usize, away: usize| -> Option<usize> {
            if c > away {
                (c + 1 < n_cells).then_some(c + 1)
            } else {
                c.checked_sub(1)
            }
        };
        let (bk, bl) = (behind(k, l), behind(l, k));
        let s = Stencil {
            uk: data[k],
            ul: data[l],
            behind_k: bk.map(|c| data[c]),
            behind_l: bl.map(|c| data[c]),
        };
        let fs = flux.normal_flux(s, n);
        // third cell actually read by the flux
        let upwind_k = f.normal_derivative(s.uk, n) >= 0.0;
        let m = if upwind_k { bk } else { bl };
        let Some(m) = m else { continue };
        report.faces += 1;
        let (ukl, ukm) = ((s.uk - s.ul).abs(), (s.uk - data[m]).abs());
        // |u_L - u_M| or |u_K - u_M| as a face jump next to σ
        let outer_jump = if upwind_k {
            (s.uk - data[m]).abs()
        } else {
            (s.ul - data[m]).abs()
        };
        let dev = (fs - f.normal(s.uk, n)).abs().max((fs - f.normal(s.ul, n)).abs());
        let rhs = c_f * (ukl + ukm);
        if rhs > 0.0 {
            report.max_ratio = report.max_ratio.max(dev / rhs);
        } else if dev > 0.0 {
            report.unbounded_faces += 1;
        }
        report.generalized_total += rhs;
        report.split_total += c_f * (2.0 * ukl + outer_jump);
        report.jump_weights[face.id] += 2.0 * c_f;
        let neighbour_face = if upwind_k {
            mesh.cells[k].faces.iter().copied().find(|&g| g != face.id)
        } else {
            mesh.cells[l].faces.iter().copied().find(|&g| g != face.id)
        };
        if let Some(g) = neighbour_face {
            report.jump_weights[g] += c_f;
        }
    }
    Ok(report)
}

/// A flux with an additive offset: inconsistent, used to exercise the
/// hypothesis checker's failure path.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetFlux {
    pub inner: Rusanov,
    pub offset: f64,
}

impl NumericalFlux for OffsetFlux {
    fn name(&self) -> String {
        format!("offset({})", self.inner.name())
    }
    fn physical(&self) -> &FluxFunction {
        self.inner.physical()
    }
    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64 {
        self.inner.normal_flux(s, n) + self.offset
    }
    fn wave_speed(&self, uk: f64, ul: f64, n: &[f64]) -> f64 {
        self.inner.wave_speed(uk, ul, n)
    }
    fn c_f(&self, range: (f64, f64)) -> f64 {
        self.inner.c_f(range)
    }
    fn class(&self) -> FluxClass {
        FluxClass::Lipschitz
    }
}

/// Central flux `½ (F(u_K) + F(u_L))·n`: Rusanov with `λ` dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Central {
    pub flux: FluxFunction,
}

impl NumericalFlux for Central {
    fn name(&self) -> String {
        format!("central({})", self.flux.name())
    }
    fn physical(&self) -> &FluxFunction {
        &self.flux
    }
    fn normal_flux(&self, s: Stencil, n: &[f64]) -> f64 {
        0.5 * (self.flux.normal(s.uk, n) + self.flux.normal(s.ul, n))
    }
    fn wave_speed(&self, uk: f64, ul: f64, n: &[f64]) -> f64 {
        local_speed(&self.flux, uk, ul, n)
    }
    fn c_f(&self, range: (f64, f64)) -> f64 {
        0.5 * self.flux.derivative_bound(range)
    }
    fn class(&self) -> FluxClass {
        FluxClass::Lipschitz
    }
}

/// Parses `upwind(b...)`, `rusanov(burgers[;d...])`, `rusanov(linear;b...)`
/// and `muscl(b...)`; vector components are separated by spaces or commas.
pub fn parse_flux(spec: &str, dim: usize) -> Result<Box<dyn NumericalFlux>, FluxError> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(i) if spec.ends_with(')') => (&spec[..i], &spec[i + 1..spec.len() - 1]),
        None => (spec, ""),
        _ => return Err(FluxError::Invalid(format!("malformed flux `{spec}`"))),
    };
    let vector = |s: &str, default: f64| -> Result<Vec<f64>, FluxError> {
        let vals: Vec<f64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| FluxError::Invalid(format!("bad number `{t}` in `{spec}`")))
            })
            .collect::<Result<_, _>>()?;
        match vals.len() {
            0 => Ok(vec![default; dim]),
            1 if dim > 1 => {
                let mut v = vec![0.0; dim];
                v[0] = vals[0];
                Ok(v)
            }
            n if n == dim => Ok(vals),
            n => Err(FluxError::Invalid(format!(
                "`{spec}` has {n} components, mesh dimension is {dim}"
            ))),
        }
    };
    match name.trim() {
        "upwind" => Ok(Box::new(Upwind::new(vector(args, 1.0)?)?)),
        "muscl" => Ok(Box::new(Muscl::new(vector(args, 1.0)?)?)),
        "rusanov" => {
            let mut parts = args.splitn(2, ';');
            let kind = parts.next().unwrap_or("").trim();
            let rest = parts.next().unwrap_or("");
            let flux = match kind {
                "burgers" | "" => FluxFunction::Burgers {
                    direction: vector(rest, 1.0)?,
                },
                "linear" => FluxFunction::Linear {
                    velocity: vector(rest, 1.0)?,
                },
                other => {
                    return Err(FluxError::Invalid(format!(
                        "unknown physical flux `{other}` (burgers | linear)"
                    )))
                }
            };
            Ok(Box::new(Rusanov::new(flux)))
        }
        other => Err(FluxError::Invalid(format!(
            "unknown flux `{other}` (upwind | rusanov | muscl)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_uniform_1d;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn burgers_1d() -> Rusanov {
        Rusanov::new(FluxFunction::Burgers {
            direction: vec![1.0],
        })
    }

    #[test]
    fn upwind_picks_the_upstream_state() {
        let f = Upwind::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(f.normal_flux(Stencil::two_point(2.0, 5.0), &[1.0, 0.0]), 2.0);
        assert_eq!(f.normal_flux(Stencil::two_point(2.0, 5.0), &[-1.0, 0.0]), -5.0);
        assert_eq!(f.normal_flux(Stencil::two_point(3.0, 3.0), &[0.6, 0.8]), 0.6 * 3.0);
        assert!(Upwind::new(vec![0.0]).is_err());
    }

    #[test]
    fn rusanov_burgers_hand_value() {
        // ½(0 + 2) - ½·2·2 = -1
        let f = burgers_1d();
        assert_eq!(f.normal_flux(Stencil::two_point(0.0, 2.0), &[1.0]), -1.0);
    }

    #[test]
    fn muscl_face_value_is_convex() {
        let f = Muscl::new(vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let s = Stencil {
                uk: rng.gen_range(-1.0..1.0),
                ul: rng.gen_range(-1.0..1.0),
                behind_k: Some(rng.gen_range(-1.0..1.0)),
                behind_l: Some(rng.gen_range(-1.0..1.0)),
            };
            for n in [[1.0], [-1.0]] {
                let v = f.face_value(s, &n);
                assert!(v >= s.uk.min(s.ul) && v <= s.uk.max(s.ul));
            }
        }
        // a kink: slopes of opposite sign leave the upwind value
        let kink = Stencil {
            uk: 1.0,
            ul: 0.0,
            behind_k: Some(0.0),
            behind_l: None,
        };
        assert_eq!(f.face_value(kink, &[1.0]), 1.0);
    }

    #[test]
    fn shipped_fluxes_pass_all_checks() {
        let fluxes: Vec<(Box<dyn NumericalFlux>, (f64, f64))> = vec![
            (Box::new(Upwind::new(vec![1.0]).unwrap()), (-1.0, 1.0)),
            (Box::new(Upwind::new(vec![0.3, -0.7]).unwrap()), (-1.0, 1.0)),
            (Box::new(burgers_1d()), (-2.0, 2.0)),
            (
                Box::new(Rusanov::new(FluxFunction::Burgers {
                    direction: vec![1.0, 1.0],
                })),
                (-2.0, 2.0),
            ),
            (Box::new(Muscl::new(vec![1.0]).unwrap()), (-1.0, 1.0)),
        ];
        for (f, range) in &fluxes {
            let r = check_hypothesis_iii(f.as_ref(), *range, 10_000).unwrap();
            assert!(r.max_ratio > 0.0);
            check_conservativity(f.as_ref(), *range, 10_000).unwrap();
            assert!(check_consistency(f.as_ref(), *range, 10_000, 1e-14).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn inconsistent_flux_yields_witness() {
        let bad = OffsetFlux {
            inner: burgers_1d(),
            offset: 1e-3,
        };
        match check_hypothesis_iii(&bad, (-2.0, 2.0), 10_000) {
            Err(FluxError::Hypothesis { a, b, ratio, .. }) => {
                assert!(ratio > bad.c_f((-2.0, 2.0)));
                assert!((a - b).abs() < 1e-3 / 3.0);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn dropping_dissipation_keeps_hypothesis_iii() {
        let c = Central {
            flux: FluxFunction::Burgers {
                direction: vec![1.0],
            },
        };
        check_hypothesis_iii(&c, (-2.0, 2.0), 10_000).unwrap();
    }

    #[test]
    fn parse_flux_specs() {
        assert_eq!(parse_flux("upwind(1)", 1).unwrap().name(), "upwind");
        assert_eq!(parse_flux("rusanov(burgers)", 2).unwrap().name(), "rusanov(burgers)");
        let r = parse_flux("rusanov(burgers;1,1)", 2).unwrap();
        assert_eq!(r.physical(), &FluxFunction::Burgers { direction: vec![1.0, 1.0] });
        assert!(parse_flux("roe", 1).is_err());
        assert!(parse_flux("upwind(1,2,3)", 2).is_err());
    }

    #[test]
    fn multipoint_bound_on_data() {
        let mesh = build_uniform_1d(40, (0.0, 1.0)).unwrap();
        let f = Muscl::new(vec![1.0]).unwrap();
        let constant = vec![0.3; 40];
        let r = multipoint_jump_bound_check(&f, &constant, &mesh).unwrap();
        assert_eq!(r.max_ratio, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noisy: Vec<f64> = (0..40).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = multipoint_jump_bound_check(&f, &noisy, &mesh).unwrap();
        assert!(r.holds() && r.split_total >= r.generalized_total);
        let step: Vec<f64> = (0..40).map(|k| if k < 20 { 1.0 } else { 0.0 }).collect();
        let r = multipoint_jump_bound_check(&f, &step, &mesh).unwrap();
        assert!(r.holds() && r.split_total >= r.generalized_total);
    }

    #[test]
    fn halton_points_fill_the_unit_square() {
        let pts: Vec<Vec<f64>> = (0..1024).map(|i| halton(i, 2)).collect();
        for qx in 0..4 {
            for qy in 0..4 {
                let n = pts
                    .iter()
                    .filter(|p| (p[0] * 4.0) as usize == qx && (p[1] * 4.0) as usize == qy)
                    .count();
                assert!((60..=68).contains(&n), "{n}");
            }
        }
    }
}
