//! Batch entry point. Every subcommand reads a [`Config`], applies flag
//! overrides, writes its CSVs atomically under the output directory with the
//! config hash in a header comment, and returns a short text summary.

use crate::config::Config;
use crate::consistency::lw_study;
use crate::data::{Bump, Datum, Sum};
use crate::mesh::{compute_quality, read_mesh, refine, validate, write_mesh, Mesh, MeshError};
use crate::operators::{
    gradient_weakstar_study, spacetime_corpus, spatial_corpus, vector_corpus, TestFunction,
};
use crate::solver::{snapshot_csv, solve, write_history, BoundaryPolicy};
use crate::study::{fmt_real, to_csv};
use crate::translations::{translation_decay_study, uniform_decay_study};
use crate::Error;
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

/// Number of members `u + bump / p` in the uniform translation study.
pub const SEQUENCE_LENGTH: usize = 16;

/// Largest relative mass drift tolerated on periodic runs.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "lwfv", version, about = "Finite volume consistency studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Key-value TOML file; missing keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Number of refinement levels (overrides `levels`).
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Seed of the perturbed triangular family (overrides `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write every refinement level as a mesh file plus a quality table.
    MeshGen,
    /// Validate and measure a mesh file (`mesh` key) or the configured family.
    MeshStats,
    /// Weak-star convergence of the discrete gradient.
    GradStudy,
    /// Translation seminorm decay, single datum and converging sequence.
    TranslateStudy,
    /// Run the scheme on every level.
    Solve,
    /// Weak-consistency decomposition and decay on every level.
    LwVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::MeshGen => "mesh-gen",
            Self::MeshStats => "mesh-stats",
            Self::GradStudy => "grad-study",
            Self::TranslateStudy => "translate-study",
            Self::Solve => "solve",
            Self::LwVerify => "lw-verify",
        }
    }
}

impl Cli {
    /// The config file overlaid with the command-line flags.
    pub fn resolve(&self) -> Result<Config, Error> {
        let mut cfg = match &self.config {
            Some(path) => Config::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)?,
            None => Config::default(),
        };
        if let Some(out) = &self.out {
            cfg.set("out", out.to_string_lossy().into_owned())?;
        }
        if let Some(levels) = self.levels {
            cfg.set("levels", levels as i64)?;
        }
        if let Some(seed) = self.seed {
            cfg.set("seed", seed as i64)?;
        }
        Ok(cfg)
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

struct Output {
    dir: PathBuf,
    header: Vec<String>,
    written: Vec<PathBuf>,
}

impl Output {
    fn new(cfg: &Config, command: Command) -> Result<Self, Error> {
        let dir = cfg.out_dir()?;
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self {
            dir,
            header: vec![
                format!("config-hash {}", cfg.hash()),
                format!("command {}", command.name()),
            ],
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), Error> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.written.push(path);
        Ok(())
    }

    fn comment_block(&self) -> String {
        self.header.iter().map(|c| format!("# {c}\n")).collect()
    }

    fn listing(&self) -> String {
        self.written
            .iter()
            .map(|p| format!("wrote {}\n", p.display()))
            .collect()
    }
}

fn quality_csv(meshes: &[(String, &Mesh)]) -> String {
    let mut out = String::from("level,cells,faces,h,theta_grad,theta,tau,n_faces_max\n");
    for (label, m) in meshes {
        let q = compute_quality(m);
        out.push_str(&format!(
            "{label},{},{},{},{},{},{},{}\n",
            m.n_cells(),
            m.n_faces(),
            fmt_real(q.h_max),
            fmt_real(q.theta_grad),
            fmt_real(q.theta),
            fmt_real(q.tau),
            q.n_faces_max
        ));
    }
    out
}

fn mesh_gen(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let meshes = refine(&cfg.family()?, cfg.levels()?)?;
    for (m, mesh) in meshes.iter().enumerate() {
        let mut buf = Vec::new();
        write_mesh(mesh, &mut buf).map_err(MeshError::Io)?;
        let text = String::from_utf8(buf).expect("mesh writer emits UTF-8");
        out.write(&format!("mesh_level{m}.txt"), &text)?;
    }
    let labelled: Vec<(String, &Mesh)> =
        meshes.iter().enumerate().map(|(m, x)| (m.to_string(), x)).collect();
    let table = quality_csv(&labelled);
    out.write("mesh_quality.csv", &(out.comment_block() + &table))?;
    Ok(table)
}

fn mesh_stats(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let path = cfg.string("mesh")?;
    let table = if path.is_empty() {
        let meshes = refine(&cfg.family()?, cfg.levels()?)?;
        let labelled: Vec<(String, &Mesh)> =
            meshes.iter().enumerate().map(|(m, x)| (m.to_string(), x)).collect();
        quality_csv(&labelled)
    } else {
        let file = fs::File::open(path).map_err(|e| Error::io(Path::new(path), e))?;
        let mesh = read_mesh(std::io::BufReader::new(file))?;
        let report = validate(&mesh);
        if let Some(fail) = report.failures().next() {
            return Err(Error::Mesh(MeshError::Geometry(format!(
                "{path} fails `{}` (worst {:e}, tolerance {:e})",
                fail.name, fail.worst, fail.tolerance
            ))));
        }
        quality_csv(&[("file".into(), &mesh)])
    };
    out.write("mesh_stats.csv", &(out.comment_block() + &table))?;
    Ok(table)
}

fn grad_study(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let family = cfg.family()?;
    let domain = family.domain();
    let corpus = spatial_corpus(&domain);
    let idx = cfg.count("phi")?;
    let phi = corpus.get(idx).ok_or_else(|| crate::config::ConfigError::Key {
        key: "phi".into(),
        message: format!("index {idx} outside the corpus of {}", corpus.len()),
    })?;
    let studies = gradient_weakstar_study(&family, phi, &vector_corpus(&domain), cfg.levels()?)?;
    let mut summary = String::new();
    let mut breached = Vec::new();
    for s in &studies {
        let mut comments = out.header.clone();
        comments.push(format!("phi {idx}, psi {}", s.psi_index));
        comments.push(format!("slope {}", s.slope.map_or("n/a".into(), fmt_real)));
        out.write(&format!("grad_study_psi{}.csv", s.psi_index), &to_csv(&comments, &s.rows))?;
        summary.push_str(&format!(
            "psi {}: gap slope {}, within bound: {}\n",
            s.psi_index,
            s.slope.map_or("n/a".into(), |v| format!("{v:.3}")),
            s.within_bound()
        ));
        if !s.within_bound() {
            breached.push(s.psi_index);
        }
    }
    if !breached.is_empty() {
        return Err(Error::Breach(format!(
            "a-priori gradient bound breached for psi {breached:?}\n{summary}"
        )));
    }
    Ok(summary)
}

fn translate_study(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let family = cfg.family()?;
    let dim = family.dim();
    let domain = family.domain();
    let levels = cfg.levels()?;
    let u = cfg.initial(dim)?;
    let decay = translation_decay_study(&family, u.as_ref(), levels)?;
    let mut comments = out.header.clone();
    comments.push(format!("u0 {}", cfg.string("u0")?));
    comments.push(format!("slope {}", decay.slope.map_or("n/a".into(), fmt_real)));
    out.write("translate_decay.csv", &to_csv(&comments, &decay.rows))?;

    let center: Vec<f64> = (0..dim).map(|i| domain.lo[i] + 0.5 * domain.extent(i)).collect();
    let radius: Vec<f64> = (0..dim).map(|i| 0.3 * domain.extent(i)).collect();
    let members: Vec<Sum<std::sync::Arc<dyn Datum>, Bump>> = (1..=SEQUENCE_LENGTH)
        .map(|p| Sum {
            a: u.clone(),
            b: Bump::new(center.clone(), radius.clone(), 2),
            weight: 1.0 / p as f64,
        })
        .collect();
    let seq: Vec<&dyn Datum> = members.iter().map(|m| m as &dyn Datum).collect();
    let uniform = uniform_decay_study(&family, u.as_ref(), &seq, levels)?;
    out.write("translate_uniform.csv", &uniform.to_csv(&out.header))?;

    let summary = format!(
        "T_M decay: last/first {:.4}, slope {}, within bounds: {}\nuniform study: sup_p T per level {:?}\n",
        decay.reduction(),
        decay.slope.map_or("n/a".into(), |v| format!("{v:.3}")),
        decay.within_bounds(),
        uniform.row_sup()
    );
    if !decay.within_bounds() {
        return Err(Error::Breach(format!("translation bound breached\n{summary}")));
    }
    if let Some((m, p)) = uniform.first_breach(1e-9) {
        return Err(Error::Breach(format!(
            "uniform translation bound breached at level {m}, member {p}\n{summary}"
        )));
    }
    Ok(summary)
}

fn solve_cmd(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let family = cfg.family()?;
    let problem = cfg.problem(family.dim())?;
    let meshes = refine(&family, cfg.levels()?)?;
    let history = cfg.flag("history")?;
    let mut table = String::from("level,h,steps,dt_max,mass_drift,u_min,u_max\n");
    for (m, mesh) in meshes.iter().enumerate() {
        let run = solve(mesh, &problem)?;
        if problem.boundary == BoundaryPolicy::Periodic && run.mass_drift > MASS_TOL {
            return Err(Error::Breach(format!(
                "level {m}: relative mass drift {:e} exceeds {MASS_TOL:e}",
                run.mass_drift
            )));
        }
        let field = &run.field;
        out.write(
            &format!("solution_level{m}.csv"),
            &snapshot_csv(field, &[0, run.steps], &out.header),
        )?;
        if history {
            let mut buf = Vec::new();
            write_history(field, &mut buf).map_err(|e| Error::io(&out.dir, e))?;
            out.write(
                &format!("history_level{m}.txt"),
                &String::from_utf8(buf).expect("history writer emits UTF-8"),
            )?;
        }
        table.push_str(&format!(
            "{m},{},{},{},{},{},{}\n",
            fmt_real(mesh.h_max),
            run.steps,
            fmt_real(field.grid.dt_max()),
            fmt_real(run.mass_drift),
            fmt_real(run.range.0),
            fmt_real(run.range.1)
        ));
    }
    out.write("solve_summary.csv", &(out.comment_block() + &table))?;
    Ok(table)
}

fn lw_verify(cfg: &Config, out: &mut Output) -> Result<String, Error> {
    let family = cfg.family()?;
    let problem = cfg.problem(family.dim())?;
    let phis = spacetime_corpus(&family.domain(), problem.final_time);
    let refs: Vec<&dyn TestFunction> = phis.iter().map(|p| p as &dyn TestFunction).collect();
    let report = lw_study(&family, &problem, &refs, cfg.levels()?)?;
    out.write("lw_report.csv", &to_csv(&out.header, &report.rows))?;
    let summary = report.summary();
    out.write("lw_summary.txt", &(out.comment_block() + &summary))?;
    Ok(summary)
}

/// Runs the parsed command and returns its summary.
pub fn run(cli: &Cli) -> Result<String, Error> {
    let cfg = cli.resolve()?;
    let work = || -> Result<String, Error> {
        let mut out = Output::new(&cfg, cli.command)?;
        let summary = match cli.command {
            Command::MeshGen => mesh_gen(&cfg, &mut out)?,
            Command::MeshStats => mesh_stats(&cfg, &mut out)?,
            Command::GradStudy => grad_study(&cfg, &mut out)?,
            Command::TranslateStudy => translate_study(&cfg, &mut out)?,
            Command::Solve => solve_cmd(&cfg, &mut out)?,
            Command::LwVerify => lw_verify(&cfg, &mut out)?,
        };
        Ok(format!("{}{summary}", out.listing()))
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Parses `args`, runs, prints and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
