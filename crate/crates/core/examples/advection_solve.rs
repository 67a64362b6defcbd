//! Advects a sine wave once around the periodic unit interval and measures
//! the L1 error against the initial cell means at several resolutions.

use lwfv::data::Sine;
use lwfv::flux::Upwind;
use lwfv::mesh::build_uniform_1d;
use lwfv::solver::{solve, Problem};
use lwfv::study::fit_slope;
use lwfv::translations::project_l1;
use std::sync::Arc;

pub fn run_example() -> Result<String, lwfv::Error> {
    let u0 = Sine::diagonal(1, 0.0, 1.0);
    let problem = Problem::new(Arc::new(Upwind::new(vec![1.0])?), Arc::new(u0.clone()), 1.0, 0.5);
    let mut out = String::from("    n  steps   L1 error   mass drift\n");
    let (mut h, mut err) = (Vec::new(), Vec::new());
    for n in [50, 100, 200, 400] {
        let mesh = build_uniform_1d(n, (0.0, 1.0))?;
        let run = solve(&mesh, &problem)?;
        // after one period the exact solution is u0 again
        let exact = project_l1(&mesh, &u0);
        let e: f64 = mesh
            .cells
            .iter()
            .map(|c| c.volume * (run.field.last()[c.id] - exact.values[c.id]).abs())
            .sum();
        out.push_str(&format!("{n:>5} {:>6} {e:>10.3e} {:>12.1e}\n", run.steps, run.mass_drift));
        h.push(mesh.h_max);
        err.push(e);
    }
    out.push_str(&format!("observed order {:.3}\n", fit_slope(&h, &err).unwrap_or(f64::NAN)));
    Ok(out)
}

fn main() -> Result<(), lwfv::Error> {
    print!("{}", run_example()?);
    Ok(())
}
