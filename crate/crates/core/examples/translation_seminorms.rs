//! Translation seminorms of a smooth and of a discontinuous datum under
//! refinement, and their uniform control along a converging sequence.

use lwfv::data::{Bump, Datum, Sine, Step, Sum};
use lwfv::mesh::{BoxDomain, MeshFamily};
use lwfv::translations::{translation_decay_study, uniform_decay_study};

pub fn run_example() -> Result<String, lwfv::Error> {
    let family = MeshFamily::triangles_2d(4, BoxDomain::unit(2), 0.3, 7);
    let smooth = Sine::diagonal(2, 0.0, 1.0);
    let jump = Step::new(0, 0.37);

    let mut out = String::new();
    for (name, u) in [("sine", &smooth as &dyn Datum), ("indicator", &jump)] {
        let study = translation_decay_study(&family, u, 4)?;
        out.push_str(&format!("{name:<10}"));
        for row in &study.rows {
            out.push_str(&format!(" {:.3e}", row.t_value));
        }
        out.push_str(&format!(
            "  last/first {:.3}, bounds hold: {}\n",
            study.reduction(),
            study.within_bounds()
        ));
    }

    // u_p = sine + bump / p tends to sine in L1
    let members: Vec<_> = (1..=8)
        .map(|p| Sum {
            a: smooth.clone(),
            b: Bump::new(vec![0.5, 0.5], vec![0.3, 0.3], 2),
            weight: 1.0 / p as f64,
        })
        .collect();
    let seq: Vec<&dyn Datum> = members.iter().map(|m| m as &dyn Datum).collect();
    let uniform = uniform_decay_study(&family, &smooth, &seq, 4)?;
    out.push_str(&format!(
        "sup_p T[m][p] by level: {:?}, breach: {:?}\n",
        uniform
            .row_sup()
            .iter()
            .map(|v| format!("{v:.3e}"))
            .collect::<Vec<_>>(),
        uniform.first_breach(1e-9)
    ));
    Ok(out)
}

fn main() -> Result<(), lwfv::Error> {
    print!("{}", run_example()?);
    Ok(())
}
