//! Samples the flux hypotheses for the shipped fluxes, then shows the checker
//! rejecting an inconsistent flux with a witness.

use lwfv::flux::{
    check_conservativity, check_consistency, check_hypothesis_iii, multipoint_jump_bound_check,
    FluxError, FluxFunction, Muscl, NumericalFlux, OffsetFlux, Rusanov, Upwind,
};
use lwfv::mesh::build_uniform_1d;

pub fn run_example() -> Result<String, lwfv::Error> {
    let burgers = Rusanov::new(FluxFunction::Burgers {
        direction: vec![1.0, 1.0],
    });
    let fluxes: Vec<Box<dyn NumericalFlux>> = vec![
        Box::new(Upwind::new(vec![1.0, 0.5])?),
        Box::new(burgers.clone()),
        Box::new(Muscl::new(vec![1.0])?),
    ];
    let range = (-1.0, 1.0);
    let mut out = String::new();
    for f in &fluxes {
        check_conservativity(f.as_ref(), range, 10_000)?;
        let consistency = check_consistency(f.as_ref(), range, 10_000, 1e-14)?;
        let r = check_hypothesis_iii(f.as_ref(), range, 10_000)?;
        out.push_str(&format!(
            "{:<18} C_F {:.3}  max ratio {:.3}  consistency error {consistency:.1e}\n",
            r.flux, r.declared_c_f, r.max_ratio
        ));
    }

    let bad = OffsetFlux {
        inner: Rusanov::new(FluxFunction::Burgers {
            direction: vec![1.0],
        }),
        offset: 1e-3,
    };
    match check_hypothesis_iii(&bad, range, 10_000) {
        Err(FluxError::Hypothesis { ratio, a, b, .. }) => out.push_str(&format!(
            "offset flux rejected: ratio {ratio:.3e} at (a, b) = ({a:.4}, {b:.4})\n"
        )),
        other => out.push_str(&format!("offset flux unexpectedly accepted: {other:?}\n")),
    }

    // the three-point MUSCL flux against the generalized jump bound
    let mesh = build_uniform_1d(32, (0.0, 1.0))?;
    let data: Vec<f64> = (0..32).map(|k| if (8..20).contains(&k) { 1.0 } else { 0.0 }).collect();
    let mp = multipoint_jump_bound_check(&Muscl::new(vec![1.0])?, &data, &mesh)?;
    out.push_str(&format!(
        "muscl multi-point ratio {:.3} over {} faces (split total {:.3} >= {:.3})\n",
        mp.max_ratio, mp.faces, mp.split_total, mp.generalized_total
    ));
    Ok(out)
}

fn main() -> Result<(), lwfv::Error> {
    print!("{}", run_example()?);
    Ok(())
}
