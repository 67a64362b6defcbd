//! The discrete gradient of a smooth bump on perturbed triangles: bounded
//! face by face, and converging to the true gradient only when paired with a
//! smooth vector field.

use lwfv::mesh::{compute_quality, BoxDomain, MeshFamily};
use lwfv::operators::{
    discrete_gradient, gradient_weakstar_study, spatial_corpus, sup_bound_check, vector_corpus,
    TestFunction,
};

pub fn run_example() -> Result<String, lwfv::Error> {
    let family = MeshFamily::triangles_2d(4, BoxDomain::unit(2), 0.3, 42);
    let domain = family.domain();
    let phi = &spatial_corpus(&domain)[0];

    let mesh = family.level(1)?;
    let q = compute_quality(&mesh);
    let grad = discrete_gradient(&mesh, phi, 0.0);
    let ratio = sup_bound_check(&grad, &q, phi.grad_sup())?;
    let mut out = format!(
        "max |grad_E phi| = {:.4}, theta_grad |grad phi|_inf = {:.4} (ratio {ratio:.3})\n",
        grad.sup_norm(),
        q.theta_grad * phi.grad_sup()
    );

    for study in gradient_weakstar_study(&family, phi, &vector_corpus(&domain), 4)? {
        out.push_str(&format!("psi {}:", study.psi_index));
        for row in &study.rows {
            out.push_str(&format!(" {:.2e}", row.gap));
        }
        out.push_str(&format!(
            "  (slope {:.2}, a-priori bound holds: {})\n",
            study.slope.unwrap_or(f64::NAN),
            study.within_bound()
        ));
    }
    Ok(out)
}

fn main() -> Result<(), lwfv::Error> {
    print!("{}", run_example()?);
    Ok(())
}
