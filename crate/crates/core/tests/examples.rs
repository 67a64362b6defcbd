//! Each example compiles as part of this target and runs to completion.

macro_rules! example {
    ($name:ident, $file:literal, $($needle:literal),+) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            let out = $name::run_example().expect("example failed");
            $(assert!(out.contains($needle), "missing {:?} in\n{out}", $needle);)+
        }
    };
}

example!(mesh_families, "../examples/mesh_families.rs", "perturbed triangles", "cartesian 2d");
example!(discrete_gradient, "../examples/discrete_gradient.rs", "a-priori bound holds: true");
example!(translation_seminorms, "../examples/translation_seminorms.rs", "bounds hold: true", "breach: None");
example!(flux_hypotheses, "../examples/flux_hypotheses.rs", "offset flux rejected");
example!(advection_solve, "../examples/advection_solve.rs", "observed order");
example!(lax_wendroff_verify, "../examples/lax_wendroff_verify.rs", "worst master residual");
