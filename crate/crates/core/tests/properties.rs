use lwfv::consistency::scheme_pairing;
use lwfv::data::Constant;
use lwfv::flux::{
    check_conservativity, FluxFunction, Muscl, NumericalFlux, Rusanov, Stencil, Upwind,
};
use lwfv::mesh::{build_uniform_1d, compute_quality, BoxDomain, MeshFamily};
use lwfv::operators::{
    discrete_gradient, spacetime_corpus, spatial_corpus, sup_bound_check, TestFunction,
};
use lwfv::solver::{solve_from, Problem, Topology};
use lwfv::translations::{translation_seminorm, CellField};
use proptest::prelude::*;
use std::sync::Arc;

fn burgers(d: Vec<f64>) -> Rusanov {
    Rusanov::new(FluxFunction::Burgers { direction: d })
}

fn triangles(seed: u64) -> lwfv::mesh::Mesh {
    MeshFamily::triangles_2d(8, BoxDomain::unit(2), 0.2, seed)
        .level(0)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn swapping_sides_negates_the_flux(b in 0.1f64..3.0, c in -2.0f64..2.0) {
        let fluxes: Vec<Box<dyn NumericalFlux>> = vec![
            Box::new(Upwind::new(vec![b, c]).unwrap()),
            Box::new(burgers(vec![b, c])),
        ];
        for f in &fluxes {
            check_conservativity(f.as_ref(), (-1.0, 1.0), 500).unwrap();
        }
    }

    #[test]
    fn muscl_face_value_stays_between_neighbours(
        uk in -5.0f64..5.0, ul in -5.0f64..5.0, bk in -5.0f64..5.0, bl in -5.0f64..5.0,
        sign in prop::bool::ANY,
    ) {
        let m = Muscl::new(vec![1.0]).unwrap();
        let n = [if sign { 1.0 } else { -1.0 }];
        let v = m.face_value(Stencil { uk, ul, behind_k: Some(bk), behind_l: Some(bl) }, &n);
        prop_assert!(v >= uk.min(ul) - 1e-15 && v <= uk.max(ul) + 1e-15);
    }

    #[test]
    fn periodic_runs_conserve_mass(values in prop::collection::vec(-1.0f64..1.0, 12..40)) {
        let n = values.len();
        let mesh = build_uniform_1d(n, (0.0, 1.0)).unwrap();
        let problem = Problem::new(Arc::new(burgers(vec![1.0])), Arc::new(Constant(0.0)), 0.1, 0.9);
        let run = solve_from(&mesh, &problem, values).unwrap();
        prop_assert!(run.mass_drift < 1e-12, "drift {}", run.mass_drift);
    }

    #[test]
    fn constants_are_preserved(c in -2.0f64..2.0, seed in 0u64..50) {
        let mesh = triangles(seed);
        let problem = Problem::new(Arc::new(burgers(vec![1.0, 0.5])), Arc::new(Constant(c)), 0.1, 0.8);
        let run = solve_from(&mesh, &problem, vec![c; mesh.n_cells()]).unwrap();
        for v in run.field.last() {
            prop_assert!((v - c).abs() <= 1e-13 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn gradient_respects_sup_bound(seed in 0u64..1000, jitter in 0.0f64..0.3) {
        let mesh = MeshFamily::triangles_2d(4, BoxDomain::unit(2), jitter, seed).level(0).unwrap();
        let q = compute_quality(&mesh);
        for phi in spatial_corpus(&mesh.domain) {
            let g = discrete_gradient(&mesh, &phi, 0.0);
            prop_assert!(sup_bound_check(&g, &q, phi.grad_sup()).is_ok());
        }
    }

    #[test]
    fn translation_seminorm_is_at_most_twice_the_norm(
        values in prop::collection::vec(-3.0f64..3.0, 128),
        seed in 0u64..100,
    ) {
        let mesh = triangles(seed);
        let f = CellField::new(values);
        let t = translation_seminorm(&mesh, &f).unwrap();
        prop_assert!(t >= 0.0);
        // each face contributes |σ||D_σ| |u_L - u_K| / |D_σ| ≤ |σ| (|u_K| + |u_L|)
        let bound: f64 = mesh.interior_faces()
            .map(|s| s.area * (f.values[s.inner].abs() + f.values[s.outer.unwrap()].abs()))
            .sum();
        prop_assert!(t <= bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn master_identity_holds_on_random_data(
        values in prop::collection::vec(-1.0f64..1.0, 128),
        seed in 0u64..100,
    ) {
        let mesh = triangles(seed);
        let flux = burgers(vec![1.0, 1.0]);
        let problem = Problem::new(Arc::new(flux.clone()), Arc::new(Constant(0.0)), 0.2, 0.5);
        let run = solve_from(&mesh, &problem, values).unwrap();
        let topo = Topology::new(&mesh, problem.boundary).unwrap();
        for phi in spacetime_corpus(&mesh.domain, 0.2) {
            let d = scheme_pairing(&mesh, &topo, &flux, &run.field, &phi).unwrap();
            prop_assert!(d.check_master().is_ok(), "residual {}", d.master_residual());
        }
    }
}
