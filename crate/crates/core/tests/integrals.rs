mod common;

use proptest::prelude::*;
use superint_core::dynamics::{integrate, Energy, IntegratorConfig};
use superint_core::fields::{FieldModel, MonopolePotential};
use superint_core::integrals::{
    build_hn_from_alpha, covariant_angular_momentum, covariant_momentum, determining_residuals,
    evaluate_integral, known_integrals, monopole_second_order_spec, poisson_bracket, poisson_bracket_fd,
    Alpha, PhaseFunction, ResidualMode,
};
use superint_core::{PhaseState, Vec3};

#[test]
fn residuals_vanish_for_every_known_integral() {
    for (name, model) in common::named_models() {
        let pts = common::points(&model, 100, 31);
        for spec in known_integrals(&model).unwrap() {
            let mut worst: f64 = 0.0;
            for &x in &pts {
                let classical = determining_residuals(&spec, &model, x, ResidualMode::Classical).unwrap();
                worst = worst.max(classical.max_abs());
                if spec.is_first_order() {
                    let quantum =
                        determining_residuals(&spec, &model, x, ResidualMode::Quantum { hbar: 1.0 }).unwrap();
                    assert_eq!(quantum, classical);
                }
            }
            assert!(worst < 1e-6, "{name}/{}: {worst}", spec.name);
        }
    }
}

#[test]
fn quantum_correction_vanishes_for_monopole_runge_lenz() {
    let model = FieldModel::monopole(0.9, 1.2).unwrap();
    for spec in known_integrals(&model)
        .unwrap()
        .iter()
        .filter(|s| !s.is_first_order())
    {
        for x in common::points(&model, 30, 4) {
            let q = determining_residuals(spec, &model, x, ResidualMode::Quantum { hbar: 1.0 }).unwrap();
            assert!(q.max_abs() < 1e-6, "{}: {:?}", spec.name, q);
        }
    }
}

#[test]
fn wrong_integrals_are_detected() {
    let model = FieldModel::monopole_with(1.0, 1.0, MonopolePotential::CoulombOnly).unwrap();
    let spec = monopole_second_order_spec("R1", 1.0, 1.0, 0.0, 0.0, 1.0);
    let worst = common::points(&model, 20, 1)
        .into_iter()
        .map(|x| {
            determining_residuals(&spec, &model, x, ResidualMode::Classical)
                .unwrap()
                .max_abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
    // a constant-field integral is not one of the helical system
    let hel = FieldModel::helical(2.0, 1.0, 0.0).unwrap();
    let foreign = &known_integrals(&FieldModel::constant_b(1.0).unwrap()).unwrap()[3];
    let worst = common::points(&hel, 20, 2)
        .into_iter()
        .map(|x| {
            determining_residuals(foreign, &hel, x, ResidualMode::Classical)
                .unwrap()
                .max_abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn integrals_commute_with_energy() {
    for (name, model) in common::named_models() {
        let energy = Energy(&model);
        let specs = known_integrals(&model).unwrap();
        for s in common::states(&model, 30, 6) {
            for spec in &specs {
                let f = spec.bind(&model);
                let br = poisson_bracket(&energy, &f, &s).unwrap();
                assert!(br.abs() < 1e-9, "{name}/{}: {br}", spec.name);
                let fd = poisson_bracket_fd(&energy, &f, &s).unwrap();
                assert!(fd.abs() < 1e-6, "{name}/{} fd: {fd}", spec.name);
            }
        }
    }
}

#[test]
fn integrals_conserved_along_trajectories() {
    let cases = [
        (
            FieldModel::helical(3.0, 3.0, 0.0).unwrap(),
            common::figure_state(0.0, 3.2),
        ),
        (
            FieldModel::monopole(1.0, 1.0).unwrap(),
            common::monopole_orbit_state(),
        ),
        (
            common::cylindrical(),
            PhaseState::new(Vec3::new(0.7, -0.2, 0.1), Vec3::new(0.3, 0.5, -0.2)),
        ),
    ];
    for (model, s0) in cases {
        let specs = known_integrals(&model).unwrap();
        let bound: Vec<_> = specs.iter().map(|s| s.bind(&model)).collect();
        let watch: Vec<&dyn PhaseFunction> = bound.iter().map(|b| b as &dyn PhaseFunction).collect();
        let cfg = IntegratorConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&model, s0, 20.0, &cfg, &watch).unwrap();
        for spec in &specs {
            let drift = traj.max_drift(&spec.name).unwrap();
            assert!(drift < 1e-7, "{}/{}: {drift}", model.name(), spec.name);
        }
    }
}

#[test]
fn x4_example_value() {
    // X₄ = l₁^A − (B/2)(y² + z²) at x = (1,2,3), p = (1,1,1), B = 1:
    // p^A = (1, −2, 1), l₁^A = y p^A_z − z p^A_y = 2 + 6 = 8, so X₄ = 8 − 6.5
    let model = FieldModel::constant_b(1.0).unwrap();
    let s = PhaseState::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(1.0, 1.0, 1.0));
    let x4 = &known_integrals(&model).unwrap()[3];
    assert!((evaluate_integral(x4, &model, &s).unwrap() - 1.5).abs() < 1e-14);

    // B = 2, x = (0,1,2), p = 0: canonical l₁ = 0 and (B/2)(z² − y²) = 3;
    // covariantly l₁^A = 8 and (B/2)(y² + z²) = 5
    let model = FieldModel::constant_b(2.0).unwrap();
    let s = PhaseState::new(Vec3::new(0.0, 1.0, 2.0), Vec3::ZERO);
    let x4 = &known_integrals(&model).unwrap()[3];
    assert!((evaluate_integral(x4, &model, &s).unwrap() - 3.0).abs() < 1e-14);
}

#[test]
fn covariant_generators() {
    let model = FieldModel::constant_b(2.0).unwrap();
    let s = PhaseState::new(Vec3::new(0.0, 1.0, 1.0), Vec3::new(1.0, 3.0, 0.0));
    assert_eq!(covariant_momentum(&model, &s).unwrap(), Vec3::new(1.0, 1.0, 0.0));
    let l = covariant_angular_momentum(&model, &s).unwrap();
    assert_eq!(l, s.x.cross(Vec3::new(1.0, 1.0, 0.0)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quadratic_form_matches_coefficient_polynomials(
        entries in prop::array::uniform21(-1.0f64..1.0),
        x in prop::array::uniform3(-2.0f64..2.0),
        pa in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let mut alpha = Alpha::zero();
        let mut k = 0;
        for a in 1..=6 {
            for b in a..=6 {
                alpha.set(a, b, entries[k]);
                k += 1;
            }
        }
        let (x, pa) = (Vec3::new(x[0], x[1], x[2]), Vec3::new(pa[0], pa[1], pa[2]));
        let y = [pa.x1, pa.x2, pa.x3, x.cross(pa).x1, x.cross(pa).x2, x.cross(pa).x3];
        let direct = alpha.quadratic_form(&y);
        let via = build_hn_from_alpha(&alpha).quadratic_form(x, pa);
        prop_assert!((direct - via).abs() < 1e-11 * (1.0 + direct.abs()));
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(seed in 0u64..10_000) {
        let model = FieldModel::monopole(1.0, 1.0).unwrap();
        let specs = known_integrals(&model).unwrap();
        let s = common::states(&model, 1, seed)[0];
        let (f, g, h) = (specs[0].bind(&model), specs[1].bind(&model), specs[4].bind(&model));
        let fg = poisson_bracket_fd(&f, &g, &s).unwrap();
        let gf = poisson_bracket_fd(&g, &f, &s).unwrap();
        prop_assert!((fg + gf).abs() < 1e-12);
        let sum = superint_core::integrals::PhaseFn::new("g+2h", |st: &PhaseState| Ok(g.value(st)? + 2.0 * h.value(st)?));
        let lhs = poisson_bracket(&f, &sum, &s).unwrap();
        let rhs = poisson_bracket(&f, &g, &s).unwrap() + 2.0 * poisson_bracket(&f, &h, &s).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()));
    }
}
