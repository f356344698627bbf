//! Property tests over randomly generated circuits: the substitution engine
//! conserves photon number and norm, acts linearly, agrees with the dense
//! oracle, and the circuit format survives printing and garbage input.

use fockline_core::algebra::{FockPolyState, ModeId, Monomial, PathLabel, Polarization};
use fockline_core::dsl::{bind, parse, parse_bytes, pretty_print, BoundCircuit, Circuit, ParamEnv};
use fockline_core::elements::{basis_map, bs_map, pbs_map, pr_map, BasisTarget, CircularConvention};
use fockline_core::oracle::{compare, mode_unitary, oracle_simulate, OracleConfig, AGREEMENT_TOL};
use fockline_core::random::{random_ast, random_circuit, RandomCircuitOptions};
use fockline_core::sim::{evolve_fock, run_fock, SimOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn circuit_from_seed(seed: u64) -> Circuit {
    random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), &RandomCircuitOptions::default())
}

fn bound_from_seed(seed: u64) -> BoundCircuit {
    bind(&circuit_from_seed(seed), &ParamEnv::new()).expect("random circuits bind")
}

fn final_state(bc: &BoundCircuit) -> FockPolyState {
    run_fock(bc, &SimOptions::default()).unwrap().pop().unwrap()
}

fn path(p: &str) -> PathLabel {
    PathLabel::new(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn photon_number_and_norm_are_conserved(seed in any::<u64>()) {
        let bc = bound_from_seed(seed);
        let n = bc.photon_count();
        let out = final_state(&bc);
        for mono in out.terms().keys() {
            prop_assert_eq!(mono.degree(), n);
        }
        prop_assert!((out.norm() - 1.0).abs() < 1e-9, "norm {}", out.norm());
    }

    #[test]
    fn evolution_is_linear(seed in any::<u64>(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let bc = bound_from_seed(seed);
        let opts = SimOptions::default();
        let first = bc.paths[0].clone();
        let a = FockPolyState::from_terms(bc.paths.clone(), [(Monomial::single(ModeId::h(first.as_str())), Complex64::new(1.0, 0.0))]);
        let b = FockPolyState::from_terms(bc.paths.clone(), [(Monomial::single(ModeId::v(first.as_str())), Complex64::new(1.0, 0.0))]);
        let c = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let mixed = FockPolyState::superpose(&a, one, &b, c);
        let run = |s: FockPolyState| evolve_fock(s, &bc, &opts).unwrap().pop().unwrap();
        let lhs = run(mixed);
        let rhs = FockPolyState::superpose(&run(a), one, &run(b), c);
        let diff = FockPolyState::superpose(&lhs, one, &rhs, -one);
        prop_assert!(diff.norm() < 1e-12, "difference norm {}", diff.norm());
    }

    #[test]
    fn engine_matches_the_dense_oracle(seed in any::<u64>()) {
        let bc = bound_from_seed(seed);
        let run = oracle_simulate(&bc, &OracleConfig::default()).unwrap();
        let dev = compare(&final_state(&bc), &run.state).unwrap();
        prop_assert!(dev < AGREEMENT_TOL, "deviation {dev:e}");
    }

    #[test]
    fn composite_mode_matrix_is_unitary(seed in any::<u64>()) {
        let bc = bound_from_seed(seed);
        let u = mode_unitary(&bc, CircularConvention::Real).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn element_maps_are_isometries(eta in 0.0f64..=1.0, theta in -10.0f64..10.0) {
        let (p1, p2, p3) = (path("1"), path("2"), path("3"));
        let maps = [
            bs_map(eta, &[Some(p1.clone()), Some(p2.clone())], &[p2.clone(), p1.clone()]).unwrap(),
            bs_map(eta, &[Some(p1.clone()), None], &[p1.clone(), p3.clone()]).unwrap(),
            pbs_map(&[Some(p1.clone()), Some(p2.clone())], &[p1.clone(), p2.clone()]).unwrap(),
            pr_map(theta, &p1).unwrap(),
            basis_map(BasisTarget::RL, &p1, CircularConvention::Real).unwrap(),
            basis_map(BasisTarget::RL, &p1, CircularConvention::Physical).unwrap(),
            basis_map(BasisTarget::Diag, &p1, CircularConvention::Real).unwrap(),
        ];
        for m in &maps {
            prop_assert!(m.isometry_deviation() < 1e-12);
        }
    }

    #[test]
    fn bs_phase_relation_holds(eta in 1e-6f64..(1.0 - 1e-6)) {
        let (p1, p2) = (path("1"), path("2"));
        let m = bs_map(eta, &[Some(p1.clone()), Some(p2.clone())], &[p1.clone(), p2.clone()]).unwrap();
        let c = |i: &PathLabel, o: &PathLabel| {
            m.coefficient(&ModeId::new(i.clone(), Polarization::H), &ModeId::new(o.clone(), Polarization::H))
        };
        // transmitted: straight through; reflected: crossed
        let (t0, t1, r0, r1) = (c(&p1, &p1), c(&p2, &p2), c(&p1, &p2), c(&p2, &p1));
        let rel = r0.arg() + r1.arg() - t0.arg() - t1.arg();
        prop_assert!((rel + std::f64::consts::PI).abs() < 1e-12, "relation {rel}");
    }

    #[test]
    fn fuzzed_circuits_round_trip(seed in any::<u64>()) {
        let c = random_ast(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = pretty_print(&c);
        prop_assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn parser_is_total_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_bytes(&bytes);
    }

    #[test]
    fn parser_is_total_on_near_miss_text(
        lines in proptest::collection::vec("(paths|param|source|bs|pbs|pr|hwp|basis)?[ a-z0-9=,.+*/()#-]{0,30}", 0..6)
    ) {
        let _ = parse(&lines.join("\n"));
    }
}

#[test]
fn random_circuits_print_and_reparse() {
    for seed in 0..50 {
        let c = circuit_from_seed(seed);
        assert_eq!(parse(&pretty_print(&c)).unwrap(), c);
    }
}
